#include "freecat/cli.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "freecat/engine.hpp"
#include "freecat/frontend.hpp"
#include "freecat/proofs.hpp"
#include "freecat/semantics.hpp"

namespace freecat::cli {

namespace {

using json = nlohmann::ordered_json;
using core::ArrowPtr;
using core::FormulaPtr;
using core::Signature;
using frontend::PremisePolicy;
using frontend::Sequent;

constexpr int kExitOk = 0;
constexpr int kExitScriptFail = 1;
constexpr int kExitError = 2;
constexpr int kExitResource = 3;
constexpr int kExitDisagree = 4;
constexpr std::size_t kJsonMergedPairCap = 500;

struct GlobalOpts {
  std::string theory = "cartesian";
  std::string sig_file;
  std::string emit = "text";
  std::uint64_t seed = 0;
  std::size_t size_bound = 7;
  std::size_t depth_bound = 2;
  std::size_t cap = 200000;
  bool timings = false;

  bool json_out() const { return emit == "json"; }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("IoError", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void collect_letters(const FormulaPtr& f, Signature& sig) {
  for (const auto& l : core::leaves(f)) sig.add_letter(l.letter);
}

void collect_letters(const ArrowPtr& t, Signature& sig) {
  if (t->a) collect_letters(t->a, sig);
  if (t->b) collect_letters(t->b, sig);
  if (t->c) collect_letters(t->c, sig);
  if (t->u) collect_letters(t->u, sig);
  if (t->v) collect_letters(t->v, sig);
}

Signature base_signature(const GlobalOpts& g, const std::vector<std::string>& gens) {
  Signature sig;
  if (!g.sig_file.empty()) sig = frontend::parse_signature(read_file(g.sig_file));
  for (const auto& spec : gens) {
    // name:src->tgt, comma-separated declarations allowed in one flag
    std::istringstream in(spec);
    std::string one;
    while (std::getline(in, one, ',')) {
      auto colon = one.find(':');
      auto arrow = one.find("->");
      if (colon == std::string::npos || arrow == std::string::npos || arrow < colon)
        throw Error("UsageError", "--gens takes name:src->tgt declarations");
      FormulaPtr src = frontend::parse_formula(one.substr(colon + 1, arrow - colon - 1));
      FormulaPtr tgt = frontend::parse_formula(one.substr(arrow + 2));
      collect_letters(src, sig);
      collect_letters(tgt, sig);
      sig.add_gen(one.substr(0, colon), src, tgt);
    }
  }
  return sig;
}

engine::Bounds bounds_of(const GlobalOpts& g) { return {g.size_bound, g.depth_bound, g.cap}; }

json report_shell(const GlobalOpts& g, const std::string& command) {
  json j;
  j["schema"] = 1;
  j["command"] = command;
  j["theory"] = g.theory;
  j["seed"] = g.seed;
  return j;
}

void emit(const GlobalOpts& g, std::ostream& out, const json& j, const std::string& text) {
  if (g.json_out())
    out << j.dump(2) << "\n";
  else
    out << text;
}

// --- equal -----------------------------------------------------------------------

struct OracleVerdict {
  std::string oracle;
  bool equal = false;
  std::string witness;  // empty when equal
  json detail;          // oracle-specific payload: leaf maps, tables
};

json leaf_map_json(const FormulaPtr& source, const FormulaPtr& target,
                   const std::vector<std::size_t>& map) {
  json j = json::object();
  auto ls = core::leaves(source);
  auto lt = core::leaves(target);
  for (std::size_t i = 0; i < map.size(); ++i) j[lt[i].path] = ls[map[i]].path;
  return j;
}

OracleVerdict semantics_verdict(const ArrowPtr& t1, const ArrowPtr& t2, bool cartesian) {
  OracleVerdict v{"semantics", false, "", json::object()};
  FormulaPtr source, target;
  std::vector<std::size_t> map1, map2;
  if (cartesian) {
    auto m1 = semantics::interpret_cartesian(t1);
    auto m2 = semantics::interpret_cartesian(t2);
    if (!core::equal(m1.source, m2.source) || !core::equal(m1.target, m2.target))
      throw TypeMismatch("terms have different endpoints");
    source = m1.source;
    target = m1.target;
    map1 = m1.map;
    map2 = m2.map;
  } else {
    auto b1 = semantics::interpret_symmetric(t1);
    auto b2 = semantics::interpret_symmetric(t2);
    if (!core::equal(b1.source, b2.source) || !core::equal(b1.target, b2.target))
      throw TypeMismatch("terms have different endpoints");
    source = b1.source;
    target = b1.target;
    map1 = b1.map;
    map2 = b2.map;
  }
  v.equal = map1 == map2;
  v.detail["lhs_map"] = leaf_map_json(source, target, map1);
  v.detail["rhs_map"] = leaf_map_json(source, target, map2);
  if (!v.equal) {
    auto lt = core::leaves(target);
    auto ls = core::leaves(source);
    for (std::size_t i = 0; i < map1.size(); ++i)
      if (map1[i] != map2[i]) {
        v.witness = "target leaf '" + lt[i].path + "' maps to '" + ls[map1[i]].path + "' vs '" +
                    ls[map2[i]].path + "'";
        break;
      }
  }
  return v;
}

OracleVerdict model_verdict(const ArrowPtr& t1, const ArrowPtr& t2, const Signature& sig,
                            const std::map<std::string, std::size_t>& carriers) {
  semantics::FiniteModel m;
  for (const auto& l : sig.letters) m.carriers[l] = 2;
  for (const auto& [l, n] : carriers) m.carriers[l] = n;
  OracleVerdict v{"model", false, "", json::object()};
  auto f1 = semantics::eval_finite_model(t1, m);
  auto f2 = semantics::eval_finite_model(t2, m);
  if (!core::equal(f1.source, f2.source) || !core::equal(f1.target, f2.target))
    throw TypeMismatch("terms have different endpoints");
  v.equal = f1.table == f2.table;
  v.detail["carriers"] = m.carriers;
  v.detail["lhs_table"] = f1.table;
  v.detail["rhs_table"] = f2.table;
  if (!v.equal) {
    for (std::size_t x = 0; x < f1.table.size(); ++x)
      if (f1.table[x] != f2.table[x]) {
        auto tuple = semantics::decode_element(x, f1.source, m);
        std::string in = "(";
        for (std::size_t i = 0; i < tuple.size(); ++i)
          in += (i ? "," : "") + std::to_string(tuple[i]);
        in += ")";
        v.witness = "tables differ at input " + in;
        break;
      }
  }
  return v;
}

OracleVerdict closure_verdict(const ArrowPtr& t1, const ArrowPtr& t2, const Signature& sig,
                              const GlobalOpts& g, bool cartesian) {
  engine::TheoryConfig cfg;
  cfg.preset = cartesian ? engine::preset_from_string(g.theory == "sym" ? "cartesian" : g.theory)
                         : engine::Preset::SymmetricAssociative;
  cfg.sig = sig;
  ArrowPtr e1 = core::expand_diag(t1);
  ArrowPtr e2 = core::expand_diag(t2);
  engine::Bounds b = bounds_of(g);
  b.size_bound = std::max({b.size_bound, core::term_size(e1), core::term_size(e2)});
  auto deepest = [](const ArrowPtr& t) {
    std::size_t d = 1;
    std::function<void(const ArrowPtr&)> walk = [&](const ArrowPtr& s) {
      for (const auto& f : {s->a, s->b, s->c})
        if (f) d = std::max(d, static_cast<std::size_t>(core::depth(f)));
      if (s->u) walk(s->u);
      if (s->v) walk(s->v);
    };
    walk(t);
    return d;
  };
  b.depth_bound = std::max({b.depth_bound, deepest(e1) + 1, deepest(e2) + 1});
  auto universe = engine::term_universe(cfg, b);
  engine::ClosureResult cl = engine::congruence_close(cfg, universe);
  std::optional<std::size_t> i1, i2;
  for (std::size_t i = 0; i < universe.size(); ++i) {
    if (!i1 && core::equal(universe[i], e1)) i1 = i;
    if (!i2 && core::equal(universe[i], e2)) i2 = i;
  }
  if (!i1 || !i2) throw Error("Internal", "terms not found in their own universe");
  OracleVerdict v{"closure", cl.class_of[*i1] == cl.class_of[*i2], "", json::object()};
  v.detail["size_bound"] = b.size_bound;
  v.detail["universe_size"] = universe.size();
  v.detail["lhs_class"] = cl.class_of[*i1];
  v.detail["rhs_class"] = cl.class_of[*i2];
  if (!v.equal)
    v.witness = "classes " + std::to_string(cl.class_of[*i1]) + " vs " +
                std::to_string(cl.class_of[*i2]) + " at size bound " +
                std::to_string(b.size_bound);
  return v;
}

int cmd_equal(const GlobalOpts& g, const std::string& lhs, const std::string& rhs,
              const std::string& oracle, bool cross_check,
              const std::map<std::string, std::size_t>& carriers, std::ostream& out,
              std::ostream& err) {
  ArrowPtr t1 = frontend::parse_arrow(lhs);
  ArrowPtr t2 = frontend::parse_arrow(rhs);
  Signature sig = base_signature(g, {});
  collect_letters(t1, sig);
  collect_letters(t2, sig);
  core::typecheck(t1, sig);
  core::typecheck(t2, sig);

  core::Flavor fl1 = core::flavor_of(t1);
  core::Flavor fl2 = core::flavor_of(t2);
  bool cartesian = !(fl1 == core::Flavor::Symmetric || fl2 == core::Flavor::Symmetric ||
                     g.theory == "sym");
  bool structural = core::is_structural(t1) && core::is_structural(t2);

  std::vector<OracleVerdict> verdicts;
  if (cross_check) {
    if (structural) {
      verdicts.push_back(semantics_verdict(t1, t2, cartesian));
      verdicts.push_back(model_verdict(t1, t2, sig, carriers));
    }
    verdicts.push_back(closure_verdict(t1, t2, sig, g, cartesian));
  } else if (oracle == "semantics") {
    verdicts.push_back(semantics_verdict(t1, t2, cartesian));
  } else if (oracle == "model") {
    verdicts.push_back(model_verdict(t1, t2, sig, carriers));
  } else if (oracle == "closure") {
    verdicts.push_back(closure_verdict(t1, t2, sig, g, cartesian));
  } else {
    throw Error("UsageError", "unknown oracle '" + oracle + "'");
  }

  bool agree = true;
  for (const auto& v : verdicts) agree = agree && v.equal == verdicts.front().equal;

  json j = report_shell(g, "equal");
  j["lhs"] = core::to_string(t1);
  j["rhs"] = core::to_string(t2);
  j["equal"] = verdicts.front().equal;
  j["oracles"] = json::array();
  for (const auto& v : verdicts) {
    json jo;
    jo["oracle"] = v.oracle;
    jo["equal"] = v.equal;
    if (!v.witness.empty()) jo["witness"] = v.witness;
    if (!v.detail.empty()) jo.update(v.detail);
    j["oracles"].push_back(jo);
  }
  std::ostringstream text;
  text << (verdicts.front().equal ? "EQUAL" : "NOT EQUAL") << "\n";
  for (const auto& v : verdicts) {
    text << "  [" << v.oracle << "] " << (v.equal ? "equal" : "not equal");
    if (!v.witness.empty()) text << " — " << v.witness;
    text << "\n";
  }
  if (!agree) {
    j["disagreement"] = true;
    emit(g, out, j, text.str());
    err << "oracle disagreement: the oracles returned different verdicts\n";
    return kExitDisagree;
  }
  emit(g, out, j, text.str());
  return kExitOk;
}

// --- collapse --------------------------------------------------------------------

void apply_assume(engine::TheoryConfig& cfg, const std::string& text) {
  std::string s = text;
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  if (s.rfind("iso ", 0) == 0) {
    engine::add_iso_axiom(cfg, frontend::parse_arrow(s.substr(4)));
    return;
  }
  auto eq = s.find('=');
  if (eq == std::string::npos)
    throw Error("UsageError", "--assume takes 'iso <arrow>' or '<arrow> = <arrow>'");
  engine::add_equation_axiom(cfg, frontend::parse_arrow(s.substr(0, eq)),
                             frontend::parse_arrow(s.substr(eq + 1)));
}

int cmd_collapse(const GlobalOpts& g, const std::vector<std::string>& assumes,
                 const std::vector<std::string>& gens, std::ostream& out, std::ostream& err) {
  engine::TheoryConfig cfg;
  cfg.preset = engine::preset_from_string(g.theory);
  cfg.sig = base_signature(g, gens);
  // letters mentioned in axioms join the signature
  for (const auto& a : assumes) {
    std::string body = a.rfind("iso ", 0) == 0 ? a.substr(4) : a;
    auto eq = body.find('=');
    if (eq == std::string::npos) {
      collect_letters(frontend::parse_arrow(body), cfg.sig);
    } else {
      collect_letters(frontend::parse_arrow(body.substr(0, eq)), cfg.sig);
      collect_letters(frontend::parse_arrow(body.substr(eq + 1)), cfg.sig);
    }
  }
  if (cfg.sig.letters.empty()) cfg.sig.add_letter("p");
  for (const auto& a : assumes) apply_assume(cfg, a);

  engine::CollapseReport rep;
  try {
    rep = engine::detect_collapse(cfg, bounds_of(g));
  } catch (const ResourceLimit& e) {
    err << "resource limit: " << e.what() << "\n";
    return kExitResource;
  }

  json j = report_shell(g, "collapse");
  j["bounds"] = {{"size", g.size_bound}, {"depth", g.depth_bound}, {"cap", g.cap}};
  j["assume"] = assumes;
  j["universe_size"] = rep.universe_size;
  j["class_count_before"] = rep.class_count_before;
  j["class_count_after"] = rep.class_count_after;
  j["preorder_at_bound"] = rep.preorder_at_bound;
  j["witness_count"] = rep.witness_count;
  j["witnesses"] = rep.witnesses;
  j["structural_preorder_at_bound"] = rep.structural_preorder_at_bound;
  j["structural_witness_count"] = rep.structural_witness_count;
  j["structural_witnesses"] = rep.structural_witnesses;
  j["class_reps"] = rep.class_reps;
  j["merged_pair_count"] = rep.merged_pairs.size();
  json merged = json::array();
  for (std::size_t i = 0; i < rep.merged_pairs.size() && i < kJsonMergedPairCap; ++i)
    merged.push_back({rep.merged_pairs[i].first, rep.merged_pairs[i].second});
  j["merged_pairs"] = merged;
  j["merged_pairs_truncated"] = rep.merged_pairs.size() > kJsonMergedPairCap;
  j["balance_ok"] = rep.balance_ok;
  if (rep.balance_offender)
    j["balance_offender"] = {rep.balance_offender->first, rep.balance_offender->second};
  if (g.timings) j["timing_ms"] = rep.elapsed_ms;

  std::ostringstream text;
  text << "universe: " << rep.universe_size << " terms, classes " << rep.class_count_before
       << " -> " << rep.class_count_after << "\n";
  text << "preorder at bound: " << (rep.preorder_at_bound ? "true" : "false")
       << " (witnesses: " << rep.witness_count << ")\n";
  text << "structural preorder at bound: "
       << (rep.structural_preorder_at_bound ? "true" : "false")
       << " (witnesses: " << rep.structural_witness_count << ")\n";
  for (const auto& [a, b] : rep.structural_witnesses)
    text << "  distinguished: " << a << "  vs  " << b << "\n";
  text << "generator balance: " << (rep.balance_ok ? "ok" : "violated") << "\n";
  if (rep.balance_offender)
    text << "  offending pair: " << rep.balance_offender->first << "  vs  "
         << rep.balance_offender->second << "\n";
  if (g.timings) text << "elapsed: " << rep.elapsed_ms << " ms\n";
  emit(g, out, j, text.str());
  return kExitOk;
}

// --- prove -----------------------------------------------------------------------

int cmd_prove(const GlobalOpts& g, const std::string& file, bool bundled, std::ostream& out,
              std::ostream& err) {
  std::string text = bundled ? proofs::bundled_script_text() : read_file(file);
  std::vector<proofs::ProofScript> scripts = proofs::parse_scripts(text);
  json j = report_shell(g, "prove");
  j["scripts"] = json::array();
  std::ostringstream t;
  if (scripts.empty()) {
    err << "warning: no scripts found; nothing to check\n";
    t << "PASS (vacuous: no scripts)\n";
  }
  bool all_ok = true;
  for (const auto& s : scripts) {
    proofs::Verdict v = proofs::check_script(s);
    all_ok = all_ok && v.accepted;
    json js;
    js["script"] = v.script;
    js["accepted"] = v.accepted;
    if (!v.accepted) {
      js["failed_line"] = v.failed_line;
      js["reason"] = v.reason;
      t << "FAIL " << v.script << " at line " << v.failed_line << ": " << v.reason << "\n";
    } else {
      t << "PASS " << v.script << " (" << s.steps.size() << " steps)\n";
    }
    j["scripts"].push_back(js);
  }
  j["all_accepted"] = all_ok;
  emit(g, out, j, t.str());
  return all_ok ? kExitOk : kExitScriptFail;
}

// --- policy-report -----------------------------------------------------------------

json thinning_flags(const Sequent& s, PremisePolicy pol) {
  json arr = json::array();
  for (std::size_t i = 0; i < s.premises.size(); ++i) {
    Sequent rest = s;
    rest.premises.erase(rest.premises.begin() + static_cast<long>(i));
    auto [seq, invisible] = frontend::apply_thinning(rest, s.premises[i], pol);
    (void)seq;
    json e;
    e["premise"] = core::to_string(s.premises[i]);
    e["index"] = i + 1;
    e["invisible"] = invisible;
    arr.push_back(e);
  }
  return arr;
}

json contraction_flags(const Sequent& s, PremisePolicy pol) {
  json arr = json::array();
  std::vector<std::string> seen;
  for (const auto& p : s.premises) {
    std::string key = core::to_string(p);
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
    seen.push_back(key);
    std::size_t count = 0;
    for (const auto& q : s.premises)
      if (core::equal(p, q)) ++count;
    if (count < 2) continue;
    json e;
    e["premise"] = key;
    e["occurrences"] = count;
    // a contraction step is visible when the policy keeps duplicate premises
    e["visible"] = pol != PremisePolicy::Set;
    arr.push_back(e);
  }
  return arr;
}

int cmd_policy_report(const GlobalOpts& g, const std::vector<std::string>& sequents,
                      const std::string& file, const std::vector<std::string>& policies,
                      const std::vector<std::string>& substs, std::ostream& out,
                      std::ostream& err) {
  std::vector<std::string> lines = sequents;
  if (!file.empty()) {
    std::istringstream in(read_file(file));
    std::string line;
    while (std::getline(in, line)) {
      if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      bool blank = std::all_of(line.begin(), line.end(),
                               [](unsigned char c) { return std::isspace(c) != 0; });
      if (!blank) lines.push_back(line);
    }
  }
  std::vector<PremisePolicy> pols;
  for (const auto& p : policies) pols.push_back(frontend::policy_from_string(p));
  if (pols.empty())
    pols = {PremisePolicy::Sequence, PremisePolicy::Multiset, PremisePolicy::Set};

  std::vector<std::pair<std::string, std::string>> subs;
  for (const auto& s : substs) {
    auto eq = s.find('=');
    if (eq == std::string::npos) throw Error("UsageError", "--subst takes from=to");
    subs.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }

  json j = report_shell(g, "policy-report");
  j["sequents"] = json::array();
  std::ostringstream t;
  bool had_errors = false;

  for (const auto& line : lines) {
    json js;
    Sequent s;
    try {
      s = frontend::parse_sequent(line);
    } catch (const Error& e) {
      js["input"] = line;
      js["error"] = e.what();
      j["sequents"].push_back(js);
      t << "error: " << line << " — " << e.what() << "\n";
      had_errors = true;
      continue;
    }
    Signature sig = base_signature(g, {});
    for (const auto& p : s.premises) collect_letters(p, sig);
    collect_letters(s.conclusion, sig);
    for (const auto& [from, to] : subs) {
      sig.add_letter(from);
      sig.add_letter(to);
    }

    js["input"] = frontend::to_string(s);
    js["policies"] = json::array();
    t << "sequent: " << frontend::to_string(s) << "\n";
    for (PremisePolicy pol : pols) {
      json jp;
      jp["policy"] = frontend::to_string(pol);
      Sequent norm = frontend::apply_policy(s, pol);
      jp["normalized"] = frontend::to_string(norm);
      auto [folded, conclusion] = frontend::sequent_to_arrow_type(s, pol);
      jp["arrow_type"] = core::to_string(folded) + " -> " + core::to_string(conclusion);
      jp["thinning"] = thinning_flags(s, pol);
      jp["contractions"] = contraction_flags(s, pol);
      t << "  policy " << frontend::to_string(pol) << ": normalized "
        << frontend::to_string(norm) << "\n";
      for (const auto& e : jp["thinning"])
        t << "    thinning " << e["premise"].get<std::string>() << " (#" << e["index"]
          << "): " << (e["invisible"].get<bool>() ? "invisible" : "visible") << "\n";
      for (const auto& e : jp["contractions"])
        t << "    contraction on " << e["premise"].get<std::string>() << " (x"
          << e["occurrences"] << "): "
          << (e["visible"].get<bool>() ? "visible" : "invisible under this policy") << "\n";
      if (!subs.empty()) {
        jp["substitutions"] = json::array();
        Sequent cur = s;
        for (const auto& [from, to] : subs)
          cur = frontend::substitute_letter(cur, from, to, sig);
        Sequent cur_norm = frontend::apply_policy(cur, pol);
        json je;
        je["substituted"] = frontend::to_string(cur);
        je["normalized"] = frontend::to_string(cur_norm);
        je["premises_before"] = norm.premises.size();
        je["premises_after"] = cur_norm.premises.size();
        je["collection_shrank"] = cur_norm.premises.size() < norm.premises.size();
        je["thinning"] = thinning_flags(cur, pol);
        je["contractions"] = contraction_flags(cur, pol);
        jp["substitutions"].push_back(je);
        t << "    subst -> " << frontend::to_string(cur) << " ; normalized "
          << frontend::to_string(cur_norm) << " ; premises " << norm.premises.size() << " -> "
          << cur_norm.premises.size()
          << (je["collection_shrank"].get<bool>() ? " (collection shrank)" : "") << "\n";
        for (const auto& e : je["thinning"])
          t << "      thinning " << e["premise"].get<std::string>() << " (#" << e["index"]
            << "): " << (e["invisible"].get<bool>() ? "invisible" : "visible") << "\n";
      }
      js["policies"].push_back(jp);
    }
    j["sequents"].push_back(js);
  }
  emit(g, out, j, t.str());
  if (had_errors) {
    err << "one or more sequents failed to parse\n";
    return kExitError;
  }
  return kExitOk;
}

// --- parse -----------------------------------------------------------------------

int cmd_parse(const GlobalOpts& g, const std::vector<std::string>& exprs, std::ostream& out,
              std::ostream& err) {
  (void)err;
  json j = report_shell(g, "parse");
  j["items"] = json::array();
  std::ostringstream t;
  for (const auto& e : exprs) {
    json je;
    if (e.find("|-") != std::string::npos) {
      Sequent s = frontend::parse_sequent(e);
      je["kind"] = "sequent";
      je["canonical"] = frontend::to_string(s);
      t << "sequent: " << frontend::to_string(s) << "\n";
    } else {
      ArrowPtr a;
      bool is_arrow = true;
      try {
        a = frontend::parse_arrow(e);
      } catch (const SyntaxError&) {
        is_arrow = false;
      }
      if (is_arrow) {
        Signature sig = base_signature(g, {});
        collect_letters(a, sig);
        core::Typing ty = core::typecheck(a, sig);
        je["kind"] = "arrow";
        je["canonical"] = core::to_string(a);
        je["source"] = core::to_string(ty.source);
        je["target"] = core::to_string(ty.target);
        t << "arrow: " << core::to_string(a) << " : " << core::to_string(ty.source) << " -> "
          << core::to_string(ty.target) << "\n";
      } else {
        FormulaPtr f = frontend::parse_formula(e);
        je["kind"] = "formula";
        je["canonical"] = core::to_string(f);
        je["depth"] = core::depth(f);
        t << "formula: " << core::to_string(f) << "\n";
      }
    }
    j["items"].push_back(je);
  }
  emit(g, out, j, t.str());
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  GlobalOpts g;
  CLI::App app{"workbench for identity of deductions in freely generated categories", "freecat"};
  app.fallthrough();
  app.add_option("--theory", g.theory, "theory preset: cartesian | cartesian-top | sym");
  app.add_option("--sig", g.sig_file, "signature file (letter/arrow declarations)");
  app.add_option("--emit", g.emit, "output format: text | json")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", g.seed, "random seed recorded in reports");
  app.add_option("--size", g.size_bound, "term size bound for closure universes");
  app.add_option("--depth", g.depth_bound, "formula depth bound for closure universes");
  app.add_option("--cap", g.cap, "universe cap before ResourceLimit");
  app.add_flag("--timings", g.timings, "include wall-clock timings in reports");
  app.require_subcommand(1);

  auto* parse_cmd = app.add_subcommand("parse", "parse and echo formulae, arrows or sequents");
  std::vector<std::string> parse_exprs;
  parse_cmd->add_option("expr", parse_exprs, "expressions")->required();

  auto* equal_cmd = app.add_subcommand("equal", "decide identity of two deductions");
  std::string eq_lhs, eq_rhs, eq_oracle = "semantics";
  bool eq_cross = false;
  std::vector<std::string> eq_carriers;
  equal_cmd->add_option("lhs", eq_lhs, "first arrow term")->required();
  equal_cmd->add_option("rhs", eq_rhs, "second arrow term")->required();
  equal_cmd->add_option("--oracle", eq_oracle, "semantics | closure | model")
      ->check(CLI::IsMember({"semantics", "closure", "model"}));
  equal_cmd->add_flag("--cross-check", eq_cross, "run all applicable oracles and compare");
  equal_cmd->add_option("--carrier", eq_carriers, "model carrier size, letter=N");

  auto* collapse_cmd = app.add_subcommand("collapse", "bounded preorder-collapse detection");
  std::vector<std::string> co_assumes, co_gens;
  collapse_cmd->add_option("--assume", co_assumes, "'iso <arrow>' or '<arrow> = <arrow>'");
  collapse_cmd->add_option("--gens", co_gens, "generator arrows, name:src->tgt[,...]");

  auto* prove_cmd = app.add_subcommand("prove", "check equational proof scripts");
  std::string prove_file;
  bool prove_bundled = false;
  prove_cmd->add_option("file", prove_file, "script file");
  prove_cmd->add_flag("--bundled", prove_bundled, "check the bundled scripts");

  auto* policy_cmd = app.add_subcommand("policy-report", "premise-policy effects on sequents");
  std::vector<std::string> po_sequents, po_policies, po_substs;
  std::string po_file;
  policy_cmd->add_option("--sequent", po_sequents, "sequent text (repeatable)");
  policy_cmd->add_option("file", po_file, "file with one sequent per line");
  policy_cmd->add_option("--policy", po_policies, "sequence | multiset | set (repeatable)");
  policy_cmd->add_option("--subst", po_substs, "letter substitution from=to (repeatable)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (parse_cmd->parsed()) return cmd_parse(g, parse_exprs, out, err);
    if (equal_cmd->parsed()) {
      std::map<std::string, std::size_t> carriers;
      for (const auto& c : eq_carriers) {
        auto eq = c.find('=');
        if (eq == std::string::npos) throw Error("UsageError", "--carrier takes letter=N");
        carriers[c.substr(0, eq)] = static_cast<std::size_t>(std::stoul(c.substr(eq + 1)));
      }
      return cmd_equal(g, eq_lhs, eq_rhs, eq_oracle, eq_cross, carriers, out, err);
    }
    if (collapse_cmd->parsed()) return cmd_collapse(g, co_assumes, co_gens, out, err);
    if (prove_cmd->parsed()) {
      if (!prove_bundled && prove_file.empty())
        throw Error("UsageError", "prove needs a script file or --bundled");
      return cmd_prove(g, prove_file, prove_bundled, out, err);
    }
    if (policy_cmd->parsed()) {
      if (po_sequents.empty() && po_file.empty())
        throw Error("UsageError", "policy-report needs --sequent or a file");
      return cmd_policy_report(g, po_sequents, po_file, po_policies, po_substs, out, err);
    }
  } catch (const ResourceLimit& e) {
    err << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const Error& e) {
    err << "error [" << e.code() << "]: " << e.what() << "\n";
    return kExitError;
  }
  return kExitOk;
}

}  // namespace freecat::cli
