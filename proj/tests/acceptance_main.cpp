// Acceptance suite: one criterion per run_criterion call, each with a wall
// clock budget. Prints one PASS/FAIL line per criterion and exits nonzero
// if any fail.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "json.hpp"

#include "freecat/cli.hpp"
#include "freecat/engine.hpp"
#include "freecat/frontend.hpp"
#include "freecat/proofs.hpp"
#include "freecat/semantics.hpp"

using namespace freecat;
using core::ArrowPtr;
using nlohmann::json;

namespace {

int g_failures = 0;

struct Checker {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << "    failed: " << what << "\n";
    }
  }
};

void run_criterion(int number, const std::string& label, double budget_ms,
                   const std::function<void(Checker&)>& body) {
  Checker c;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.detail << "    exception: " << e.what() << "\n";
  }
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                  .count();
  if (ms > budget_ms) {
    c.ok = false;
    c.detail << "    exceeded budget: " << ms << " ms > " << budget_ms << " ms\n";
  }
  std::cout << (c.ok ? "[PASS]" : "[FAIL]") << " criterion " << number << ": " << label << " ("
            << static_cast<long>(ms) << " ms)\n"
            << c.detail.str();
  if (!c.ok) ++g_failures;
}

ArrowPtr arr(const char* text) { return core::expand_diag(frontend::parse_arrow(text)); }

engine::TheoryConfig cart_p() {
  engine::TheoryConfig cfg;
  cfg.sig.add_letter("p");
  return cfg;
}

engine::TheoryConfig sym_p() {
  engine::TheoryConfig cfg;
  cfg.preset = engine::Preset::SymmetricAssociative;
  cfg.sig.add_letter("p");
  return cfg;
}

std::optional<std::size_t> find_term(const std::vector<ArrowPtr>& universe, const ArrowPtr& t) {
  for (std::size_t i = 0; i < universe.size(); ++i)
    if (core::equal(universe[i], t)) return i;
  return std::nullopt;
}

bool closure_proves(const engine::TheoryConfig& cfg, const engine::Bounds& b, const char* lhs,
                    const char* rhs, Checker& c) {
  auto universe = engine::term_universe(cfg, b);
  auto cl = engine::congruence_close(cfg, universe);
  auto i = find_term(universe, arr(lhs));
  auto j = find_term(universe, arr(rhs));
  c.require(i.has_value() && j.has_value(), "terms present in the universe");
  if (!i || !j) return false;
  return cl.class_of[*i] == cl.class_of[*j];
}

// ---------------------------------------------------------------------------

void criterion1(Checker& c) {
  // the two projections are distinct, by occurrence maps and by the
  // two-element model
  c.require(!semantics::decide_equal_cartesian(arr("p1{p,p}"), arr("p2{p,p}")),
            "projections distinguished by occurrence maps");
  auto m1 = semantics::interpret_cartesian(arr("p1{p,p}"));
  auto m2 = semantics::interpret_cartesian(arr("p2{p,p}"));
  c.require(m1.map == std::vector<std::size_t>{0}, "first projection reads the left leaf");
  c.require(m2.map == std::vector<std::size_t>{1}, "second projection reads the right leaf");

  semantics::FiniteModel m;
  m.carriers["p"] = 2;
  auto f1 = semantics::eval_finite_model(arr("p1{p,p}"), m);
  auto f2 = semantics::eval_finite_model(arr("p2{p,p}"), m);
  c.require(f1.table != f2.table, "two-element tables differ");
  c.require(f1.table[1] == 0 && f2.table[1] == 1, "tables differ at input (0,1)");
}

void criterion2(Checker& c) {
  semantics::FiniteModel m;
  m.carriers["p"] = 2;
  for (const char* proj : {"p1{p,p}", "p2{p,p}"}) {
    std::string comp = std::string(proj) + " . w{p}";
    c.require(semantics::decide_equal_cartesian(arr(comp.c_str()), arr("id{p}")),
              comp + " = id by the occurrence oracle");
    c.require(closure_proves(cart_p(), {7, 2, 200000}, comp.c_str(), "id{p}", c),
              comp + " = id by closure at size 7");
    c.require(semantics::equal(semantics::eval_finite_model(arr(comp.c_str()), m),
                               semantics::eval_finite_model(arr("id{p}"), m)),
              comp + " = id in the finite model");
  }
}

void criterion3(Checker& c) {
  engine::TheoryConfig cfg = cart_p();
  engine::add_iso_axiom(cfg, frontend::parse_arrow("w{p}"));
  c.require(closure_proves(cfg, {7, 2, 200000}, "p1{p,p}", "p2{p,p}", c),
            "closure merges the projections");
  engine::CollapseReport rep = engine::detect_collapse(cfg, {7, 2, 200000});
  c.require(rep.structural_preorder_at_bound, "structural fragment is a preorder at the bound");
  engine::CollapseReport rep2 = engine::detect_collapse(cfg, {7, 2, 200000});
  c.require(rep.merged_pairs == rep2.merged_pairs && rep.class_reps == rep2.class_reps,
            "report is deterministic");
}

void criterion4(Checker& c) {
  engine::TheoryConfig cfg = cart_p();
  engine::add_equation_axiom(cfg, arr("p1{p,p}"), arr("p2{p,p}"));
  c.require(closure_proves(cfg, {7, 2, 200000}, "w{p} . p1{p,p}", "id{p /\\ p}", c),
            "closure proves w . p1 = id from equal projections");
}

void criterion5(Checker& c) {
  auto p = core::Formula::letter("p");
  int mismatches = 0, configs = 0;
  for (int axiom_kind : {0, 1, 2}) {
    for (bool with_gens : {false, true}) {
      for (std::size_t size : {5u, 7u}) {
        engine::TheoryConfig cfg = cart_p();
        if (axiom_kind == 1) engine::add_iso_axiom(cfg, frontend::parse_arrow("w{p}"));
        if (axiom_kind == 2) engine::add_equation_axiom(cfg, arr("p1{p,p}"), arr("p2{p,p}"));
        if (with_gens) {
          cfg.sig.add_gen("f", p, p);
          cfg.sig.add_gen("g", p, p);
        }
        auto [preorder, full] = engine::preorder_and_fullness_checks(cfg, {size, 2, 200000});
        ++configs;
        if (preorder != full) ++mismatches;
      }
    }
  }
  c.require(configs >= 8, "at least eight configurations checked");
  c.require(mismatches == 0, "preorder and diagonal fullness always agree");
}

void criterion6(Checker& c) {
  engine::TheoryConfig cfg = sym_p();
  engine::add_equation_axiom(cfg, arr("c{p,p}"), arr("id{p * p}"));
  engine::CollapseReport rep = engine::detect_collapse(cfg, {7, 2, 200000});
  c.require(rep.structural_preorder_at_bound && rep.structural_witness_count == 0,
            "all structural parallel pairs merged");

  engine::TheoryConfig with_gens = cfg;
  auto p = core::Formula::letter("p");
  with_gens.sig.add_gen("f", p, p);
  with_gens.sig.add_gen("g", p, p);
  auto universe = engine::term_universe(with_gens, {7, 2, 200000});
  auto cl = engine::congruence_close(with_gens, universe);
  auto fi = find_term(universe, arr("f{p->p}"));
  auto gi = find_term(universe, arr("g{p->p}"));
  c.require(fi && gi && cl.class_of[*fi] != cl.class_of[*gi],
            "distinct generator arrows stay distinct");
  c.require(cl.balance_ok, "generator balance holds on every union");
  engine::CollapseReport rep2 = engine::detect_collapse(with_gens, {7, 2, 200000});
  c.require(rep2.structural_preorder_at_bound, "structural collapse persists with generators");
}

void criterion7(Checker& c) {
  auto scripts = proofs::bundled_scripts();
  c.require(scripts.size() == 12, "twelve bundled scripts");
  for (const auto& s : scripts) {
    proofs::Verdict v = proofs::check_script(s);
    c.require(v.accepted, s.name + " checks");
  }

  // Single-justification mutation over every line of every script. The
  // decoy justifications are shape-specific enough that none can validate a
  // line it did not originally justify (a mutation to another genuinely
  // valid justification would be an equivalent mutant, not a defect).
  std::size_t mutations = 0, rejected_at_line = 0;
  for (const auto& s : scripts) {
    std::vector<std::string> decoys;
    if (s.theory == proofs::Theory::Adjunction)
      decoys = {"triangle", "hyp", "line 1"};
    else
      decoys = {"axiom beta1", "axiom idl", "hyp", "line 1"};
    for (std::size_t li = 0; li < s.steps.size(); ++li) {
      std::string original = proofs::to_string(s.steps[li].just);
      for (const auto& d : decoys) {
        if (d == original) continue;
        if (d == "line 1" && li == 0) continue;
        proofs::ProofScript mutated = s;
        mutated.steps[li].just = proofs::justification_from_string(d);
        proofs::Verdict v = proofs::check_script(mutated);
        ++mutations;
        if (!v.accepted && v.failed_line == static_cast<int>(li) + 1) ++rejected_at_line;
        else
          c.detail << "    surviving mutation: " << s.name << " line " << (li + 1) << " -> '"
                   << d << "'\n";
      }
    }
  }
  c.require(mutations > 300, "mutation matrix is non-trivial");
  c.require(rejected_at_line == mutations,
            "every mutation rejected at the mutated line (" + std::to_string(rejected_at_line) +
                "/" + std::to_string(mutations) + ")");
}

void criterion8(Checker& c) {
  engine::TheoryConfig cfg = cart_p();
  auto small = engine::term_universe(cfg, {6, 2, 200000});
  auto big = engine::term_universe(cfg, {9, 2, 200000});
  auto cl = engine::congruence_close(cfg, big);

  // index of each small term inside the big universe (the small one is a
  // prefix, but look up by form to stay independent of that detail)
  std::vector<std::size_t> at(small.size());
  for (std::size_t i = 0; i < small.size(); ++i) {
    auto j = find_term(big, small[i]);
    c.require(j.has_value(), "small universe embeds in the slack universe");
    if (!j) return;
    at[i] = *j;
  }

  std::size_t unsound = 0, unproven = 0, pairs = 0;
  for (std::size_t i = 0; i < small.size(); ++i) {
    auto mi = semantics::interpret_cartesian(small[i]);
    for (std::size_t j = i + 1; j < small.size(); ++j) {
      auto mj = semantics::interpret_cartesian(small[j]);
      if (!core::equal(mi.source, mj.source) || !core::equal(mi.target, mj.target)) continue;
      ++pairs;
      bool sem = mi.map == mj.map;
      bool closed = cl.class_of[at[i]] == cl.class_of[at[j]];
      if (closed && !sem) ++unsound;
      if (sem && !closed) {
        ++unproven;
        if (unproven <= 5)
          c.detail << "    residue: " << core::to_string(small[i]) << "  =sem=  "
                   << core::to_string(small[j]) << "\n";
      }
    }
  }
  c.require(pairs > 500, "enough parallel pairs considered");
  c.require(unsound == 0, "soundness: closure never merges semantically distinct terms");
  c.require(unproven == 0, "bounded completeness with +3 slack has zero residue");
}

void criterion9(Checker& c) {
  std::mt19937_64 rng(20250810);
  for (auto preset : {engine::Preset::Cartesian, engine::Preset::CartesianWithTop,
                      engine::Preset::SymmetricAssociative}) {
    engine::TheoryConfig cfg;
    cfg.preset = preset;
    cfg.sig.add_letter("p");
    cfg.sig.add_letter("q");
    bool sym = preset == engine::Preset::SymmetricAssociative;
    for (const auto& schema : engine::axiom_schemata(cfg)) {
      std::size_t failures = 0, produced = 0;
      for (int k = 0; k < 100; ++k) {
        auto inst = engine::random_schema_instance(schema.name, cfg, rng, 4);
        if (!inst) break;  // witness-based schema, no structural instances
        ++produced;
        bool same;
        if (sym)
          same = semantics::equal(semantics::interpret_symmetric(inst->lhs),
                                  semantics::interpret_symmetric(inst->rhs));
        else
          same = semantics::equal(semantics::interpret_cartesian(inst->lhs),
                                  semantics::interpret_cartesian(inst->rhs));
        if (!same) ++failures;
      }
      if (produced > 0)
        c.require(produced == 100 && failures == 0,
                  "schema " + schema.name + ": " + std::to_string(failures) + " failures in " +
                      std::to_string(produced));
    }
  }
}

void criterion10(Checker& c) {
  std::ostringstream out, err;
  int rc = cli::run({"policy-report", "--sequent", "p, q |- p", "--subst", "q=p", "--policy",
                     "set", "--emit", "json"},
                    out, err);
  c.require(rc == 0, "policy-report runs");
  json j = json::parse(out.str());
  const json& sub = j["sequents"][0]["policies"][0]["substitutions"][0];
  c.require(sub["normalized"] == "p |- p", "substituted sequent normalizes to p |- p");
  bool any_invisible = false;
  for (const auto& t : sub["thinning"]) any_invisible = any_invisible || t["invisible"] == true;
  c.require(any_invisible, "thinning is flagged invisible under the set policy");
  bool base_invisible = false;
  for (const auto& t : j["sequents"][0]["policies"][0]["thinning"])
    base_invisible = base_invisible || t["invisible"] == true;
  c.require(!base_invisible, "the unsubstituted thinning is visible");

  std::ostringstream out2, err2;
  rc = cli::run({"policy-report", "--sequent", "p, q |- p", "--subst", "q=p", "--policy",
                 "sequence", "--emit", "json"},
                out2, err2);
  c.require(rc == 0, "sequence policy runs");
  json j2 = json::parse(out2.str());
  const json& pol2 = j2["sequents"][0]["policies"][0];
  bool none_invisible = true;
  for (const auto& t : pol2["thinning"]) none_invisible = none_invisible && !t["invisible"].get<bool>();
  for (const auto& t : pol2["substitutions"][0]["thinning"])
    none_invisible = none_invisible && !t["invisible"].get<bool>();
  c.require(none_invisible, "sequences never flag invisibility");
}

}  // namespace

int main() {
  run_criterion(1, "projection separation by both oracles", 1000, criterion1);
  run_criterion(2, "projection-after-contraction identities under all three oracles", 30000,
                criterion2);
  run_criterion(3, "contraction-iso collapses the bounded structural fragment", 30000,
                criterion3);
  run_criterion(4, "equal projections invert the contraction at the bound", 30000, criterion4);
  run_criterion(5, "bounded preorder equals bounded diagonal fullness on a config grid", 60000,
                criterion5);
  run_criterion(6, "symmetry-as-identity collapse keeps generators apart", 60000, criterion6);
  run_criterion(7, "bundled proof replay with exhaustive justification mutation", 10000,
                criterion7);
  run_criterion(8, "closure and occurrence semantics agree exhaustively with +3 slack", 120000,
                criterion8);
  run_criterion(9, "axiom schema soundness fuzzing, 100 seeded instances each", 60000,
                criterion9);
  run_criterion(10, "invisible thinning report matches the sequent story", 10000, criterion10);

  if (g_failures) {
    std::cout << g_failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
