#include "freecat/engine.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <deque>
#include <functional>
#include <map>
#include <unordered_map>

namespace freecat::engine {

using core::ArrKind;
using core::ArrowTerm;
using core::FormKind;
using core::Formula;
using core::Typing;

namespace {

constexpr const char* kUserInvPrefix = "~inv";
constexpr const char* kAssocInvPrefix = "~ainv";

bool has_prefix(const std::string& s, const char* pre) { return s.rfind(pre, 0) == 0; }

}  // namespace

std::string to_string(Preset p) {
  switch (p) {
    case Preset::Cartesian: return "cartesian";
    case Preset::CartesianWithTop: return "cartesian-top";
    case Preset::SymmetricAssociative: return "sym";
  }
  return "";
}

Preset preset_from_string(const std::string& name) {
  if (name == "cartesian" || name == "cart") return Preset::Cartesian;
  if (name == "cartesian-top" || name == "top") return Preset::CartesianWithTop;
  if (name == "sym" || name == "symmetric") return Preset::SymmetricAssociative;
  throw Error("UnknownTheory", "unknown theory preset '" + name + "'");
}

// --- Config edits -----------------------------------------------------------

namespace {

core::Signature sig_with_witnesses(const TheoryConfig& cfg) {
  core::Signature s = cfg.sig;
  for (const auto& w : cfg.witnesses)
    if (!s.find_gen(w.name)) s.gen_arrows.push_back(w);
  return s;
}

Typing type_in(const TheoryConfig& cfg, const ArrowPtr& t) {
  return core::typecheck(t, sig_with_witnesses(cfg));
}

}  // namespace

void add_equation_axiom(TheoryConfig& cfg, ArrowPtr lhs, ArrowPtr rhs) {
  lhs = core::expand_diag(lhs);
  rhs = core::expand_diag(rhs);
  Typing tl = type_in(cfg, lhs);
  Typing tr = type_in(cfg, rhs);
  if (!core::equal(tl.source, tr.source) || !core::equal(tl.target, tr.target))
    throw TypeMismatch("axiom sides have different endpoints: " + core::to_string(lhs) +
                       " vs " + core::to_string(rhs));
  cfg.extra_axioms.push_back({std::move(lhs), std::move(rhs), "user"});
}

void add_iso_axiom(TheoryConfig& cfg, const ArrowPtr& t) {
  ArrowPtr arrow = core::expand_diag(t);
  Typing ty = type_in(cfg, arrow);
  std::string name = kUserInvPrefix + std::to_string(cfg.witnesses.size());
  cfg.witnesses.push_back({name, ty.target, ty.source});
  ArrowPtr u = ArrowTerm::inv_witness(name, ty.target, ty.source);
  cfg.extra_axioms.push_back({ArrowTerm::comp(u, arrow), ArrowTerm::id(ty.source), "user_iso"});
  cfg.extra_axioms.push_back({ArrowTerm::comp(arrow, u), ArrowTerm::id(ty.target), "user_iso"});
}

// --- Schemata ---------------------------------------------------------------

std::vector<AxiomSchema> axiom_schemata(const TheoryConfig& cfg) {
  std::vector<AxiomSchema> out = {
      {"idl", "id{B} . f = f"},
      {"idr", "f . id{A} = f"},
      {"assoc", "(h . g) . f = h . (g . f)"},
  };
  if (cfg.preset == Preset::SymmetricAssociative) {
    out.push_back({"tensor_id", "tens(id{A}, id{B}) = id{A * B}"});
    out.push_back({"tensor_comp", "tens(g1, g2) . tens(f1, f2) = tens(g1 . f1, g2 . f2)"});
    out.push_back({"c_nat", "c{B1,B2} . tens(f, g) = tens(g, f) . c{A1,A2}"});
    out.push_back({"a_nat",
                   "a{B1,B2,B3} . tens(tens(f, g), h) = tens(f, tens(g, h)) . a{A1,A2,A3}"});
    out.push_back({"c_invol", "c{B,A} . c{A,B} = id{A * B}"});
    out.push_back({"pentagon",
                   "a{A,B,C * D} . a{A * B,C,D} = "
                   "tens(id{A}, a{B,C,D}) . (a{A,B * C,D} . tens(a{A,B,C}, id{D}))"});
    out.push_back({"hexagon",
                   "a{B,C,A} . (c{A,B * C} . a{A,B,C}) = "
                   "tens(id{B}, c{A,C}) . (a{B,A,C} . tens(c{A,B}, id{C}))"});
    out.push_back({"a_iso", "a{A,B,C} has a two-sided inverse witness"});
  } else {
    out.push_back({"beta1", "p1{A,B} . pair(f, g) = f"});
    out.push_back({"beta2", "p2{A,B} . pair(f, g) = g"});
    out.push_back({"eta", "pair(p1{A,B} . h, p2{A,B} . h) = h"});
    // Derivable from beta/eta; seeded directly so the bounded closure can
    // reach its completeness slack without oversized intermediate terms.
    out.push_back({"fusion", "pair(f, g) . h = pair(f . h, g . h)"});
    out.push_back({"eta_id", "pair(p1{A,B}, p2{A,B}) = id{A /\\ B}"});
    out.push_back({"absorb",
                   "pair(x . p1{A,B}, y . p2{A,B}) . pair(p, q) = pair(x . p, y . q)"});
    if (cfg.preset == Preset::CartesianWithTop)
      out.push_back({"top_unique", "f = bang{A} for every f : A -> T"});
  }
  return out;
}

// --- Random structural data --------------------------------------------------

FormulaPtr random_formula(std::mt19937_64& rng, const TheoryConfig& cfg, int max_depth) {
  std::vector<std::string> letters(cfg.sig.letters.begin(), cfg.sig.letters.end());
  if (letters.empty()) throw Error("EmptySignature", "signature has no letters");
  bool with_top = cfg.preset == Preset::CartesianWithTop;
  std::function<FormulaPtr(int)> gen = [&](int depth) -> FormulaPtr {
    std::uniform_int_distribution<int> coin(0, 99);
    if (depth <= 1 || coin(rng) < 35) {
      if (with_top && coin(rng) < 10) return Formula::top();
      std::uniform_int_distribution<std::size_t> pick(0, letters.size() - 1);
      return Formula::letter(letters[pick(rng)]);
    }
    FormulaPtr l = gen(depth - 1), r = gen(depth - 1);
    return cfg.preset == Preset::SymmetricAssociative ? Formula::tensor(l, r)
                                                      : Formula::conj(l, r);
  };
  return gen(max_depth);
}

namespace {

struct TypedTerm {
  ArrowPtr term;
  FormulaPtr target;
};

TypedTerm random_from(std::mt19937_64& rng, const TheoryConfig& cfg, const FormulaPtr& source,
                      int budget) {
  bool sym = cfg.preset == Preset::SymmetricAssociative;
  bool with_top = cfg.preset == Preset::CartesianWithTop;

  enum Choice { CId, CProj1, CProj2, CPair, CComp, CBang, CSym, CAssoc, CTensor };
  std::vector<Choice> options = {CId};
  if (budget > 0) {
    options.push_back(CComp);
    if (!sym) {
      options.push_back(CPair);
      if (source->kind == FormKind::Conj) {
        options.push_back(CProj1);
        options.push_back(CProj2);
      }
      if (with_top) options.push_back(CBang);
    } else {
      if (source->kind == FormKind::Tensor) {
        options.push_back(CSym);
        options.push_back(CTensor);
        if (source->left->kind == FormKind::Tensor) options.push_back(CAssoc);
      }
    }
  }
  std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
  switch (options[pick(rng)]) {
    case CId: return {ArrowTerm::id(source), source};
    case CProj1: return {ArrowTerm::proj1(source->left, source->right), source->left};
    case CProj2: return {ArrowTerm::proj2(source->left, source->right), source->right};
    case CPair: {
      TypedTerm f = random_from(rng, cfg, source, budget - 1);
      TypedTerm g = random_from(rng, cfg, source, budget - 1);
      return {ArrowTerm::pair(f.term, g.term), Formula::conj(f.target, g.target)};
    }
    case CComp: {
      TypedTerm f = random_from(rng, cfg, source, budget - 1);
      TypedTerm g = random_from(rng, cfg, f.target, budget - 1);
      return {ArrowTerm::comp(g.term, f.term), g.target};
    }
    case CBang: return {ArrowTerm::bang(source), Formula::top()};
    case CSym:
      return {ArrowTerm::sym(source->left, source->right),
              Formula::tensor(source->right, source->left)};
    case CAssoc: {
      FormulaPtr A = source->left->left, B = source->left->right, C = source->right;
      return {ArrowTerm::assoc(A, B, C), Formula::tensor(A, Formula::tensor(B, C))};
    }
    case CTensor: {
      TypedTerm f = random_from(rng, cfg, source->left, budget - 1);
      TypedTerm g = random_from(rng, cfg, source->right, budget - 1);
      return {ArrowTerm::tensor_of(f.term, g.term), Formula::tensor(f.target, g.target)};
    }
  }
  throw Error("Internal", "unhandled choice");
}

}  // namespace

ArrowPtr random_structural_from(std::mt19937_64& rng, const TheoryConfig& cfg,
                                const FormulaPtr& source, int budget) {
  return random_from(rng, cfg, source, budget).term;
}

std::optional<Equation> random_schema_instance(const std::string& schema, const TheoryConfig& cfg,
                                               std::mt19937_64& rng, int max_depth) {
  auto rf = [&]() { return random_formula(rng, cfg, max_depth); };
  auto arrow_from = [&](const FormulaPtr& src) { return random_from(rng, cfg, src, 3); };

  if (schema == "idl") {
    TypedTerm f = arrow_from(rf());
    return Equation{ArrowTerm::comp(ArrowTerm::id(f.target), f.term), f.term, schema};
  }
  if (schema == "idr") {
    FormulaPtr A = rf();
    TypedTerm f = arrow_from(A);
    return Equation{ArrowTerm::comp(f.term, ArrowTerm::id(A)), f.term, schema};
  }
  if (schema == "assoc") {
    TypedTerm f = arrow_from(rf());
    TypedTerm g = arrow_from(f.target);
    TypedTerm h = arrow_from(g.target);
    return Equation{ArrowTerm::comp(ArrowTerm::comp(h.term, g.term), f.term),
                    ArrowTerm::comp(h.term, ArrowTerm::comp(g.term, f.term)), schema};
  }
  if (schema == "beta1" || schema == "beta2") {
    FormulaPtr C = rf();
    TypedTerm f = arrow_from(C);
    TypedTerm g = arrow_from(C);
    ArrowPtr proj = schema == "beta1" ? ArrowTerm::proj1(f.target, g.target)
                                      : ArrowTerm::proj2(f.target, g.target);
    return Equation{ArrowTerm::comp(proj, ArrowTerm::pair(f.term, g.term)),
                    schema == "beta1" ? f.term : g.term, schema};
  }
  if (schema == "eta") {
    FormulaPtr C = rf();
    TypedTerm h = arrow_from(C);
    if (h.target->kind != FormKind::Conj) {
      TypedTerm f = arrow_from(C), g = arrow_from(C);
      h = {ArrowTerm::pair(f.term, g.term), Formula::conj(f.target, g.target)};
    }
    FormulaPtr A = h.target->left, B = h.target->right;
    return Equation{ArrowTerm::pair(ArrowTerm::comp(ArrowTerm::proj1(A, B), h.term),
                                    ArrowTerm::comp(ArrowTerm::proj2(A, B), h.term)),
                    h.term, schema};
  }
  if (schema == "fusion") {
    TypedTerm h = arrow_from(rf());
    TypedTerm f = arrow_from(h.target);
    TypedTerm g = arrow_from(h.target);
    return Equation{ArrowTerm::comp(ArrowTerm::pair(f.term, g.term), h.term),
                    ArrowTerm::pair(ArrowTerm::comp(f.term, h.term),
                                    ArrowTerm::comp(g.term, h.term)),
                    schema};
  }
  if (schema == "eta_id") {
    FormulaPtr A = rf(), B = rf();
    return Equation{ArrowTerm::pair(ArrowTerm::proj1(A, B), ArrowTerm::proj2(A, B)),
                    ArrowTerm::id(Formula::conj(A, B)), schema};
  }
  if (schema == "absorb") {
    FormulaPtr C = rf();
    TypedTerm p = arrow_from(C), q = arrow_from(C);
    TypedTerm x = arrow_from(p.target), y = arrow_from(q.target);
    ArrowPtr lhs = ArrowTerm::comp(
        ArrowTerm::pair(ArrowTerm::comp(x.term, ArrowTerm::proj1(p.target, q.target)),
                        ArrowTerm::comp(y.term, ArrowTerm::proj2(p.target, q.target))),
        ArrowTerm::pair(p.term, q.term));
    return Equation{lhs, ArrowTerm::pair(ArrowTerm::comp(x.term, p.term),
                                         ArrowTerm::comp(y.term, q.term)),
                    schema};
  }
  if (schema == "top_unique") {
    FormulaPtr C = rf();
    TypedTerm g = arrow_from(C);
    return Equation{ArrowTerm::comp(ArrowTerm::bang(g.target), g.term), ArrowTerm::bang(C),
                    schema};
  }
  if (schema == "tensor_id") {
    FormulaPtr A = rf(), B = rf();
    return Equation{ArrowTerm::tensor_of(ArrowTerm::id(A), ArrowTerm::id(B)),
                    ArrowTerm::id(Formula::tensor(A, B)), schema};
  }
  if (schema == "tensor_comp") {
    TypedTerm f1 = arrow_from(rf()), f2 = arrow_from(rf());
    TypedTerm g1 = arrow_from(f1.target), g2 = arrow_from(f2.target);
    return Equation{ArrowTerm::comp(ArrowTerm::tensor_of(g1.term, g2.term),
                                    ArrowTerm::tensor_of(f1.term, f2.term)),
                    ArrowTerm::tensor_of(ArrowTerm::comp(g1.term, f1.term),
                                         ArrowTerm::comp(g2.term, f2.term)),
                    schema};
  }
  if (schema == "c_nat") {
    FormulaPtr A1 = rf(), A2 = rf();
    TypedTerm f = arrow_from(A1), g = arrow_from(A2);
    return Equation{ArrowTerm::comp(ArrowTerm::sym(f.target, g.target),
                                    ArrowTerm::tensor_of(f.term, g.term)),
                    ArrowTerm::comp(ArrowTerm::tensor_of(g.term, f.term), ArrowTerm::sym(A1, A2)),
                    schema};
  }
  if (schema == "a_nat") {
    FormulaPtr A1 = rf(), A2 = rf(), A3 = rf();
    TypedTerm f = arrow_from(A1), g = arrow_from(A2), h = arrow_from(A3);
    return Equation{
        ArrowTerm::comp(ArrowTerm::assoc(f.target, g.target, h.target),
                        ArrowTerm::tensor_of(ArrowTerm::tensor_of(f.term, g.term), h.term)),
        ArrowTerm::comp(ArrowTerm::tensor_of(f.term, ArrowTerm::tensor_of(g.term, h.term)),
                        ArrowTerm::assoc(A1, A2, A3)),
        schema};
  }
  if (schema == "c_invol") {
    FormulaPtr A = rf(), B = rf();
    return Equation{ArrowTerm::comp(ArrowTerm::sym(B, A), ArrowTerm::sym(A, B)),
                    ArrowTerm::id(Formula::tensor(A, B)), schema};
  }
  if (schema == "pentagon") {
    FormulaPtr A = rf(), B = rf(), C = rf(), D = rf();
    return Equation{
        ArrowTerm::comp(ArrowTerm::assoc(A, B, Formula::tensor(C, D)),
                        ArrowTerm::assoc(Formula::tensor(A, B), C, D)),
        ArrowTerm::comp(
            ArrowTerm::tensor_of(ArrowTerm::id(A), ArrowTerm::assoc(B, C, D)),
            ArrowTerm::comp(ArrowTerm::assoc(A, Formula::tensor(B, C), D),
                            ArrowTerm::tensor_of(ArrowTerm::assoc(A, B, C), ArrowTerm::id(D)))),
        schema};
  }
  if (schema == "hexagon") {
    FormulaPtr A = rf(), B = rf(), C = rf();
    return Equation{
        ArrowTerm::comp(ArrowTerm::assoc(B, C, A),
                        ArrowTerm::comp(ArrowTerm::sym(A, Formula::tensor(B, C)),
                                        ArrowTerm::assoc(A, B, C))),
        ArrowTerm::comp(
            ArrowTerm::tensor_of(ArrowTerm::id(B), ArrowTerm::sym(A, C)),
            ArrowTerm::comp(ArrowTerm::assoc(B, A, C),
                            ArrowTerm::tensor_of(ArrowTerm::sym(A, B), ArrowTerm::id(C)))),
        schema};
  }
  if (schema == "a_iso") return std::nullopt;  // witness-based, no structural instance
  throw Error("UnknownSchema", "unknown axiom schema '" + schema + "'");
}

// --- Universe enumeration -----------------------------------------------------

namespace {

struct FormulaSet {
  std::vector<FormulaPtr> all;  // deterministic order: by depth, then construction
  std::unordered_map<std::string, std::size_t> index;

  bool contains(const FormulaPtr& f) const { return index.count(core::to_string(f)) != 0; }
  std::optional<std::size_t> find(const FormulaPtr& f) const {
    auto it = index.find(core::to_string(f));
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
  void add(const FormulaPtr& f) {
    std::string key = core::to_string(f);
    if (index.count(key)) return;
    index.emplace(std::move(key), all.size());
    all.push_back(f);
  }
};

FormulaSet enumerate_formulas(const TheoryConfig& cfg, std::size_t depth_bound) {
  FormulaSet fs;
  std::vector<std::vector<FormulaPtr>> by_depth(depth_bound + 1);
  for (const auto& l : cfg.sig.letters) by_depth[1].push_back(Formula::letter(l));
  if (cfg.preset == Preset::CartesianWithTop) by_depth[1].push_back(Formula::top());
  for (const auto& f : by_depth[1]) fs.add(f);
  for (std::size_t d = 2; d <= depth_bound; ++d) {
    for (std::size_t i = 1; i < d; ++i) {
      for (std::size_t j = 1; j < d; ++j) {
        if (std::max(i, j) != d - 1) continue;
        for (const auto& l : by_depth[i]) {
          for (const auto& r : by_depth[j]) {
            FormulaPtr f = cfg.preset == Preset::SymmetricAssociative ? Formula::tensor(l, r)
                                                                      : Formula::conj(l, r);
            by_depth[d].push_back(f);
            fs.add(f);
          }
        }
      }
    }
  }
  return fs;
}

struct UniverseIndex {
  std::vector<ArrowPtr> terms;
  std::vector<std::string> prints;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::array<long, 2>> children;  // -1 when absent
  std::vector<FormulaPtr> src, tgt;

  std::optional<std::size_t> find(const ArrowPtr& t) const {
    auto it = index.find(core::to_string(t));
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

// Rebuilds the index structures for a universe produced by term_universe.
// Typing is compositional: children always precede parents.
UniverseIndex index_universe(const std::vector<ArrowPtr>& universe) {
  UniverseIndex ui;
  ui.terms = universe;
  ui.prints.reserve(universe.size());
  ui.children.assign(universe.size(), {-1, -1});
  ui.src.resize(universe.size());
  ui.tgt.resize(universe.size());
  for (std::size_t i = 0; i < universe.size(); ++i) {
    const ArrowPtr& t = universe[i];
    ui.prints.push_back(core::to_string(t));
    if (!ui.index.emplace(ui.prints.back(), i).second)
      throw Error("Internal", "duplicate term in universe: " + ui.prints.back());
  }
  for (std::size_t i = 0; i < universe.size(); ++i) {
    const ArrowPtr& t = universe[i];
    switch (t->kind) {
      case ArrKind::Comp:
      case ArrKind::Pair:
      case ArrKind::TensorOf: {
        auto cu = ui.find(t->u), cv = ui.find(t->v);
        if (!cu || !cv)
          throw Error("Internal", "universe is not subterm-closed at " + ui.prints[i]);
        ui.children[i] = {static_cast<long>(*cu), static_cast<long>(*cv)};
        if (t->kind == ArrKind::Comp) {
          ui.src[i] = ui.src[*cv];
          ui.tgt[i] = ui.tgt[*cu];
        } else if (t->kind == ArrKind::Pair) {
          ui.src[i] = ui.src[*cu];
          ui.tgt[i] = Formula::conj(ui.tgt[*cu], ui.tgt[*cv]);
        } else {
          ui.src[i] = Formula::tensor(ui.src[*cu], ui.src[*cv]);
          ui.tgt[i] = Formula::tensor(ui.tgt[*cu], ui.tgt[*cv]);
        }
        break;
      }
      case ArrKind::Id:
        ui.src[i] = ui.tgt[i] = t->a;
        break;
      case ArrKind::Proj1:
        ui.src[i] = Formula::conj(t->a, t->b);
        ui.tgt[i] = t->a;
        break;
      case ArrKind::Proj2:
        ui.src[i] = Formula::conj(t->a, t->b);
        ui.tgt[i] = t->b;
        break;
      case ArrKind::Bang:
        ui.src[i] = t->a;
        ui.tgt[i] = Formula::top();
        break;
      case ArrKind::Sym:
        ui.src[i] = Formula::tensor(t->a, t->b);
        ui.tgt[i] = Formula::tensor(t->b, t->a);
        break;
      case ArrKind::Assoc:
        ui.src[i] = Formula::tensor(Formula::tensor(t->a, t->b), t->c);
        ui.tgt[i] = Formula::tensor(t->a, Formula::tensor(t->b, t->c));
        break;
      case ArrKind::Gen:
      case ArrKind::InvWitness:
        ui.src[i] = t->a;
        ui.tgt[i] = t->b;
        break;
      case ArrKind::Diag:
        throw Error("Internal", "universe contains unexpanded diagonal " + ui.prints[i]);
    }
  }
  return ui;
}

}  // namespace

std::vector<ArrowPtr> term_universe(const TheoryConfig& cfg, const Bounds& bounds) {
  if (bounds.size_bound < 1 || bounds.depth_bound < 1)
    throw Error("InvalidBounds", "bounds must be at least 1");
  FormulaSet fs = enumerate_formulas(cfg, bounds.depth_bound);
  bool sym = cfg.preset == Preset::SymmetricAssociative;
  bool with_top = cfg.preset == Preset::CartesianWithTop;

  std::vector<ArrowPtr> terms;
  std::vector<FormulaPtr> src_of, tgt_of;
  // lookup buckets: by size, and by (endpoint formula, size)
  std::vector<std::vector<std::size_t>> by_size(bounds.size_bound + 1);
  std::map<std::string, std::vector<std::vector<std::size_t>>> by_tgt, by_src;

  auto bucket = [&](std::map<std::string, std::vector<std::vector<std::size_t>>>& m,
                    const FormulaPtr& f) -> std::vector<std::vector<std::size_t>>& {
    auto& v = m[core::to_string(f)];
    if (v.empty()) v.resize(bounds.size_bound + 1);
    return v;
  };

  // s and g are taken by value: they may alias elements of src_of/tgt_of,
  // which reallocate below.
  auto push = [&](const ArrowPtr& t, FormulaPtr s, FormulaPtr g, std::size_t size) {
    if (terms.size() >= bounds.cap)
      throw ResourceLimit("term universe exceeded the cap of " + std::to_string(bounds.cap) +
                          " terms at size " + std::to_string(size));
    terms.push_back(t);
    src_of.push_back(s);
    tgt_of.push_back(g);
    by_size[size].push_back(terms.size() - 1);
    bucket(by_tgt, g)[size].push_back(terms.size() - 1);
    bucket(by_src, s)[size].push_back(terms.size() - 1);
  };

  // size 1: atoms
  for (const auto& f : fs.all) push(ArrowTerm::id(f), f, f, 1);
  if (!sym) {
    for (const auto& f : fs.all) {
      if (f->kind != FormKind::Conj) continue;
      push(ArrowTerm::proj1(f->left, f->right), f, f->left, 1);
      push(ArrowTerm::proj2(f->left, f->right), f, f->right, 1);
    }
    if (with_top)
      for (const auto& f : fs.all)
        if (f->kind != FormKind::Top) push(ArrowTerm::bang(f), f, Formula::top(), 1);
  } else {
    for (const auto& f : fs.all) {
      if (f->kind != FormKind::Tensor) continue;
      FormulaPtr swapped = Formula::tensor(f->right, f->left);
      if (fs.contains(swapped)) push(ArrowTerm::sym(f->left, f->right), f, swapped, 1);
    }
    std::size_t ainv = 0;
    for (const auto& f : fs.all) {
      if (f->kind != FormKind::Tensor || f->left->kind != FormKind::Tensor) continue;
      FormulaPtr A = f->left->left, B = f->left->right, C = f->right;
      FormulaPtr other = Formula::tensor(A, Formula::tensor(B, C));
      if (!fs.contains(other)) continue;
      push(ArrowTerm::assoc(A, B, C), f, other, 1);
      push(ArrowTerm::inv_witness(kAssocInvPrefix + std::to_string(ainv++), other, f), other, f, 1);
    }
  }
  for (const auto& g : cfg.sig.gen_arrows)
    if (fs.contains(g.source) && fs.contains(g.target))
      push(ArrowTerm::gen(g.name, g.source, g.target), g.source, g.target, 1);
  for (const auto& w : cfg.witnesses)
    if (fs.contains(w.source) && fs.contains(w.target))
      push(ArrowTerm::inv_witness(w.name, w.source, w.target), w.source, w.target, 1);

  // composites, smallest first
  for (std::size_t s = 2; s <= bounds.size_bound; ++s) {
    for (std::size_t s1 = 1; s1 + 1 < s; ++s1) {
      std::size_t s2 = s - 1 - s1;
      // Comp(g, f): g of size s1, f of size s2, target(f) = source(g)
      for (std::size_t gi : by_size[s1]) {
        auto it = by_tgt.find(core::to_string(src_of[gi]));
        if (it == by_tgt.end()) continue;
        for (std::size_t fi : it->second[s2])
          push(ArrowTerm::comp(terms[gi], terms[fi]), src_of[fi], tgt_of[gi], s);
      }
      if (!sym) {
        // Pair(f, g): common source, conjunction target within depth
        for (std::size_t fi : by_size[s1]) {
          auto it = by_src.find(core::to_string(src_of[fi]));
          if (it == by_src.end()) continue;
          for (std::size_t gi : it->second[s2]) {
            FormulaPtr t = Formula::conj(tgt_of[fi], tgt_of[gi]);
            if (!fs.contains(t)) continue;
            push(ArrowTerm::pair(terms[fi], terms[gi]), src_of[fi], t, s);
          }
        }
      } else {
        for (std::size_t fi : by_size[s1]) {
          for (std::size_t gi : by_size[s2]) {
            FormulaPtr sf = Formula::tensor(src_of[fi], src_of[gi]);
            FormulaPtr tf = Formula::tensor(tgt_of[fi], tgt_of[gi]);
            if (!fs.contains(sf) || !fs.contains(tf)) continue;
            push(ArrowTerm::tensor_of(terms[fi], terms[gi]), sf, tf, s);
          }
        }
      }
    }
  }
  return terms;
}

// --- Congruence closure --------------------------------------------------------

namespace {

struct UnionFind {
  std::vector<std::size_t> parent, rnk, repmin;

  explicit UnionFind(std::size_t n) : parent(n), rnk(n, 0), repmin(n) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = repmin[i] = i;
  }

  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
};

struct SigKey {
  int kind;
  std::size_t c1, c2;
  bool operator==(const SigKey& o) const { return kind == o.kind && c1 == o.c1 && c2 == o.c2; }
};

struct SigKeyHash {
  std::size_t operator()(const SigKey& k) const {
    std::size_t h = std::hash<std::size_t>()(k.c1);
    h ^= std::hash<std::size_t>()(k.c2) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<int>()(k.kind) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

// Generator-occurrence multiset used by the balance check. Inverse witnesses
// are axiom plumbing, not free generators, so only Gen nodes count.
std::vector<std::string> balance_multiset(const ArrowPtr& t) {
  std::vector<std::string> out;
  std::function<void(const ArrowPtr&)> walk = [&](const ArrowPtr& s) {
    if (s->kind == ArrKind::Gen) out.push_back(s->name);
    if (s->u) walk(s->u);
    if (s->v) walk(s->v);
  };
  walk(t);
  std::sort(out.begin(), out.end());
  return out;
}

// Collects every axiom instance over the universe whose other side also lies
// in the universe. Each schema is matched from one canonical side.
std::vector<std::pair<std::size_t, std::size_t>> collect_seeds(const TheoryConfig& cfg,
                                                               const UniverseIndex& ui) {
  std::vector<std::pair<std::size_t, std::size_t>> seeds;
  bool sym = cfg.preset == Preset::SymmetricAssociative;
  bool with_top = cfg.preset == Preset::CartesianWithTop;

  auto add = [&](std::size_t i, const ArrowPtr& other) {
    if (auto j = ui.find(other)) seeds.emplace_back(i, *j);
  };

  for (std::size_t i = 0; i < ui.terms.size(); ++i) {
    const ArrowPtr& t = ui.terms[i];
    if (with_top && ui.tgt[i]->kind == FormKind::Top && t->kind != ArrKind::Bang)
      add(i, ArrowTerm::bang(ui.src[i]));
    if (t->kind == ArrKind::Comp) {
      const ArrowPtr& g = t->u;
      const ArrowPtr& f = t->v;
      if (f->kind == ArrKind::Id) seeds.emplace_back(i, ui.children[i][0]);  // idr
      if (g->kind == ArrKind::Id) seeds.emplace_back(i, ui.children[i][1]);  // idl
      if (g->kind == ArrKind::Comp)                                          // assoc
        add(i, ArrowTerm::comp(g->u, ArrowTerm::comp(g->v, f)));
      if (!sym) {
        if (g->kind == ArrKind::Proj1 && f->kind == ArrKind::Pair) add(i, f->u);  // beta1
        if (g->kind == ArrKind::Proj2 && f->kind == ArrKind::Pair) add(i, f->v);  // beta2
        if (g->kind == ArrKind::Pair)                                             // fusion
          add(i, ArrowTerm::pair(ArrowTerm::comp(g->u, f), ArrowTerm::comp(g->v, f)));
        if (g->kind == ArrKind::Pair && f->kind == ArrKind::Pair &&               // absorb
            g->u->kind == ArrKind::Comp && g->u->v->kind == ArrKind::Proj1 &&
            g->v->kind == ArrKind::Comp && g->v->v->kind == ArrKind::Proj2 &&
            core::equal(g->u->v->a, g->v->v->a) && core::equal(g->u->v->b, g->v->v->b))
          add(i, ArrowTerm::pair(ArrowTerm::comp(g->u->u, f->u),
                                 ArrowTerm::comp(g->v->u, f->v)));
      } else {
        if (g->kind == ArrKind::TensorOf && f->kind == ArrKind::TensorOf)  // tensor_comp
          add(i, ArrowTerm::tensor_of(ArrowTerm::comp(g->u, f->u), ArrowTerm::comp(g->v, f->v)));
        if (g->kind == ArrKind::Sym && f->kind == ArrKind::TensorOf) {  // c_nat
          const FormulaPtr& A1 = ui.src[*ui.find(f->u)];
          const FormulaPtr& A2 = ui.src[*ui.find(f->v)];
          add(i, ArrowTerm::comp(ArrowTerm::tensor_of(f->v, f->u), ArrowTerm::sym(A1, A2)));
        }
        if (g->kind == ArrKind::Assoc && f->kind == ArrKind::TensorOf &&
            f->u->kind == ArrKind::TensorOf) {  // a_nat
          const ArrowPtr& x = f->u->u;
          const ArrowPtr& y = f->u->v;
          const ArrowPtr& z = f->v;
          FormulaPtr A1 = ui.src[*ui.find(x)], A2 = ui.src[*ui.find(y)], A3 = ui.src[*ui.find(z)];
          add(i, ArrowTerm::comp(ArrowTerm::tensor_of(x, ArrowTerm::tensor_of(y, z)),
                                 ArrowTerm::assoc(A1, A2, A3)));
        }
        if (g->kind == ArrKind::Sym && f->kind == ArrKind::Sym && core::equal(g->a, f->b) &&
            core::equal(g->b, f->a))  // c_invol
          add(i, ArrowTerm::id(Formula::tensor(f->a, f->b)));
        if (g->kind == ArrKind::Assoc && f->kind == ArrKind::Assoc &&  // pentagon
            f->a->kind == FormKind::Tensor && core::equal(g->a, f->a->left) &&
            core::equal(g->b, f->a->right) && g->c->kind == FormKind::Tensor &&
            core::equal(g->c->left, f->b) && core::equal(g->c->right, f->c)) {
          FormulaPtr A = g->a, B = g->b, C = f->b, D = f->c;
          add(i, ArrowTerm::comp(
                     ArrowTerm::tensor_of(ArrowTerm::id(A), ArrowTerm::assoc(B, C, D)),
                     ArrowTerm::comp(ArrowTerm::assoc(A, Formula::tensor(B, C), D),
                                     ArrowTerm::tensor_of(ArrowTerm::assoc(A, B, C),
                                                          ArrowTerm::id(D)))));
        }
        // hexagon: a{B,C,A} . (c{A,B*C} . a{A,B,C}), in either association
        auto hexagon = [&](const ArrowPtr& a1, const ArrowPtr& cc, const ArrowPtr& a2) {
          if (a1->kind != ArrKind::Assoc || cc->kind != ArrKind::Sym ||
              a2->kind != ArrKind::Assoc)
            return;
          FormulaPtr A = a2->a, B = a2->b, C = a2->c;
          if (!core::equal(cc->a, A) || cc->b->kind != FormKind::Tensor ||
              !core::equal(cc->b->left, B) || !core::equal(cc->b->right, C))
            return;
          if (!core::equal(a1->a, B) || !core::equal(a1->b, C) || !core::equal(a1->c, A)) return;
          add(i, ArrowTerm::comp(
                     ArrowTerm::tensor_of(ArrowTerm::id(B), ArrowTerm::sym(A, C)),
                     ArrowTerm::comp(ArrowTerm::assoc(B, A, C),
                                     ArrowTerm::tensor_of(ArrowTerm::sym(A, B),
                                                          ArrowTerm::id(C)))));
        };
        if (f->kind == ArrKind::Comp) hexagon(g, f->u, f->v);
        if (g->kind == ArrKind::Comp) hexagon(g->u, g->v, f);
        // a_iso: the associativity inverse witnesses cancel on both sides
        if (g->kind == ArrKind::InvWitness && has_prefix(g->name, kAssocInvPrefix) &&
            f->kind == ArrKind::Assoc && core::equal(g->a, ui.tgt[*ui.find(f)]) &&
            core::equal(g->b, ui.src[*ui.find(f)]))
          add(i, ArrowTerm::id(g->b));
        if (f->kind == ArrKind::InvWitness && has_prefix(f->name, kAssocInvPrefix) &&
            g->kind == ArrKind::Assoc && core::equal(f->a, ui.tgt[*ui.find(g)]) &&
            core::equal(f->b, ui.src[*ui.find(g)]))
          add(i, ArrowTerm::id(f->a));
      }
    }
    if (!sym && t->kind == ArrKind::Pair) {
      const ArrowPtr& l = t->u;
      const ArrowPtr& r = t->v;
      if (l->kind == ArrKind::Comp && l->u->kind == ArrKind::Proj1 && r->kind == ArrKind::Comp &&
          r->u->kind == ArrKind::Proj2 && core::equal(l->u->a, r->u->a) &&
          core::equal(l->u->b, r->u->b) && core::equal(l->v, r->v))
        add(i, l->v);  // eta
      if (l->kind == ArrKind::Proj1 && r->kind == ArrKind::Proj2 && core::equal(l->a, r->a) &&
          core::equal(l->b, r->b))
        add(i, ArrowTerm::id(Formula::conj(l->a, l->b)));  // eta_id
    }
    if (sym && t->kind == ArrKind::TensorOf && t->u->kind == ArrKind::Id &&
        t->v->kind == ArrKind::Id)
      add(i, ArrowTerm::id(Formula::tensor(t->u->a, t->v->a)));  // tensor_id
  }

  for (const auto& eq : cfg.extra_axioms) {
    auto li = ui.find(eq.lhs);
    auto ri = ui.find(eq.rhs);
    if (li && ri) seeds.emplace_back(*li, *ri);
  }
  return seeds;
}

}  // namespace

ClosureResult congruence_close(const TheoryConfig& cfg, const std::vector<ArrowPtr>& universe) {
  UniverseIndex ui = index_universe(universe);
  std::size_t n = universe.size();

  std::vector<std::vector<std::string>> balance(n);
  for (std::size_t i = 0; i < n; ++i) balance[i] = balance_multiset(universe[i]);

  UnionFind uf(n);
  std::vector<std::vector<std::size_t>> uses(n);
  std::unordered_map<SigKey, std::size_t, SigKeyHash> sigtab;
  sigtab.reserve(n * 2);
  for (std::size_t i = 0; i < n; ++i) {
    if (ui.children[i][0] < 0) continue;
    uses[static_cast<std::size_t>(ui.children[i][0])].push_back(i);
    uses[static_cast<std::size_t>(ui.children[i][1])].push_back(i);
    sigtab[{static_cast<int>(universe[i]->kind), static_cast<std::size_t>(ui.children[i][0]),
            static_cast<std::size_t>(ui.children[i][1])}] = i;
  }

  ClosureResult res;
  res.class_of.resize(n);

  std::deque<std::pair<std::size_t, std::size_t>> pending;
  auto drain = [&]() {
    while (!pending.empty()) {
      auto [a, b] = pending.front();
      pending.pop_front();
      std::size_t ra = uf.find(a), rb = uf.find(b);
      if (ra == rb) continue;
      if (res.balance_ok && balance[a] != balance[b]) {
        res.balance_ok = false;
        res.balance_offender = {a, b};
      }
      res.merges.emplace_back(a, b);
      if (uf.rnk[ra] < uf.rnk[rb]) std::swap(ra, rb);
      if (uf.rnk[ra] == uf.rnk[rb]) ++uf.rnk[ra];
      uf.parent[rb] = ra;
      uf.repmin[ra] = std::min(uf.repmin[ra], uf.repmin[rb]);
      std::vector<std::size_t> moved;
      moved.swap(uses[rb]);
      for (std::size_t p : moved) {
        SigKey key{static_cast<int>(universe[p]->kind),
                   uf.find(static_cast<std::size_t>(ui.children[p][0])),
                   uf.find(static_cast<std::size_t>(ui.children[p][1]))};
        auto [it, inserted] = sigtab.try_emplace(key, p);
        if (!inserted && uf.find(it->second) != uf.find(p))
          pending.emplace_back(p, it->second);
        uses[ra].push_back(p);
      }
    }
  };

  for (const auto& [a, b] : collect_seeds(cfg, ui)) {
    pending.emplace_back(a, b);
    drain();
  }

  std::size_t classes = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (uf.find(i) == i) ++classes;
  for (std::size_t i = 0; i < n; ++i) res.class_of[i] = uf.repmin[uf.find(i)];
  res.class_count = classes;
  return res;
}

BalanceReport generator_balance_check(
    const std::vector<ArrowPtr>& universe,
    const std::vector<std::pair<std::size_t, std::size_t>>& merges) {
  for (const auto& [a, b] : merges) {
    if (balance_multiset(universe[a]) != balance_multiset(universe[b]))
      return {false, std::make_pair(core::to_string(universe[a]), core::to_string(universe[b]))};
  }
  return {true, std::nullopt};
}

// --- Reports -----------------------------------------------------------------

namespace {

struct ParallelAnalysis {
  bool preorder = true;
  std::size_t witness_count = 0;
  std::vector<std::pair<std::string, std::string>> witnesses;
};

ParallelAnalysis analyze_parallel(const UniverseIndex& ui, const ClosureResult& cl,
                                  bool structural_only) {
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> homsets;
  for (std::size_t i = 0; i < ui.terms.size(); ++i) {
    if (structural_only && !core::is_structural(ui.terms[i])) continue;
    homsets[{core::to_string(ui.src[i]), core::to_string(ui.tgt[i])}].push_back(i);
  }
  ParallelAnalysis out;
  for (const auto& [key, members] : homsets) {
    std::vector<std::size_t> reps;
    for (std::size_t i : members) {
      std::size_t c = cl.class_of[i];
      if (std::find(reps.begin(), reps.end(), c) == reps.end()) reps.push_back(c);
    }
    if (reps.size() <= 1) continue;
    out.preorder = false;
    out.witness_count += reps.size() * (reps.size() - 1) / 2;
    for (std::size_t a = 0; a < reps.size(); ++a)
      for (std::size_t b = a + 1; b < reps.size(); ++b)
        if (out.witnesses.size() < kWitnessSampleCap)
          out.witnesses.emplace_back(ui.prints[reps[a]], ui.prints[reps[b]]);
  }
  return out;
}

}  // namespace

CollapseReport detect_collapse(const TheoryConfig& cfg, const Bounds& bounds) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<ArrowPtr> universe = term_universe(cfg, bounds);
  UniverseIndex ui = index_universe(universe);
  ClosureResult cl = congruence_close(cfg, universe);

  CollapseReport rep;
  rep.universe_size = universe.size();
  rep.class_count_before = universe.size();
  rep.class_count_after = cl.class_count;
  rep.merged_pairs.reserve(cl.merges.size());
  for (const auto& [a, b] : cl.merges)
    rep.merged_pairs.emplace_back(ui.prints[a], ui.prints[b]);

  ParallelAnalysis overall = analyze_parallel(ui, cl, false);
  rep.preorder_at_bound = overall.preorder;
  rep.witness_count = overall.witness_count;
  rep.witnesses = std::move(overall.witnesses);

  ParallelAnalysis structural = analyze_parallel(ui, cl, true);
  rep.structural_preorder_at_bound = structural.preorder;
  rep.structural_witness_count = structural.witness_count;
  rep.structural_witnesses = std::move(structural.witnesses);

  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < universe.size(); ++i)
    if (cl.class_of[i] == i && reps.size() < kClassRepSampleCap) reps.push_back(i);
  for (std::size_t i : reps) rep.class_reps.push_back(ui.prints[i]);

  rep.balance_ok = cl.balance_ok;
  if (cl.balance_offender)
    rep.balance_offender = {ui.prints[cl.balance_offender->first],
                            ui.prints[cl.balance_offender->second]};
  rep.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::pair<bool, bool> preorder_and_fullness_checks(const TheoryConfig& cfg, const Bounds& bounds) {
  if (cfg.preset == Preset::SymmetricAssociative)
    throw WrongTheory("the diagonal-fullness check applies to cartesian presets");
  std::vector<ArrowPtr> universe = term_universe(cfg, bounds);
  UniverseIndex ui = index_universe(universe);
  ClosureResult cl = congruence_close(cfg, universe);

  bool preorder = analyze_parallel(ui, cl, false).preorder;

  // Bounded fullness of the diagonal: for each parallel pair (g, g') find a
  // term h with g = h and g' = h provable at the bound.
  bool full = true;
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> homsets;
  for (std::size_t i = 0; i < universe.size(); ++i)
    homsets[{core::to_string(ui.src[i]), core::to_string(ui.tgt[i])}].push_back(i);
  for (const auto& [key, members] : homsets) {
    for (std::size_t a = 0; a < members.size() && full; ++a) {
      for (std::size_t b = a + 1; b < members.size() && full; ++b) {
        bool found = false;
        for (std::size_t h : members) {
          if (cl.class_of[h] == cl.class_of[members[a]] &&
              cl.class_of[h] == cl.class_of[members[b]]) {
            found = true;
            break;
          }
        }
        if (!found) full = false;
      }
    }
    if (!full) break;
  }
  return {preorder, full};
}

bool w_iso_criterion(const TheoryConfig& cfg, const Bounds& bounds, const FormulaPtr& B) {
  if (cfg.preset == Preset::SymmetricAssociative)
    throw WrongTheory("the projection criterion applies to cartesian presets");
  std::vector<ArrowPtr> universe = term_universe(cfg, bounds);
  UniverseIndex ui = index_universe(universe);
  auto k1 = ui.find(ArrowTerm::proj1(B, B));
  auto k2 = ui.find(ArrowTerm::proj2(B, B));
  if (!k1 || !k2)
    throw Error("InvalidBounds",
                "projections at " + core::to_string(B) + " are outside the universe bounds");
  ClosureResult cl = congruence_close(cfg, universe);
  return cl.class_of[*k1] == cl.class_of[*k2];
}

}  // namespace freecat::engine
