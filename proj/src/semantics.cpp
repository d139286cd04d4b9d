#include "freecat/semantics.hpp"

#include <functional>
#include <numeric>

namespace freecat::semantics {

using core::ArrKind;
using core::ArrowTerm;
using core::FormKind;
using core::Formula;
using core::Signature;
using core::Typing;

namespace {

std::size_t leaf_count(const FormulaPtr& f) {
  switch (f->kind) {
    case FormKind::Letter: return 1;
    case FormKind::Top: return 0;
    default: return leaf_count(f->left) + leaf_count(f->right);
  }
}

Signature letters_signature(const ArrowPtr& t) {
  // Semantics does not consult an external signature; typing only needs the
  // letters and generator declarations the term itself carries.
  Signature sig;
  std::function<void(const FormulaPtr&)> add_letters = [&](const FormulaPtr& f) {
    for (const auto& l : core::leaves(f)) sig.add_letter(l.letter);
  };
  std::function<void(const ArrowPtr&)> walk = [&](const ArrowPtr& s) {
    if (s->a) add_letters(s->a);
    if (s->b) add_letters(s->b);
    if (s->c) add_letters(s->c);
    if ((s->kind == ArrKind::Gen || s->kind == ArrKind::InvWitness) && !sig.find_gen(s->name))
      sig.add_gen(s->name, s->a, s->b);
    if (s->u) walk(s->u);
    if (s->v) walk(s->v);
  };
  walk(t);
  return sig;
}

Typing type_structural(const ArrowPtr& t) { return core::typecheck(t, letters_signature(t)); }

// Compositional interpretation shared by both fragments: each constructor
// yields the function target-leaf -> source-leaf.
std::vector<std::size_t> leaf_map(const ArrowPtr& t, bool cartesian) {
  switch (t->kind) {
    case ArrKind::Id: {
      std::vector<std::size_t> m(leaf_count(t->a));
      std::iota(m.begin(), m.end(), 0);
      return m;
    }
    case ArrKind::Comp: {
      auto mg = leaf_map(t->u, cartesian);
      auto mf = leaf_map(t->v, cartesian);
      std::vector<std::size_t> m(mg.size());
      for (std::size_t i = 0; i < mg.size(); ++i) m[i] = mf[mg[i]];
      return m;
    }
    case ArrKind::Proj1: {
      if (!cartesian) throw WrongTheory("projection in a tensor term: " + core::to_string(t));
      std::vector<std::size_t> m(leaf_count(t->a));
      std::iota(m.begin(), m.end(), 0);
      return m;
    }
    case ArrKind::Proj2: {
      if (!cartesian) throw WrongTheory("projection in a tensor term: " + core::to_string(t));
      std::size_t off = leaf_count(t->a);
      std::vector<std::size_t> m(leaf_count(t->b));
      std::iota(m.begin(), m.end(), off);
      return m;
    }
    case ArrKind::Pair: {
      if (!cartesian) throw WrongTheory("pairing in a tensor term: " + core::to_string(t));
      auto mf = leaf_map(t->u, cartesian);
      auto mg = leaf_map(t->v, cartesian);
      mf.insert(mf.end(), mg.begin(), mg.end());
      return mf;
    }
    case ArrKind::Diag:
      return leaf_map(core::expand_diag(t), cartesian);
    case ArrKind::Bang:
      if (!cartesian) throw WrongTheory("bang in a tensor term: " + core::to_string(t));
      return {};
    case ArrKind::Sym: {
      if (cartesian) throw WrongTheory("symmetry in a cartesian term: " + core::to_string(t));
      std::size_t na = leaf_count(t->a), nb = leaf_count(t->b);
      std::vector<std::size_t> m(na + nb);
      for (std::size_t i = 0; i < nb; ++i) m[i] = na + i;       // target B block
      for (std::size_t i = 0; i < na; ++i) m[nb + i] = i;       // target A block
      return m;
    }
    case ArrKind::Assoc: {
      if (cartesian) throw WrongTheory("associativity in a cartesian term: " + core::to_string(t));
      std::size_t n = leaf_count(t->a) + leaf_count(t->b) + leaf_count(t->c);
      std::vector<std::size_t> m(n);
      std::iota(m.begin(), m.end(), 0);  // rebracketing moves no leaf
      return m;
    }
    case ArrKind::TensorOf: {
      if (cartesian) throw WrongTheory("tensor in a cartesian term: " + core::to_string(t));
      Typing tf = type_structural(t->u);
      auto mf = leaf_map(t->u, cartesian);
      auto mg = leaf_map(t->v, cartesian);
      std::size_t src_off = leaf_count(tf.source);
      std::vector<std::size_t> m = mf;
      m.reserve(mf.size() + mg.size());
      for (std::size_t x : mg) m.push_back(src_off + x);
      return m;
    }
    case ArrKind::Gen:
    case ArrKind::InvWitness:
      throw NonStructuralTerm("no coherence semantics for named arrow '" + t->name + "'");
  }
  throw Error("Internal", "unhandled arrow kind");
}

void check_letters_preserved(const FormulaPtr& src, const FormulaPtr& tgt,
                             const std::vector<std::size_t>& m) {
  auto ls = core::leaves(src), lt = core::leaves(tgt);
  for (std::size_t i = 0; i < m.size(); ++i)
    if (lt[i].letter != ls[m[i]].letter)
      throw Error("Internal", "occurrence map does not preserve letters");
}

}  // namespace

bool equal(const OccurrenceMap& a, const OccurrenceMap& b) {
  return core::equal(a.source, b.source) && core::equal(a.target, b.target) && a.map == b.map;
}

bool equal(const LeafBijection& a, const LeafBijection& b) {
  return core::equal(a.source, b.source) && core::equal(a.target, b.target) && a.map == b.map;
}

OccurrenceMap interpret_cartesian(const ArrowPtr& t) {
  Typing ty = type_structural(t);
  OccurrenceMap om{ty.source, ty.target, leaf_map(t, /*cartesian=*/true)};
  check_letters_preserved(om.source, om.target, om.map);
  return om;
}

LeafBijection interpret_symmetric(const ArrowPtr& t) {
  Typing ty = type_structural(t);
  LeafBijection bj{ty.source, ty.target, leaf_map(t, /*cartesian=*/false)};
  check_letters_preserved(bj.source, bj.target, bj.map);
  std::vector<bool> seen(bj.map.size(), false);
  for (std::size_t x : bj.map) {
    if (x >= seen.size() || seen[x]) throw Error("Internal", "leaf map is not a bijection");
    seen[x] = true;
  }
  return bj;
}

namespace {

template <typename Denotation>
bool decide_equal(const ArrowPtr& t1, const ArrowPtr& t2, Denotation interp) {
  auto d1 = interp(t1);
  auto d2 = interp(t2);
  if (!core::equal(d1.source, d2.source) || !core::equal(d1.target, d2.target))
    throw TypeMismatch("terms have different endpoints: " + core::to_string(t1) + " : " +
                       core::to_string(d1.source) + " -> " + core::to_string(d1.target) +
                       " vs " + core::to_string(t2) + " : " + core::to_string(d2.source) +
                       " -> " + core::to_string(d2.target));
  return d1.map == d2.map;
}

}  // namespace

bool decide_equal_cartesian(const ArrowPtr& t1, const ArrowPtr& t2) {
  return decide_equal(t1, t2, interpret_cartesian);
}

bool decide_equal_symmetric(const ArrowPtr& t1, const ArrowPtr& t2) {
  return decide_equal(t1, t2, interpret_symmetric);
}

// --- Finite models ---------------------------------------------------------

namespace {

std::size_t carrier(const FiniteModel& m, const std::string& letter) {
  auto it = m.carriers.find(letter);
  if (it == m.carriers.end())
    throw MissingGeneratorTable("no carrier assigned to letter '" + letter + "'");
  if (it->second == 0)
    throw Error("EmptyCarrier", "carrier of '" + letter + "' is empty");
  return it->second;
}

std::vector<std::size_t> radices(const FormulaPtr& f, const FiniteModel& m) {
  std::vector<std::size_t> r;
  for (const auto& l : core::leaves(f)) r.push_back(carrier(m, l.letter));
  return r;
}

// Evaluates t on a tuple of leaf values of its source.
std::vector<std::size_t> eval_tuple(const ArrowPtr& t, const std::vector<std::size_t>& in,
                                    const FiniteModel& m) {
  switch (t->kind) {
    case ArrKind::Id: return in;
    case ArrKind::Comp: return eval_tuple(t->u, eval_tuple(t->v, in, m), m);
    case ArrKind::Proj1:
      return {in.begin(), in.begin() + static_cast<long>(leaf_count(t->a))};
    case ArrKind::Proj2:
      return {in.begin() + static_cast<long>(leaf_count(t->a)), in.end()};
    case ArrKind::Pair: {
      auto l = eval_tuple(t->u, in, m);
      auto r = eval_tuple(t->v, in, m);
      l.insert(l.end(), r.begin(), r.end());
      return l;
    }
    case ArrKind::Diag: {
      auto out = in;
      out.insert(out.end(), in.begin(), in.end());
      return out;
    }
    case ArrKind::Bang: return {};
    case ArrKind::Sym: {
      std::size_t na = leaf_count(t->a);
      std::vector<std::size_t> out(in.begin() + static_cast<long>(na), in.end());
      out.insert(out.end(), in.begin(), in.begin() + static_cast<long>(na));
      return out;
    }
    case ArrKind::Assoc: return in;
    case ArrKind::TensorOf: {
      Typing tf = type_structural(t->u);
      std::size_t na = leaf_count(tf.source);
      std::vector<std::size_t> l(in.begin(), in.begin() + static_cast<long>(na));
      std::vector<std::size_t> r(in.begin() + static_cast<long>(na), in.end());
      auto lo = eval_tuple(t->u, l, m);
      auto ro = eval_tuple(t->v, r, m);
      lo.insert(lo.end(), ro.begin(), ro.end());
      return lo;
    }
    case ArrKind::Gen:
    case ArrKind::InvWitness: {
      auto it = m.tables.find(t->name);
      if (it == m.tables.end())
        throw MissingGeneratorTable("no table for generator arrow '" + t->name + "'");
      std::size_t dom = space_size(t->a, m), cod = space_size(t->b, m);
      if (it->second.size() != dom)
        throw MissingGeneratorTable("table for '" + t->name + "' has " +
                                    std::to_string(it->second.size()) + " rows, expected " +
                                    std::to_string(dom));
      std::size_t y = it->second[encode_element(in, t->a, m)];
      if (y >= cod)
        throw MissingGeneratorTable("table for '" + t->name + "' maps outside its codomain");
      return decode_element(y, t->b, m);
    }
  }
  throw Error("Internal", "unhandled arrow kind");
}

}  // namespace

std::size_t space_size(const FormulaPtr& f, const FiniteModel& m) {
  std::size_t n = 1;
  for (std::size_t r : radices(f, m)) n *= r;
  return n;
}

std::vector<std::size_t> decode_element(std::size_t index, const FormulaPtr& f,
                                        const FiniteModel& m) {
  auto r = radices(f, m);
  std::vector<std::size_t> values(r.size());
  for (std::size_t i = r.size(); i-- > 0;) {
    values[i] = index % r[i];
    index /= r[i];
  }
  return values;
}

std::size_t encode_element(const std::vector<std::size_t>& values, const FormulaPtr& f,
                           const FiniteModel& m) {
  auto r = radices(f, m);
  std::size_t index = 0;
  for (std::size_t i = 0; i < r.size(); ++i) index = index * r[i] + values[i];
  return index;
}

bool equal(const FunctionTable& a, const FunctionTable& b) {
  return core::equal(a.source, b.source) && core::equal(a.target, b.target) && a.table == b.table;
}

FunctionTable eval_finite_model(const ArrowPtr& t, const FiniteModel& m) {
  Typing ty = type_structural(t);
  FunctionTable ft{ty.source, ty.target, space_size(ty.source, m), space_size(ty.target, m), {}};
  ft.table.reserve(ft.domain_size);
  for (std::size_t x = 0; x < ft.domain_size; ++x) {
    auto out = eval_tuple(t, decode_element(x, ty.source, m), m);
    ft.table.push_back(encode_element(out, ty.target, m));
  }
  return ft;
}

}  // namespace freecat::semantics
