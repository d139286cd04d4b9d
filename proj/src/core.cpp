#include "freecat/core.hpp"

#include <algorithm>
#include <functional>

namespace freecat::core {

// --- Formula -----------------------------------------------------------

FormulaPtr Formula::letter(std::string n) {
  auto f = std::make_shared<Formula>();
  f->kind = FormKind::Letter;
  f->name = std::move(n);
  return f;
}

FormulaPtr Formula::conj(FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = FormKind::Conj;
  f->left = std::move(a);
  f->right = std::move(b);
  return f;
}

FormulaPtr Formula::top() {
  auto f = std::make_shared<Formula>();
  f->kind = FormKind::Top;
  return f;
}

FormulaPtr Formula::tensor(FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = FormKind::Tensor;
  f->left = std::move(a);
  f->right = std::move(b);
  return f;
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case FormKind::Letter: return a->name == b->name;
    case FormKind::Top: return true;
    case FormKind::Conj:
    case FormKind::Tensor:
      return equal(a->left, b->left) && equal(a->right, b->right);
  }
  return false;
}

namespace {

const char* binop(FormKind k) { return k == FormKind::Conj ? " /\\ " : " * "; }

void print_formula(const FormulaPtr& f, std::string& out, FormKind parent, bool right_child) {
  switch (f->kind) {
    case FormKind::Letter:
      out += f->name;
      return;
    case FormKind::Top:
      out += 'T';
      return;
    case FormKind::Conj:
    case FormKind::Tensor: {
      // The binary connectives are left-binding: a right child or a child
      // under a different connective needs parentheses.
      bool parens = right_child || (parent != f->kind && (parent == FormKind::Conj || parent == FormKind::Tensor));
      if (parens) out += '(';
      print_formula(f->left, out, f->kind, false);
      out += binop(f->kind);
      print_formula(f->right, out, f->kind, true);
      if (parens) out += ')';
      return;
    }
  }
}

}  // namespace

std::string to_string(const FormulaPtr& f) {
  std::string out;
  print_formula(f, out, FormKind::Letter, false);
  return out;
}

int depth(const FormulaPtr& f) {
  switch (f->kind) {
    case FormKind::Letter:
    case FormKind::Top: return 1;
    default: return 1 + std::max(depth(f->left), depth(f->right));
  }
}

bool formula_less(const FormulaPtr& a, const FormulaPtr& b) {
  std::string sa = to_string(a), sb = to_string(b);
  if (sa.size() != sb.size()) return sa.size() < sb.size();
  return sa < sb;
}

namespace {

void collect_leaves(const FormulaPtr& f, std::string& path, std::vector<Leaf>& out) {
  switch (f->kind) {
    case FormKind::Letter:
      out.push_back({path, f->name});
      return;
    case FormKind::Top:
      return;
    default:
      path.push_back('L');
      collect_leaves(f->left, path, out);
      path.back() = 'R';
      collect_leaves(f->right, path, out);
      path.pop_back();
      return;
  }
}

}  // namespace

std::vector<Leaf> leaves(const FormulaPtr& f) {
  std::vector<Leaf> out;
  std::string path;
  collect_leaves(f, path, out);
  return out;
}

std::vector<std::string> letters_of(const FormulaPtr& f) {
  std::vector<std::string> out;
  for (const auto& l : leaves(f)) out.push_back(l.letter);
  return out;
}

// --- ArrowTerm ----------------------------------------------------------

namespace {

ArrowPtr node(ArrKind k) {
  auto t = std::make_shared<ArrowTerm>();
  const_cast<ArrowTerm*>(t.get())->kind = k;
  return t;
}

ArrowTerm* mut(const ArrowPtr& t) { return const_cast<ArrowTerm*>(t.get()); }

}  // namespace

ArrowPtr ArrowTerm::id(FormulaPtr A) {
  auto t = node(ArrKind::Id);
  mut(t)->a = std::move(A);
  return t;
}

ArrowPtr ArrowTerm::comp(ArrowPtr g, ArrowPtr f) {
  auto t = node(ArrKind::Comp);
  mut(t)->u = std::move(g);
  mut(t)->v = std::move(f);
  return t;
}

ArrowPtr ArrowTerm::proj1(FormulaPtr A, FormulaPtr B) {
  auto t = node(ArrKind::Proj1);
  mut(t)->a = std::move(A);
  mut(t)->b = std::move(B);
  return t;
}

ArrowPtr ArrowTerm::proj2(FormulaPtr A, FormulaPtr B) {
  auto t = node(ArrKind::Proj2);
  mut(t)->a = std::move(A);
  mut(t)->b = std::move(B);
  return t;
}

ArrowPtr ArrowTerm::pair(ArrowPtr f, ArrowPtr g) {
  auto t = node(ArrKind::Pair);
  mut(t)->u = std::move(f);
  mut(t)->v = std::move(g);
  return t;
}

ArrowPtr ArrowTerm::diag(FormulaPtr A) {
  auto t = node(ArrKind::Diag);
  mut(t)->a = std::move(A);
  return t;
}

ArrowPtr ArrowTerm::gen(std::string name, FormulaPtr src, FormulaPtr tgt) {
  auto t = node(ArrKind::Gen);
  mut(t)->name = std::move(name);
  mut(t)->a = std::move(src);
  mut(t)->b = std::move(tgt);
  return t;
}

ArrowPtr ArrowTerm::sym(FormulaPtr A, FormulaPtr B) {
  auto t = node(ArrKind::Sym);
  mut(t)->a = std::move(A);
  mut(t)->b = std::move(B);
  return t;
}

ArrowPtr ArrowTerm::assoc(FormulaPtr A, FormulaPtr B, FormulaPtr C) {
  auto t = node(ArrKind::Assoc);
  mut(t)->a = std::move(A);
  mut(t)->b = std::move(B);
  mut(t)->c = std::move(C);
  return t;
}

ArrowPtr ArrowTerm::tensor_of(ArrowPtr f, ArrowPtr g) {
  auto t = node(ArrKind::TensorOf);
  mut(t)->u = std::move(f);
  mut(t)->v = std::move(g);
  return t;
}

ArrowPtr ArrowTerm::bang(FormulaPtr A) {
  auto t = node(ArrKind::Bang);
  mut(t)->a = std::move(A);
  return t;
}

ArrowPtr ArrowTerm::inv_witness(std::string name, FormulaPtr src, FormulaPtr tgt) {
  auto t = node(ArrKind::InvWitness);
  mut(t)->name = std::move(name);
  mut(t)->a = std::move(src);
  mut(t)->b = std::move(tgt);
  return t;
}

bool equal(const ArrowPtr& s, const ArrowPtr& t) {
  if (s.get() == t.get()) return true;
  if (s->kind != t->kind) return false;
  switch (s->kind) {
    case ArrKind::Id:
    case ArrKind::Diag:
    case ArrKind::Bang:
      return equal(s->a, t->a);
    case ArrKind::Proj1:
    case ArrKind::Proj2:
    case ArrKind::Sym:
      return equal(s->a, t->a) && equal(s->b, t->b);
    case ArrKind::Assoc:
      return equal(s->a, t->a) && equal(s->b, t->b) && equal(s->c, t->c);
    case ArrKind::Gen:
    case ArrKind::InvWitness:
      return s->name == t->name && equal(s->a, t->a) && equal(s->b, t->b);
    case ArrKind::Comp:
    case ArrKind::Pair:
    case ArrKind::TensorOf:
      return equal(s->u, t->u) && equal(s->v, t->v);
  }
  return false;
}

std::string to_string(const ArrowPtr& t) {
  switch (t->kind) {
    case ArrKind::Id: return "id{" + to_string(t->a) + "}";
    case ArrKind::Proj1: return "p1{" + to_string(t->a) + "," + to_string(t->b) + "}";
    case ArrKind::Proj2: return "p2{" + to_string(t->a) + "," + to_string(t->b) + "}";
    case ArrKind::Pair: return "pair(" + to_string(t->u) + ", " + to_string(t->v) + ")";
    case ArrKind::Diag: return "w{" + to_string(t->a) + "}";
    case ArrKind::Gen:
    case ArrKind::InvWitness:
      return t->name + "{" + to_string(t->a) + "->" + to_string(t->b) + "}";
    case ArrKind::Sym: return "c{" + to_string(t->a) + "," + to_string(t->b) + "}";
    case ArrKind::Assoc:
      return "a{" + to_string(t->a) + "," + to_string(t->b) + "," + to_string(t->c) + "}";
    case ArrKind::TensorOf: return "tens(" + to_string(t->u) + ", " + to_string(t->v) + ")";
    case ArrKind::Bang: return "bang{" + to_string(t->a) + "}";
    case ArrKind::Comp: {
      std::string g = to_string(t->u);
      if (t->u->kind == ArrKind::Comp) g = "(" + g + ")";
      return g + " . " + to_string(t->v);
    }
  }
  return "";
}

ArrowPtr expand_diag(const ArrowPtr& t) {
  switch (t->kind) {
    case ArrKind::Diag:
      return ArrowTerm::pair(ArrowTerm::id(t->a), ArrowTerm::id(t->a));
    case ArrKind::Comp: {
      auto g = expand_diag(t->u), f = expand_diag(t->v);
      if (g.get() == t->u.get() && f.get() == t->v.get()) return t;
      return ArrowTerm::comp(g, f);
    }
    case ArrKind::Pair:
    case ArrKind::TensorOf: {
      auto f = expand_diag(t->u), g = expand_diag(t->v);
      if (f.get() == t->u.get() && g.get() == t->v.get()) return t;
      return t->kind == ArrKind::Pair ? ArrowTerm::pair(f, g) : ArrowTerm::tensor_of(f, g);
    }
    default:
      return t;
  }
}

std::size_t term_size(const ArrowPtr& t) {
  switch (t->kind) {
    case ArrKind::Diag: return 3;  // pair(id, id)
    case ArrKind::Comp:
    case ArrKind::Pair:
    case ArrKind::TensorOf:
      return 1 + term_size(t->u) + term_size(t->v);
    default:
      return 1;
  }
}

bool is_structural(const ArrowPtr& t) {
  switch (t->kind) {
    case ArrKind::Gen:
    case ArrKind::InvWitness:
      return false;
    case ArrKind::Comp:
    case ArrKind::Pair:
    case ArrKind::TensorOf:
      return is_structural(t->u) && is_structural(t->v);
    default:
      return true;
  }
}

namespace {

void collect_gens(const ArrowPtr& t, std::vector<std::string>& out) {
  switch (t->kind) {
    case ArrKind::Gen:
    case ArrKind::InvWitness:
      out.push_back(t->name);
      return;
    case ArrKind::Comp:
    case ArrKind::Pair:
    case ArrKind::TensorOf:
      collect_gens(t->u, out);
      collect_gens(t->v, out);
      return;
    default:
      return;
  }
}

struct FlavorFlags {
  bool cart = false;
  bool sym = false;
};

void formula_flavor(const FormulaPtr& f, FlavorFlags& fl) {
  switch (f->kind) {
    case FormKind::Letter: return;
    case FormKind::Top: fl.cart = true; return;
    case FormKind::Conj:
      fl.cart = true;
      formula_flavor(f->left, fl);
      formula_flavor(f->right, fl);
      return;
    case FormKind::Tensor:
      fl.sym = true;
      formula_flavor(f->left, fl);
      formula_flavor(f->right, fl);
      return;
  }
}

void term_flavor(const ArrowPtr& t, FlavorFlags& fl) {
  switch (t->kind) {
    case ArrKind::Proj1:
    case ArrKind::Proj2:
      fl.cart = true;
      formula_flavor(t->a, fl);
      formula_flavor(t->b, fl);
      return;
    case ArrKind::Pair:
      fl.cart = true;
      term_flavor(t->u, fl);
      term_flavor(t->v, fl);
      return;
    case ArrKind::Diag:
    case ArrKind::Bang:
      fl.cart = true;
      formula_flavor(t->a, fl);
      return;
    case ArrKind::Sym:
      fl.sym = true;
      formula_flavor(t->a, fl);
      formula_flavor(t->b, fl);
      return;
    case ArrKind::Assoc:
      fl.sym = true;
      formula_flavor(t->a, fl);
      formula_flavor(t->b, fl);
      formula_flavor(t->c, fl);
      return;
    case ArrKind::TensorOf:
      fl.sym = true;
      term_flavor(t->u, fl);
      term_flavor(t->v, fl);
      return;
    case ArrKind::Id:
      formula_flavor(t->a, fl);
      return;
    case ArrKind::Gen:
    case ArrKind::InvWitness:
      formula_flavor(t->a, fl);
      formula_flavor(t->b, fl);
      return;
    case ArrKind::Comp:
      term_flavor(t->u, fl);
      term_flavor(t->v, fl);
      return;
  }
}

Flavor settle(const FlavorFlags& fl, const std::string& what) {
  if (fl.cart && fl.sym)
    throw MixedConnectives("cartesian and symmetric connectives mixed in " + what);
  if (fl.cart) return Flavor::Cartesian;
  if (fl.sym) return Flavor::Symmetric;
  return Flavor::Neutral;
}

}  // namespace

std::vector<std::string> gen_multiset(const ArrowPtr& t) {
  std::vector<std::string> out;
  collect_gens(t, out);
  std::sort(out.begin(), out.end());
  return out;
}

Flavor flavor_of(const FormulaPtr& f) {
  FlavorFlags fl;
  formula_flavor(f, fl);
  return settle(fl, to_string(f));
}

Flavor flavor_of(const ArrowPtr& t) {
  FlavorFlags fl;
  term_flavor(t, fl);
  return settle(fl, to_string(t));
}

// --- Signature ----------------------------------------------------------

void Signature::add_letter(const std::string& name) { letters.insert(name); }

void Signature::add_gen(const std::string& name, FormulaPtr src, FormulaPtr tgt) {
  if (find_gen(name))
    throw UnknownGenerator("generator arrow '" + name + "' declared twice");
  check_formula(src, *this);
  check_formula(tgt, *this);
  gen_arrows.push_back({name, std::move(src), std::move(tgt)});
}

bool Signature::has_letter(const std::string& name) const {
  return letters.count(name) != 0;
}

const GenDecl* Signature::find_gen(const std::string& name) const {
  for (const auto& g : gen_arrows)
    if (g.name == name) return &g;
  return nullptr;
}

void check_formula(const FormulaPtr& f, const Signature& sig) {
  switch (f->kind) {
    case FormKind::Letter:
      if (!sig.has_letter(f->name))
        throw UnknownGenerator("letter '" + f->name + "' is not in the signature");
      return;
    case FormKind::Top:
      return;
    default:
      check_formula(f->left, sig);
      check_formula(f->right, sig);
      return;
  }
}

// --- Typing -------------------------------------------------------------

namespace {

Typing type_rec(const ArrowPtr& t, const Signature& sig) {
  switch (t->kind) {
    case ArrKind::Id:
      check_formula(t->a, sig);
      return {t->a, t->a};
    case ArrKind::Comp: {
      Typing g = type_rec(t->u, sig);
      Typing f = type_rec(t->v, sig);
      if (!equal(f.target, g.source))
        throw CompositionMismatch("cannot compose: inner target " + to_string(f.target) +
                                  " differs from outer source " + to_string(g.source) +
                                  " in " + to_string(t));
      return {f.source, g.target};
    }
    case ArrKind::Proj1:
      check_formula(t->a, sig);
      check_formula(t->b, sig);
      return {Formula::conj(t->a, t->b), t->a};
    case ArrKind::Proj2:
      check_formula(t->a, sig);
      check_formula(t->b, sig);
      return {Formula::conj(t->a, t->b), t->b};
    case ArrKind::Pair: {
      Typing f = type_rec(t->u, sig);
      Typing g = type_rec(t->v, sig);
      if (!equal(f.source, g.source))
        throw CompositionMismatch("pair components have different sources: " +
                                  to_string(f.source) + " vs " + to_string(g.source));
      return {f.source, Formula::conj(f.target, g.target)};
    }
    case ArrKind::Diag:
      check_formula(t->a, sig);
      return {t->a, Formula::conj(t->a, t->a)};
    case ArrKind::Gen: {
      const GenDecl* d = sig.find_gen(t->name);
      if (!d)
        throw UnknownGenerator("generator arrow '" + t->name + "' is not in the signature");
      if (!equal(d->source, t->a) || !equal(d->target, t->b))
        throw UnknownGenerator("generator arrow '" + t->name + "' used at " + to_string(t->a) +
                               " -> " + to_string(t->b) + " but declared at " +
                               to_string(d->source) + " -> " + to_string(d->target));
      return {t->a, t->b};
    }
    case ArrKind::Sym:
      check_formula(t->a, sig);
      check_formula(t->b, sig);
      return {Formula::tensor(t->a, t->b), Formula::tensor(t->b, t->a)};
    case ArrKind::Assoc:
      check_formula(t->a, sig);
      check_formula(t->b, sig);
      check_formula(t->c, sig);
      return {Formula::tensor(Formula::tensor(t->a, t->b), t->c),
              Formula::tensor(t->a, Formula::tensor(t->b, t->c))};
    case ArrKind::TensorOf: {
      Typing f = type_rec(t->u, sig);
      Typing g = type_rec(t->v, sig);
      return {Formula::tensor(f.source, g.source), Formula::tensor(f.target, g.target)};
    }
    case ArrKind::Bang:
      check_formula(t->a, sig);
      return {t->a, Formula::top()};
    case ArrKind::InvWitness:
      return {t->a, t->b};
  }
  throw Error("Internal", "unhandled arrow kind");
}

}  // namespace

Typing typecheck(const ArrowPtr& t, const Signature& sig) {
  flavor_of(t);  // rejects mixed connectives
  return type_rec(t, sig);
}

}  // namespace freecat::core
