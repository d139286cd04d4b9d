#include "freecat/proofs.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

#include "freecat/frontend.hpp"

namespace freecat::proofs {

using core::ArrKind;
using core::ArrowPtr;
using core::ArrowTerm;

// --- Abstract terms ---------------------------------------------------------

namespace {

AObjPtr onode(ObjKind k) {
  auto o = std::make_shared<AObj>();
  const_cast<AObj*>(o.get())->kind = k;
  return o;
}

AObj* omut(const AObjPtr& o) { return const_cast<AObj*>(o.get()); }

AArrPtr anode(AArrKind k) {
  auto t = std::make_shared<AArr>();
  const_cast<AArr*>(t.get())->kind = k;
  return t;
}

AArr* amut(const AArrPtr& t) { return const_cast<AArr*>(t.get()); }

}  // namespace

AObjPtr AObj::var(std::string n) {
  auto o = onode(ObjKind::Var);
  omut(o)->name = std::move(n);
  return o;
}

AObjPtr AObj::meta(std::string n) {
  auto o = onode(ObjKind::Meta);
  omut(o)->name = std::move(n);
  return o;
}

AObjPtr AObj::app(std::string functor, AObjPtr x) {
  auto o = onode(ObjKind::App);
  omut(o)->name = std::move(functor);
  omut(o)->arg = std::move(x);
  return o;
}

AObjPtr AObj::pairo(AObjPtr a, AObjPtr b) {
  auto o = onode(ObjKind::PairO);
  omut(o)->l = std::move(a);
  omut(o)->r = std::move(b);
  return o;
}

bool equal(const AObjPtr& a, const AObjPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ObjKind::Var:
    case ObjKind::Meta: return a->name == b->name;
    case ObjKind::App: return a->name == b->name && equal(a->arg, b->arg);
    case ObjKind::PairO: return equal(a->l, b->l) && equal(a->r, b->r);
  }
  return false;
}

std::string to_string(const AObjPtr& o) {
  switch (o->kind) {
    case ObjKind::Var: return o->name;
    case ObjKind::Meta: return "?" + o->name;
    case ObjKind::App: return o->name + "(" + to_string(o->arg) + ")";
    case ObjKind::PairO: return "(" + to_string(o->l) + ", " + to_string(o->r) + ")";
  }
  return "";
}

AArrPtr AArr::var(std::string n) {
  auto t = anode(AArrKind::Var);
  amut(t)->name = std::move(n);
  return t;
}

AArrPtr AArr::meta(std::string n) {
  auto t = anode(AArrKind::Meta);
  amut(t)->name = std::move(n);
  return t;
}

AArrPtr AArr::id(AObjPtr x) {
  auto t = anode(AArrKind::Id);
  amut(t)->obj = std::move(x);
  return t;
}

AArrPtr AArr::comp(AArrPtr g, AArrPtr f) {
  auto t = anode(AArrKind::Comp);
  amut(t)->u = std::move(g);
  amut(t)->v = std::move(f);
  return t;
}

AArrPtr AArr::fmap(std::string functor, AArrPtr f) {
  auto t = anode(AArrKind::FMap);
  amut(t)->name = std::move(functor);
  amut(t)->u = std::move(f);
  return t;
}

AArrPtr AArr::fam(std::string family, AObjPtr x) {
  auto t = anode(AArrKind::Fam);
  amut(t)->name = std::move(family);
  amut(t)->obj = std::move(x);
  return t;
}

AArrPtr AArr::paira(AArrPtr a, AArrPtr b) {
  auto t = anode(AArrKind::PairA);
  amut(t)->u = std::move(a);
  amut(t)->v = std::move(b);
  return t;
}

bool equal(const AArrPtr& a, const AArrPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case AArrKind::Var:
    case AArrKind::Meta: return a->name == b->name;
    case AArrKind::Id: return equal(a->obj, b->obj);
    case AArrKind::Comp:
    case AArrKind::PairA: return equal(a->u, b->u) && equal(a->v, b->v);
    case AArrKind::FMap: return a->name == b->name && equal(a->u, b->u);
    case AArrKind::Fam: return a->name == b->name && equal(a->obj, b->obj);
  }
  return false;
}

std::string to_string(const AArrPtr& t) {
  switch (t->kind) {
    case AArrKind::Var: return t->name;
    case AArrKind::Meta: return "?" + t->name;
    case AArrKind::Id: return "id{" + to_string(t->obj) + "}";
    case AArrKind::Comp: {
      std::string g = to_string(t->u);
      if (t->u->kind == AArrKind::Comp) g = "(" + g + ")";
      return g + " . " + to_string(t->v);
    }
    case AArrKind::FMap: return t->name + "(" + to_string(t->u) + ")";
    case AArrKind::Fam: return t->name + "{" + to_string(t->obj) + "}";
    case AArrKind::PairA: return "pair(" + to_string(t->u) + ", " + to_string(t->v) + ")";
  }
  return "";
}

// --- Typing -------------------------------------------------------------------

namespace {

enum class Cat { B, A, B2 };

struct CheckError {
  std::string code;
  std::string message;
};

struct ATy {
  AObjPtr src, tgt;
  Cat cat;
};

Cat obj_cat(const AObjPtr& o) {
  switch (o->kind) {
    case ObjKind::Var:
    case ObjKind::Meta: return Cat::B;
    case ObjKind::App: {
      Cat inner = obj_cat(o->arg);
      if (o->name == "F") {
        if (inner != Cat::B) throw CheckError{"TypeMismatch", "F applies to objects of B"};
        return Cat::A;
      }
      if (o->name == "G") {
        if (inner != Cat::A) throw CheckError{"TypeMismatch", "G applies to objects of A"};
        return Cat::B;
      }
      throw CheckError{"TypeMismatch", "unknown functor '" + o->name + "'"};
    }
    case ObjKind::PairO:
      if (obj_cat(o->l) != Cat::B || obj_cat(o->r) != Cat::B)
        throw CheckError{"TypeMismatch", "pair objects take components in B"};
      return Cat::B2;
  }
  throw CheckError{"Internal", "unhandled object kind"};
}

struct Env {
  const ProofScript* script = nullptr;

  const std::pair<AObjPtr, AObjPtr>* lookup_arrow(const std::string& n) const {
    auto it = script->arrows.find(n);
    if (it != script->arrows.end()) return &it->second;
    auto wt = script->witnesses.find(n);
    if (wt != script->witnesses.end()) return &wt->second;
    return nullptr;
  }

  bool is_family(const std::string& n) const {
    return n == "gamma" || n == "phi" || script->families.count(n) != 0;
  }
};

ATy arr_type(const AArrPtr& t, const Env& env) {
  switch (t->kind) {
    case AArrKind::Var: {
      const auto* d = env.lookup_arrow(t->name);
      if (!d) throw CheckError{"TypeMismatch", "undeclared arrow '" + t->name + "'"};
      Cat c = obj_cat(d->first);
      if (c != obj_cat(d->second))
        throw CheckError{"TypeMismatch", "arrow '" + t->name + "' crosses categories"};
      return {d->first, d->second, c};
    }
    case AArrKind::Meta:
      throw CheckError{"Internal", "metavariable outside a pattern"};
    case AArrKind::Id: {
      Cat c = obj_cat(t->obj);
      return {t->obj, t->obj, c};
    }
    case AArrKind::Comp: {
      ATy g = arr_type(t->u, env);
      ATy f = arr_type(t->v, env);
      if (g.cat != f.cat || !equal(f.tgt, g.src))
        throw CheckError{"TypeMismatch", "ill-typed composition " + to_string(t)};
      return {f.src, g.tgt, g.cat};
    }
    case AArrKind::FMap: {
      ATy f = arr_type(t->u, env);
      if (t->name == "F") {
        if (f.cat != Cat::B) throw CheckError{"TypeMismatch", "F applies to arrows of B"};
        return {AObj::app("F", f.src), AObj::app("F", f.tgt), Cat::A};
      }
      if (t->name == "G") {
        if (f.cat != Cat::A) throw CheckError{"TypeMismatch", "G applies to arrows of A"};
        return {AObj::app("G", f.src), AObj::app("G", f.tgt), Cat::B};
      }
      throw CheckError{"TypeMismatch", "unknown functor '" + t->name + "'"};
    }
    case AArrKind::Fam: {
      Cat c = obj_cat(t->obj);
      if (t->name == "gamma") {
        if (c != Cat::B) throw CheckError{"TypeMismatch", "gamma is indexed by objects of B"};
        return {t->obj, AObj::app("G", AObj::app("F", t->obj)), Cat::B};
      }
      if (t->name == "phi") {
        if (c != Cat::A) throw CheckError{"TypeMismatch", "phi is indexed by objects of A"};
        return {AObj::app("F", AObj::app("G", t->obj)), t->obj, Cat::A};
      }
      if (!env.is_family(t->name))
        throw CheckError{"TypeMismatch", "undeclared family '" + t->name + "'"};
      if (c != Cat::B)
        throw CheckError{"TypeMismatch", "family '" + t->name + "' is indexed by objects of B"};
      return {AObj::app("G", AObj::app("F", t->obj)), t->obj, Cat::B};
    }
    case AArrKind::PairA: {
      ATy a = arr_type(t->u, env);
      ATy b = arr_type(t->v, env);
      if (a.cat != Cat::B || b.cat != Cat::B)
        throw CheckError{"TypeMismatch", "pair arrows take components in B"};
      return {AObj::pairo(a.src, b.src), AObj::pairo(a.tgt, b.tgt), Cat::B2};
    }
  }
  throw CheckError{"Internal", "unhandled arrow kind"};
}

// --- Matching ------------------------------------------------------------------

struct Bindings {
  std::map<std::string, AObjPtr> objs;
  std::map<std::string, AArrPtr> arrs;
};

bool match_obj(const AObjPtr& pat, const AObjPtr& sub, Bindings& b);

bool match_arr(const AArrPtr& pat, const AArrPtr& sub, Bindings& b) {
  if (pat->kind == AArrKind::Meta) {
    auto it = b.arrs.find(pat->name);
    if (it != b.arrs.end()) return equal(it->second, sub);
    b.arrs.emplace(pat->name, sub);
    return true;
  }
  if (pat->kind != sub->kind) return false;
  switch (pat->kind) {
    case AArrKind::Var: return pat->name == sub->name;
    case AArrKind::Id: return match_obj(pat->obj, sub->obj, b);
    case AArrKind::Comp:
    case AArrKind::PairA:
      return match_arr(pat->u, sub->u, b) && match_arr(pat->v, sub->v, b);
    case AArrKind::FMap: return pat->name == sub->name && match_arr(pat->u, sub->u, b);
    case AArrKind::Fam: return pat->name == sub->name && match_obj(pat->obj, sub->obj, b);
    default: return false;
  }
}

bool match_obj(const AObjPtr& pat, const AObjPtr& sub, Bindings& b) {
  if (pat->kind == ObjKind::Meta) {
    auto it = b.objs.find(pat->name);
    if (it != b.objs.end()) return equal(it->second, sub);
    b.objs.emplace(pat->name, sub);
    return true;
  }
  if (pat->kind != sub->kind) return false;
  switch (pat->kind) {
    case ObjKind::Var: return pat->name == sub->name;
    case ObjKind::App: return pat->name == sub->name && match_obj(pat->arg, sub->arg, b);
    case ObjKind::PairO: return match_obj(pat->l, sub->l, b) && match_obj(pat->r, sub->r, b);
    default: return false;
  }
}

bool match_eq(const AEq& pat, const AEq& sub) {
  Bindings b;
  if (match_arr(pat.lhs, sub.lhs, b) && match_arr(pat.rhs, sub.rhs, b)) return true;
  Bindings b2;
  return match_arr(pat.lhs, sub.rhs, b2) && match_arr(pat.rhs, sub.lhs, b2);
}

// Congruence: the sides agree except at positions rewritten by the cited
// equation, each in either orientation.
template <typename Ptr, typename Eq>
bool cong_ok(const Ptr& x, const Ptr& y, const Eq& cited) {
  if (equal(x, y)) return true;
  if ((equal(x, cited.lhs) && equal(y, cited.rhs)) ||
      (equal(x, cited.rhs) && equal(y, cited.lhs)))
    return true;
  if (x->kind != y->kind) return false;
  if constexpr (std::is_same_v<Ptr, AArrPtr>) {
    switch (x->kind) {
      case AArrKind::Comp:
      case AArrKind::PairA:
        return cong_ok(x->u, y->u, cited) && cong_ok(x->v, y->v, cited);
      case AArrKind::FMap:
        return x->name == y->name && cong_ok(x->u, y->u, cited);
      default:
        return false;  // leaves must be equal, handled above
    }
  } else {
    switch (x->kind) {
      case ArrKind::Comp:
      case ArrKind::Pair:
      case ArrKind::TensorOf:
        return cong_ok(x->u, y->u, cited) && cong_ok(x->v, y->v, cited);
      default:
        return false;
    }
  }
}

// The adjunction-side schema patterns, matched in either orientation.
struct Pattern {
  AEq eq;
};

AObjPtr MX() { return AObj::meta("X"); }
AObjPtr MY() { return AObj::meta("Y"); }
AArrPtr MF(const char* n) { return AArr::meta(n); }

std::vector<Pattern> axiom_patterns_adj(const std::string& name) {
  if (name == "idl")
    return {{{AArr::comp(AArr::id(MX()), MF("f")), MF("f")}}};
  if (name == "idr")
    return {{{AArr::comp(MF("f"), AArr::id(MX())), MF("f")}}};
  if (name == "assoc")
    return {{{AArr::comp(AArr::comp(MF("h"), MF("g")), MF("f")),
              AArr::comp(MF("h"), AArr::comp(MF("g"), MF("f")))}}};
  throw CheckError{"UnknownJustification", "unknown axiom '" + name + "' in adjunction theory"};
}

std::vector<Pattern> triangle_patterns() {
  return {
      {{AArr::comp(AArr::fam("phi", AObj::app("F", MX())),
                   AArr::fmap("F", AArr::fam("gamma", MX()))),
        AArr::id(AObj::app("F", MX()))}},
      {{AArr::comp(AArr::fmap("G", AArr::fam("phi", MY())),
                   AArr::fam("gamma", AObj::app("G", MY()))),
        AArr::id(AObj::app("G", MY()))}},
  };
}

std::vector<Pattern> naturality_patterns(bool gamma) {
  if (gamma)
    return {{{AArr::comp(AArr::fam("gamma", MY()), MF("u")),
              AArr::comp(AArr::fmap("G", AArr::fmap("F", MF("u"))), AArr::fam("gamma", MX()))}}};
  return {{{AArr::comp(AArr::fam("phi", MY()), AArr::fmap("F", AArr::fmap("G", MF("u")))),
            AArr::comp(MF("u"), AArr::fam("phi", MX()))}}};
}

std::vector<Pattern> functor_patterns(const std::string& functor) {
  if (functor != "F" && functor != "G")
    throw CheckError{"UnknownJustification", "functoriality applies to F or G"};
  return {
      {{AArr::fmap(functor, AArr::comp(MF("g"), MF("f"))),
        AArr::comp(AArr::fmap(functor, MF("g")), AArr::fmap(functor, MF("f")))}},
      {{AArr::fmap(functor, AArr::id(MX())), AArr::id(AObj::app(functor, MX()))}},
  };
}

bool any_pattern_matches(const std::vector<Pattern>& pats, const AEq& eq) {
  for (const auto& p : pats)
    if (match_eq(p.eq, eq)) return true;
  return false;
}

bool mentions_var(const AArrPtr& t, const std::string& name) {
  if (t->kind == AArrKind::Var && t->name == name) return true;
  if (t->u && mentions_var(t->u, name)) return true;
  if (t->v && mentions_var(t->v, name)) return true;
  return false;
}

// --- Cartesian axiom matching ---------------------------------------------------

bool c_axiom_side(const std::string& name, const ArrowPtr& l, const ArrowPtr& r) {
  using core::equal;
  if (name == "idl")
    return l->kind == ArrKind::Comp && l->u->kind == ArrKind::Id && equal(l->v, r);
  if (name == "idr")
    return l->kind == ArrKind::Comp && l->v->kind == ArrKind::Id && equal(l->u, r);
  if (name == "assoc")
    return l->kind == ArrKind::Comp && l->u->kind == ArrKind::Comp &&
           r->kind == ArrKind::Comp && r->v->kind == ArrKind::Comp &&
           equal(l->u->u, r->u) && equal(l->u->v, r->v->u) && equal(l->v, r->v->v);
  if (name == "beta1")
    return l->kind == ArrKind::Comp && l->u->kind == ArrKind::Proj1 &&
           l->v->kind == ArrKind::Pair && equal(l->v->u, r);
  if (name == "beta2")
    return l->kind == ArrKind::Comp && l->u->kind == ArrKind::Proj2 &&
           l->v->kind == ArrKind::Pair && equal(l->v->v, r);
  if (name == "eta")
    return l->kind == ArrKind::Pair && l->u->kind == ArrKind::Comp &&
           l->u->u->kind == ArrKind::Proj1 && l->v->kind == ArrKind::Comp &&
           l->v->u->kind == ArrKind::Proj2 && equal(l->u->u->a, l->v->u->a) &&
           equal(l->u->u->b, l->v->u->b) && equal(l->u->v, l->v->v) && equal(l->u->v, r);
  return false;
}

}  // namespace

// --- Justification parsing -------------------------------------------------------

Justification justification_from_string(const std::string& text) {
  std::istringstream in(text);
  std::string kw;
  in >> kw;
  Justification j;
  auto bad = [](const std::string& m) -> void { throw Error("UnknownJustification", m); };
  auto need_ref = [&](int& ref) {
    if (!(in >> ref)) bad("'" + kw + "' needs a line number");
  };
  if (kw == "axiom") {
    j.kind = Justification::Kind::Axiom;
    in >> j.name;
    if (j.name.empty()) bad("axiom needs a name");
  } else if (kw == "line") {
    j.kind = Justification::Kind::Line;
    need_ref(j.ref1);
  } else if (kw == "hyp") {
    j.kind = Justification::Kind::Hyp;
  } else if (kw == "cong") {
    j.kind = Justification::Kind::Cong;
    need_ref(j.ref1);
  } else if (kw == "symm") {
    j.kind = Justification::Kind::Symm;
    need_ref(j.ref1);
  } else if (kw == "trans") {
    j.kind = Justification::Kind::Trans;
    need_ref(j.ref1);
    need_ref(j.ref2);
  } else if (kw == "functor") {
    j.kind = Justification::Kind::Functor;
    in >> j.name;
  } else if (kw == "nat") {
    std::string fam;
    in >> fam;
    if (fam == "gamma") j.kind = Justification::Kind::NatGamma;
    else if (fam == "phi") j.kind = Justification::Kind::NatPhi;
    else bad("naturality applies to gamma or phi");
  } else if (kw == "triangle") {
    j.kind = Justification::Kind::Triangle;
  } else if (kw == "monic") {
    j.kind = Justification::Kind::Monic;
    in >> j.name;
    need_ref(j.ref1);
  } else if (kw == "faithful") {
    j.kind = Justification::Kind::Faithful;
    in >> j.name;
    need_ref(j.ref1);
  } else if (kw == "fullness") {
    j.kind = Justification::Kind::Fullness;
    in >> j.name >> j.name2;
    if (j.name.empty() || j.name2.empty()) bad("fullness needs a functor and a witness");
  } else {
    bad("unknown justification '" + kw + "'");
  }
  std::string extra;
  if (in >> extra) bad("trailing tokens after justification");
  return j;
}

std::string to_string(const Justification& j) {
  using K = Justification::Kind;
  switch (j.kind) {
    case K::Axiom: return "axiom " + j.name;
    case K::Line: return "line " + std::to_string(j.ref1);
    case K::Hyp: return "hyp";
    case K::Cong: return "cong " + std::to_string(j.ref1);
    case K::Symm: return "symm " + std::to_string(j.ref1);
    case K::Trans: return "trans " + std::to_string(j.ref1) + " " + std::to_string(j.ref2);
    case K::Functor: return "functor " + j.name;
    case K::NatGamma: return "nat gamma";
    case K::NatPhi: return "nat phi";
    case K::Triangle: return "triangle";
    case K::Monic: return "monic " + j.name + " " + std::to_string(j.ref1);
    case K::Faithful: return "faithful " + j.name + " " + std::to_string(j.ref1);
    case K::Fullness: return "fullness " + j.name + " " + j.name2;
  }
  return "";
}

// --- Script parsing ----------------------------------------------------------------

namespace {

std::string trim(std::string s) {
  auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && issp(s.front())) s.erase(s.begin());
  while (!s.empty() && issp(s.back())) s.pop_back();
  return s;
}

// Recursive-descent parser for abstract object/arrow expressions.
struct AParser {
  std::string text;
  std::size_t pos = 0;
  const ProofScript* script;
  bool allow_meta;  // hypothesis context: unknown object names become metas

  void skip() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool try_eat(std::string_view tok) {
    skip();
    if (std::string_view(text).substr(pos, tok.size()) == tok) {
      pos += tok.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view tok) {
    if (!try_eat(tok)) throw CheckError{"SyntaxError", "expected '" + std::string(tok) + "'"};
  }

  std::string ident() {
    skip();
    std::size_t start = pos;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) != 0))
      ++pos;
    if (start == pos) throw CheckError{"SyntaxError", "expected an identifier"};
    return text.substr(start, pos - start);
  }

  bool at_end() {
    skip();
    return pos >= text.size();
  }

  AObjPtr obj() {
    if (try_eat("(")) {
      AObjPtr l = obj();
      expect(",");
      AObjPtr r = obj();
      expect(")");
      return AObj::pairo(l, r);
    }
    std::string name = ident();
    if (try_eat("(")) {
      AObjPtr x = obj();
      expect(")");
      if (name == "D") return AObj::pairo(x, x);  // definitional
      if (name != "F" && name != "G")
        throw CheckError{"SyntaxError", "unknown functor '" + name + "'"};
      return AObj::app(name, x);
    }
    bool declared = std::find(script->objects.begin(), script->objects.end(), name) !=
                    script->objects.end();
    if (declared) return AObj::var(name);
    if (allow_meta) return AObj::meta(name);
    throw CheckError{"SyntaxError", "undeclared object '" + name + "'"};
  }

  AArrPtr arrow() {
    AArrPtr g = arrow_primary();
    if (try_eat(".")) return AArr::comp(g, arrow());
    return g;
  }

  AArrPtr arrow_primary() {
    if (try_eat("(")) {
      AArrPtr t = arrow();
      expect(")");
      return t;
    }
    std::string name = ident();
    if (name == "pair") {
      expect("(");
      AArrPtr l = arrow();
      expect(",");
      AArrPtr r = arrow();
      expect(")");
      return AArr::paira(l, r);
    }
    skip();
    if (pos < text.size() && text[pos] == '{') {
      ++pos;
      AObjPtr x = obj();
      expect("}");
      if (name == "id") return AArr::id(x);
      Env env{script};
      if (!env.is_family(name))
        throw CheckError{"SyntaxError", "undeclared family '" + name + "'"};
      return AArr::fam(name, x);
    }
    if (pos < text.size() && text[pos] == '(') {
      ++pos;
      AArrPtr f = arrow();
      expect(")");
      if (name == "D") return AArr::paira(f, f);  // definitional
      if (name != "F" && name != "G")
        throw CheckError{"SyntaxError", "unknown functor '" + name + "'"};
      return AArr::fmap(name, f);
    }
    Env env{script};
    if (!env.lookup_arrow(name))
      throw CheckError{"SyntaxError", "undeclared arrow '" + name + "'"};
    return AArr::var(name);
  }
};

AArrPtr parse_abstract_arrow(const ProofScript& s, const std::string& text, bool allow_meta) {
  AParser p{text, 0, &s, allow_meta};
  AArrPtr t = p.arrow();
  if (!p.at_end()) throw CheckError{"SyntaxError", "trailing input in '" + text + "'"};
  return t;
}

AEq parse_abstract_eq(const ProofScript& s, const std::string& text, bool allow_meta) {
  std::size_t eq = text.find('=');
  if (eq == std::string::npos) throw CheckError{"SyntaxError", "expected an equation"};
  return {parse_abstract_arrow(s, trim(text.substr(0, eq)), allow_meta),
          parse_abstract_arrow(s, trim(text.substr(eq + 1)), allow_meta)};
}

CEq parse_cartesian_eq(const std::string& text) {
  std::size_t eq = text.find('=');
  if (eq == std::string::npos) throw CheckError{"SyntaxError", "expected an equation"};
  return {core::expand_diag(frontend::parse_arrow(trim(text.substr(0, eq)))),
          core::expand_diag(frontend::parse_arrow(trim(text.substr(eq + 1))))};
}

std::pair<AObjPtr, AObjPtr> parse_obj_decl(const ProofScript& s, const std::string& text) {
  std::size_t arrow = text.find("->");
  if (arrow == std::string::npos) throw CheckError{"SyntaxError", "expected 'src -> tgt'"};
  AParser p1{trim(text.substr(0, arrow)), 0, &s, false};
  AObjPtr src = p1.obj();
  if (!p1.at_end()) throw CheckError{"SyntaxError", "trailing input in declaration"};
  AParser p2{trim(text.substr(arrow + 2)), 0, &s, false};
  AObjPtr tgt = p2.obj();
  if (!p2.at_end()) throw CheckError{"SyntaxError", "trailing input in declaration"};
  return {src, tgt};
}

void parse_hyp_clause(ProofScript& s, const std::string& clause) {
  std::istringstream in(clause);
  std::string kw;
  in >> kw;
  if (kw == "faithful") {
    std::string f;
    in >> f;
    if (f != "F") throw CheckError{"SyntaxError", "faithfulness hypothesis names F"};
    s.hyp_faithful_f = true;
  } else if (kw == "monic") {
    std::string fam;
    in >> fam;
    if (fam != "gamma") throw CheckError{"SyntaxError", "monic hypothesis names gamma"};
    s.hyp_monic_gamma = true;
  } else if (kw == "full") {
    std::string f;
    in >> f;
    if (f == "D") {
      s.hyp_full_d = true;
    } else if (f == "F") {
      std::string wkw, fam;
      in >> wkw >> fam;
      if (wkw != "witness" || fam.empty())
        throw CheckError{"SyntaxError", "expected 'full F witness <family>'"};
      s.families.insert(fam);
      s.full_witness_family = fam;
    } else {
      throw CheckError{"SyntaxError", "fullness hypothesis names F or D"};
    }
  } else if (kw == "iso") {
    std::string fam, invkw, inv;
    in >> fam >> invkw >> inv;
    if (fam != "gamma" || invkw != "inverse" || inv.empty())
      throw CheckError{"SyntaxError", "expected 'iso gamma inverse <family>'"};
    s.families.insert(inv);
    s.iso_inverse_family = inv;
    AObjPtr X = AObj::meta("X");
    s.hyp_eqs.push_back({AArr::comp(AArr::fam(inv, X), AArr::fam("gamma", X)), AArr::id(X)});
    s.hyp_eqs.push_back({AArr::comp(AArr::fam("gamma", X), AArr::fam(inv, X)),
                         AArr::id(AObj::app("G", AObj::app("F", X)))});
  } else if (kw == "eq") {
    std::string rest;
    std::getline(in, rest);
    if (s.theory == Theory::Adjunction)
      s.hyp_eqs.push_back(parse_abstract_eq(s, trim(rest), /*allow_meta=*/true));
    else
      s.hyp_eqs_c.push_back(parse_cartesian_eq(trim(rest)));
  } else {
    throw CheckError{"SyntaxError", "unknown hypothesis clause '" + kw + "'"};
  }
}

void parse_goal(ProofScript& s, const std::string& text) {
  std::size_t imp = text.find("=>");
  if (imp != std::string::npos) {
    s.goal.implication = true;
    std::string ante = trim(text.substr(0, imp)), cons = trim(text.substr(imp + 2));
    if (s.theory == Theory::Adjunction) {
      s.goal.a_antecedent = parse_abstract_eq(s, ante, false);
      s.goal.a_consequent = parse_abstract_eq(s, cons, false);
    } else {
      s.goal.c_antecedent = parse_cartesian_eq(ante);
      s.goal.c_consequent = parse_cartesian_eq(cons);
    }
  } else if (s.theory == Theory::Adjunction) {
    s.goal.a_consequent = parse_abstract_eq(s, text, false);
  } else {
    s.goal.c_consequent = parse_cartesian_eq(text);
  }
}

}  // namespace

std::vector<ProofScript> parse_scripts(std::string_view text) {
  std::vector<ProofScript> scripts;
  std::optional<ProofScript> current;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;

  auto fail = [&](const std::string& msg) -> void {
    throw SyntaxError(line_no, "script file line " + std::to_string(line_no) + ": " + msg);
  };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;

    try {
      if (line.rfind("script:", 0) == 0) {
        if (current) fail("previous script not closed with 'end'");
        current = ProofScript{};
        current->name = trim(line.substr(7));
        continue;
      }
      if (!current) fail("expected 'script: <name>'");
      if (line == "end") {
        scripts.push_back(std::move(*current));
        current.reset();
        continue;
      }
      auto header = [&](const char* key) -> std::optional<std::string> {
        std::string k = std::string(key) + ":";
        if (line.rfind(k, 0) == 0) return trim(line.substr(k.size()));
        return std::nullopt;
      };
      if (auto v = header("theory")) {
        if (*v == "adjunction") current->theory = Theory::Adjunction;
        else if (*v == "cartesian") current->theory = Theory::Cartesian;
        else fail("unknown theory '" + *v + "'");
        continue;
      }
      if (auto v = header("obj")) {
        std::istringstream os(*v);
        std::string n;
        while (os >> n) current->objects.push_back(n);
        continue;
      }
      if (auto v = header("arrow")) {
        std::size_t colon = v->find(':');
        if (colon == std::string::npos) fail("expected 'arrow: <name> : <src> -> <tgt>'");
        std::string name = trim(v->substr(0, colon));
        current->arrows[name] = parse_obj_decl(*current, trim(v->substr(colon + 1)));
        continue;
      }
      if (auto v = header("witness")) {
        std::size_t colon = v->find(':');
        if (colon == std::string::npos) fail("expected 'witness: <name> : <src> -> <tgt>'");
        std::string name = trim(v->substr(0, colon));
        current->witnesses[name] = parse_obj_decl(*current, trim(v->substr(colon + 1)));
        continue;
      }
      if (auto v = header("family")) {
        current->families.insert(trim(*v));
        continue;
      }
      if (auto v = header("letters")) {
        std::istringstream os(*v);
        std::string n;
        while (os >> n) current->sig.add_letter(n);
        continue;
      }
      if (auto v = header("garrow")) {
        std::size_t colon = v->find(':');
        std::size_t arrow = v->find("->");
        if (colon == std::string::npos || arrow == std::string::npos)
          fail("expected 'garrow: <name> : <formula> -> <formula>'");
        current->sig.add_gen(trim(v->substr(0, colon)),
                             frontend::parse_formula(trim(v->substr(colon + 1, arrow - colon - 1))),
                             frontend::parse_formula(trim(v->substr(arrow + 2))));
        continue;
      }
      if (auto v = header("hyp")) {
        parse_hyp_clause(*current, *v);
        continue;
      }
      if (auto v = header("goal")) {
        parse_goal(*current, *v);
        continue;
      }
      // numbered step: "<n>. <lhs> = <rhs> ; <justification>"
      std::size_t dot = line.find('.');
      if (dot == std::string::npos || dot == 0 ||
          !std::all_of(line.begin(), line.begin() + static_cast<long>(dot),
                       [](unsigned char c) { return std::isdigit(c) != 0; }))
        fail("expected a numbered step or a header");
      Step step;
      step.num = std::stoi(line.substr(0, dot));
      std::size_t semi = line.rfind(';');
      if (semi == std::string::npos || semi <= dot) fail("step needs '; <justification>'");
      std::string eq_text = trim(line.substr(dot + 1, semi - dot - 1));
      step.raw = eq_text;
      step.just = justification_from_string(trim(line.substr(semi + 1)));
      if (current->theory == Theory::Adjunction)
        step.aeq = parse_abstract_eq(*current, eq_text, false);
      else
        step.ceq = parse_cartesian_eq(eq_text);
      if (step.num != static_cast<int>(current->steps.size()) + 1)
        fail("steps must be numbered consecutively from 1");
      current->steps.push_back(std::move(step));
    } catch (const CheckError& e) {
      fail(e.message);
    } catch (const Error& e) {
      fail(e.what());
    }
  }
  if (current) throw SyntaxError(line_no, "unterminated script '" + current->name + "'");
  return scripts;
}

// --- Checking -----------------------------------------------------------------

namespace {

struct AdjChecker {
  const ProofScript& s;
  Env env;
  std::vector<AEq> hyps;                 // schematic + antecedents
  std::set<std::string> introduced;     // fullness witnesses already introduced

  explicit AdjChecker(const ProofScript& script) : s(script), env{&script} {
    hyps = s.hyp_eqs;
    if (s.goal.implication) hyps.push_back(s.goal.a_antecedent);
  }

  void validate_step(int idx) {
    const Step& st = s.steps[static_cast<std::size_t>(idx)];
    const AEq& eq = st.aeq;

    bool uses_witness_intro = st.just.kind == Justification::Kind::Fullness && st.just.name == "D";
    if (!uses_witness_intro)
      for (const auto& w : s.witnesses)
        if (!introduced.count(w.first) &&
            (mentions_var(eq.lhs, w.first) || mentions_var(eq.rhs, w.first)))
          throw CheckError{"StepDoesNotFollow",
                           "witness '" + w.first + "' used before its fullness introduction"};

    ATy tl = arr_type(eq.lhs, env);
    ATy tr = arr_type(eq.rhs, env);
    if (tl.cat != tr.cat || !equal(tl.src, tr.src) || !equal(tl.tgt, tr.tgt))
      throw CheckError{"TypeMismatch", "equation sides have different endpoints"};

    switch (st.just.kind) {
      case Justification::Kind::Axiom:
        if (!any_pattern_matches(axiom_patterns_adj(st.just.name), eq))
          throw CheckError{"StepDoesNotFollow", "not an instance of axiom " + st.just.name};
        return;
      case Justification::Kind::Line: {
        const AEq& c = cited(st.just.ref1, idx);
        if (equal(c.lhs, eq.lhs) && equal(c.rhs, eq.rhs)) return;
        // equality of pair arrows is componentwise
        if (c.lhs->kind == AArrKind::PairA && c.rhs->kind == AArrKind::PairA) {
          if ((equal(eq.lhs, c.lhs->u) && equal(eq.rhs, c.rhs->u)) ||
              (equal(eq.lhs, c.lhs->v) && equal(eq.rhs, c.rhs->v)))
            return;
        }
        throw CheckError{"StepDoesNotFollow", "does not restate the cited line"};
      }
      case Justification::Kind::Hyp:
        for (const auto& h : hyps)
          if (match_eq(h, eq)) return;
        throw CheckError{"StepDoesNotFollow", "no hypothesis matches"};
      case Justification::Kind::Cong:
        if (!cong_ok(eq.lhs, eq.rhs, cited(st.just.ref1, idx)))
          throw CheckError{"StepDoesNotFollow", "not a rewrite by the cited line"};
        return;
      case Justification::Kind::Symm: {
        const AEq& c = cited(st.just.ref1, idx);
        if (!(equal(eq.lhs, c.rhs) && equal(eq.rhs, c.lhs)))
          throw CheckError{"StepDoesNotFollow", "not the symmetric form of the cited line"};
        return;
      }
      case Justification::Kind::Trans: {
        const AEq& c1 = cited(st.just.ref1, idx);
        const AEq& c2 = cited(st.just.ref2, idx);
        if (!(equal(eq.lhs, c1.lhs) && equal(c1.rhs, c2.lhs) && equal(eq.rhs, c2.rhs)))
          throw CheckError{"StepDoesNotFollow", "transitivity chain does not connect"};
        return;
      }
      case Justification::Kind::Functor:
        if (!any_pattern_matches(functor_patterns(st.just.name), eq))
          throw CheckError{"StepDoesNotFollow", "not a functoriality instance"};
        return;
      case Justification::Kind::NatGamma:
        if (!any_pattern_matches(naturality_patterns(true), eq))
          throw CheckError{"StepDoesNotFollow", "not a naturality instance of gamma"};
        return;
      case Justification::Kind::NatPhi:
        if (!any_pattern_matches(naturality_patterns(false), eq))
          throw CheckError{"StepDoesNotFollow", "not a naturality instance of phi"};
        return;
      case Justification::Kind::Triangle:
        if (!any_pattern_matches(triangle_patterns(), eq))
          throw CheckError{"StepDoesNotFollow", "not a triangular equation"};
        return;
      case Justification::Kind::Monic: {
        if (st.just.name != "gamma" || !s.hyp_monic_gamma)
          throw CheckError{"StepDoesNotFollow", "no monic hypothesis for '" + st.just.name + "'"};
        Pattern p{{AArr::comp(AArr::fam("gamma", MX()), AArr::meta("a")),
                   AArr::comp(AArr::fam("gamma", MX()), AArr::meta("b"))}};
        const AEq& c = cited(st.just.ref1, idx);
        Bindings b;
        if (!(match_arr(p.eq.lhs, c.lhs, b) && match_arr(p.eq.rhs, c.rhs, b)))
          throw CheckError{"StepDoesNotFollow", "cited line is not gamma . a = gamma . b"};
        if (!(equal(eq.lhs, b.arrs.at("a")) && equal(eq.rhs, b.arrs.at("b"))))
          throw CheckError{"StepDoesNotFollow", "conclusion does not cancel gamma"};
        return;
      }
      case Justification::Kind::Faithful: {
        if (st.just.name != "F" || !s.hyp_faithful_f)
          throw CheckError{"StepDoesNotFollow", "no faithfulness hypothesis for F"};
        const AEq& c = cited(st.just.ref1, idx);
        if (!(c.lhs->kind == AArrKind::FMap && c.lhs->name == "F" &&
              c.rhs->kind == AArrKind::FMap && c.rhs->name == "F" &&
              equal(eq.lhs, c.lhs->u) && equal(eq.rhs, c.rhs->u)))
          throw CheckError{"StepDoesNotFollow", "cited line is not F(a) = F(b)"};
        return;
      }
      case Justification::Kind::Fullness: {
        if (st.just.name == "F") {
          if (!s.full_witness_family || *s.full_witness_family != st.just.name2)
            throw CheckError{"StepDoesNotFollow",
                             "no fullness hypothesis with witness '" + st.just.name2 + "'"};
          Pattern p{{AArr::fmap("F", AArr::fam(st.just.name2, MX())),
                     AArr::fam("phi", AObj::app("F", MX()))}};
          if (!match_eq(p.eq, eq))
            throw CheckError{"StepDoesNotFollow", "not the defining equation of the witness"};
          return;
        }
        if (st.just.name == "D") {
          if (!s.hyp_full_d) throw CheckError{"StepDoesNotFollow", "no fullness hypothesis for D"};
          auto wit = s.witnesses.find(st.just.name2);
          if (wit == s.witnesses.end())
            throw CheckError{"StepDoesNotFollow", "witness '" + st.just.name2 + "' not declared"};
          if (introduced.count(st.just.name2))
            throw CheckError{"StepDoesNotFollow", "witness introduced twice"};
          for (int k = 0; k < idx; ++k)
            if (mentions_var(s.steps[static_cast<std::size_t>(k)].aeq.lhs, st.just.name2) ||
                mentions_var(s.steps[static_cast<std::size_t>(k)].aeq.rhs, st.just.name2))
              throw CheckError{"StepDoesNotFollow", "witness is not fresh"};
          AArrPtr dw = AArr::paira(AArr::var(st.just.name2), AArr::var(st.just.name2));
          const AArrPtr* image = nullptr;
          if (equal(eq.lhs, dw)) image = &eq.rhs;
          else if (equal(eq.rhs, dw)) image = &eq.lhs;
          if (!image || (*image)->kind != AArrKind::PairA)
            throw CheckError{"StepDoesNotFollow", "expected D(witness) = pair(...)"};
          if (mentions_var((*image)->u, st.just.name2) || mentions_var((*image)->v, st.just.name2))
            throw CheckError{"StepDoesNotFollow", "witness occurs in the arrow it lifts"};
          introduced.insert(st.just.name2);
          return;
        }
        throw CheckError{"StepDoesNotFollow", "fullness applies to F or D"};
      }
    }
    throw CheckError{"Internal", "unhandled justification"};
  }

  const AEq& cited(int ref, int idx) {
    if (ref < 1 || ref > idx)
      throw CheckError{"StepDoesNotFollow",
                       "cited line " + std::to_string(ref) + " is not previously proven"};
    return s.steps[static_cast<std::size_t>(ref - 1)].aeq;
  }
};

struct CartChecker {
  const ProofScript& s;
  std::vector<CEq> hyps;

  explicit CartChecker(const ProofScript& script) : s(script) {
    hyps = s.hyp_eqs_c;
    if (s.goal.implication) hyps.push_back(s.goal.c_antecedent);
  }

  static bool axiom_matches(const std::string& name, const CEq& eq, const core::Typing& tl) {
    if (name == "top")
      return tl.target->kind == core::FormKind::Top;  // any two parallel arrows into T
    return c_axiom_side(name, eq.lhs, eq.rhs) || c_axiom_side(name, eq.rhs, eq.lhs);
  }

  void validate_step(int idx) {
    const Step& st = s.steps[static_cast<std::size_t>(idx)];
    const CEq& eq = st.ceq;
    core::Typing tl = core::typecheck(eq.lhs, s.sig);
    core::Typing tr = core::typecheck(eq.rhs, s.sig);
    if (!core::equal(tl.source, tr.source) || !core::equal(tl.target, tr.target))
      throw CheckError{"TypeMismatch", "equation sides have different endpoints"};

    static const std::vector<std::string> names = {"idl", "idr", "assoc",
                                                   "beta1", "beta2", "eta", "top"};
    switch (st.just.kind) {
      case Justification::Kind::Axiom:
        if (std::find(names.begin(), names.end(), st.just.name) == names.end())
          throw CheckError{"UnknownJustification",
                           "unknown axiom '" + st.just.name + "' in cartesian theory"};
        if (!axiom_matches(st.just.name, eq, tl))
          throw CheckError{"StepDoesNotFollow", "not an instance of axiom " + st.just.name};
        return;
      case Justification::Kind::Line: {
        const CEq& c = cited(st.just.ref1, idx);
        if (core::equal(c.lhs, eq.lhs) && core::equal(c.rhs, eq.rhs)) return;
        throw CheckError{"StepDoesNotFollow", "does not restate the cited line"};
      }
      case Justification::Kind::Hyp:
        for (const auto& h : hyps)
          if ((core::equal(h.lhs, eq.lhs) && core::equal(h.rhs, eq.rhs)) ||
              (core::equal(h.lhs, eq.rhs) && core::equal(h.rhs, eq.lhs)))
            return;
        throw CheckError{"StepDoesNotFollow", "no hypothesis matches"};
      case Justification::Kind::Cong:
        if (!cong_ok(eq.lhs, eq.rhs, cited(st.just.ref1, idx)))
          throw CheckError{"StepDoesNotFollow", "not a rewrite by the cited line"};
        return;
      case Justification::Kind::Symm: {
        const CEq& c = cited(st.just.ref1, idx);
        if (!(core::equal(eq.lhs, c.rhs) && core::equal(eq.rhs, c.lhs)))
          throw CheckError{"StepDoesNotFollow", "not the symmetric form of the cited line"};
        return;
      }
      case Justification::Kind::Trans: {
        const CEq& c1 = cited(st.just.ref1, idx);
        const CEq& c2 = cited(st.just.ref2, idx);
        if (!(core::equal(eq.lhs, c1.lhs) && core::equal(c1.rhs, c2.lhs) &&
              core::equal(eq.rhs, c2.rhs)))
          throw CheckError{"StepDoesNotFollow", "transitivity chain does not connect"};
        return;
      }
      default:
        throw CheckError{"UnknownJustification",
                         "justification not available in cartesian scripts"};
    }
  }

  const CEq& cited(int ref, int idx) {
    if (ref < 1 || ref > idx)
      throw CheckError{"StepDoesNotFollow",
                       "cited line " + std::to_string(ref) + " is not previously proven"};
    return s.steps[static_cast<std::size_t>(ref - 1)].ceq;
  }
};

}  // namespace

Verdict check_script(const ProofScript& s) {
  Verdict v;
  v.script = s.name;
  if (s.steps.empty()) {
    v.accepted = false;
    v.reason = "script has no steps";
    return v;
  }
  try {
    if (s.theory == Theory::Adjunction) {
      AdjChecker chk(s);
      for (int i = 0; i < static_cast<int>(s.steps.size()); ++i) {
        try {
          chk.validate_step(i);
        } catch (const CheckError& e) {
          v.failed_line = s.steps[static_cast<std::size_t>(i)].num;
          v.reason = e.code + ": " + e.message;
          return v;
        }
      }
      const AEq& last = s.steps.back().aeq;
      const AEq& goal = s.goal.a_consequent;
      if (!(equal(last.lhs, goal.lhs) && equal(last.rhs, goal.rhs))) {
        v.failed_line = s.steps.back().num;
        v.reason = "StepDoesNotFollow: final line is not the goal";
        return v;
      }
    } else {
      CartChecker chk(s);
      for (int i = 0; i < static_cast<int>(s.steps.size()); ++i) {
        try {
          chk.validate_step(i);
        } catch (const CheckError& e) {
          v.failed_line = s.steps[static_cast<std::size_t>(i)].num;
          v.reason = e.code + ": " + e.message;
          return v;
        }
      }
      const CEq& last = s.steps.back().ceq;
      const CEq& goal = s.goal.c_consequent;
      if (!(core::equal(last.lhs, goal.lhs) && core::equal(last.rhs, goal.rhs))) {
        v.failed_line = s.steps.back().num;
        v.reason = "StepDoesNotFollow: final line is not the goal";
        return v;
      }
    }
  } catch (const CheckError& e) {
    v.reason = e.code + ": " + e.message;
    return v;
  }
  v.accepted = true;
  return v;
}

std::vector<ProofScript> bundled_scripts() { return parse_scripts(bundled_script_text()); }

}  // namespace freecat::proofs
