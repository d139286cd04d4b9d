#include "freecat/frontend.hpp"

#include <algorithm>
#include <cctype>

namespace freecat::frontend {

using core::ArrKind;
using core::ArrowTerm;
using core::FormKind;
using core::Formula;

// --- Lexer ---------------------------------------------------------------

namespace {

struct Lexer {
  std::string_view text;
  std::size_t pos = 0;

  explicit Lexer(std::string_view t) : text(t) { skip(); }

  void skip() {
    while (pos < text.size()) {
      char ch = text[pos];
      if (ch == '#') {  // comment to end of line
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos;
      } else {
        break;
      }
    }
  }

  bool done() const { return pos >= text.size(); }
  char peek() const { return done() ? '\0' : text[pos]; }

  bool try_eat(std::string_view tok) {
    if (text.substr(pos, tok.size()) == tok) {
      pos += tok.size();
      skip();
      return true;
    }
    return false;
  }

  void expect(std::string_view tok) {
    if (!try_eat(tok))
      throw SyntaxError(pos, "expected '" + std::string(tok) + "'");
  }

  bool at_ident() const {
    return !done() && std::islower(static_cast<unsigned char>(peek()));
  }

  std::string ident() {
    if (!at_ident()) throw SyntaxError(pos, "expected an identifier");
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::islower(static_cast<unsigned char>(text[pos])) ||
            std::isdigit(static_cast<unsigned char>(text[pos]))))
      ++pos;
    std::string out(text.substr(start, pos - start));
    skip();
    return out;
  }
};

FormulaPtr parse_formula_expr(Lexer& lx);

FormulaPtr parse_formula_primary(Lexer& lx) {
  if (lx.try_eat("T")) return Formula::top();
  if (lx.try_eat("(")) {
    FormulaPtr f = parse_formula_expr(lx);
    lx.expect(")");
    return f;
  }
  if (lx.at_ident()) return Formula::letter(lx.ident());
  throw SyntaxError(lx.pos, "expected a formula");
}

FormulaPtr parse_formula_expr(Lexer& lx) {
  FormulaPtr f = parse_formula_primary(lx);
  for (;;) {
    if (lx.try_eat("/\\")) {
      f = Formula::conj(f, parse_formula_primary(lx));
    } else if (lx.peek() == '*') {
      lx.expect("*");
      f = Formula::tensor(f, parse_formula_primary(lx));
    } else {
      return f;
    }
  }
}

ArrowPtr parse_arrow_expr(Lexer& lx);

FormulaPtr brace_formula(Lexer& lx) {
  lx.expect("{");
  FormulaPtr f = parse_formula_expr(lx);
  return f;
}

ArrowPtr parse_arrow_primary(Lexer& lx) {
  if (lx.try_eat("(")) {
    ArrowPtr t = parse_arrow_expr(lx);
    lx.expect(")");
    return t;
  }
  std::size_t where = lx.pos;
  std::string head = lx.ident();
  if (head == "pair" || head == "tens") {
    lx.expect("(");
    ArrowPtr l = parse_arrow_expr(lx);
    lx.expect(",");
    ArrowPtr r = parse_arrow_expr(lx);
    lx.expect(")");
    return head == "pair" ? ArrowTerm::pair(l, r) : ArrowTerm::tensor_of(l, r);
  }
  if (lx.peek() != '{')
    throw SyntaxError(where, "expected an arrow term at '" + head + "'");
  FormulaPtr f1 = brace_formula(lx);
  if (lx.try_eat("->")) {  // generator arrow: name{A->B}
    FormulaPtr f2 = parse_formula_expr(lx);
    lx.expect("}");
    return ArrowTerm::gen(head, f1, f2);
  }
  if (head == "id" || head == "w" || head == "bang") {
    lx.expect("}");
    if (head == "id") return ArrowTerm::id(f1);
    if (head == "w") return ArrowTerm::diag(f1);
    return ArrowTerm::bang(f1);
  }
  if (head == "p1" || head == "p2" || head == "c") {
    lx.expect(",");
    FormulaPtr f2 = parse_formula_expr(lx);
    lx.expect("}");
    if (head == "p1") return ArrowTerm::proj1(f1, f2);
    if (head == "p2") return ArrowTerm::proj2(f1, f2);
    return ArrowTerm::sym(f1, f2);
  }
  if (head == "a") {
    lx.expect(",");
    FormulaPtr f2 = parse_formula_expr(lx);
    lx.expect(",");
    FormulaPtr f3 = parse_formula_expr(lx);
    lx.expect("}");
    return ArrowTerm::assoc(f1, f2, f3);
  }
  throw SyntaxError(where, "'" + head + "' takes the form " + head + "{A->B}");
}

// "g . f" applies f first; parse right-associatively.
ArrowPtr parse_arrow_expr(Lexer& lx) {
  ArrowPtr g = parse_arrow_primary(lx);
  if (lx.try_eat(".")) return ArrowTerm::comp(g, parse_arrow_expr(lx));
  return g;
}

Sequent parse_sequent_expr(Lexer& lx) {
  Sequent s;
  if (!lx.try_eat("|-")) {
    s.premises.push_back(parse_formula_expr(lx));
    while (lx.try_eat(",")) s.premises.push_back(parse_formula_expr(lx));
    lx.expect("|-");
  }
  s.conclusion = parse_formula_expr(lx);
  return s;
}

void expect_end(Lexer& lx) {
  if (!lx.done()) throw SyntaxError(lx.pos, "unexpected trailing input");
}

}  // namespace

FormulaPtr parse_formula(std::string_view text) {
  Lexer lx(text);
  FormulaPtr f = parse_formula_expr(lx);
  expect_end(lx);
  core::flavor_of(f);
  return f;
}

ArrowPtr parse_arrow(std::string_view text) {
  Lexer lx(text);
  ArrowPtr t = parse_arrow_expr(lx);
  expect_end(lx);
  core::flavor_of(t);
  return t;
}

Sequent parse_sequent(std::string_view text) {
  Lexer lx(text);
  Sequent s = parse_sequent_expr(lx);
  expect_end(lx);
  for (const auto& p : s.premises) core::flavor_of(p);
  core::flavor_of(s.conclusion);
  return s;
}

Signature parse_signature(std::string_view text) {
  Signature sig;
  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t eol = text.find('\n', line_start);
    std::string_view line = text.substr(
        line_start, eol == std::string_view::npos ? std::string_view::npos : eol - line_start);
    Lexer lx(line);
    if (!lx.done()) {
      std::string kw = lx.ident();
      if (kw == "letter") {
        sig.add_letter(lx.ident());
      } else if (kw == "arrow") {
        std::string name = lx.ident();
        lx.expect(":");
        FormulaPtr src = parse_formula_expr(lx);
        lx.expect("->");
        FormulaPtr tgt = parse_formula_expr(lx);
        sig.add_gen(name, src, tgt);
      } else {
        throw SyntaxError(line_start + lx.pos, "expected 'letter' or 'arrow'");
      }
      expect_end(lx);
    }
    if (eol == std::string_view::npos) break;
    line_start = eol + 1;
  }
  return sig;
}

// --- Printing ------------------------------------------------------------

std::string to_string(const Sequent& s) {
  std::string out;
  for (std::size_t i = 0; i < s.premises.size(); ++i) {
    if (i) out += ", ";
    out += core::to_string(s.premises[i]);
  }
  if (!s.premises.empty()) out += ' ';
  out += "|- ";
  out += core::to_string(s.conclusion);
  return out;
}

std::string to_string(PremisePolicy pol) {
  switch (pol) {
    case PremisePolicy::Sequence: return "sequence";
    case PremisePolicy::Multiset: return "multiset";
    case PremisePolicy::Set: return "set";
  }
  return "";
}

PremisePolicy policy_from_string(const std::string& name) {
  if (name == "sequence" || name == "seq") return PremisePolicy::Sequence;
  if (name == "multiset" || name == "mset") return PremisePolicy::Multiset;
  if (name == "set") return PremisePolicy::Set;
  throw Error("UnknownPolicy", "unknown premise policy '" + name + "'");
}

// --- Sequent operations ----------------------------------------------------

Sequent apply_policy(const Sequent& s, PremisePolicy pol) {
  if (pol == PremisePolicy::Sequence) return s;
  Sequent out = s;
  std::stable_sort(out.premises.begin(), out.premises.end(), core::formula_less);
  if (pol == PremisePolicy::Set) {
    auto last = std::unique(out.premises.begin(), out.premises.end(),
                            [](const FormulaPtr& a, const FormulaPtr& b) { return core::equal(a, b); });
    out.premises.erase(last, out.premises.end());
  }
  return out;
}

FormulaPtr substitute_letter(const FormulaPtr& f, const std::string& from, const std::string& to) {
  switch (f->kind) {
    case FormKind::Letter:
      return f->name == from ? Formula::letter(to) : f;
    case FormKind::Top:
      return f;
    case FormKind::Conj:
      return Formula::conj(substitute_letter(f->left, from, to),
                           substitute_letter(f->right, from, to));
    case FormKind::Tensor:
      return Formula::tensor(substitute_letter(f->left, from, to),
                             substitute_letter(f->right, from, to));
  }
  return f;
}

Sequent substitute_letter(const Sequent& s, const std::string& from, const std::string& to,
                          const Signature& sig) {
  if (!sig.has_letter(from))
    throw UnknownGenerator("letter '" + from + "' is not in the signature");
  if (!sig.has_letter(to))
    throw UnknownGenerator("letter '" + to + "' is not in the signature");
  Sequent out;
  out.premises.reserve(s.premises.size());
  for (const auto& p : s.premises) out.premises.push_back(substitute_letter(p, from, to));
  out.conclusion = substitute_letter(s.conclusion, from, to);
  return out;
}

ThinningResult apply_thinning(const Sequent& s, const FormulaPtr& c, PremisePolicy pol) {
  Sequent before = apply_policy(s, pol);
  Sequent extended = s;
  extended.premises.push_back(c);
  Sequent after = apply_policy(extended, pol);
  bool invisible = before.premises.size() == after.premises.size() &&
                   std::equal(before.premises.begin(), before.premises.end(),
                              after.premises.begin(),
                              [](const FormulaPtr& a, const FormulaPtr& b) { return core::equal(a, b); });
  return {after, invisible};
}

std::pair<FormulaPtr, FormulaPtr> sequent_to_arrow_type(const Sequent& s, PremisePolicy pol) {
  Sequent n = apply_policy(s, pol);
  if (n.premises.empty()) return {Formula::top(), n.conclusion};
  FormulaPtr acc = n.premises.back();
  for (std::size_t i = n.premises.size() - 1; i-- > 0;)
    acc = Formula::conj(n.premises[i], acc);
  return {acc, n.conclusion};
}

std::vector<std::string> object_image(const FormulaPtr& A, PremisePolicy pol) {
  std::vector<std::string> out = core::letters_of(A);
  if (pol == PremisePolicy::Sequence) return out;
  std::sort(out.begin(), out.end());
  if (pol == PremisePolicy::Set)
    out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace freecat::frontend
