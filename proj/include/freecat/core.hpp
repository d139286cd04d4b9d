#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "freecat/errors.hpp"

namespace freecat::core {

// ---------------------------------------------------------------------------
// Formulae: objects of the freely generated categories.
//
// Letter       a generator object drawn from the signature
// Conj, Top    additive conjunction and its unit (cartesian theories)
// Tensor       multiplicative conjunction (symmetric associative theories)
//
// Formulae and arrow terms are immutable after construction and may be
// shared freely across threads.
// ---------------------------------------------------------------------------

enum class FormKind { Letter, Conj, Top, Tensor };

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

class Formula {
public:
  FormKind kind;
  std::string name;         // Letter
  FormulaPtr left, right;   // Conj / Tensor

  static FormulaPtr letter(std::string n);
  static FormulaPtr conj(FormulaPtr a, FormulaPtr b);
  static FormulaPtr top();
  static FormulaPtr tensor(FormulaPtr a, FormulaPtr b);
};

bool equal(const FormulaPtr& a, const FormulaPtr& b);
std::string to_string(const FormulaPtr& f);
int depth(const FormulaPtr& f);

// Fixed total order used to canonicalize multiset/set premise collections:
// length-lexicographic on the printed form.
bool formula_less(const FormulaPtr& a, const FormulaPtr& b);

// A leaf occurrence: path is a string of 'L'/'R' steps from the root
// (empty for the root itself). Top contributes no leaves.
struct Leaf {
  std::string path;
  std::string letter;
};

std::vector<Leaf> leaves(const FormulaPtr& f);
std::vector<std::string> letters_of(const FormulaPtr& f);  // occurrence order

// ---------------------------------------------------------------------------
// Arrow terms: deductions of the freely generated categories.
//
// Diag{A} is notation for Pair(Id{A}, Id{A}) and is expanded before any
// other processing (see expand_diag).
//
// InvWitness is a named arrow introduced only when an axiom asserts an
// isomorphism; it carries no equations of its own.
// ---------------------------------------------------------------------------

enum class ArrKind {
  Id, Comp, Proj1, Proj2, Pair, Diag, Gen, Sym, Assoc, TensorOf, Bang, InvWitness
};

class ArrowTerm;
using ArrowPtr = std::shared_ptr<const ArrowTerm>;

class ArrowTerm {
public:
  ArrKind kind;
  std::string name;     // Gen / InvWitness
  FormulaPtr a, b, c;   // formula arguments; Gen/InvWitness: a = source, b = target
  ArrowPtr u, v;        // Comp: u = g (applied second), v = f (applied first)
                        // Pair/TensorOf: u = left component, v = right component

  static ArrowPtr id(FormulaPtr A);
  static ArrowPtr comp(ArrowPtr g, ArrowPtr f);
  static ArrowPtr proj1(FormulaPtr A, FormulaPtr B);
  static ArrowPtr proj2(FormulaPtr A, FormulaPtr B);
  static ArrowPtr pair(ArrowPtr f, ArrowPtr g);
  static ArrowPtr diag(FormulaPtr A);
  static ArrowPtr gen(std::string name, FormulaPtr src, FormulaPtr tgt);
  static ArrowPtr sym(FormulaPtr A, FormulaPtr B);
  static ArrowPtr assoc(FormulaPtr A, FormulaPtr B, FormulaPtr C);
  static ArrowPtr tensor_of(ArrowPtr f, ArrowPtr g);
  static ArrowPtr bang(FormulaPtr A);
  static ArrowPtr inv_witness(std::string name, FormulaPtr src, FormulaPtr tgt);
};

bool equal(const ArrowPtr& s, const ArrowPtr& t);
std::string to_string(const ArrowPtr& t);

// Replaces every Diag{A} by Pair(Id{A}, Id{A}).
ArrowPtr expand_diag(const ArrowPtr& t);

// Number of arrow constructors after Diag expansion.
std::size_t term_size(const ArrowPtr& t);

// True when the term mentions no Gen or InvWitness arrows.
bool is_structural(const ArrowPtr& t);

// Sorted multiset of Gen/InvWitness names occurring in the term.
std::vector<std::string> gen_multiset(const ArrowPtr& t);

// Connective discipline: a well-formed term lives in the cartesian fragment
// (Conj/Top with Proj/Pair/Diag/Bang) or the symmetric fragment
// (Tensor with Sym/Assoc/TensorOf), never both.
enum class Flavor { Neutral, Cartesian, Symmetric };

Flavor flavor_of(const FormulaPtr& f);   // throws MixedConnectives
Flavor flavor_of(const ArrowPtr& t);     // throws MixedConnectives

// ---------------------------------------------------------------------------
// Signature: the generating data of the free category.
// ---------------------------------------------------------------------------

struct GenDecl {
  std::string name;
  FormulaPtr source, target;
};

struct Signature {
  std::set<std::string> letters;
  std::vector<GenDecl> gen_arrows;

  void add_letter(const std::string& name);
  void add_gen(const std::string& name, FormulaPtr src, FormulaPtr tgt);  // unique names
  bool has_letter(const std::string& name) const;
  const GenDecl* find_gen(const std::string& name) const;
};

// Checks that every letter of f is declared.
void check_formula(const FormulaPtr& f, const Signature& sig);

struct Typing {
  FormulaPtr source, target;
};

// Syntax-directed typing; total on well-formed terms, deterministic.
// Throws CompositionMismatch, UnknownGenerator or MixedConnectives.
Typing typecheck(const ArrowPtr& t, const Signature& sig);

}  // namespace freecat::core
