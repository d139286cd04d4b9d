#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "freecat/core.hpp"

namespace freecat::frontend {

using core::ArrowPtr;
using core::FormulaPtr;
using core::Signature;

// ---------------------------------------------------------------------------
// Sequents and premise policies. Sequents are restricted to a single
// conclusion. A policy fixes how the premise collection is read: as the
// written sequence, as a multiset (canonicalized by sorting), or as a set
// (sorted, duplicates dropped).
// ---------------------------------------------------------------------------

struct Sequent {
  std::vector<FormulaPtr> premises;
  FormulaPtr conclusion;
};

enum class PremisePolicy { Sequence, Multiset, Set };

std::string to_string(const Sequent& s);
std::string to_string(PremisePolicy pol);
PremisePolicy policy_from_string(const std::string& name);

// Parsing. The grammar is line-oriented ASCII; '#' starts a comment.
//   letters   [a-z][a-z0-9]*
//   formulae  F ::= letter | "T" | F "/\" F | F "*" F | "(" F ")"
//   arrows    t ::= "id{"F"}" | "p1{"F","F"}" | "p2{"F","F"}" | "pair("t","t")"
//               | "w{"F"}" | "c{"F","F"}" | "a{"F","F","F"}" | "bang{"F"}"
//               | "tens("t","t")" | name"{"F"->"F"}" | t "." t | "(" t ")"
//   sequents  S ::= F ("," F)* "|-" F | "|-" F
// Composition "g . f" applies f first; it associates to the right.
FormulaPtr parse_formula(std::string_view text);
ArrowPtr parse_arrow(std::string_view text);
Sequent parse_sequent(std::string_view text);

// Signature files: one declaration per line,
//   letter p
//   arrow f : p -> p
Signature parse_signature(std::string_view text);

// Policy application is idempotent; Sequence is the identity.
Sequent apply_policy(const Sequent& s, PremisePolicy pol);

// Capture-free letter replacement in every member formula.
FormulaPtr substitute_letter(const FormulaPtr& f, const std::string& from, const std::string& to);
Sequent substitute_letter(const Sequent& s, const std::string& from, const std::string& to,
                          const Signature& sig);

// Appends c to the premises and renormalizes; invisible is true when the
// policy-normalized premise collection is unchanged by the step.
struct ThinningResult {
  Sequent sequent;
  bool invisible;
};
ThinningResult apply_thinning(const Sequent& s, const FormulaPtr& c, PremisePolicy pol);

// Folds the (policy-normalized) premises right-associatively with /\;
// the empty collection becomes T. Returns (folded premises, conclusion).
std::pair<FormulaPtr, FormulaPtr> sequent_to_arrow_type(const Sequent& s, PremisePolicy pol);

// The sequence / multiset / set of letters occurring in A.
std::vector<std::string> object_image(const FormulaPtr& A, PremisePolicy pol);

}  // namespace freecat::frontend
