#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "freecat/core.hpp"

namespace freecat::semantics {

using core::ArrowPtr;
using core::FormulaPtr;

// ---------------------------------------------------------------------------
// Coherence semantics for structural terms.
//
// A structural cartesian arrow t : A -> B denotes a letter-preserving
// function from the leaf occurrences of B back to the leaf occurrences of A
// (each target leaf says which source leaf it copies). Two structural
// cartesian terms are equal in the free category iff they denote the same
// function; this is the module's definition of identity of deductions.
//
// For the tensor fragment the denotation is a letter-preserving bijection.
// ---------------------------------------------------------------------------

struct OccurrenceMap {
  FormulaPtr source, target;
  std::vector<std::size_t> map;  // target leaf index -> source leaf index
};

struct LeafBijection {
  FormulaPtr source, target;
  std::vector<std::size_t> map;  // target leaf index -> source leaf index
};

bool equal(const OccurrenceMap& a, const OccurrenceMap& b);
bool equal(const LeafBijection& a, const LeafBijection& b);

// Structural cartesian terms only (Id, Comp, Proj1, Proj2, Pair, Diag, Bang).
// Throws NonStructuralTerm for Gen/InvWitness and WrongTheory for tensor
// constructors.
OccurrenceMap interpret_cartesian(const ArrowPtr& t);
bool decide_equal_cartesian(const ArrowPtr& t1, const ArrowPtr& t2);

// Structural tensor terms only (Id, Comp, TensorOf, Sym, Assoc).
LeafBijection interpret_symmetric(const ArrowPtr& t);
bool decide_equal_symmetric(const ArrowPtr& t1, const ArrowPtr& t2);

// ---------------------------------------------------------------------------
// Finite-set evaluation: the independent brute-force oracle. Each letter is
// assigned a finite carrier {0..n-1}; /\ and * become cartesian products of
// carriers and T the one-element set. An element of [[A]] is a tuple of leaf
// values, encoded as a mixed-radix index (last leaf varies fastest).
// ---------------------------------------------------------------------------

struct FiniteModel {
  std::map<std::string, std::size_t> carriers;              // letter -> carrier size
  std::map<std::string, std::vector<std::size_t>> tables;   // generator name -> graph
};

struct FunctionTable {
  FormulaPtr source, target;
  std::size_t domain_size, codomain_size;
  std::vector<std::size_t> table;  // table[x] = value at x
};

bool equal(const FunctionTable& a, const FunctionTable& b);

std::size_t space_size(const FormulaPtr& f, const FiniteModel& m);
std::vector<std::size_t> decode_element(std::size_t index, const FormulaPtr& f, const FiniteModel& m);
std::size_t encode_element(const std::vector<std::size_t>& values, const FormulaPtr& f,
                           const FiniteModel& m);

// Evaluates any well-typed term, including generator arrows, provided the
// model assigns every generator a table. Throws MissingGeneratorTable.
FunctionTable eval_finite_model(const ArrowPtr& t, const FiniteModel& m);

}  // namespace freecat::semantics
