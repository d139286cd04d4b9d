#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "freecat/core.hpp"

namespace freecat::engine {

using core::ArrowPtr;
using core::FormulaPtr;
using core::Signature;

// ---------------------------------------------------------------------------
// Theories. The SymmetricAssociative preset is the unit-free symmetric
// monoidal theory over object generators; Cartesian is binary product only;
// CartesianWithTop adds the terminal object with its uniqueness schema.
// ---------------------------------------------------------------------------

enum class Preset { Cartesian, CartesianWithTop, SymmetricAssociative };

std::string to_string(Preset p);
Preset preset_from_string(const std::string& name);

struct Equation {
  ArrowPtr lhs, rhs;
  std::string tag;  // axiom name, or "user"
};

struct TheoryConfig {
  Preset preset = Preset::Cartesian;
  Signature sig;
  std::vector<Equation> extra_axioms;
  std::vector<core::GenDecl> witnesses;  // named inverses introduced by iso assertions
};

// Adds a user equation; both sides must typecheck with identical endpoints.
void add_equation_axiom(TheoryConfig& cfg, ArrowPtr lhs, ArrowPtr rhs);

// Asserts that t is an isomorphism: introduces a fresh inverse witness u
// and the two equations u . t = id and t . u = id.
void add_iso_axiom(TheoryConfig& cfg, const ArrowPtr& t);

struct AxiomSchema {
  std::string name;
  std::string statement;  // human-readable schema, for reports
};

// The schema list of the preset. Besides the presentation axioms the
// cartesian presets carry the derivable fusion and pairing-identity schemata,
// which the bounded closure needs to reach its completeness slack.
std::vector<AxiomSchema> axiom_schemata(const TheoryConfig& cfg);

// A random well-typed instance of the named schema over structural terms of
// the given formula depth. Used by the soundness fuzz suites. Returns
// nothing for witness-based schemata, which have no structural instances.
std::optional<Equation> random_schema_instance(const std::string& schema, const TheoryConfig& cfg,
                                               std::mt19937_64& rng, int max_depth);

// Random structural data used by the fuzz suites and property tests.
FormulaPtr random_formula(std::mt19937_64& rng, const TheoryConfig& cfg, int max_depth);
ArrowPtr random_structural_from(std::mt19937_64& rng, const TheoryConfig& cfg,
                                const FormulaPtr& source, int budget);

// ---------------------------------------------------------------------------
// Bounded universes and congruence closure.
// ---------------------------------------------------------------------------

struct Bounds {
  std::size_t size_bound = 7;   // arrow constructors per term, Diag expanded
  std::size_t depth_bound = 2;  // formula depth, letters have depth 1
  std::size_t cap = 200000;     // ResourceLimit above this many terms
};

// All well-typed terms within the bounds, Diag-free, in a deterministic
// order (by size, then construction order). Closed under subterms.
std::vector<ArrowPtr> term_universe(const TheoryConfig& cfg, const Bounds& bounds);

struct ClosureResult {
  std::vector<std::size_t> class_of;  // term index -> smallest index in its class
  std::size_t class_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> merges;  // union log, in order
  bool balance_ok = true;
  std::optional<std::pair<std::size_t, std::size_t>> balance_offender;
};

// Least congruence on the universe containing every axiom instance whose
// both sides lie in the universe.
ClosureResult congruence_close(const TheoryConfig& cfg, const std::vector<ArrowPtr>& universe);

struct BalanceReport {
  bool ok = true;
  std::optional<std::pair<std::string, std::string>> offender;
};

// Re-checks the generator-occurrence balance over a closure's merge log:
// every merged pair must carry identical multisets of generator-arrow names.
// A false result is a finding about the axioms, not a fault.
BalanceReport generator_balance_check(const std::vector<ArrowPtr>& universe,
                                      const std::vector<std::pair<std::size_t, std::size_t>>& merges);

struct CollapseReport {
  std::size_t universe_size = 0;
  std::size_t class_count_before = 0;
  std::size_t class_count_after = 0;
  std::vector<std::pair<std::string, std::string>> merged_pairs;

  bool preorder_at_bound = false;  // every parallel pair in the universe merged
  std::size_t witness_count = 0;
  std::vector<std::pair<std::string, std::string>> witnesses;  // capped sample

  bool structural_preorder_at_bound = false;  // restricted to structural terms
  std::size_t structural_witness_count = 0;
  std::vector<std::pair<std::string, std::string>> structural_witnesses;

  std::vector<std::string> class_reps;  // capped sample, by smallest index
  bool balance_ok = true;
  std::optional<std::pair<std::string, std::string>> balance_offender;
  double elapsed_ms = 0.0;
};

inline constexpr std::size_t kWitnessSampleCap = 20;
inline constexpr std::size_t kClassRepSampleCap = 50;

// Runs the closure and reports whether the (bounded) universe has collapsed
// to a preorder. A false preorder flag at one bound is not a proof of
// non-preorder; witnesses list parallel pairs still distinguished.
CollapseReport detect_collapse(const TheoryConfig& cfg, const Bounds& bounds);

// Bounded forms of "the category is a preorder" and "the diagonal functor is
// full": the second searches, for every parallel pair (g, g'), for a term h
// with g = h and g' = h provable at the bound. Cartesian presets only.
std::pair<bool, bool> preorder_and_fullness_checks(const TheoryConfig& cfg, const Bounds& bounds);

// True iff the closure at the given bounds proves p1{B,B} = p2{B,B}.
bool w_iso_criterion(const TheoryConfig& cfg, const Bounds& bounds, const FormulaPtr& B);

}  // namespace freecat::engine
