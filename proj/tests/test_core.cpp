#include "doctest.h"

#include <random>

#include "freecat/core.hpp"
#include "freecat/engine.hpp"
#include "freecat/frontend.hpp"

using namespace freecat;
using core::ArrowTerm;
using core::Formula;

namespace {

core::Signature sig_p() {
  core::Signature s;
  s.add_letter("p");
  s.add_letter("q");
  return s;
}

}  // namespace

TEST_CASE("typing of projections and the diagonal") {
  core::Signature sig = sig_p();
  auto p = Formula::letter("p");
  auto q = Formula::letter("q");

  core::Typing t1 = core::typecheck(ArrowTerm::proj1(p, q), sig);
  CHECK(core::to_string(t1.source) == "p /\\ q");
  CHECK(core::to_string(t1.target) == "p");

  core::Typing t2 = core::typecheck(ArrowTerm::diag(p), sig);
  CHECK(core::to_string(t2.source) == "p");
  CHECK(core::to_string(t2.target) == "p /\\ p");
}

TEST_CASE("composition mismatch is rejected") {
  core::Signature sig = sig_p();
  auto p = Formula::letter("p");
  auto q = Formula::letter("q");
  auto bad = ArrowTerm::comp(ArrowTerm::proj1(p, q), ArrowTerm::id(q));
  CHECK_THROWS_AS(core::typecheck(bad, sig), CompositionMismatch);
}

TEST_CASE("unknown letters and generators are rejected") {
  core::Signature sig;
  sig.add_letter("p");
  CHECK_THROWS_AS(core::typecheck(ArrowTerm::id(Formula::letter("z")), sig), UnknownGenerator);
  auto p = Formula::letter("p");
  CHECK_THROWS_AS(core::typecheck(ArrowTerm::gen("f", p, p), sig), UnknownGenerator);
  sig.add_gen("f", p, Formula::conj(p, p));
  // declared endpoints must match the use site
  CHECK_THROWS_AS(core::typecheck(ArrowTerm::gen("f", p, p), sig), UnknownGenerator);
  CHECK_NOTHROW(core::typecheck(ArrowTerm::gen("f", p, Formula::conj(p, p)), sig));
}

TEST_CASE("mixed connectives are rejected at typecheck") {
  core::Signature sig = sig_p();
  auto p = Formula::letter("p");
  auto mixed = Formula::conj(p, Formula::tensor(p, p));
  CHECK_THROWS_AS(core::flavor_of(mixed), MixedConnectives);
  CHECK_THROWS_AS(core::typecheck(ArrowTerm::id(mixed), sig), MixedConnectives);
  // tensor constructor over a conjunction formula mixes as well
  CHECK_THROWS_AS(core::typecheck(ArrowTerm::sym(Formula::conj(p, p), p), sig),
                  MixedConnectives);
}

TEST_CASE("leaves enumerate left to right") {
  auto p = Formula::letter("p");
  auto q = Formula::letter("q");
  auto f = Formula::conj(p, Formula::conj(q, p));
  auto ls = core::leaves(f);
  REQUIRE(ls.size() == 3);
  CHECK(ls[0].path == "L");
  CHECK(ls[0].letter == "p");
  CHECK(ls[1].path == "RL");
  CHECK(ls[1].letter == "q");
  CHECK(ls[2].path == "RR");
  CHECK(ls[2].letter == "p");

  CHECK(core::leaves(Formula::top()).empty());
  auto single = core::leaves(p);
  REQUIRE(single.size() == 1);
  CHECK(single[0].path == "");
}

TEST_CASE("diagonal expansion commutes with typing") {
  core::Signature sig = sig_p();
  engine::TheoryConfig cfg;
  cfg.sig = sig;
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    auto A = engine::random_formula(rng, cfg, 3);
    auto d = ArrowTerm::diag(A);
    auto e = core::expand_diag(d);
    REQUIRE(e->kind == core::ArrKind::Pair);
    CHECK(core::equal(e->u, ArrowTerm::id(A)));
    CHECK(core::equal(e->v, ArrowTerm::id(A)));
    core::Typing td = core::typecheck(d, sig);
    core::Typing te = core::typecheck(e, sig);
    CHECK(core::equal(td.source, te.source));
    CHECK(core::equal(td.target, te.target));
  }
}

TEST_CASE("typing is a function of the term") {
  core::Signature sig = sig_p();
  engine::TheoryConfig cfg;
  cfg.sig = sig;
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    auto t = engine::random_structural_from(rng, cfg, engine::random_formula(rng, cfg, 3), 4);
    core::Typing a = core::typecheck(t, sig);
    core::Typing b = core::typecheck(t, sig);
    CHECK(core::equal(a.source, b.source));
    CHECK(core::equal(a.target, b.target));
  }
}

TEST_CASE("leaves of a binary formula are the prefixed leaves of its parts") {
  core::Signature sig = sig_p();
  engine::TheoryConfig cfg;
  cfg.sig = sig;
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    auto A = engine::random_formula(rng, cfg, 3);
    auto B = engine::random_formula(rng, cfg, 3);
    auto both = core::leaves(Formula::conj(A, B));
    auto la = core::leaves(A);
    auto lb = core::leaves(B);
    REQUIRE(both.size() == la.size() + lb.size());
    for (std::size_t k = 0; k < la.size(); ++k) {
      CHECK(both[k].path == "L" + la[k].path);
      CHECK(both[k].letter == la[k].letter);
    }
    for (std::size_t k = 0; k < lb.size(); ++k) {
      CHECK(both[la.size() + k].path == "R" + lb[k].path);
      CHECK(both[la.size() + k].letter == lb[k].letter);
    }
  }
}

TEST_CASE("term size counts constructors with the diagonal expanded") {
  auto p = Formula::letter("p");
  CHECK(core::term_size(ArrowTerm::id(p)) == 1);
  CHECK(core::term_size(ArrowTerm::diag(p)) == 3);
  CHECK(core::term_size(ArrowTerm::comp(ArrowTerm::proj1(p, p), ArrowTerm::diag(p))) == 5);
}

TEST_CASE("structurality and generator multisets") {
  auto p = Formula::letter("p");
  auto f = ArrowTerm::gen("f", p, p);
  auto t = ArrowTerm::comp(f, ArrowTerm::comp(f, ArrowTerm::id(p)));
  CHECK(!core::is_structural(t));
  CHECK(core::is_structural(ArrowTerm::diag(p)));
  CHECK(core::gen_multiset(t) == std::vector<std::string>{"f", "f"});
}

TEST_CASE("formula order is length-lexicographic on the printed form") {
  auto p = frontend::parse_formula("p");
  auto q = frontend::parse_formula("q");
  auto pq = frontend::parse_formula("p /\\ q");
  CHECK(core::formula_less(p, q));
  CHECK(core::formula_less(q, pq));
  CHECK(!core::formula_less(pq, p));
}
