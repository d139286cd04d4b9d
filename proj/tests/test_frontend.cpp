#include "doctest.h"

#include <random>

#include "freecat/engine.hpp"
#include "freecat/frontend.hpp"

using namespace freecat;
using core::ArrowTerm;
using core::Formula;
using frontend::PremisePolicy;
using frontend::Sequent;

namespace {

Sequent seq(const char* text) { return frontend::parse_sequent(text); }

std::vector<std::string> premise_prints(const Sequent& s) {
  std::vector<std::string> out;
  for (const auto& p : s.premises) out.push_back(core::to_string(p));
  return out;
}

core::Signature sig_pq() {
  core::Signature s;
  s.add_letter("p");
  s.add_letter("q");
  s.add_letter("r");
  return s;
}

}  // namespace

TEST_CASE("parsing the basic forms") {
  Sequent s = seq("p, q |- p");
  CHECK(premise_prints(s) == std::vector<std::string>{"p", "q"});
  CHECK(core::to_string(s.conclusion) == "p");

  auto t = frontend::parse_arrow("pair(id{p}, id{p})");
  CHECK(core::equal(t, ArrowTerm::pair(ArrowTerm::id(Formula::letter("p")),
                                       ArrowTerm::id(Formula::letter("p")))));

  // parses, but the composite is ill-typed
  auto bad = frontend::parse_arrow("p1{p,q} . w{p}");
  CHECK_THROWS_AS(core::typecheck(bad, sig_pq()), CompositionMismatch);
}

TEST_CASE("syntax errors carry a position") {
  try {
    frontend::parse_formula("p /\\ ");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.position == 5);
  }
  CHECK_THROWS_AS(frontend::parse_arrow("pair(id{p} id{p})"), SyntaxError);
  CHECK_THROWS_AS(frontend::parse_sequent("p |- "), SyntaxError);
  CHECK_THROWS_AS(frontend::parse_formula("p /\\ (q * r)"), MixedConnectives);
}

TEST_CASE("composition is right-associative and printing round-trips") {
  auto t = frontend::parse_arrow("id{p} . id{p} . id{p}");
  REQUIRE(t->kind == core::ArrKind::Comp);
  CHECK(t->v->kind == core::ArrKind::Comp);

  auto left = ArrowTerm::comp(
      ArrowTerm::comp(ArrowTerm::id(Formula::letter("p")), ArrowTerm::id(Formula::letter("p"))),
      ArrowTerm::id(Formula::letter("p")));
  CHECK(core::to_string(left) == "(id{p} . id{p}) . id{p}");
  CHECK(core::equal(frontend::parse_arrow(core::to_string(left)), left));
}

TEST_CASE("parse after print is the identity") {
  engine::TheoryConfig cart;
  cart.sig = sig_pq();
  engine::TheoryConfig sym;
  sym.preset = engine::Preset::SymmetricAssociative;
  sym.sig = sig_pq();
  std::mt19937_64 rng(23);
  for (int i = 0; i < 200; ++i) {
    const engine::TheoryConfig& cfg = (i % 2 == 0) ? cart : sym;
    auto A = engine::random_formula(rng, cfg, 4);
    CHECK(core::equal(frontend::parse_formula(core::to_string(A)), A));
    auto t = engine::random_structural_from(rng, cfg, A, 4);
    CHECK(core::equal(frontend::parse_arrow(core::to_string(t)), t));
  }
  // targeted forms the random generator does not emit
  for (const char* text : {"w{p}", "bang{p /\\ q}", "f{p->q /\\ q}", "a{p,q,r}",
                           "tens(c{p,q}, id{r})", "p, p /\\ q, T |- q"}) {
    if (std::string(text).find("|-") != std::string::npos) {
      Sequent s = frontend::parse_sequent(text);
      CHECK(core::equal(frontend::parse_sequent(frontend::to_string(s)).conclusion,
                        s.conclusion));
      CHECK(premise_prints(frontend::parse_sequent(frontend::to_string(s))) ==
            premise_prints(s));
    } else {
      auto t = frontend::parse_arrow(text);
      CHECK(core::equal(frontend::parse_arrow(core::to_string(t)), t));
    }
  }
}

TEST_CASE("policy application") {
  Sequent s = seq("p, q, p |- r");
  Sequent set = frontend::apply_policy(s, PremisePolicy::Set);
  CHECK(premise_prints(set) == std::vector<std::string>{"p", "q"});

  Sequent m = seq("p, p |- p");
  CHECK(premise_prints(frontend::apply_policy(m, PremisePolicy::Multiset)) ==
        std::vector<std::string>{"p", "p"});
  CHECK(premise_prints(frontend::apply_policy(m, PremisePolicy::Sequence)) ==
        std::vector<std::string>{"p", "p"});
}

TEST_CASE("policy application is idempotent") {
  engine::TheoryConfig cfg;
  cfg.sig = sig_pq();
  std::mt19937_64 rng(31);
  for (int i = 0; i < 100; ++i) {
    Sequent s;
    std::uniform_int_distribution<int> n(0, 4);
    for (int k = n(rng); k > 0; --k)
      s.premises.push_back(engine::random_formula(rng, cfg, 3));
    s.conclusion = engine::random_formula(rng, cfg, 3);
    for (auto pol : {PremisePolicy::Sequence, PremisePolicy::Multiset, PremisePolicy::Set}) {
      Sequent once = frontend::apply_policy(s, pol);
      Sequent twice = frontend::apply_policy(once, pol);
      CHECK(premise_prints(once) == premise_prints(twice));
    }
  }
}

TEST_CASE("substitution of letters") {
  core::Signature sig = sig_pq();
  Sequent s = seq("p, q |- p");
  Sequent out = frontend::substitute_letter(s, "q", "p", sig);
  CHECK(premise_prints(out) == std::vector<std::string>{"p", "p"});
  CHECK(core::to_string(out.conclusion) == "p");

  Sequent noq = frontend::substitute_letter(seq("p |- p"), "q", "p", sig);
  CHECK(premise_prints(noq) == std::vector<std::string>{"p"});

  Sequent nested = frontend::substitute_letter(seq("p /\\ q |- r"), "q", "p", sig);
  CHECK(premise_prints(nested) == std::vector<std::string>{"p /\\ p"});

  core::Signature only_p;
  only_p.add_letter("p");
  CHECK_THROWS_AS(frontend::substitute_letter(seq("p |- p"), "q", "p", only_p),
                  UnknownGenerator);
}

TEST_CASE("thinning visibility per policy") {
  auto q = Formula::letter("q");
  auto p = Formula::letter("p");

  auto r1 = frontend::apply_thinning(seq("p |- p"), q, PremisePolicy::Set);
  CHECK(premise_prints(r1.sequent) == std::vector<std::string>{"p", "q"});
  CHECK(!r1.invisible);

  auto r2 = frontend::apply_thinning(seq("p |- p"), p, PremisePolicy::Set);
  CHECK(premise_prints(r2.sequent) == std::vector<std::string>{"p"});
  CHECK(r2.invisible);

  auto r3 = frontend::apply_thinning(seq("p |- p"), p, PremisePolicy::Sequence);
  CHECK(premise_prints(r3.sequent) == std::vector<std::string>{"p", "p"});
  CHECK(!r3.invisible);
}

TEST_CASE("sequents fold to arrow types") {
  auto [g1, c1] = frontend::sequent_to_arrow_type(seq("p, q |- p"), PremisePolicy::Sequence);
  CHECK(core::to_string(g1) == "p /\\ q");
  CHECK(core::to_string(c1) == "p");

  auto [g2, c2] = frontend::sequent_to_arrow_type(seq("|- p"), PremisePolicy::Sequence);
  CHECK(core::to_string(g2) == "T");
  CHECK(core::to_string(c2) == "p");

  auto [g3, c3] = frontend::sequent_to_arrow_type(seq("p, p |- p"), PremisePolicy::Set);
  CHECK(core::to_string(g3) == "p");
  CHECK(core::to_string(c3) == "p");

  auto [g4, c4] = frontend::sequent_to_arrow_type(seq("p, q, r |- p"), PremisePolicy::Sequence);
  CHECK(core::to_string(g4) == "p /\\ (q /\\ r)");
  (void)c4;
}

TEST_CASE("object images under each policy") {
  CHECK(frontend::object_image(frontend::parse_formula("p /\\ (p /\\ q)"), PremisePolicy::Set) ==
        std::vector<std::string>{"p", "q"});
  CHECK(frontend::object_image(frontend::parse_formula("p * p"), PremisePolicy::Multiset) ==
        std::vector<std::string>{"p", "p"});
  CHECK(frontend::object_image(Formula::top(), PremisePolicy::Set).empty());
  CHECK(frontend::object_image(frontend::parse_formula("q /\\ p"), PremisePolicy::Sequence) ==
        std::vector<std::string>{"q", "p"});
}

TEST_CASE("set policy is unstable under substitution, sequences are not") {
  core::Signature sig = sig_pq();
  Sequent s = seq("p, q |- p");
  Sequent before = frontend::apply_policy(s, PremisePolicy::Set);
  Sequent after = frontend::apply_policy(frontend::substitute_letter(s, "q", "p", sig),
                                         PremisePolicy::Set);
  CHECK(after.premises.size() < before.premises.size());

  engine::TheoryConfig cfg;
  cfg.sig = sig;
  std::mt19937_64 rng(41);
  for (int i = 0; i < 100; ++i) {
    Sequent rnd;
    std::uniform_int_distribution<int> n(0, 4);
    for (int k = n(rng); k > 0; --k)
      rnd.premises.push_back(engine::random_formula(rng, cfg, 3));
    rnd.conclusion = engine::random_formula(rng, cfg, 3);
    Sequent sub = frontend::substitute_letter(rnd, "q", "p", sig);
    CHECK(frontend::apply_policy(sub, PremisePolicy::Sequence).premises.size() ==
          frontend::apply_policy(rnd, PremisePolicy::Sequence).premises.size());
  }
}

TEST_CASE("signature files parse") {
  core::Signature sig = frontend::parse_signature(
      "# letters first\nletter p\nletter q\n\narrow f : p -> p /\\ q\n");
  CHECK(sig.has_letter("p"));
  CHECK(sig.has_letter("q"));
  const core::GenDecl* f = sig.find_gen("f");
  REQUIRE(f != nullptr);
  CHECK(core::to_string(f->target) == "p /\\ q");
  CHECK_THROWS_AS(frontend::parse_signature("letter p\narrow f : p -> z\n"), UnknownGenerator);
}
