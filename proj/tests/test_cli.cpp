#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "freecat/cli.hpp"

using nlohmann::json;

namespace {

struct RunResult {
  int exit_code;
  std::string out, err;
};

RunResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int rc = freecat::cli::run(args, out, err);
  return {rc, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
  std::string path = "./" + name;
  std::ofstream f(path);
  f << content;
  return path;
}

}  // namespace

TEST_CASE("equal: the projection pair is distinguished") {
  RunResult r = run({"equal", "p1{p,p}", "p2{p,p}"});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("NOT EQUAL") != std::string::npos);
  CHECK(r.out.find("'L' vs 'R'") != std::string::npos);
}

TEST_CASE("equal: contraction composed with a projection is the identity") {
  RunResult r = run({"equal", "p1{p,p} . w{p}", "id{p}"});
  CHECK(r.exit_code == 0);
  CHECK(r.out.substr(0, 5) == "EQUAL");
}

TEST_CASE("equal: the symmetry is not the identity") {
  RunResult r = run({"equal", "c{p,p}", "id{p*p}", "--theory", "sym"});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("NOT EQUAL") != std::string::npos);
}

TEST_CASE("equal: cross-checking runs every applicable oracle") {
  RunResult r = run({"equal", "p1{p,p} . w{p}", "id{p}", "--cross-check", "--emit", "json"});
  CHECK(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["equal"] == true);
  REQUIRE(j["oracles"].size() == 3);
  for (const auto& o : j["oracles"]) CHECK(o["equal"] == true);
}

TEST_CASE("equal: type errors exit nonzero") {
  RunResult r = run({"equal", "p1{p,q}", "p2{q,p}"});
  CHECK(r.exit_code == 2);
  CHECK(!r.err.empty());
}

TEST_CASE("collapse: contraction-iso trivializes the bounded fragment") {
  RunResult r = run({"collapse", "--theory", "cartesian", "--assume", "iso w{p}", "--size", "7",
                     "--emit", "json"});
  CHECK(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["preorder_at_bound"] == true);
  CHECK(j["structural_preorder_at_bound"] == true);
}

TEST_CASE("collapse: plain cartesian reports the projection witness") {
  RunResult r = run({"collapse", "--theory", "cartesian", "--size", "7", "--emit", "json"});
  CHECK(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["preorder_at_bound"] == false);
  bool projections_seen = false;
  for (const auto& w : j["witnesses"])
    if (w[0] == "p1{p,p}" && w[1] == "p2{p,p}") projections_seen = true;
  CHECK(projections_seen);
}

TEST_CASE("collapse: symmetric preset keeps distinct generators apart") {
  RunResult r = run({"collapse", "--theory", "sym", "--assume", "c{p,p} = id{p*p}", "--gens",
                     "f:p->p,g:p->p", "--emit", "json"});
  CHECK(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["structural_preorder_at_bound"] == true);
  CHECK(j["preorder_at_bound"] == false);
  CHECK(j["balance_ok"] == true);
}

TEST_CASE("collapse: identical runs produce byte-identical reports") {
  std::vector<std::string> args = {"collapse", "--theory", "cartesian", "--assume", "iso w{p}",
                                   "--size", "7", "--seed", "5", "--emit", "json"};
  RunResult a = run(args);
  RunResult b = run(args);
  CHECK(a.out == b.out);
}

TEST_CASE("collapse: the universe cap maps to a distinct exit code") {
  RunResult r = run({"collapse", "--theory", "cartesian", "--size", "9", "--cap", "50"});
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("resource limit") != std::string::npos);
}

TEST_CASE("prove: the bundled scripts all pass") {
  RunResult r = run({"prove", "--bundled"});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
  for (const char* name : {"prop4.1-ltr", "prop5.1-rtl", "w-naturality", "sec6-k1c-k2"})
    CHECK(r.out.find(std::string("PASS ") + name) != std::string::npos);
}

TEST_CASE("prove: a corrupted line fails at its number") {
  std::string path = temp_file("bad_script.eqp",
                               "script: broken\n"
                               "theory: cartesian\n"
                               "letters: b\n"
                               "goal: p1{b,b} . w{b} = p2{b,b} . w{b}\n"
                               "1. p1{b,b} . w{b} = id{b} ; axiom beta1\n"
                               "2. p2{b,b} . w{b} = id{b} ; axiom beta1\n"  // wrong axiom
                               "3. id{b} = p2{b,b} . w{b} ; symm 2\n"
                               "4. p1{b,b} . w{b} = p2{b,b} . w{b} ; trans 1 3\n"
                               "end\n");
  RunResult r = run({"prove", path});
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("FAIL broken at line 2") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("prove: an empty file passes vacuously with a warning") {
  std::string path = temp_file("empty_script.eqp", "# nothing here\n");
  RunResult r = run({"prove", path});
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("policy-report: the substituted thinning becomes invisible under sets") {
  RunResult r = run({"policy-report", "--sequent", "p, q |- p", "--subst", "q=p", "--policy",
                     "set", "--emit", "json"});
  CHECK(r.exit_code == 0);
  json j = json::parse(r.out);
  const json& pol = j["sequents"][0]["policies"][0];
  CHECK(pol["policy"] == "set");
  for (const auto& t : pol["thinning"]) CHECK(t["invisible"] == false);
  const json& sub = pol["substitutions"][0];
  CHECK(sub["normalized"] == "p |- p");
  CHECK(sub["collection_shrank"] == true);
  bool any_invisible = false;
  for (const auto& t : sub["thinning"]) any_invisible = any_invisible || t["invisible"] == true;
  CHECK(any_invisible);
}

TEST_CASE("policy-report: sequences never flag invisibility") {
  RunResult r = run({"policy-report", "--sequent", "p, q |- p", "--subst", "q=p", "--policy",
                     "sequence", "--emit", "json"});
  CHECK(r.exit_code == 0);
  json j = json::parse(r.out);
  const json& pol = j["sequents"][0]["policies"][0];
  for (const auto& t : pol["thinning"]) CHECK(t["invisible"] == false);
  for (const auto& t : pol["substitutions"][0]["thinning"]) CHECK(t["invisible"] == false);
}

TEST_CASE("policy-report: multisets keep duplicate premises and show the contraction") {
  RunResult r = run({"policy-report", "--sequent", "p, p |- p", "--policy", "multiset",
                     "--emit", "json"});
  CHECK(r.exit_code == 0);
  json j = json::parse(r.out);
  const json& pol = j["sequents"][0]["policies"][0];
  CHECK(pol["normalized"] == "p, p |- p");
  REQUIRE(pol["contractions"].size() == 1);
  CHECK(pol["contractions"][0]["visible"] == true);
}

TEST_CASE("policy-report: parse errors are reported per line and processing continues") {
  std::string path = temp_file("sequents.txt", "p |- p\nthis is not a sequent\nq |- q\n");
  RunResult r = run({"policy-report", path, "--emit", "json"});
  CHECK(r.exit_code == 2);
  json j = json::parse(r.out);
  REQUIRE(j["sequents"].size() == 3);
  CHECK(!j["sequents"][0].contains("error"));
  CHECK(j["sequents"][1].contains("error"));
  CHECK(!j["sequents"][2].contains("error"));
  std::remove(path.c_str());
}

TEST_CASE("parse: classifies and echoes canonically") {
  RunResult r = run({"parse", "p /\\ q", "p1{p /\\ q, p /\\ q} . w{p /\\ q}", "p, q |- p",
                     "--emit", "json"});
  CHECK(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["items"][0]["kind"] == "formula");
  CHECK(j["items"][1]["kind"] == "arrow");
  CHECK(j["items"][2]["kind"] == "sequent");
  CHECK(j["items"][2]["canonical"] == "p, q |- p");
}
