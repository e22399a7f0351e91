#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include "agdcas/render.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace th;

#ifdef AGDCAS_CLI_PATH

namespace {

struct Run {
  int rc = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string("'") + AGDCAS_CLI_PATH + "' " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("cli: JSON bracket output matches the library") {
  Run r = run("bracket w2 -1 -1 --pencil --format json");
  REQUIRE(r.rc == 0);
  LambdaValue got = lambda_value_from_json(json::parse(r.out));
  AdlerContext w2 = ctx(2, 1, true);
  Structure pen = pencil(dirac_reduce(w2.unreduced(), build_H(w2.unreduced())), build_K(w2));
  CHECK(got == pen.bracket(VarKey::u(-1), VarKey::u(-1)));
}

TEST_CASE("cli: JSON flows match the library and output is deterministic") {
  Run a = run("hierarchy w3 --k 2 --format json");
  Run b = run("hierarchy w3 --k 2 --format json");
  REQUIRE(a.rc == 0);
  CHECK(a.out == b.out);
  json j = json::parse(a.out);
  REQUIRE(j.size() == 1);
  CHECK(j[0]["k"] == 2);
  FlowEquation f = lax_flow(named_hierarchy("boussinesq"), 2);
  CHECK(diffpoly_from_json(j[0]["flows"]["u"]) == f.rhs.at(VarKey::u(-2)));
  CHECK(diffpoly_from_json(j[0]["flows"]["v"]) == f.rhs.at(VarKey::u(-1)));
}

TEST_CASE("cli: densities and cross-checked flows") {
  Run d = run("densities w2 --kmax 3 --format json");
  REQUIRE(d.rc == 0);
  json j = json::parse(d.out);
  CHECK(same_functional(diffpoly_from_json(j["3"]), U(-1) * U(-1) * q(1, 4)));
  CHECK(run("hierarchy w2 --kmax 3 --cross-check").rc == 0);
}

TEST_CASE("cli: verify reports in JSON") {
  Run ok = run("verify v2 --checks skew,jacobi --format json");
  CHECK(ok.rc == 0);
  Run bad = run("verify broken-demo --checks jacobi --format json");
  CHECK(bad.rc == 1);
  json j = json::parse(bad.out);
  CHECK(j.dump().find("residual") != std::string::npos);
}

TEST_CASE("cli: usage errors") {
  CHECK(run("").rc == 2);
  CHECK(run("bracket").rc == 2);
  CHECK(run("bracket w2 -1 -1 --format yaml").rc == 2);
  CHECK(run("bracket w2 5 5").rc == 2);
}

TEST_CASE("cli: Miura and report") {
  Run m = run("miura --N 3 --check");
  CHECK(m.rc == 0);
  CHECK(m.out.find("all zero") != std::string::npos);
  Run f = run("miura --factors 1,2 --check");
  CHECK(f.rc == 0);
  Run r = run("report w4");
  CHECK(r.rc == 0);
  CHECK(r.out.find("central charge: 5") != std::string::npos);
}

#endif
