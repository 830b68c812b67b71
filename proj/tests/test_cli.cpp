#include <cmath>

#include "doctest.h"
#include "export.hpp"
#include "hmd/errors.hpp"
#include "hmd/rmatrix.hpp"
#include "suites.hpp"

using namespace hmd;
using namespace hmd::cli;

TEST_CASE("session config validation") {
  SessionConfig c;
  CHECK_NOTHROW(c.validate());
  c.tol = 1e-15;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.tol = 1e-9;
  c.b = cplx(-0.1, 0.5);
  CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("sampler is reproducible") {
  Sampler a(7), b(7), c(8);
  const double x = a.uniform(0, 1);
  CHECK(x == b.uniform(0, 1));
  CHECK(x != c.uniform(0, 1));
  for (int i = 0; i < 100; ++i) {
    const double y = a.uniform(-2, 3);
    CHECK(y >= -2);
    CHECK(y < 3);
  }
}

TEST_CASE("suites") {
  CHECK(suite_names().size() == 14);
  SessionConfig c;
  c.seed = 7;
  const auto r1 = run_suite("ybe", c), r2 = run_suite("ybe", c);
  CHECK(r1.pass());
  CHECK(report_json(r1, c) == report_json(r2, c));
  CHECK_THROWS_AS(run_suite("nonsense", c), DomainError);
  c.b = 1.0;
  CHECK_THROWS_AS(run_suite("algebra", c), DegenerateParam);
}

TEST_CASE("a tolerance override can fail a suite") {
  SessionConfig c;
  c.tol = 2e-14;
  const auto r = run_suite("unitarity", c);
  CHECK_FALSE(r.pass());
  REQUIRE(r.worst() != nullptr);
  CHECK_FALSE(r.worst()->pass());
}

TEST_CASE("export round trip") {
  const ModularParam p(0.8);
  const cplx u(0.37, 0.08), v(-0.12, 0.21);
  const auto e12 = export_seven_vertex(u - v, p), e13 = export_seven_vertex(u, p), e23 = export_seven_vertex(v, p);
  const auto b12 = from_json(to_json(e12)), b13 = from_json(to_json(e13)), b23 = from_json(to_json(e23));
  CHECK(b12.entries == e12.entries);
  CHECK(b12.g == e12.g);
  CHECK(check_ybe(b12.entries, b13.entries, b23.entries, 2, 2, 2) ==
        check_ybe(e12.entries, e13.entries, e23.entries, 2, 2, 2));
  CHECK(to_json(e12) == to_json(b12));

  const auto rd = export_r_dense(0.3, 2, 1, 0, true, p);
  CHECK(rd.entries.rows() == 6);
  CHECK(from_json(to_json(rd)).projective);
  CHECK(export_l_sampled(0.3, 0.3, 0.2, p).entries.rows() == 2);
}

TEST_CASE("malformed imports") {
  CHECK_THROWS_AS(from_json("{"), DomainError);
  CHECK_THROWS_AS(from_json(R"({"rows":1})"), DomainError);
  CHECK_THROWS_AS(from_json(R"({"rows":1,"cols":1,"b":[1,0],"u":[0,0],"g":[0,0],"entries":[],"normalization":"raw"})"),
                  DomainError);
  CHECK_THROWS_AS(
      from_json(R"({"rows":1,"cols":1,"b":[1,0],"u":[0,0],"g":[0,0],"entries":[[1,0]],"normalization":"x"})"),
      DomainError);
}
