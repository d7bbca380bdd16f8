#include "freelab/json_io.hpp"

#include "support.hpp"

#include <doctest.h>

#include <sstream>

using namespace freelab;

TEST_CASE("space JSON round trips bit-exactly") {
  const auto c10 = build_circle(10);
  const auto j = space_to_json(c10);
  CHECK(j["exact"] == true);
  CHECK(j["dist"][3][9] == "4");
  const auto back = space_from_json(j);
  CHECK(back.size() == c10.size());
  CHECK(back.exact());
  for (int i = 0; i < c10.size(); ++i)
    for (int k = 0; k < c10.size(); ++k) CHECK(back.dist_q(i, k) == c10.dist_q(i, k));

  const auto g = build_grid_net(2, 2);
  const auto gj = space_to_json(g);
  CHECK(gj["exact"] == false);
  const auto gback = space_from_json(gj);
  CHECK_FALSE(gback.exact());
  for (int i = 0; i < g.size(); ++i)
    for (int k = 0; k < g.size(); ++k) CHECK(gback.dist_d(i, k) == g.dist_d(i, k));
}

TEST_CASE("rational literals") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-7") == Rational(-7));
  CHECK(rational_str(Rational(6, 8)) == "3/4");
  CHECK(rational_str(Rational(5)) == "5");
  CHECK_THROWS_AS(parse_rational("0.75"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
}

TEST_CASE("exact space JSON rejects decimal entries") {
  Json j;
  j["points"] = {"a", "b"};
  j["base"] = 0;
  j["exact"] = true;
  j["dist"] = Json::array({Json::array({"0", "1/2"}), Json::array({"1/2", "0"})});
  CHECK_NOTHROW(space_from_json(j));
  j["dist"][0][1] = 0.5;
  j["dist"][1][0] = 0.5;
  CHECK_THROWS_AS(space_from_json(j), std::invalid_argument);
}

TEST_CASE("system JSON round trip") {
  const auto c4 = build_circle(4);
  const auto sys = test::c4_reference(c4);
  const auto j = system_to_json(sys);
  CHECK(j["order"][0] == "x0");
  CHECK(j["parent"]["x4"] == "x1");
  const auto back = system_from_json(c4, j);
  CHECK(back.order() == sys.order());
  for (int k = 1; k < sys.points(); ++k) CHECK(back.parent_pos(k) == sys.parent_pos(k));
}

TEST_CASE("measure parsing: inline, JSON and CSV") {
  const auto c10 = build_circle(10);
  const auto mu = measure_from_string(c10, "x1:1, x2:1, x3:-2");
  CHECK(mu.coeffs() == SparseVec{{1, Rational(1)}, {2, Rational(1)}, {3, Rational(-2)}});

  const auto mj = measure_to_json(mu);
  CHECK(measure_from_json(c10, mj).coeffs() == mu.coeffs());
  const Json arr = Json::array({Json::array({"x1", "1"}), Json::array({"x3", "-1/2"})});
  CHECK(measure_from_json(c10, arr).coeffs() == SparseVec{{1, Rational(1)}, {3, Rational(-1, 2)}});

  std::istringstream csv("label,coeff\nx1,1\nx3,-2\n");
  CHECK(measure_from_csv(c10, csv).coeffs() == SparseVec{{1, Rational(1)}, {3, Rational(-2)}});

  CHECK_THROWS_AS(measure_from_string(c10, "z9:1"), std::invalid_argument);
  CHECK_THROWS_AS(measure_from_string(c10, "x0:1"), std::invalid_argument);  // base excluded
}

TEST_CASE("certificate and frontier serialization") {
  SearchBudget tiny;
  tiny.max_nodes = 40;
  auto cert = certify_circle_lower_bound(12, LipTarget::exact(Rational(5)), tiny);
  const auto cj = certificate_to_json(cert);
  CHECK(cj.contains("outcome"));
  CHECK(cj["n"] == 12);

  if (cert.outcome == SearchOutcome::Indeterminate) {
    const auto fj = frontier_to_json(cert);
    const auto jobs = frontier_from_json(fj, 12);
    REQUIRE(jobs.size() == cert.frontier.size());
    CHECK(jobs == cert.frontier);
    CHECK_THROWS_AS(frontier_from_json(fj, 10), std::invalid_argument);
  }

  const auto t = target_from_json(target_to_json(theorem32_bound(12).target));
  CHECK(t.kind == LipTarget::Kind::SqrtForm);
  CHECK(t.radicand == 97);
  const auto t2 = target_from_json(target_to_json(LipTarget::exact(Rational(3, 2))));
  CHECK(t2.value == Rational(3, 2));
}

TEST_CASE("report CSV escapes embedded commas") {
  ExperimentReport rep;
  rep.id = "demo";
  rep.columns = {"point", "value"};
  rep.rows = {{"(1,2)", "3/4"}};
  const auto csv = report_to_csv(rep);
  CHECK(csv == "point,value\n\"(1,2)\",3/4\n");
}
