#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "oracles.hpp"

#include "bmcp/detie_io.hpp"
#include "bmcp/errors.hpp"

using namespace bmcp;
using doctest::Approx;

namespace {

std::string temp_file(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::temp_directory_path() / ("bmcp_unit_" + name);
  std::ofstream(p) << text;
  return p.string();
}

std::vector<double> values(const Sample& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("parse_csv") {
  CHECK(values(parse_csv("1\n2\n3\n")) == std::vector<double>{1, 2, 3});
  CHECK(values(parse_csv("level\n1.49\n1.5\r\n\n1.7\n")) == std::vector<double>{1.49, 1.5, 1.7});
  CHECK(values(parse_csv("year;level\n1990;1.2\n1991;1.3\n", std::string("level"))) == std::vector<double>{1.2, 1.3});
  CHECK(values(parse_csv("year\tlevel\n1990\t1.2\n", std::size_t{0})) == std::vector<double>{1990});
  CHECK(values(parse_csv("\"a\",\"b\"\n1,2\n3,4\n", std::string("b"))) == std::vector<double>{2, 4});
  CHECK_THROWS_WITH_AS(parse_csv("x\n1\nNA\n3\n", std::nullopt, "f.csv"), doctest::Contains("row 3, column 'x'"),
                       DataError);
  CHECK_THROWS_WITH_AS(parse_csv("x\n1\nNA\n"), doctest::Contains("'NA'"), DataError);
  CHECK_THROWS_AS(parse_csv("a,b\n1,2\n"), DataError);
  CHECK_THROWS_AS(parse_csv("a,b\n1,2\n", std::string("c")), DataError);
  CHECK_THROWS_AS(parse_csv("a,b\n1,2\n", std::size_t{5}), DataError);
  CHECK_THROWS_AS(parse_csv("level\n"), DataError);
  CHECK_THROWS_AS(parse_csv(""), DataError);
}

TEST_CASE("load_csv") {
  const auto p = temp_file("load.csv", "v\n3\n1\n2\n");
  CHECK(values(load_csv(p)) == std::vector<double>{3, 1, 2});
  std::filesystem::remove(p);
  CHECK_THROWS_AS(load_csv("/nonexistent/bmcp.csv"), DataError);
}

TEST_CASE("tie_step") {
  CHECK(tie_step(Sample({1, 2, 2, 3})) == 1.0);
  CHECK(tie_step(Sample({0, 0.1, 0.25})) == Approx(0.1));
  CHECK_THROWS_AS(tie_step(Sample({5, 5})), DataError);
}

TEST_CASE("detie_replicate") {
  const Sample x({1, 1, 2});
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const auto y = detie_replicate(x, 1.0, rng);
    CHECK(y.distinct_count() == 3);
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(y[j] > x[j]);
      CHECK(y[j] < x[j] + 1.0);
    }
    const auto sx = x.sorted(), sy = y.sorted();
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(sy[j] - sx[j]) < 1.0);
  }
  CHECK_THROWS_AS(detie_replicate(x, 0.0, rng), PreconditionError);
}

TEST_CASE("detie_report") {
  auto raw = oracle::gev_draws(60, {10, 2, 0.1}, 8);
  for (auto& v : raw) v = std::round(v * 2) / 2;
  const Sample x(raw);
  const auto tests = default_detie_tests();
  REQUIRE(tests.size() == 3);

  const auto one = detie_report(x, 1, tests, 4, 1);
  CHECK(one.n == 60);
  CHECK(one.n_distinct == x.distinct_count());
  CHECK(one.d == tie_step(x));
  for (const auto& e : one.p_value_envelopes) CHECK(e.min == e.max);

  const auto small = detie_report(x, 50, tests, 4, 1);
  const auto large = detie_report(x, 200, tests, 4, 3);
  for (std::size_t t = 0; t < 3; ++t) {
    CHECK(small.p_value_envelopes[t].min <= small.p_value_envelopes[t].max);
    CHECK(large.p_value_envelopes[t].min <= small.p_value_envelopes[t].min);
    CHECK(large.p_value_envelopes[t].max >= small.p_value_envelopes[t].max);
    CHECK(large.estimate_envelopes[t].min <= small.estimate_envelopes[t].min);
    CHECK(large.estimate_envelopes[t].max >= small.estimate_envelopes[t].max);
  }
  for (std::size_t i = 0; i < 50; ++i)
    CHECK(small.replicates[i].p_values == large.replicates[i].p_values);

  CHECK(to_json(small).dump() == to_json(detie_report(x, 50, tests, 4, 2)).dump());
  const auto csv = to_table7_csv(small, "demo");
  CHECK(csv.rfind("dataset,n,n_distinct", 0) == 0);
  CHECK(csv.find("\ndemo,60,") != std::string::npos);
  CHECK(to_json(small, true)["replicates"].size() == 50);
  CHECK_THROWS_AS(detie_report(x, 0, tests, 4, 1), PreconditionError);
}

TEST_CASE("jitter barely moves the p-values of a tie-free sample") {
  const Sample x(oracle::gev_draws(100, {0, 1, 0}, 12));
  const auto tests = default_detie_tests();
  const auto r = detie_report(x, 1, tests, 1, 1);
  const auto direct = run_tests(x, tests[0], std::vector<Component>{Component::Mu, Component::Sigma, Component::Xi});
  for (std::size_t t = 0; t < 3; ++t) CHECK(std::abs(*r.replicates[0].p_values[t] - direct[t].p_value) < 0.05);
}
