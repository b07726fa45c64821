#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "bmcp/cusum.hpp"
#include "bmcp/distributions.hpp"
#include "bmcp/random.hpp"
#include "bmcp/sample.hpp"

namespace bmcp {

// Column by 0-based index or by header name. Unset selects the only column
// of a single-column file.
using ColumnSelector = std::optional<std::variant<std::size_t, std::string>>;

// Delimiter is detected from the first non-empty line (',' ';' or tab);
// a first row whose selected cell is not numeric is taken as a header.
// Throws DataError with row/column coordinates on unparseable cells.
Sample load_csv(const std::string& path, const ColumnSelector& column = std::nullopt);
Sample parse_csv(const std::string& text, const ColumnSelector& column = std::nullopt,
                 const std::string& source = "<input>");

// Smallest gap between distinct values. Throws DataError if all values are equal.
double tie_step(const Sample& sample);

// x_i + U_i with U_i ~ U(0, d) independent; exact zeros are redrawn.
Sample detie_replicate(const Sample& sample, double d, Rng& rng);

struct DetieReplicate {
  // One entry per test; empty when the test failed on this replicate.
  std::vector<std::optional<double>> p_values;
  // PWM approximate estimates from b-hat; empty when infeasible.
  std::optional<GevParams> estimate;
};

struct Envelope {
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;  // replicates that contributed
};

struct DetieReport {
  std::size_t n = 0;
  std::size_t n_distinct = 0;
  double d = 0.0;
  std::uint64_t seed = 0;
  std::vector<TestConfig> tests;
  std::vector<std::string> test_names;
  std::vector<DetieReplicate> replicates;
  std::vector<Envelope> p_value_envelopes;   // per test
  std::array<Envelope, 3> estimate_envelopes{};  // mu, sigma, xi
  std::vector<std::size_t> test_failures;   // per test
  std::size_t estimate_failures = 0;
};

// The three PWM_T tests (targets mu, sigma, xi) with default settings.
std::vector<TestConfig> default_detie_tests();

// Replicate i is jittered with make_rng(seed, "detie", i), so the first
// m replicates do not depend on the total count or on `jobs`.
DetieReport detie_report(const Sample& sample, std::size_t replications, const std::vector<TestConfig>& tests,
                         std::uint64_t seed, std::size_t jobs = 1);

nlohmann::json to_json(const DetieReport& r, bool with_replicates = false);
// Header plus one row: n, n_distinct, estimate min/max, p-value min/max per test.
std::string to_table7_csv(const DetieReport& r, const std::string& dataset);

}  // namespace bmcp
