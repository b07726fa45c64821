#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bmcp/cusum.hpp"
#include "bmcp/distributions.hpp"

namespace bmcp {

enum class TestKind { PwmT, PwmS, GpwmS, Mean, Variance };

// One column of a simulation table.
struct TestSpec {
  TestKind kind = TestKind::PwmT;
  Component target = Component::Mu;  // ignored by Mean / Variance
  std::size_t r = kDefaultTrim;
  bool recenter = true;

  // "pwm-t/mu", "pwm-s/sigma", "gpwm/xi", "mean", "variance"
  std::string name() const;
  static TestSpec parse(const std::string& name);
  bool is_cusum() const { return kind != TestKind::Mean && kind != TestKind::Variance; }
  TestConfig config() const;
};

// The six PWM_T and GPWM_S columns (plus the two baselines when asked).
std::vector<TestSpec> paper_tests(bool with_baselines);

struct Scenario {
  std::string name;
  std::size_t n = 200;
  // Without `after`: n i.i.d. block maxima of `before`. With `after`: the
  // first floor(n t) from `before`, the rest from `after`.
  Distribution before = GevParams{};
  std::optional<Distribution> after;
  double t = 0.5;
  std::size_t block_size = 1;
  std::size_t replications = 1000;
  double level = 0.05;
  std::vector<TestSpec> tests;
  std::uint64_t master_seed = 1;

  // Throws PreconditionError on a misconfigured scenario.
  void validate() const;
  std::size_t change_index() const;
};

Sample generate(const Scenario& s, Rng& rng);

struct TestTally {
  std::string name;
  std::size_t rejections = 0;
  // Replicates where the test could not be computed (counted as not rejected).
  std::size_t failures = 0;
  std::size_t replicates_with_skips = 0;
  std::size_t skipped_splits = 0;
  double percent = 0.0;
  // Monte-Carlo standard error of `percent`, in percentage points.
  double mc_se = 0.0;
};

struct SimReport {
  Scenario scenario;
  std::vector<TestTally> tests;
  double wall_seconds = 0.0;
};

// Number of worker threads when none is given: $BMCP_JOBS, else the
// hardware concurrency.
std::size_t default_jobs();

// Replicate i uses make_rng(master_seed, name, i); the result does not
// depend on `jobs`.
SimReport run_scenario(const Scenario& s, std::size_t jobs = 0);

enum class TableId { T1, T2, T3, T4, T5, T6 };
std::string to_string(TableId t);
TableId parse_table_id(const std::string& s);

struct GridCell {
  double xi = 0.0;
  std::optional<double> xi_before;  // T4 only
  std::size_t n = 200;
  std::optional<double> t;          // T3-T6
};

std::vector<GridCell> table_grid(TableId id, bool reduced);
Scenario table_scenario(TableId id, const GridCell& cell, std::size_t replications, std::uint64_t seed);

// Reference percentages of a cell, keyed by test name; empty when no
// reference value exists for the cell.
std::map<std::string, double> paper_values(TableId id, const GridCell& cell);

struct TableReport {
  TableId table = TableId::T1;
  std::vector<GridCell> cells;
  std::vector<SimReport> reports;
  std::vector<std::map<std::string, double>> paper;
};

// Throws PreconditionError when `cells` is empty.
TableReport run_table(TableId id, const std::vector<GridCell>& cells, std::size_t replications,
                      std::uint64_t seed, std::size_t jobs = 0);

// Serialization. Timing is left out unless asked for, so that equal seeds
// give byte-identical output.
nlohmann::json to_json(const Distribution& d);
Distribution distribution_from_json(const nlohmann::json& j, const std::string& pointer = "");
nlohmann::json to_json(const Scenario& s);
// Throws DataError naming the JSON pointer of the offending field.
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SimReport& r, bool with_timing = false);
nlohmann::json to_json(const TableReport& r, bool with_timing = false);
std::string to_csv(const std::vector<SimReport>& reports);
// One row per cell and test: simulated percentage, reference value, difference.
std::string diff_csv(const TableReport& r);
// Aligned side-by-side text table of simulated vs reference percentages.
std::string diff_text(const TableReport& r);

}  // namespace bmcp
