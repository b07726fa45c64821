#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "bmcp/baselines.hpp"
#include "bmcp/cusum.hpp"
#include "bmcp/detie_io.hpp"
#include "bmcp/errors.hpp"
#include "bmcp/gev_maps.hpp"
#include "bmcp/montecarlo.hpp"

namespace bmcp::cli {
namespace {

using nlohmann::json;

// Raised for bad flag combinations detected after parsing.
struct UsageError : Error {
  using Error::Error;
};

struct InputOptions {
  std::string file;
  std::string column;
};

struct TestOptions {
  std::string family = "pwm-t";
  std::string target = "all";
  std::size_t r = kDefaultTrim;
  bool no_recenter = false;
  std::optional<double> gamma;
};

ColumnSelector selector(const std::string& column) {
  if (column.empty()) return std::nullopt;
  if (std::all_of(column.begin(), column.end(), [](unsigned char c) { return std::isdigit(c); }))
    return std::variant<std::size_t, std::string>(static_cast<std::size_t>(std::stoul(column)) - 1);
  return std::variant<std::size_t, std::string>(column);
}

Sample load(const InputOptions& in) {
  if (!in.column.empty() && in.column == "0") throw UsageError("--column indices start at 1");
  return load_csv(in.file, selector(in.column));
}

TestFamily parse_family(const std::string& s) {
  if (s == "pwm-t") return TestFamily::PwmT;
  if (s == "pwm-s") return TestFamily::PwmS;
  if (s == "gpwm") return TestFamily::GpwmS;
  throw UsageError("unknown family '" + s + "'");
}

std::vector<Component> parse_targets(const std::string& s) {
  if (s == "all") return {Component::Mu, Component::Sigma, Component::Xi};
  if (s == "mu") return {Component::Mu};
  if (s == "sigma") return {Component::Sigma};
  if (s == "xi") return {Component::Xi};
  throw UsageError("unknown target '" + s + "'");
}

TestConfig base_config(const TestOptions& o) {
  TestConfig c;
  c.family = parse_family(o.family);
  c.r = o.r;
  c.recenter = !o.no_recenter;
  c.gamma = o.gamma;
  return c;
}

json params_json(const GevParams& p) { return {{"mu", p.mu}, {"sigma", p.sigma}, {"xi", p.xi}}; }

json test_config_json(const TestConfig& c, const std::vector<Component>& targets, std::size_t n) {
  json corrections = json::object();
  for (Component t : targets) {
    TestConfig ct = c;
    ct.target = t;
    corrections[to_string(t)] = ct.resolved_correction(n);
  }
  json tj = json::array();
  for (Component t : targets) tj.push_back(to_string(t));
  return {{"family", to_string(c.family)},
          {"targets", tj},
          {"r", c.r},
          {"gamma", c.resolved_gamma()},
          {"recenter", c.recenter},
          {"variance_correction", corrections}};
}

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

void warn_ties(const Sample& x, std::ostream& err) {
  const std::size_t nd = x.distinct_count();
  if (nd < x.size())
    err << "warning: sample has ties (n = " << x.size() << ", distinct n' = " << nd
        << "); the tests assume continuous data. Use `bmcp detie` (or --detie) to jitter the ties away.\n";
}

void add_input(CLI::App* app, InputOptions& in) {
  app->add_option("file", in.file, "CSV file with the block maxima")->required();
  app->add_option("--column", in.column, "Column name or 1-based index (needed for multi-column files)");
}

void add_test_flags(CLI::App* app, TestOptions& t) {
  app->add_option("--family", t.family, "pwm-t, pwm-s or gpwm")
      ->check(CLI::IsMember({"pwm-t", "pwm-s", "gpwm"}))
      ->capture_default_str();
  app->add_option("--target", t.target, "mu, sigma, xi or all")
      ->check(CLI::IsMember({"mu", "sigma", "xi", "all"}))
      ->capture_default_str();
  app->add_option("--r", t.r, "Trim: splits k with k < r or n - k < r are excluded")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_flag("--no-recenter", t.no_recenter, "Do not translate the data by the location estimate first");
  app->add_option("--gamma", t.gamma, "Plotting-position constant (default -0.35 for PWM, 0 for GPWM)");
}

// ---- test ---------------------------------------------------------------

struct TestCmd {
  InputOptions in;
  TestOptions t;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  bool detie = false;
  std::string format = "json";
};

int cmd_test(const TestCmd& c, std::ostream& out, std::ostream& err) {
  Sample x = load(c.in);
  const std::size_t n_raw_distinct = x.distinct_count();
  double d = 0.0;
  if (c.detie) {
    d = tie_step(x);
    Rng rng = make_rng(c.seed, "detie", 0);
    x = detie_replicate(x, d, rng);
  } else {
    warn_ties(x, err);
  }
  const TestConfig config = base_config(c.t);
  const auto targets = parse_targets(c.t.target);
  const auto results = run_tests(x, config, targets);
  const bool all = targets.size() == 3;
  const double bonferroni_level = c.alpha / 3.0;
  bool any_bonferroni = false;

  json res = json::array();
  for (const auto& r : results) {
    const bool rej = r.p_value < (all ? bonferroni_level : c.alpha);
    any_bonferroni = any_bonferroni || (all && rej);
    res.push_back({{"test", r.name},
                   {"statistic", r.statistic},
                   {"sigma_hat", r.sigma_hat},
                   {"p_value", r.p_value},
                   {"argmax_k", r.argmax_k},
                   {"left", params_json(r.left_params)},
                   {"right", params_json(r.right_params)},
                   {"skipped_k", r.skipped_k},
                   {"location_shift", r.location_shift},
                   {"rejected", r.p_value < c.alpha}});
  }
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "test";
  j["config"] = test_config_json(config, targets, x.size());
  j["config"]["file"] = c.in.file;
  j["config"]["column"] = c.in.column.empty() ? json(nullptr) : json(c.in.column);
  j["config"]["alpha"] = c.alpha;
  j["config"]["detie"] = c.detie;
  j["config"]["seed"] = c.seed;
  j["data"] = {{"n", x.size()}, {"n_distinct", n_raw_distinct}};
  if (c.detie) j["data"]["tie_step"] = d;
  j["results"] = res;
  if (all) j["bonferroni"] = {{"level", bonferroni_level}, {"reject", any_bonferroni}};

  if (c.format == "json") {
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  out << "n = " << x.size() << ", distinct = " << n_raw_distinct << ", family " << to_string(config.family)
      << ", r = " << config.r << ", gamma = " << fmt(config.resolved_gamma())
      << (config.recenter ? ", recentered" : "") << '\n';
  char line[256];
  std::snprintf(line, sizeof line, "%-12s %12s %12s %10s %6s\n", "test", "statistic", "sigma_hat", "p_value", "k");
  out << line;
  for (const auto& r : results) {
    std::snprintf(line, sizeof line, "%-12s %12.6g %12.6g %10.4f %6zu\n", r.name.c_str(), r.statistic, r.sigma_hat,
                  r.p_value, r.argmax_k);
    out << line;
  }
  if (all)
    out << "Bonferroni at alpha/3 = " << fmt(bonferroni_level) << ": " << (any_bonferroni ? "reject H0" : "do not reject")
        << '\n';
  return kExitOk;
}

// ---- estimate -------------------------------------------------------------

struct EstimateCmd {
  InputOptions in;
  std::string family = "pwm";
  std::optional<double> gamma;
};

int cmd_estimate(const EstimateCmd& c, std::ostream& out, std::ostream& err) {
  const Sample x = load(c.in);
  warn_ties(x, err);
  const bool pwm = c.family == "pwm";
  const double gamma = c.gamma.value_or(pwm ? kDefaultPwmGamma : kDefaultGpwmGamma);

  std::vector<std::pair<std::string, MomentTriple>> triples;
  triples.emplace_back("beta_hat", beta_hat(x.values(), pwm ? Family::Pwm : Family::Gpwm, gamma));
  if (pwm) triples.emplace_back("b_hat", b_hat(x.values()));

  json est = json::array();
  std::vector<std::string> infeasible;
  for (const auto& [name, m] : triples) {
    json e = {{"estimator", name}, {"moments", {m.m1, m.m2, m.m3}}};
    if (name == "beta_hat") e["gamma"] = gamma;
    const GevMapKind approx = pwm ? GevMapKind::PwmApprox : GevMapKind::GpwmApprox;
    const GevMapKind exact = pwm ? GevMapKind::PwmExact : GevMapKind::GpwmExact;
    std::optional<GevParams> a, s;
    try {
      a = to_gev(approx, m);
      e["approx"] = params_json(*a);
    } catch (const Error& ex) {
      e["approx"] = {{"error", ex.what()}};
      infeasible.push_back(name + " approx: " + ex.what());
    }
    try {
      s = to_gev(exact, m);
      e["exact"] = params_json(*s);
    } catch (const Error& ex) {
      e["exact"] = {{"error", ex.what()}};
      infeasible.push_back(name + " exact: " + ex.what());
    }
    if (a && s) e["discrepancy"] = {{"mu", a->mu - s->mu}, {"sigma", a->sigma - s->sigma}, {"xi", a->xi - s->xi}};
    est.push_back(e);
  }
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "estimate";
  j["config"] = {{"file", c.in.file},
                 {"column", c.in.column.empty() ? json(nullptr) : json(c.in.column)},
                 {"family", c.family},
                 {"gamma", gamma}};
  j["data"] = {{"n", x.size()}, {"n_distinct", x.distinct_count()}};
  j["estimates"] = est;
  out << j.dump(2) << '\n';
  for (const auto& msg : infeasible) err << "infeasible: " << msg << '\n';
  return infeasible.empty() ? kExitOk : kExitInfeasible;
}

// ---- detie ----------------------------------------------------------------

struct DetieCmd {
  InputOptions in;
  TestOptions t;
  std::size_t replicates = 1000;
  std::uint64_t seed = 1;
  std::size_t jobs = 0;
  std::string format = "json";
  std::string dataset;
  bool with_replicates = false;
};

int cmd_detie(const DetieCmd& c, std::ostream& out, std::ostream&) {
  const Sample x = load(c.in);
  const TestConfig base = base_config(c.t);
  const auto targets = parse_targets(c.t.target);
  std::vector<TestConfig> tests;
  for (Component t : targets) {
    TestConfig tc = base;
    tc.target = t;
    tests.push_back(tc);
  }
  const std::size_t jobs = c.jobs == 0 ? default_jobs() : c.jobs;
  const DetieReport r = detie_report(x, c.replicates, tests, c.seed, jobs);
  const std::string dataset = c.dataset.empty() ? c.in.file : c.dataset;
  if (c.format == "csv") {
    out << to_table7_csv(r, dataset);
    return kExitOk;
  }
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "detie";
  j["config"] = test_config_json(base, targets, x.size());
  j["config"]["file"] = c.in.file;
  j["config"]["column"] = c.in.column.empty() ? json(nullptr) : json(c.in.column);
  j["config"]["replicates"] = c.replicates;
  j["config"]["seed"] = c.seed;
  j["config"]["dataset"] = dataset;
  j["report"] = to_json(r, c.with_replicates);
  out << j.dump(2) << '\n';
  return kExitOk;
}

// ---- simulate -------------------------------------------------------------

struct SimulateCmd {
  std::string table;
  std::string scenario;
  bool reduced = false;
  std::optional<std::size_t> reps;
  std::uint64_t seed = 20240601;
  std::size_t jobs = 0;
  std::string format = "text";
  bool timing = false;
};

json read_scenario(const std::string& arg) {
  std::string text = arg;
  if (arg.empty() || arg.front() != '{') {
    std::ifstream f(arg);
    if (!f) throw DataError("cannot open scenario file '" + arg + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("scenario JSON is not valid JSON: ") + e.what());
  }
}

int cmd_simulate(const SimulateCmd& c, std::ostream& out, std::ostream&) {
  if (c.table.empty() == c.scenario.empty()) throw UsageError("give exactly one of --table or --scenario");
  if (c.reps && *c.reps == 0) throw UsageError("--reps must be at least 1");
  const std::size_t jobs = c.jobs == 0 ? default_jobs() : c.jobs;

  if (!c.scenario.empty()) {
    if (c.reduced) throw UsageError("--reduced applies to --table only");
    json sj = read_scenario(c.scenario);
    if (c.reps && sj.is_object()) sj["replications"] = *c.reps;
    const Scenario s = scenario_from_json(sj);
    const SimReport rep = run_scenario(s, jobs);
    if (c.format == "csv") {
      out << "# schema_version " << kSchemaVersion << "; config " << to_json(s).dump() << '\n' << to_csv({rep});
      return kExitOk;
    }
    json j = {{"schema_version", kSchemaVersion}, {"command", "simulate"}, {"config", to_json(s)}};
    j["report"] = to_json(rep, c.timing);
    out << j.dump(2) << '\n';
    return kExitOk;
  }

  const TableId id = parse_table_id(c.table);
  const std::size_t reps = c.reps.value_or(c.reduced ? 500 : 1000);
  const auto cells = table_grid(id, c.reduced);
  const TableReport rep = run_table(id, cells, reps, c.seed, jobs);
  const json config = {{"table", to_string(id)}, {"reduced", c.reduced}, {"replications", reps}, {"seed", c.seed}};
  if (c.format == "json") {
    json j = {{"schema_version", kSchemaVersion}, {"command", "simulate"}, {"config", config}};
    j["report"] = to_json(rep, c.timing);
    out << j.dump(2) << '\n';
  } else if (c.format == "csv") {
    out << "# schema_version " << kSchemaVersion << "; config " << config.dump() << '\n' << diff_csv(rep);
  } else {
    out << "# config " << config.dump() << '\n' << diff_text(rep);
    if (c.timing) {
      double total = 0.0;
      for (const auto& r : rep.reports) total += r.wall_seconds;
      out << "wall time " << fmt(total, "%.2f") << " s\n";
    }
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Change-point tests for block maxima based on (generalized) probability weighted moments", "bmcp"};
  app.require_subcommand(1);

  TestCmd test;
  auto* t = app.add_subcommand("test", "Run the CUSUM tests on a sample");
  add_input(t, test.in);
  add_test_flags(t, test.t);
  t->add_option("--alpha", test.alpha, "Significance level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  t->add_option("--seed", test.seed, "Seed of the jitter used by --detie")->capture_default_str();
  t->add_flag("--detie", test.detie, "Jitter the data once by U(0, d) before testing");
  t->add_option("--format", test.format, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();

  EstimateCmd est;
  auto* e = app.add_subcommand("estimate", "Estimate GEV parameters from (G)PWM moments");
  add_input(e, est.in);
  e->add_option("--family", est.family, "pwm or gpwm")->check(CLI::IsMember({"pwm", "gpwm"}))->capture_default_str();
  e->add_option("--gamma", est.gamma, "Plotting-position constant (default -0.35 for PWM, 0 for GPWM)");

  DetieCmd det;
  auto* d = app.add_subcommand("detie", "Test many jittered copies of a tied sample; report min/max envelopes");
  add_input(d, det.in);
  add_test_flags(d, det.t);
  d->add_option("--replicates", det.replicates, "Number of de-tied samples")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  d->add_option("--seed", det.seed, "Master seed")->capture_default_str();
  d->add_option("--jobs", det.jobs, "Worker threads (default $BMCP_JOBS or all cores)");
  d->add_option("--format", det.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  d->add_option("--dataset", det.dataset, "Dataset label for the CSV row (default: file name)");
  d->add_flag("--with-replicates", det.with_replicates, "Include every replicate in the JSON report");

  SimulateCmd sim;
  auto* s = app.add_subcommand("simulate", "Monte-Carlo level/power tables");
  s->add_option("--table", sim.table, "T1..T6");
  s->add_option("--scenario", sim.scenario, "Scenario JSON file (or inline JSON object)");
  s->add_flag("--reduced", sim.reduced, "Use the 6-cell subset of the table");
  s->add_option("--reps", sim.reps, "Replications per cell (default 1000, 500 with --reduced)");
  s->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  s->add_option("--jobs", sim.jobs, "Worker threads (default $BMCP_JOBS or all cores); does not change the output");
  s->add_option("--format", sim.format, "text, csv or json")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();
  s->add_flag("--timing", sim.timing, "Report wall time (output then differs between runs)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitDataError;
  }

  try {
    if (t->parsed()) return cmd_test(test, out, err);
    if (e->parsed()) return cmd_estimate(est, out, err);
    if (d->parsed()) return cmd_detie(det, out, err);
    if (s->parsed()) return cmd_simulate(sim, out, err);
  } catch (const InfeasibleError& ex) {
    err << "infeasible: " << ex.what() << '\n';
    return kExitInfeasible;
  } catch (const SolverError& ex) {
    err << "infeasible: " << ex.what() << '\n';
    return kExitInfeasible;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitDataError;
  } catch (const std::exception& ex) {
    err << "internal error: " << ex.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace bmcp::cli
