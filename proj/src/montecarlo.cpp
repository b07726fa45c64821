#include "bmcp/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "bmcp/baselines.hpp"
#include "bmcp/errors.hpp"
#include "paper_tables_data.hpp"
#include "parallel.hpp"

namespace bmcp {
namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string family_prefix(TestKind k) {
  switch (k) {
    case TestKind::PwmT: return "pwm-t";
    case TestKind::PwmS: return "pwm-s";
    case TestKind::GpwmS: return "gpwm";
    case TestKind::Mean: return "mean";
    case TestKind::Variance: return "variance";
  }
  return "?";
}

struct Outcome {
  bool rejected = false;
  bool failed = false;
  std::size_t skipped = 0;
};

// All tests of one replicate. Cusum columns sharing family, r and
// recentering are evaluated in one pass.
std::vector<Outcome> run_replicate(const Scenario& s, std::size_t index) {
  Rng rng = make_rng(s.master_seed, s.name, index);
  const Sample x = generate(s, rng);
  std::vector<Outcome> out(s.tests.size());
  std::vector<bool> done(s.tests.size(), false);
  for (std::size_t i = 0; i < s.tests.size(); ++i) {
    if (done[i]) continue;
    const TestSpec& spec = s.tests[i];
    if (!spec.is_cusum()) {
      done[i] = true;
      try {
        const TestResult r = spec.kind == TestKind::Mean ? mean_cusum(x, spec.r) : variance_cusum(x, spec.r);
        out[i].rejected = r.p_value < s.level;
      } catch (const Error&) {
        out[i].failed = true;
      }
      continue;
    }
    std::vector<std::size_t> group;
    std::vector<Component> targets;
    for (std::size_t j = i; j < s.tests.size(); ++j) {
      const TestSpec& o = s.tests[j];
      if (!done[j] && o.kind == spec.kind && o.r == spec.r && o.recenter == spec.recenter) {
        group.push_back(j);
        targets.push_back(o.target);
        done[j] = true;
      }
    }
    try {
      const auto results = run_tests(x, spec.config(), targets);
      for (std::size_t g = 0; g < group.size(); ++g) {
        out[group[g]].rejected = results[g].p_value < s.level;
        out[group[g]].skipped = results[g].skipped_k.size();
      }
    } catch (const Error&) {
      for (std::size_t j : group) out[j].failed = true;
    }
  }
  return out;
}

struct PaperRow {
  std::string table;
  double xi = 0.0;
  std::optional<double> xi_before;
  std::size_t n = 0;
  std::optional<double> t;
  std::map<std::string, double> values;
};

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

// Column name in the reference CSV -> test name.
std::string column_test_name(const std::string& col) {
  if (col == "mean" || col == "variance") return col;
  static const std::pair<const char*, const char*> prefixes[] = {{"pwm_t_", "pwm-t/"}, {"gpwm_s_", "gpwm/"}};
  for (const auto& [from, to] : prefixes) {
    const std::string f = from;
    if (col.rfind(f, 0) == 0) return to + col.substr(f.size());
  }
  return "";
}

const std::vector<PaperRow>& paper_rows() {
  static const std::vector<PaperRow> rows = [] {
    std::vector<PaperRow> out;
    std::istringstream in{std::string(detail::kPaperTablesCsv)};
    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      auto cells = split(line, ',');
      if (header.empty()) {
        header = cells;
        continue;
      }
      PaperRow row;
      for (std::size_t c = 0; c < cells.size() && c < header.size(); ++c) {
        const std::string& h = header[c];
        const std::string& v = cells[c];
        if (h == "table") row.table = v;
        else if (h == "xi") row.xi = std::stod(v);
        else if (h == "xi_before") { if (!v.empty()) row.xi_before = std::stod(v); }
        else if (h == "n") row.n = std::stoul(v);
        else if (h == "t") { if (!v.empty()) row.t = std::stod(v); }
        else if (!v.empty()) {
          const std::string test = column_test_name(h);
          if (!test.empty()) row.values[test] = std::stod(v);
        }
      }
      out.push_back(std::move(row));
    }
    return out;
  }();
  return rows;
}

bool same(const std::optional<double>& a, const std::optional<double>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || std::abs(*a - *b) < 1e-9;
}

std::size_t get_count(const json& j, const char* key, std::size_t def, const std::string& ptr) {
  if (!j.contains(key)) return def;
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw DataError("scenario JSON " + ptr + "/" + key + ": expected a non-negative integer");
  return v.get<std::size_t>();
}

double get_real(const json& j, const char* key, double def, const std::string& ptr) {
  if (!j.contains(key)) return def;
  const auto& v = j.at(key);
  if (!v.is_number()) throw DataError("scenario JSON " + ptr + "/" + key + ": expected a number");
  return v.get<double>();
}

}  // namespace

std::string TestSpec::name() const {
  if (!is_cusum()) return family_prefix(kind);
  return family_prefix(kind) + "/" + to_string(target);
}

TestSpec TestSpec::parse(const std::string& name) {
  TestSpec s;
  if (name == "mean" || name == "variance") {
    s.kind = name == "mean" ? TestKind::Mean : TestKind::Variance;
    return s;
  }
  const auto slash = name.find('/');
  if (slash == std::string::npos) throw PreconditionError("unknown test '" + name + "'");
  const std::string fam = name.substr(0, slash);
  const std::string tgt = name.substr(slash + 1);
  if (fam == "pwm-t") s.kind = TestKind::PwmT;
  else if (fam == "pwm-s") s.kind = TestKind::PwmS;
  else if (fam == "gpwm") s.kind = TestKind::GpwmS;
  else throw PreconditionError("unknown test family '" + fam + "' in '" + name + "'");
  if (tgt == "mu") s.target = Component::Mu;
  else if (tgt == "sigma") s.target = Component::Sigma;
  else if (tgt == "xi") s.target = Component::Xi;
  else throw PreconditionError("unknown target '" + tgt + "' in '" + name + "'");
  return s;
}

TestConfig TestSpec::config() const {
  TestConfig c;
  c.family = kind == TestKind::PwmS ? TestFamily::PwmS : (kind == TestKind::GpwmS ? TestFamily::GpwmS : TestFamily::PwmT);
  c.target = target;
  c.r = r;
  c.recenter = recenter;
  return c;
}

std::vector<TestSpec> paper_tests(bool with_baselines) {
  std::vector<TestSpec> out;
  if (with_baselines) {
    out.push_back(TestSpec::parse("mean"));
    out.push_back(TestSpec::parse("variance"));
  }
  for (const char* name : {"pwm-t/mu", "pwm-t/sigma", "pwm-t/xi", "gpwm/mu", "gpwm/sigma", "gpwm/xi"})
    out.push_back(TestSpec::parse(name));
  return out;
}

void Scenario::validate() const {
  if (name.empty()) throw PreconditionError("scenario needs a name (it seeds the replicates)");
  if (n < 2) throw PreconditionError("scenario n must be at least 2");
  if (block_size < 1) throw PreconditionError("block_size must be at least 1");
  if (replications < 1) throw PreconditionError("replications must be at least 1");
  if (!(level > 0.0 && level < 1.0)) throw PreconditionError("level must lie in (0, 1)");
  if (tests.empty()) throw PreconditionError("scenario has no tests");
  bmcp::validate(before);
  if (after) {
    bmcp::validate(*after);
    if (!(t > 0.0 && t < 1.0)) throw PreconditionError("change fraction t must lie in (0, 1)");
  }
  for (const auto& spec : tests)
    if (spec.r < 1 || 2 * spec.r > n)
      throw PreconditionError("test " + spec.name() + ": r = " + std::to_string(spec.r) + " incompatible with n = " +
                              std::to_string(n));
}

std::size_t Scenario::change_index() const {
  if (!after) return n;
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * t));
}

Sample generate(const Scenario& s, Rng& rng) {
  const std::size_t k = s.change_index();
  std::vector<double> v;
  v.reserve(s.n);
  if (k > 0) {
    const Sample a = sample_block_maxima(k, s.block_size, s.before, rng);
    v.insert(v.end(), a.begin(), a.end());
  }
  if (k < s.n) {
    const Sample b = sample_block_maxima(s.n - k, s.block_size, *s.after, rng);
    v.insert(v.end(), b.begin(), b.end());
  }
  return Sample(std::move(v));
}

std::size_t default_jobs() {
  if (const char* env = std::getenv("BMCP_JOBS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

SimReport run_scenario(const Scenario& s, std::size_t jobs) {
  s.validate();
  if (jobs == 0) jobs = default_jobs();
  const auto start = std::chrono::steady_clock::now();

  std::vector<std::vector<Outcome>> outcomes(s.replications);
  detail::parallel_for(s.replications, jobs, [&](std::size_t i) { outcomes[i] = run_replicate(s, i); });

  SimReport report;
  report.scenario = s;
  for (std::size_t t = 0; t < s.tests.size(); ++t) {
    TestTally tally;
    tally.name = s.tests[t].name();
    for (const auto& rep : outcomes) {
      const Outcome& o = rep[t];
      tally.rejections += o.rejected;
      tally.failures += o.failed;
      tally.replicates_with_skips += o.skipped > 0;
      tally.skipped_splits += o.skipped;
    }
    const double p = static_cast<double>(tally.rejections) / static_cast<double>(s.replications);
    tally.percent = 100.0 * p;
    tally.mc_se = 100.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(s.replications));
    report.tests.push_back(tally);
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string to_string(TableId t) { return "T" + std::to_string(static_cast<int>(t) + 1); }

TableId parse_table_id(const std::string& s) {
  if (s.size() == 2 && (s[0] == 'T' || s[0] == 't') && s[1] >= '1' && s[1] <= '6')
    return static_cast<TableId>(s[1] - '1');
  throw PreconditionError("unknown table '" + s + "' (expected T1..T6)");
}

std::vector<GridCell> table_grid(TableId id, bool reduced) {
  std::vector<GridCell> out;
  if (!reduced) {
    const std::string name = to_string(id);
    for (const auto& row : paper_rows())
      if (row.table == name)
        out.push_back({row.xi, id == TableId::T4 ? row.xi_before : std::nullopt, row.n, row.t});
    return out;
  }
  switch (id) {
    case TableId::T1:
    case TableId::T2:
      for (std::size_t n : {100, 200})
        for (double xi : {-0.4, 0.0, 0.2}) out.push_back({xi, std::nullopt, n, std::nullopt});
      break;
    case TableId::T3:
      for (double xi : {0.0, 0.4})
        for (double t : {0.25, 0.5, 0.75}) out.push_back({xi, std::nullopt, 200, t});
      break;
    case TableId::T4:
      for (std::size_t n : {100, 200}) {
        out.push_back({0.4, 0.0, n, 0.5});
        out.push_back({0.6, 0.0, n, 0.5});
        out.push_back({0.6, 0.2, n, 0.5});
      }
      break;
    case TableId::T5:
    case TableId::T6:
      for (std::size_t n : {100, 200})
        for (double xi : {-0.4, 0.0, 0.4}) out.push_back({xi, std::nullopt, n, 0.5});
      break;
  }
  return out;
}

Scenario table_scenario(TableId id, const GridCell& cell, std::size_t replications, std::uint64_t seed) {
  Scenario s;
  s.name = to_string(id) + " xi=" + num(cell.xi);
  if (cell.xi_before) s.name += " xi_before=" + num(*cell.xi_before);
  s.name += " n=" + std::to_string(cell.n);
  if (cell.t) s.name += " t=" + num(*cell.t);
  s.n = cell.n;
  s.replications = replications;
  s.master_seed = seed;
  s.t = cell.t.value_or(0.5);
  const bool change = id != TableId::T1 && id != TableId::T2;
  if (change && !cell.t) throw PreconditionError(to_string(id) + " cells need a change fraction t");
  if (id == TableId::T4 && !cell.xi_before) throw PreconditionError("T4 cells need xi_before");
  switch (id) {
    case TableId::T1: s.before = GevParams{0.0, 1.0, cell.xi}; break;
    case TableId::T2: s.before = GpdParams{1.0, cell.xi}; break;
    case TableId::T3:
      s.before = GevParams{0.0, 1.0, -0.4};
      s.after = GevParams{0.0, 1.0, cell.xi};
      break;
    case TableId::T4:
      s.before = GevParams{0.0, 1.0, *cell.xi_before};
      s.after = GevParams{0.0, 1.0, cell.xi};
      break;
    case TableId::T5:
      s.before = GevParams{0.0, 0.5, cell.xi};
      s.after = GevParams{0.0, 1.0, cell.xi};
      break;
    case TableId::T6:
      s.before = GevParams{0.0, 1.0, cell.xi};
      s.after = GevParams{0.5, 1.0, cell.xi};
      break;
  }
  s.tests = paper_tests(change);
  return s;
}

std::map<std::string, double> paper_values(TableId id, const GridCell& cell) {
  const std::string name = to_string(id);
  for (const auto& row : paper_rows())
    if (row.table == name && std::abs(row.xi - cell.xi) < 1e-9 && row.n == cell.n &&
        (id != TableId::T4 || same(row.xi_before, cell.xi_before)) && same(row.t, cell.t))
      return row.values;
  return {};
}

TableReport run_table(TableId id, const std::vector<GridCell>& cells, std::size_t replications,
                      std::uint64_t seed, std::size_t jobs) {
  if (cells.empty()) throw PreconditionError("table grid is empty");
  TableReport out;
  out.table = id;
  out.cells = cells;
  for (const auto& cell : cells) {
    out.reports.push_back(run_scenario(table_scenario(id, cell, replications, seed), jobs));
    out.paper.push_back(paper_values(id, cell));
  }
  return out;
}

json to_json(const Distribution& d) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, GevParams>) return {{"family", "gev"}, {"mu", p.mu}, {"sigma", p.sigma}, {"xi", p.xi}};
        else if constexpr (std::is_same_v<T, GpdParams>) return {{"family", "gpd"}, {"sigma", p.sigma}, {"xi", p.xi}};
        else if constexpr (std::is_same_v<T, AbsStudentT>) return {{"family", "abs_t"}, {"df", p.df}};
        else if constexpr (std::is_same_v<T, Normal>) return {{"family", "normal"}, {"mean", p.mean}, {"sd", p.sd}};
        else return {{"family", "exponential"}, {"rate", p.rate}};
      },
      d);
}

Distribution distribution_from_json(const json& j, const std::string& ptr) {
  if (!j.is_object()) throw DataError("scenario JSON " + ptr + ": expected an object");
  if (!j.contains("family") || !j.at("family").is_string())
    throw DataError("scenario JSON " + ptr + "/family: expected one of gev, gpd, abs_t, normal, exponential");
  const std::string fam = j.at("family").get<std::string>();
  Distribution d;
  if (fam == "gev") d = GevParams{get_real(j, "mu", 0.0, ptr), get_real(j, "sigma", 1.0, ptr), get_real(j, "xi", 0.0, ptr)};
  else if (fam == "gpd") d = GpdParams{get_real(j, "sigma", 1.0, ptr), get_real(j, "xi", 0.0, ptr)};
  else if (fam == "abs_t") {
    if (j.contains("xi") && !j.contains("df")) d = AbsStudentT::from_xi(get_real(j, "xi", 0.0, ptr));
    else d = AbsStudentT{get_real(j, "df", 1.0, ptr)};
  } else if (fam == "normal") d = Normal{get_real(j, "mean", 0.0, ptr), get_real(j, "sd", 1.0, ptr)};
  else if (fam == "exponential") d = Exponential{get_real(j, "rate", 1.0, ptr)};
  else throw DataError("scenario JSON " + ptr + "/family: unknown family '" + fam + "'");
  try {
    validate(d);
  } catch (const PreconditionError& e) {
    throw DataError("scenario JSON " + ptr + ": " + e.what());
  }
  return d;
}

json to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["n"] = s.n;
  j["before"] = to_json(s.before);
  if (s.after) {
    j["after"] = to_json(*s.after);
    j["t"] = s.t;
  }
  j["block_size"] = s.block_size;
  j["replications"] = s.replications;
  j["level"] = s.level;
  j["seed"] = s.master_seed;
  json tests = json::array();
  for (const auto& t : s.tests) tests.push_back({{"test", t.name()}, {"r", t.r}, {"recenter", t.recenter}});
  j["tests"] = tests;
  return j;
}

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw DataError("scenario JSON /: expected an object");
  static const char* known[] = {"name", "n", "before", "after", "t", "block_size", "replications", "level", "seed", "tests"};
  for (const auto& [key, value] : j.items())
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) == std::end(known))
      throw DataError("scenario JSON /" + key + ": unknown field");
  Scenario s;
  if (!j.contains("name") || !j.at("name").is_string()) throw DataError("scenario JSON /name: expected a string");
  s.name = j.at("name").get<std::string>();
  s.n = get_count(j, "n", s.n, "");
  if (!j.contains("before")) throw DataError("scenario JSON /before: required");
  s.before = distribution_from_json(j.at("before"), "/before");
  if (j.contains("after")) s.after = distribution_from_json(j.at("after"), "/after");
  s.t = get_real(j, "t", s.t, "");
  s.block_size = get_count(j, "block_size", s.block_size, "");
  s.replications = get_count(j, "replications", s.replications, "");
  s.level = get_real(j, "level", s.level, "");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !(j.at("seed").is_number_integer() && j.at("seed").get<long long>() >= 0))
      throw DataError("scenario JSON /seed: expected a non-negative integer");
    s.master_seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("tests")) {
    const auto& arr = j.at("tests");
    if (!arr.is_array()) throw DataError("scenario JSON /tests: expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string ptr = "/tests/" + std::to_string(i);
      const auto& e = arr[i];
      try {
        if (e.is_string()) {
          s.tests.push_back(TestSpec::parse(e.get<std::string>()));
        } else if (e.is_object() && e.contains("test") && e.at("test").is_string()) {
          TestSpec spec = TestSpec::parse(e.at("test").get<std::string>());
          spec.r = get_count(e, "r", spec.r, ptr);
          if (e.contains("recenter")) {
            if (!e.at("recenter").is_boolean()) throw DataError("scenario JSON " + ptr + "/recenter: expected a boolean");
            spec.recenter = e.at("recenter").get<bool>();
          }
          s.tests.push_back(spec);
        } else {
          throw DataError("scenario JSON " + ptr + ": expected a test name or {\"test\": name, ...}");
        }
      } catch (const PreconditionError& err) {
        throw DataError("scenario JSON " + ptr + ": " + err.what());
      }
    }
  } else {
    s.tests = paper_tests(s.after.has_value());
  }
  try {
    s.validate();
  } catch (const PreconditionError& err) {
    throw DataError(std::string("scenario JSON: ") + err.what());
  }
  return s;
}

json to_json(const SimReport& r, bool with_timing) {
  json j;
  j["scenario"] = to_json(r.scenario);
  json tests = json::array();
  for (const auto& t : r.tests)
    tests.push_back({{"test", t.name},
                     {"rejections", t.rejections},
                     {"percent", t.percent},
                     {"mc_se", t.mc_se},
                     {"failures", t.failures},
                     {"replicates_with_skips", t.replicates_with_skips},
                     {"skipped_splits", t.skipped_splits}});
  j["tests"] = tests;
  if (with_timing) j["wall_seconds"] = r.wall_seconds;
  return j;
}

json to_json(const TableReport& r, bool with_timing) {
  json j;
  j["table"] = to_string(r.table);
  json cells = json::array();
  for (std::size_t i = 0; i < r.reports.size(); ++i) {
    json c = to_json(r.reports[i], with_timing);
    json paper = json::object();
    for (const auto& [k, v] : r.paper[i]) paper[k] = v;
    c["paper"] = paper;
    cells.push_back(c);
  }
  j["cells"] = cells;
  return j;
}

std::string to_csv(const std::vector<SimReport>& reports) {
  std::vector<std::string> names;
  for (const auto& r : reports)
    for (const auto& t : r.tests)
      if (std::find(names.begin(), names.end(), t.name) == names.end()) names.push_back(t.name);
  std::ostringstream os;
  os << "scenario,n,before,after,t,block_size,replications,level,seed";
  for (const auto& n : names) os << ',' << n << ',' << n << ":se," << n << ":failures," << n << ":skipped";
  os << '\n';
  for (const auto& r : reports) {
    const Scenario& s = r.scenario;
    os << '"' << s.name << "\"," << s.n << ",\"" << describe(s.before) << "\",";
    if (s.after) os << '"' << describe(*s.after) << "\"," << num(s.t);
    else os << ',';
    os << ',' << s.block_size << ',' << s.replications << ',' << num(s.level) << ',' << s.master_seed;
    for (const auto& n : names) {
      auto it = std::find_if(r.tests.begin(), r.tests.end(), [&](const TestTally& t) { return t.name == n; });
      if (it == r.tests.end()) {
        os << ",,,,";
        continue;
      }
      os << ',' << fixed(it->percent, 2) << ',' << fixed(it->mc_se, 3) << ',' << it->failures << ','
         << it->skipped_splits;
    }
    os << '\n';
  }
  return os.str();
}

std::string diff_csv(const TableReport& r) {
  std::ostringstream os;
  os << "table,xi,xi_before,n,t,test,simulated,mc_se,paper,difference\n";
  for (std::size_t i = 0; i < r.reports.size(); ++i) {
    const GridCell& c = r.cells[i];
    for (const auto& t : r.reports[i].tests) {
      os << to_string(r.table) << ',' << num(c.xi) << ',' << (c.xi_before ? num(*c.xi_before) : "") << ',' << c.n
         << ',' << (c.t ? num(*c.t) : "") << ',' << t.name << ',' << fixed(t.percent, 2) << ',' << fixed(t.mc_se, 3)
         << ',';
      auto it = r.paper[i].find(t.name);
      if (it != r.paper[i].end()) os << fixed(it->second, 1) << ',' << fixed(t.percent - it->second, 2);
      else os << ',';
      os << '\n';
    }
  }
  return os.str();
}

std::string diff_text(const TableReport& r) {
  std::ostringstream os;
  if (r.reports.empty()) return "";
  const auto& tests = r.reports.front().tests;
  char buf[64];
  os << to_string(r.table) << ": simulated / paper rejection percentages ("
     << r.reports.front().scenario.replications << " replications, seed " << r.reports.front().scenario.master_seed
     << ")\n";
  std::snprintf(buf, sizeof buf, "%6s %6s %5s %5s", "xi", "from", "n", "t");
  os << buf;
  for (const auto& t : tests) {
    std::snprintf(buf, sizeof buf, " %13s", t.name.c_str());
    os << buf;
  }
  os << '\n';
  for (std::size_t i = 0; i < r.reports.size(); ++i) {
    const GridCell& c = r.cells[i];
    std::snprintf(buf, sizeof buf, "%6s %6s %5zu %5s", num(c.xi).c_str(), c.xi_before ? num(*c.xi_before).c_str() : "",
                  c.n, c.t ? num(*c.t).c_str() : "");
    os << buf;
    for (const auto& t : r.reports[i].tests) {
      auto it = r.paper[i].find(t.name);
      const std::string paper = it != r.paper[i].end() ? fixed(it->second, 1) : "-";
      std::snprintf(buf, sizeof buf, " %13s", (fixed(t.percent, 1) + "/" + paper).c_str());
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace bmcp
