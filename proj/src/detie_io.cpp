#include "bmcp/detie_io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "bmcp/errors.hpp"
#include "bmcp/gev_maps.hpp"
#include "bmcp/moments.hpp"
#include "parallel.hpp"

namespace bmcp {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  std::string out = s.substr(a, b - a);
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::optional<double> parse_real(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size() || errno == ERANGE || !std::isfinite(v)) return std::nullopt;
  return v;
}

char detect_delimiter(const std::string& line) {
  char best = '\0';
  long best_count = 0;
  for (char c : {',', ';', '\t'}) {
    const long k = std::count(line.begin(), line.end(), c);
    if (k > best_count) {
      best = c;
      best_count = k;
    }
  }
  return best;
}

std::vector<std::string> split_cells(const std::string& line, char delim) {
  std::vector<std::string> out;
  if (delim == '\0') {
    out.push_back(trim(line));
    return out;
  }
  std::string cur;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') quoted = !quoted;
    if (c == delim && !quoted) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::string fmt(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void widen(Envelope& e, double v) {
  if (e.count == 0) {
    e.min = e.max = v;
  } else {
    e.min = std::min(e.min, v);
    e.max = std::max(e.max, v);
  }
  ++e.count;
}

bool same_except_target(const TestConfig& a, const TestConfig& b) {
  return a.family == b.family && a.r == b.r && a.gamma == b.gamma && a.recenter == b.recenter &&
         a.variance_correction == b.variance_correction && a.engine == b.engine;
}

std::vector<std::optional<double>> run_all(const Sample& x, const std::vector<TestConfig>& tests) {
  std::vector<std::optional<double>> p(tests.size());
  std::vector<bool> done(tests.size(), false);
  for (std::size_t i = 0; i < tests.size(); ++i) {
    if (done[i]) continue;
    std::vector<std::size_t> group;
    std::vector<Component> targets;
    for (std::size_t j = i; j < tests.size(); ++j)
      if (!done[j] && same_except_target(tests[i], tests[j])) {
        group.push_back(j);
        targets.push_back(tests[j].target);
        done[j] = true;
      }
    try {
      const auto results = run_tests(x, tests[i], targets);
      for (std::size_t g = 0; g < group.size(); ++g) p[group[g]] = results[g].p_value;
    } catch (const Error&) {
    }
  }
  return p;
}

}  // namespace

Sample parse_csv(const std::string& text, const ColumnSelector& column, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::pair<std::size_t, std::string>> lines;  // (1-based row, text)
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    lines.emplace_back(row, line);
  }
  if (lines.empty()) throw DataError(source + ": no data");
  const char delim = detect_delimiter(lines.front().second);
  const auto first = split_cells(lines.front().second, delim);

  // Header: some cell of the first row is non-numeric.
  const bool header = std::any_of(first.begin(), first.end(), [](const std::string& c) { return !parse_real(c); });
  std::size_t col = 0;
  std::string col_name;
  if (!column) {
    if (first.size() != 1)
      throw DataError(source + ": " + std::to_string(first.size()) + " columns found; select one by name or index");
  } else if (const auto* idx = std::get_if<std::size_t>(&*column)) {
    if (*idx >= first.size())
      throw DataError(source + ": column index " + std::to_string(*idx) + " out of range (" + std::to_string(first.size()) +
                      " columns)");
    col = *idx;
  } else {
    const std::string& name = std::get<std::string>(*column);
    if (!header) throw DataError(source + ": no header row, cannot select column '" + name + "' by name");
    const auto it = std::find(first.begin(), first.end(), name);
    if (it == first.end()) throw DataError(source + ": no column named '" + name + "'");
    col = static_cast<std::size_t>(it - first.begin());
  }
  col_name = header ? first[col] : std::to_string(col + 1);

  std::vector<double> values;
  for (std::size_t i = header ? 1 : 0; i < lines.size(); ++i) {
    const auto cells = split_cells(lines[i].second, delim);
    const std::string where = source + ": row " + std::to_string(lines[i].first) + ", column '" + col_name + "'";
    if (col >= cells.size()) throw DataError(where + ": missing cell");
    const auto v = parse_real(cells[col]);
    if (!v) throw DataError(where + ": cannot parse '" + cells[col] + "' as a finite number");
    values.push_back(*v);
  }
  if (values.empty()) throw DataError(source + ": column '" + col_name + "' has no values");
  return Sample(std::move(values));
}

Sample load_csv(const std::string& path, const ColumnSelector& column) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError(path + ": cannot open file");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_csv(ss.str(), column, path);
}

double tie_step(const Sample& sample) {
  const auto v = sample.sorted();
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1]) d = std::min(d, v[i] - v[i - 1]);
  if (!std::isfinite(d)) throw DataError("all values are equal; no tie step");
  return d;
}

Sample detie_replicate(const Sample& sample, double d, Rng& rng) {
  if (!(d > 0.0) || !std::isfinite(d)) throw PreconditionError("tie step d must be positive");
  std::vector<double> v(sample.begin(), sample.end());
  for (double& x : v) x += d * uniform_open(rng);
  return Sample(std::move(v));
}

std::vector<TestConfig> default_detie_tests() {
  std::vector<TestConfig> out;
  for (Component c : {Component::Mu, Component::Sigma, Component::Xi}) {
    TestConfig t;
    t.family = TestFamily::PwmT;
    t.target = c;
    out.push_back(t);
  }
  return out;
}

DetieReport detie_report(const Sample& sample, std::size_t replications, const std::vector<TestConfig>& tests,
                         std::uint64_t seed, std::size_t jobs) {
  if (replications < 1) throw PreconditionError("replications must be at least 1");
  if (tests.empty()) throw PreconditionError("no tests to run");
  for (const auto& t : tests) t.validate(sample.size());
  DetieReport r;
  r.n = sample.size();
  r.n_distinct = sample.distinct_count();
  r.d = tie_step(sample);
  r.seed = seed;
  r.tests = tests;
  for (const auto& t : tests) r.test_names.push_back(to_string(t.family) + "/" + to_string(t.target));
  r.replicates.resize(replications);
  detail::parallel_for(replications, jobs, [&](std::size_t i) {
    Rng rng = make_rng(seed, "detie", i);
    const Sample x = detie_replicate(sample, r.d, rng);
    DetieReplicate& rep = r.replicates[i];
    rep.p_values = run_all(x, tests);
    try {
      rep.estimate = pwm_to_gev_approx(b_hat(x.values()));
    } catch (const Error&) {
    }
  });

  r.p_value_envelopes.assign(tests.size(), Envelope{});
  r.test_failures.assign(tests.size(), 0);
  for (const auto& rep : r.replicates) {
    for (std::size_t t = 0; t < tests.size(); ++t) {
      if (rep.p_values[t]) widen(r.p_value_envelopes[t], *rep.p_values[t]);
      else ++r.test_failures[t];
    }
    if (rep.estimate) {
      widen(r.estimate_envelopes[0], rep.estimate->mu);
      widen(r.estimate_envelopes[1], rep.estimate->sigma);
      widen(r.estimate_envelopes[2], rep.estimate->xi);
    } else {
      ++r.estimate_failures;
    }
  }
  return r;
}

nlohmann::json to_json(const DetieReport& r, bool with_replicates) {
  using nlohmann::json;
  auto env = [](const Envelope& e) -> json {
    if (e.count == 0) return nullptr;
    return {{"min", e.min}, {"max", e.max}, {"count", e.count}};
  };
  json j;
  j["n"] = r.n;
  j["n_distinct"] = r.n_distinct;
  j["d"] = r.d;
  j["seed"] = r.seed;
  j["replications"] = r.replicates.size();
  j["estimates"] = {{"mu", env(r.estimate_envelopes[0])},
                    {"sigma", env(r.estimate_envelopes[1])},
                    {"xi", env(r.estimate_envelopes[2])},
                    {"failures", r.estimate_failures}};
  json tests = json::array();
  for (std::size_t t = 0; t < r.tests.size(); ++t)
    tests.push_back({{"test", r.test_names[t]}, {"p_value", env(r.p_value_envelopes[t])}, {"failures", r.test_failures[t]}});
  j["tests"] = tests;
  if (with_replicates) {
    json reps = json::array();
    for (const auto& rep : r.replicates) {
      json p = json::array();
      for (const auto& v : rep.p_values) p.push_back(v ? json(*v) : json(nullptr));
      json e = rep.estimate ? json{{"mu", rep.estimate->mu}, {"sigma", rep.estimate->sigma}, {"xi", rep.estimate->xi}}
                            : json(nullptr);
      reps.push_back({{"p_values", p}, {"estimate", e}});
    }
    j["replicates"] = reps;
  }
  return j;
}

std::string to_table7_csv(const DetieReport& r, const std::string& dataset) {
  std::ostringstream os;
  os << "dataset,n,n_distinct,mu_min,mu_max,sigma_min,sigma_max,xi_min,xi_max";
  for (const auto& name : r.test_names) os << ",p_" << name << "_min,p_" << name << "_max";
  os << '\n' << dataset << ',' << r.n << ',' << r.n_distinct;
  for (const auto& e : r.estimate_envelopes) {
    if (e.count == 0) os << ",,";
    else os << ',' << fmt(e.min, 2) << ',' << fmt(e.max, 2);
  }
  for (const auto& e : r.p_value_envelopes) {
    if (e.count == 0) os << ",,";
    else os << ',' << fmt(e.min, 3) << ',' << fmt(e.max, 3);
  }
  os << '\n';
  return os.str();
}

}  // namespace bmcp
