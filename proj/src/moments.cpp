#include "bmcp/moments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bmcp/errors.hpp"
#include "shape_series.hpp"

namespace bmcp {

std::string to_string(Family f) { return f == Family::Pwm ? "pwm" : "gpwm"; }

std::string to_string(Estimator e) {
  switch (e) {
    case Estimator::BetaHat: return "beta_hat";
    case Estimator::BHat: return "b_hat";
    case Estimator::Exact: return "exact";
  }
  return "?";
}

double weight(Family f, int i, double x) {
  if (f == Family::Pwm) {
    switch (i) {
      case 1: return 1.0;
      case 2: return x;
      case 3: return x * x;
    }
  } else {
    const double l = std::log(x);
    switch (i) {
      case 1: return -x * l;
      case 2: return x * l * l;
      case 3: return -x * x * l;
    }
  }
  throw PreconditionError("weight index must be 1, 2 or 3");
}

double weight_derivative(Family f, int i, double x) {
  if (f == Family::Pwm) {
    switch (i) {
      case 1: return 0.0;
      case 2: return 1.0;
      case 3: return 2.0 * x;
    }
  } else {
    const double l = std::log(x);
    switch (i) {
      case 1: return -l - 1.0;
      case 2: return l * l + 2.0 * l;
      case 3: return -2.0 * x * l - x;
    }
  }
  throw PreconditionError("weight index must be 1, 2 or 3");
}

double ecdf(std::span<const double> sample, double x, double gamma) {
  if (sample.empty()) throw PreconditionError("ecdf: empty sample");
  const auto count = std::count_if(sample.begin(), sample.end(), [x](double v) { return v <= x; });
  return (static_cast<double>(count) + gamma) / static_cast<double>(sample.size());
}

MomentTriple beta_hat(std::span<const double> sample, Family family, double gamma) {
  if (sample.empty()) throw PreconditionError("beta_hat: empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sample.size());
  std::array<double, 3> acc{};
  for (double x : sample) {
    const auto count = std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
    const double f = (static_cast<double>(count) + gamma) / n;
    if (family == Family::Gpwm && !(f > 0.0))
      throw PreconditionError("beta_hat: generalized weights need positive ecdf values (gamma too small)");
    for (int i = 0; i < 3; ++i) acc[i] += x * weight(family, i + 1, f);
  }
  return {acc[0] / n, acc[1] / n, acc[2] / n, family, Estimator::BetaHat, gamma};
}

MomentTriple b_hat(std::span<const double> sample) {
  if (sample.size() < 3) throw PreconditionError("b_hat: at least 3 observations are required");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;
  for (std::size_t idx = 0; idx < sorted.size(); ++idx) {
    const double j = static_cast<double>(idx + 1);
    s1 += sorted[idx];
    s2 += (j - 1.0) / (n - 1.0) * sorted[idx];
    s3 += (j - 1.0) * (j - 2.0) / ((n - 1.0) * (n - 2.0)) * sorted[idx];
  }
  return {s1 / n, s2 / n, s3 / n, Family::Pwm, Estimator::BHat, 0.0};
}

MomentTriple exact_pwm_gev(const GevParams& p) {
  p.validate();
  if (!(p.xi < 1.0)) throw PreconditionError("exact_pwm_gev: shape must be below 1 (finite mean)");
  std::array<double, 3> b{};
  for (int i = 1; i <= 3; ++i) {
    // E[max of i copies] = mu + sigma (i^xi Gamma(1-xi) - 1) / xi
    const double shift = detail::expm1_ratio(p.xi, std::log(static_cast<double>(i)), 1).value;
    b[i - 1] = (p.mu + p.sigma * shift) / i;
  }
  return {b[0], b[1], b[2], Family::Pwm, Estimator::Exact, 0.0};
}

MomentTriple exact_gpwm_gev(const GevParams& p) {
  p.validate();
  if (!(p.xi < 2.0)) throw PreconditionError("exact_gpwm_gev: shape must be below 2");
  const double k = detail::expm1_ratio(p.xi, std::log(2.0), 2).value;
  const double b1 = (p.mu + p.sigma * k) / 4.0;
  const double b2 = b1 - p.sigma * gamma_fn(2.0 - p.xi) / std::pow(2.0, 3.0 - p.xi);
  // 2(b1 - b2) / (b1 - 9/4 b3) = xi / (1 - 1.5^xi) = -1 / e(xi), e(xi) = (1.5^xi - 1)/xi
  const double e15 = detail::expm1_ratio(p.xi, std::log(1.5), 0).value;
  const double b3 = 4.0 / 9.0 * (b1 + 2.0 * (b1 - b2) * e15);
  return {b1, b2, b3, Family::Gpwm, Estimator::Exact, 0.0};
}

std::optional<std::string> dxi_violation(const MomentTriple& m) {
  std::ostringstream os;
  os.precision(17);
  if (!(2.0 * m.m2 - m.m1 > 0.0)) {
    os << "2 m2 - m1 > 0 fails (value " << 2.0 * m.m2 - m.m1 << ")";
    return os.str();
  }
  if (!(3.0 * m.m3 - 2.0 * m.m2 > 0.0)) {
    os << "3 m3 - 2 m2 > 0 fails (value " << 3.0 * m.m3 - 2.0 * m.m2 << ")";
    return os.str();
  }
  if (!(-m.m1 + 4.0 * m.m2 - 3.0 * m.m3 > 0.0)) {
    os << "-m1 + 4 m2 - 3 m3 > 0 fails (value " << -m.m1 + 4.0 * m.m2 - 3.0 * m.m3 << ")";
    return os.str();
  }
  return std::nullopt;
}

bool in_dxi(const MomentTriple& m) { return !dxi_violation(m).has_value(); }

std::size_t min_subsample_size(Estimator estimator) { return estimator == Estimator::BHat ? 3 : 1; }

namespace {

// Order-statistic sums of a multiset, kept in a segment tree whose leaves are
// the distinct values of the full sample in increasing order. For an element
// x with tie-inclusive count c = #{X <= x} and sorted position j:
//   sx = sum x, sxc = sum c x, sxc2 = sum c^2 x, sxj = sum j x, sxj2 = sum j^2 x.
struct RankSums {
  double cnt = 0, sx = 0, sxc = 0, sxc2 = 0, sxj = 0, sxj2 = 0;

  static RankSums leaf(double value, double copies) {
    const double m = copies;
    const double s = value * m;
    return {m, s, m * s, m * m * s, value * m * (m + 1) / 2, value * m * (m + 1) * (2 * m + 1) / 6};
  }

  // Ranks of every element of `hi` shift up by lo.cnt.
  static RankSums combine(const RankSums& lo, const RankSums& hi) {
    const double c = lo.cnt;
    return {lo.cnt + hi.cnt,
            lo.sx + hi.sx,
            lo.sxc + hi.sxc + c * hi.sx,
            lo.sxc2 + hi.sxc2 + 2 * c * hi.sxc + c * c * hi.sx,
            lo.sxj + hi.sxj + c * hi.sx,
            lo.sxj2 + hi.sxj2 + 2 * c * hi.sxj + c * c * hi.sx};
  }
};

class RankSumTree {
 public:
  explicit RankSumTree(std::vector<double> distinct) : values_(std::move(distinct)) {
    size_ = 1;
    while (size_ < values_.size()) size_ *= 2;
    nodes_.assign(2 * size_, RankSums{});
    copies_.assign(values_.size(), 0.0);
  }

  void insert(double x) {
    const auto leaf = static_cast<std::size_t>(std::lower_bound(values_.begin(), values_.end(), x) - values_.begin());
    copies_[leaf] += 1.0;
    std::size_t node = size_ + leaf;
    nodes_[node] = RankSums::leaf(values_[leaf], copies_[leaf]);
    for (node /= 2; node >= 1; node /= 2) nodes_[node] = RankSums::combine(nodes_[2 * node], nodes_[2 * node + 1]);
  }

  const RankSums& root() const { return nodes_[1]; }

 private:
  std::vector<double> values_;
  std::vector<double> copies_;
  std::vector<RankSums> nodes_;
  std::size_t size_ = 1;
};

MomentTriple from_rank_sums(const RankSums& s, Estimator estimator, double gamma) {
  const double k = s.cnt;
  if (estimator == Estimator::BHat) {
    // sum (j-1) x and sum (j-1)(j-2) x expressed through sxj, sxj2
    const double w2 = s.sxj - s.sx;
    const double w3 = s.sxj2 - 3.0 * s.sxj + 2.0 * s.sx;
    return {s.sx / k, w2 / (k * (k - 1.0)), w3 / (k * (k - 1.0) * (k - 2.0)), Family::Pwm, Estimator::BHat, 0.0};
  }
  const double b2 = (s.sxc + gamma * s.sx) / (k * k);
  const double b3 = (s.sxc2 + 2.0 * gamma * s.sxc + gamma * gamma * s.sx) / (k * k * k);
  return {s.sx / k, b2, b3, Family::Pwm, Estimator::BetaHat, gamma};
}

// Gpwm weights are not polynomial in the rank, so the sorted subsample is
// kept explicitly and rescanned by tie group.
std::optional<MomentTriple> gpwm_from_sorted(const std::vector<double>& sorted, double gamma) {
  const std::size_t k = sorted.size();
  const double kd = static_cast<double>(k);
  std::array<double, 3> acc{};
  std::size_t start = 0;
  while (start < k) {
    std::size_t stop = start + 1;
    while (stop < k && sorted[stop] == sorted[start]) ++stop;
    const double f = (static_cast<double>(stop) + gamma) / kd;
    if (!(f > 0.0)) return std::nullopt;
    const double group_sum = sorted[start] * static_cast<double>(stop - start);
    for (int i = 0; i < 3; ++i) acc[i] += group_sum * weight(Family::Gpwm, i + 1, f);
    start = stop;
  }
  return MomentTriple{acc[0] / kd, acc[1] / kd, acc[2] / kd, Family::Gpwm, Estimator::BetaHat, gamma};
}

std::optional<MomentTriple> estimate_naive(std::span<const double> sub, Estimator estimator, Family family,
                                           double gamma) {
  if (sub.size() < min_subsample_size(estimator)) return std::nullopt;
  if (estimator == Estimator::BHat) return b_hat(sub);
  try {
    return beta_hat(sub, family, gamma);
  } catch (const PreconditionError&) {
    return std::nullopt;
  }
}

// Walks the sample in `order` (forward for prefixes, backward for suffixes)
// and records the moments of the first k visited values in out[k].
template <class IndexFn>
void incremental_path(std::span<const double> sample, Estimator estimator, Family family, double gamma,
                      IndexFn index_of, std::vector<std::optional<MomentTriple>>& out_by_count) {
  const std::size_t n = sample.size();
  const std::size_t min_size = min_subsample_size(estimator);
  if (estimator == Estimator::BetaHat && family == Family::Gpwm) {
    std::vector<double> sorted;
    sorted.reserve(n);
    for (std::size_t k = 1; k <= n; ++k) {
      const double x = sample[index_of(k - 1)];
      sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), x), x);
      out_by_count[k] = gpwm_from_sorted(sorted, gamma);
    }
    return;
  }
  std::vector<double> distinct(sample.begin(), sample.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  RankSumTree tree(std::move(distinct));
  for (std::size_t k = 1; k <= n; ++k) {
    tree.insert(sample[index_of(k - 1)]);
    if (k >= min_size) out_by_count[k] = from_rank_sums(tree.root(), estimator, gamma);
  }
}

}  // namespace

PrefixSuffixMoments prefix_suffix_moments(std::span<const double> sample, Estimator estimator, Family family,
                                          double gamma, MomentEngine engine) {
  const std::size_t n = sample.size();
  if (n < 2) throw PreconditionError("prefix_suffix_moments: at least 2 observations are required");
  if (estimator == Estimator::Exact) throw PreconditionError("prefix_suffix_moments: needs a sample estimator");
  if (estimator == Estimator::BHat) {
    family = Family::Pwm;
    gamma = 0.0;
  }
  PrefixSuffixMoments out;
  out.prefix.assign(n + 1, std::nullopt);
  out.suffix.assign(n + 1, std::nullopt);

  if (engine == MomentEngine::Naive) {
    for (std::size_t k = 1; k <= n; ++k) {
      out.prefix[k] = estimate_naive(sample.subspan(0, k), estimator, family, gamma);
      out.suffix[k - 1] = estimate_naive(sample.subspan(k - 1), estimator, family, gamma);
    }
    return out;
  }

  incremental_path(sample, estimator, family, gamma, [](std::size_t i) { return i; }, out.prefix);
  // Suffix X_{k+1..n} has n-k elements: record by count, then re-index.
  std::vector<std::optional<MomentTriple>> by_count(n + 1);
  incremental_path(sample, estimator, family, gamma, [n](std::size_t i) { return n - 1 - i; }, by_count);
  for (std::size_t k = 0; k < n; ++k) out.suffix[k] = by_count[n - k];
  return out;
}

}  // namespace bmcp
