#include "retrobell/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace retrobell {

namespace {

std::vector<double> to_mass(std::span<const double> counts) {
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  std::vector<double> m(counts.begin(), counts.end());
  if (total > 0.0) {
    for (double& x : m) x /= total;
  }
  return m;
}

// Draws `n` items from the categorical distribution `mass` and returns the
// per-category counts.
std::vector<double> multinomial(long n, std::span<const double> mass, Rng& rng) {
  std::vector<double> out(mass.size(), 0.0);
  double remaining_mass = 1.0;
  long remaining = n;
  for (std::size_t k = 0; k < mass.size() && remaining > 0; ++k) {
    if (k + 1 == mass.size() || remaining_mass <= 0.0) {
      out[k] = static_cast<double>(remaining);
      remaining = 0;
      break;
    }
    const double p = std::clamp(mass[k] / remaining_mass, 0.0, 1.0);
    std::binomial_distribution<long> draw(remaining, p);
    const long c = p > 0.0 ? draw(rng) : 0;
    out[k] = static_cast<double>(c);
    remaining -= c;
    remaining_mass -= mass[k];
  }
  return out;
}

double sd_of(const std::vector<double>& xs, double mean) {
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

MeanEstimate mean_estimate(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("need at least two values for a mean estimate");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("KS test needs non-empty samples");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("KS test needs a non-empty sample");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_coefficient(double alpha) { return std::sqrt(-0.5 * std::log(0.5 * alpha)); }

double ks_critical(double alpha, std::size_t n) {
  return ks_coefficient(alpha) / std::sqrt(static_cast<double>(n));
}

double ks_critical(double alpha, std::size_t n, std::size_t m) {
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  return ks_coefficient(alpha) * std::sqrt((dn + dm) / (dn * dm));
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("TV distance needs equal-length vectors");
  double acc = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) acc += std::abs(p[k] - q[k]);
  return 0.5 * acc;
}

double total_variation(const DensityHistogram& a, const DensityHistogram& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("TV distance needs histograms on one grid");
  const auto ma = a.mass();
  const auto mb = b.mass();
  return total_variation(ma, mb);
}

TvBootstrap bootstrap_tv(std::span<const double> counts_a, std::span<const double> counts_b,
                         int resamples, Rng& rng) {
  if (counts_a.size() != counts_b.size()) throw std::invalid_argument("bootstrap needs equal-length counts");
  if (resamples < 2) throw std::invalid_argument("bootstrap needs at least two resamples");
  const long na = std::lround(std::accumulate(counts_a.begin(), counts_a.end(), 0.0));
  const long nb = std::lround(std::accumulate(counts_b.begin(), counts_b.end(), 0.0));
  if (na < 1 || nb < 1) throw std::invalid_argument("bootstrap needs non-empty histograms");

  const auto mass_a = to_mass(counts_a);
  const auto mass_b = to_mass(counts_b);
  std::vector<double> pooled(counts_a.size());
  for (std::size_t k = 0; k < pooled.size(); ++k) pooled[k] = counts_a[k] + counts_b[k];
  const auto mass_pooled = to_mass(pooled);

  std::vector<double> own(static_cast<std::size_t>(resamples));
  std::vector<double> null(static_cast<std::size_t>(resamples));
  for (int r = 0; r < resamples; ++r) {
    own[r] = total_variation(to_mass(multinomial(na, mass_a, rng)), to_mass(multinomial(nb, mass_b, rng)));
    null[r] = total_variation(to_mass(multinomial(na, mass_pooled, rng)),
                              to_mass(multinomial(nb, mass_pooled, rng)));
  }
  const double own_mean = std::accumulate(own.begin(), own.end(), 0.0) / resamples;
  const double null_mean = std::accumulate(null.begin(), null.end(), 0.0) / resamples;
  return {sd_of(own, own_mean), null_mean, sd_of(null, null_mean)};
}

TvBootstrap bootstrap_tv(const DensityHistogram& a, const DensityHistogram& b, int resamples,
                         Rng& rng) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("bootstrap needs histograms on one grid");
  // Raw weights (counts) including under/overflow cells.
  auto counts = [](const DensityHistogram& h) {
    std::vector<double> c;
    c.reserve(h.weights().size() + 2);
    c.push_back(h.underflow());
    c.insert(c.end(), h.weights().begin(), h.weights().end());
    c.push_back(h.overflow());
    return c;
  };
  const auto ca = counts(a);
  const auto cb = counts(b);
  return bootstrap_tv(ca, cb, resamples, rng);
}

}  // namespace retrobell
