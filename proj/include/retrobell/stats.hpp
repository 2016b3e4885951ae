#pragma once

// Estimators and distribution distances shared by the ensemble analyses.

#include <functional>
#include <span>
#include <vector>

#include "retrobell/dynamics.hpp"
#include "retrobell/random.hpp"

namespace retrobell {

struct MeanEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Sample mean and standard error (sample standard deviation / sqrt(n)).
/// Throws std::invalid_argument for fewer than two values.
MeanEstimate mean_estimate(std::span<const double> values);

/// sup |F_a - F_b| between two empirical distributions.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// sup |F_n - F| against a continuous reference CDF.
double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);

/// Asymptotic Kolmogorov critical value c(alpha) = sqrt(-ln(alpha / 2) / 2).
double ks_coefficient(double alpha);
/// Critical statistic for a one-sample test with n samples.
double ks_critical(double alpha, std::size_t n);
/// Critical statistic for a two-sample test with n and m samples.
double ks_critical(double alpha, std::size_t n, std::size_t m);

/// Half the L1 distance between two probability vectors of equal length.
double total_variation(std::span<const double> p, std::span<const double> q);

/// Total variation between the normalized masses of two histograms on the
/// same grid, under/overflow included.
double total_variation(const DensityHistogram& a, const DensityHistogram& b);

struct TvBootstrap {
  double standard_error = 0.0;  ///< spread of TV when each histogram is resampled from itself
  double null_mean = 0.0;       ///< mean TV when both are resampled from the pooled histogram
  double null_sd = 0.0;         ///< spread of that null distribution
};

/// Multinomial bootstrap of the TV distance between two count vectors.
TvBootstrap bootstrap_tv(std::span<const double> counts_a, std::span<const double> counts_b,
                         int resamples, Rng& rng);

TvBootstrap bootstrap_tv(const DensityHistogram& a, const DensityHistogram& b, int resamples,
                         Rng& rng);

}  // namespace retrobell
