#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "acwall/sdelab.hpp"

namespace acwall {

struct DriftFit {
    std::vector<double> bin_centers;
    std::vector<double> mean;  // conditional mean increment per unit time
    std::vector<double> se;
    std::vector<std::size_t> counts;
};

struct DriftBinning {
    std::size_t bins = 20;
    std::size_t lag = 1;
    std::size_t min_count = 200;
    // Bin range; defaults to the range of the sampled starting values.
    std::optional<double> lo;
    std::optional<double> hi;
};

/// E[Y(t + lag dt) - Y(t) | Y(t) in bin] / (lag dt) over all start indices of
/// all paths. Bins with fewer than min_count samples are dropped. Standard
/// errors treat the samples as independent.
DriftFit estimate_drift(std::span<const Path> paths, const DriftBinning& binning);

/// Realised quadratic variation over the horizon. Needs at least 100 increments.
double estimate_diffusion(const Path& p);

struct KsResult {
    double statistic;
    double p_value;
};

/// Asymptotic Kolmogorov tail Q(x) = 2 sum (-1)^{k-1} e^{-2 k^2 x^2}.
double kolmogorov_tail(double x);

/// Two-sample test, p-value from the Kolmogorov limit at
/// (sqrt(ne) + 0.12 + 0.11 / sqrt(ne)) D with ne = n m / (n + m).
KsResult ks_two_sample(std::span<const double> x, std::span<const double> y);

/// One-sample test against a continuous cdf, same p-value convention with ne = n.
KsResult ks_one_sample(std::span<const double> x, const std::function<double(double)>& cdf);

/// max_k |p_k - q_k|; the paths must share dt and length.
double sup_distance(const Path& p, const Path& q);

/// sup |p(t) - p(s)| over grid times s, t in [0, T] with |t - s| < delta, i.e.
/// lags up to ceil(delta / dt) - 1 steps. Sliding min/max deques, O(n).
/// Throws Resolution when delta < dt and Validation when T exceeds the horizon.
double modulus_of_continuity(const Path& p, double delta, double T);

struct LineFit {
    double slope;
    double intercept;
    double slope_se;
    double intercept_se;
};

/// Weighted least squares y = slope x + intercept; weights default to 1.
LineFit fit_line(std::span<const double> x, std::span<const double> y, std::span<const double> w = {});

/// CSV bin,mean,se,count plus sidecar.
void write_drift_csv(const std::string& file, const DriftFit& fit, const std::string& config_hash = "");

}  // namespace acwall
