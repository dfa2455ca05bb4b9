#include "acwall/stats.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "acwall/error.hpp"
#include "acwall/io.hpp"

namespace acwall {

namespace {

double ks_p_value(double d, double ne) {
    const double s = std::sqrt(ne);
    return kolmogorov_tail((s + 0.12 + 0.11 / s) * d);
}

}  // namespace

DriftFit estimate_drift(std::span<const Path> paths, const DriftBinning& binning) {
    if (paths.empty()) throw Error(ErrorKind::Validation, "paths: empty ensemble");
    if (binning.lag < 1) throw Error(ErrorKind::Validation, "lag: must be >= 1");
    if (binning.bins < 1) throw Error(ErrorKind::Validation, "bins: must be >= 1");
    const std::size_t lag = binning.lag;
    const double dt = paths.front().dt;

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& p : paths) {
        if (p.values.size() < 2) throw Error(ErrorKind::Validation, "paths: each path needs at least two points");
        if (p.dt != dt) throw Error(ErrorKind::Validation, "paths: mixed step sizes");
        for (std::size_t k = 0; k + lag < p.values.size(); ++k) {
            lo = std::min(lo, p.values[k]);
            hi = std::max(hi, p.values[k]);
        }
    }
    if (binning.lo) lo = *binning.lo;
    if (binning.hi) hi = *binning.hi;
    if (!(hi > lo)) throw Error(ErrorKind::Validation, "bin range is empty");

    const std::size_t nb = binning.bins;
    const double width = (hi - lo) / static_cast<double>(nb);
    std::vector<double> s1(nb, 0.0), s2(nb, 0.0);
    std::vector<std::size_t> cnt(nb, 0);
    for (const auto& p : paths) {
        for (std::size_t k = 0; k + lag < p.values.size(); ++k) {
            const double y = p.values[k];
            if (y < lo || y > hi) continue;
            const std::size_t b = std::min(nb - 1, static_cast<std::size_t>((y - lo) / width));
            const double inc = p.values[k + lag] - y;
            s1[b] += inc;
            s2[b] += inc * inc;
            ++cnt[b];
        }
    }

    DriftFit fit;
    const double span = static_cast<double>(lag) * dt;
    for (std::size_t b = 0; b < nb; ++b) {
        if (cnt[b] < binning.min_count) continue;
        const double n = static_cast<double>(cnt[b]);
        const double mean = s1[b] / n;
        const double var = std::max(0.0, (s2[b] - n * mean * mean) / (n - 1.0));
        fit.bin_centers.push_back(lo + (static_cast<double>(b) + 0.5) * width);
        fit.mean.push_back(mean / span);
        fit.se.push_back(std::sqrt(var / n) / span);
        fit.counts.push_back(cnt[b]);
    }
    return fit;
}

double estimate_diffusion(const Path& p) {
    if (p.steps() < 100) throw Error(ErrorKind::Validation, "path: at least 100 increments are needed");
    double qv = 0.0;
    for (std::size_t k = 0; k + 1 < p.values.size(); ++k) {
        const double d = p.values[k + 1] - p.values[k];
        qv += d * d;
    }
    return qv / p.horizon();
}

double kolmogorov_tail(double x) {
    if (x < 0.2) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += sign * term;
        if (term < 1e-17) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> x, std::span<const double> y) {
    if (x.empty() || y.empty()) throw Error(ErrorKind::Validation, "ks: empty sample");
    std::vector<double> a(x.begin(), x.end()), b(y.begin(), y.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nbd = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nbd));
    }
    return {d, ks_p_value(d, na * nbd / (na + nbd))};
}

KsResult ks_one_sample(std::span<const double> x, const std::function<double(double)>& cdf) {
    if (x.empty()) throw Error(ErrorKind::Validation, "ks: empty sample");
    std::vector<double> a(x.begin(), x.end());
    std::sort(a.begin(), a.end());
    const double n = static_cast<double>(a.size());
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double f = cdf(a[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return {d, ks_p_value(d, n)};
}

double sup_distance(const Path& p, const Path& q) {
    if (p.values.size() != q.values.size() || p.dt != q.dt) {
        throw Error(ErrorKind::Validation, "sup_distance: paths differ in length or step");
    }
    double d = 0.0;
    for (std::size_t k = 0; k < p.values.size(); ++k) d = std::max(d, std::abs(p.values[k] - q.values[k]));
    return d;
}

double modulus_of_continuity(const Path& p, double delta, double T) {
    if (delta < p.dt) throw Error(ErrorKind::Resolution, "modulus: delta is below the path step");
    if (T > p.horizon() * (1.0 + 1e-12)) throw Error(ErrorKind::Validation, "modulus: T exceeds the path horizon");
    const std::size_t last = std::min(p.steps(), static_cast<std::size_t>(std::floor(T / p.dt + 1e-9)));
    const auto k_max = static_cast<std::size_t>(std::ceil(delta / p.dt * (1.0 - 1e-12))) - 1;
    if (k_max == 0) return 0.0;

    // Each window [k - k_max, k] holds every pair with lag <= k_max ending at k.
    std::deque<std::size_t> maxq, minq;
    double w = 0.0;
    for (std::size_t k = 0; k <= last; ++k) {
        const double v = p.values[k];
        while (!maxq.empty() && p.values[maxq.back()] <= v) maxq.pop_back();
        while (!minq.empty() && p.values[minq.back()] >= v) minq.pop_back();
        maxq.push_back(k);
        minq.push_back(k);
        if (k >= k_max) {
            const std::size_t start = k - k_max;
            while (maxq.front() < start) maxq.pop_front();
            while (minq.front() < start) minq.pop_front();
        }
        w = std::max(w, p.values[maxq.front()] - p.values[minq.front()]);
    }
    return w;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y, std::span<const double> w) {
    if (x.size() != y.size() || x.size() < 2 || (!w.empty() && w.size() != x.size())) {
        throw Error(ErrorKind::Validation, "fit_line: need at least two points of matching length");
    }
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double wi = w.empty() ? 1.0 : w[i];
        sw += wi;
        sx += wi * x[i];
        sy += wi * y[i];
        sxx += wi * x[i] * x[i];
        sxy += wi * x[i] * y[i];
    }
    const double det = sw * sxx - sx * sx;
    if (!(det > 0.0)) throw Error(ErrorKind::Validation, "fit_line: degenerate abscissae");
    LineFit f;
    f.slope = (sw * sxy - sx * sy) / det;
    f.intercept = (sxx * sy - sx * sxy) / det;
    if (w.empty()) {
        // Residual-based errors for unweighted fits.
        double rss = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - f.slope * x[i] - f.intercept;
            rss += r * r;
        }
        const double s2 = x.size() > 2 ? rss / static_cast<double>(x.size() - 2) : 0.0;
        f.slope_se = std::sqrt(s2 * sw / det);
        f.intercept_se = std::sqrt(s2 * sxx / det);
    } else {
        // Weights taken as inverse variances.
        f.slope_se = std::sqrt(sw / det);
        f.intercept_se = std::sqrt(sxx / det);
    }
    return f;
}

void write_drift_csv(const std::string& file, const DriftFit& fit, const std::string& config_hash) {
    Table t;
    t.header = {"bin", "mean", "se", "count"};
    for (std::size_t b = 0; b < fit.bin_centers.size(); ++b) {
        t.rows.push_back({fit.bin_centers[b], fit.mean[b], fit.se[b], static_cast<double>(fit.counts[b])});
    }
    write_series(file, t);
    nlohmann::json meta{{"bins", fit.bin_centers.size()}};
    if (!config_hash.empty()) meta["config_hash"] = config_hash;
    write_sidecar(file, meta);
}

}  // namespace acwall
