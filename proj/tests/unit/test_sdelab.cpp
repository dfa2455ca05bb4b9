#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "acwall/error.hpp"
#include "acwall/sdelab.hpp"
#include "acwall/stats.hpp"

using namespace acwall;

namespace {

Path line(double slope, double dt, std::size_t steps) {
    Path p;
    p.dt = dt;
    for (std::size_t k = 0; k <= steps; ++k) p.values.push_back(slope * dt * static_cast<double>(k));
    return p;
}

}  // namespace

TEST_CASE("brownian sampling") {
    const Path zero = sample_brownian(0.0, 0.01, 100, 1);
    for (double v : zero.values) CHECK(v == 0.0);

    const std::size_t n = 1'000'000;
    const Path b = sample_brownian(0.75, 1e-4, n, 7);
    CHECK(b.values[0] == 0.0);
    CHECK(b.values.size() == n + 1);
    double qv = 0.0;
    for (std::size_t k = 0; k < n; ++k) qv += std::pow(b.values[k + 1] - b.values[k], 2);
    const double band = 3.0 * 0.75 * std::sqrt(2.0 / n);
    CHECK(std::abs(qv / b.horizon() - 0.75) < band);

    CHECK(sample_brownian(1.0, 0.1, 50, 3).values == sample_brownian(1.0, 0.1, 50, 3).values);
    CHECK(sample_brownian(1.0, 0.1, 50, 3).values != sample_brownian(1.0, 0.1, 50, 3, 1).values);
    CHECK_THROWS_AS(sample_brownian(-1.0, 0.1, 10, 1), Error);
}

TEST_CASE("drift evaluation") {
    CHECK(drift_eval(DriftSpec::soft_wall(), 0.0) == 12.0);
    CHECK(drift_eval(DriftSpec::sinh(), 0.0) == 0.0);
    CHECK(drift_eval(DriftSpec::sinh(), 0.3) == -drift_eval(DriftSpec::sinh(), -0.3));
    CHECK(drift_eval(DriftSpec::penalized(10.0), -0.5) == 5.0);
    CHECK(drift_eval(DriftSpec::penalized(10.0), 0.5) == 0.0);
    CHECK(drift_eval(DriftSpec::exp_wall(2.0), 0.0) == 24.0);
    CHECK_THROWS_AS(DriftSpec::penalized(0.0).validate(), Error);
}

TEST_CASE("euler-maruyama against closed forms") {
    const Path still = euler_maruyama(DriftSpec::make_custom([](double) { return 0.0; }), 0.3, sample_brownian(0.0, 0.1, 20, 1));
    for (double v : still.values) CHECK(v == 0.3);

    // y' = 12 e^{-4y}, y(0) = 0 gives y = log(1 + 48 t) / 4.
    const double exact = 0.25 * std::log(49.0);
    double err_prev = 0.0;
    for (double dt : {1e-4, 5e-5}) {
        const auto steps = static_cast<std::size_t>(std::llround(1.0 / dt));
        const Path y = euler_maruyama(DriftSpec::soft_wall(), 0.0, sample_brownian(0.0, dt, steps, 1));
        const double err = std::abs(y.values.back() - exact);
        CHECK(err < 1e-3);
        if (err_prev > 0.0) CHECK(err_prev / err == doctest::Approx(2.0).epsilon(0.1));
        err_prev = err;
    }
    CHECK(exact == doctest::Approx(0.9730).epsilon(1e-4));

    // Penalised wall driven by B(t) = -t: y' = -10 y - 1.
    const Path y = euler_maruyama(DriftSpec::penalized(10.0), 0.0, line(-1.0, 1e-5, 100'000));
    CHECK(y.values.back() == doctest::Approx(-(1.0 - std::exp(-10.0)) / 10.0).epsilon(1e-4));
}

TEST_CASE("step guard keeps stiff drifts finite") {
    const Path noise = sample_brownian(0.75, 0.1, 50, 2);
    const Path y = euler_maruyama(DriftSpec::sinh(), 2.0, noise);
    for (double v : y.values) CHECK(std::isfinite(v));
    CHECK(std::abs(y.values[5]) < 1.0);

    const Path x = euler_maruyama(DriftSpec::exp_wall(1000.0), 0.0, sample_brownian(0.0, 1e-3, 10, 1));
    // Noise-free exp wall: x(t) = log(1 + 48 gamma^2 t) / (4 gamma).
    CHECK(x.values.back() == doctest::Approx(std::log(1.0 + 48e6 * 0.01) / 4000.0).epsilon(0.02));

    const auto explode = DriftSpec::make_custom([](double v) { return v * v; });
    CHECK_THROWS_AS(euler_maruyama(explode, 1e155, sample_brownian(0.0, 1.0, 5, 1)), Error);
}

TEST_CASE("skorokhod map") {
    auto up = skorokhod_map(line(1.0, 0.01, 100));
    CHECK(up.reflected.values == line(1.0, 0.01, 100).values);
    for (double v : up.local_time.values) CHECK(v == 0.0);

    auto down = skorokhod_map(line(-1.0, 0.01, 100));
    for (std::size_t k = 0; k <= 100; ++k) {
        CHECK(down.reflected.values[k] == doctest::Approx(0.0).scale(1.0));
        CHECK(down.local_time.values[k] == doctest::Approx(0.01 * k));
    }

    const Path b = sample_brownian(1.0, 1e-3, 999, 11);
    const auto r = skorokhod_map(b);
    for (std::size_t k = 0; k < b.values.size(); ++k) {
        double m = 0.0;
        for (std::size_t j = 0; j <= k; ++j) m = std::max(m, -b.values[j]);
        CHECK(r.local_time.values[k] == m);
        CHECK(r.reflected.values[k] == b.values[k] + m);
        CHECK(r.reflected.values[k] >= 0.0);
        if (k > 0) CHECK(r.local_time.values[k] >= r.local_time.values[k - 1]);
    }
}

TEST_CASE("upper envelope") {
    const Path b = sample_brownian(0.75, 1e-3, 1000, 5);
    CHECK(envelope_upper(0.1, 10.0, b).values[0] == 0.1);

    const Path flat = sample_brownian(0.0, 1e-3, 1000, 5);
    const double c = 12.0 * 10.0 * std::exp(-4.0);
    const Path z = envelope_upper(0.1, 10.0, flat);
    for (std::size_t k = 0; k <= 1000; ++k) CHECK(z.values[k] == doctest::Approx(0.1 + c * flat.time(k)));

    const Path big = envelope_upper(0.1, 1000.0, b);
    const auto r = skorokhod_map(b);
    for (std::size_t k = 0; k <= 1000; ++k) CHECK(std::abs(big.values[k] - 0.1 - r.reflected.values[k]) < 1e-9);
}

TEST_CASE("wall comparison") {
    const Path zero = sample_brownian(0.0, 1e-4, 10'000, 1);
    const auto w0 = wall_comparison(100.0, 0.1, zero);
    for (std::size_t k = 0; k < zero.values.size(); ++k) {
        CHECK(w0.penalized.values[k] == 0.0);
        CHECK(w0.exp_wall.values[k] >= 0.0);
        CHECK(w0.exp_wall.values[k] <= w0.envelope.values[k]);
    }
    CHECK(w0.lower_violation == 0.0);
    CHECK(w0.upper_violation == 0.0);

    // Refinement: the discrete slack of both inequalities shrinks with dt.
    double worst_coarse = 0.0, worst_fine = 0.0;
    for (std::uint64_t s = 0; s < 4; ++s) {
        const Path fine = sample_brownian(0.75, 5e-6, 200'000, 21, s);
        Path coarse;
        coarse.dt = 1e-5;
        for (std::size_t k = 0; k < fine.values.size(); k += 2) coarse.values.push_back(fine.values[k]);
        const auto wc = wall_comparison(100.0, 0.1, coarse);
        const auto wf = wall_comparison(100.0, 0.1, fine);
        worst_coarse = std::max({worst_coarse, wc.lower_violation, wc.upper_violation});
        worst_fine = std::max({worst_fine, wf.lower_violation, wf.upper_violation});
        CHECK(wc.lower_violation < 10.0 * coarse.dt * 100.0);
        CHECK(wc.upper_violation < 10.0 * coarse.dt * 100.0);
    }
    CHECK(worst_fine <= worst_coarse);
}

TEST_CASE("penalisation is monotone in gamma and bounded a priori") {
    const Path b = sample_brownian(0.75, 1e-4, 10'000, 33);
    const Path y10 = euler_maruyama(DriftSpec::penalized(10.0), 0.0, b);
    const Path y100 = euler_maruyama(DriftSpec::penalized(100.0), 0.0, b);
    for (std::size_t k = 0; k < b.values.size(); ++k) CHECK(y100.values[k] >= y10.values[k] - 1e-12);

    const double supb = std::max(std::abs(*std::max_element(b.values.begin(), b.values.end())),
                                 std::abs(*std::min_element(b.values.begin(), b.values.end())));
    for (double delta : {0.01, 0.1}) {
        for (const Path* y : {&y10, &y100}) {
            const double gamma = y == &y10 ? 10.0 : 100.0;
            const double wb = modulus_of_continuity(b, delta, 1.0);
            const double inf = *std::min_element(y->values.begin(), y->values.end());
            CHECK(inf >= -2.0 * wb - 4.0 * std::exp(-delta * gamma) * supb);
            CHECK(modulus_of_continuity(*y, delta, 1.0) <= 8.0 * (wb + std::exp(-delta * gamma) * supb));
        }
    }
}

TEST_CASE("stiff exponential wall does not overshoot") {
    // One noise increment spans several wall length scales at gamma = 1000.
    for (std::uint64_t s = 0; s < 4; ++s) {
        const Path b = sample_brownian(0.75, 2e-5, 50'000, 77, s);
        const auto w = wall_comparison(1000.0, 0.01, b);
        CHECK(w.upper_violation == 0.0);
        CHECK(w.lower_violation == 0.0);
        CHECK(*std::min_element(w.exp_wall.values.begin(), w.exp_wall.values.end()) > -0.01);
    }
}
