#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "acwall/error.hpp"
#include "acwall/interface.hpp"
#include "acwall/io.hpp"
#include "acwall/profiles.hpp"

using namespace acwall;

namespace {

Profile perturbed(const Domain& dom, double z, double delta, double shift) {
    return Profile::sample(dom, [&](double x) { return std::tanh(x - z) + delta * std::exp(-(x - shift) * (x - shift)); });
}

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::Io;
}

}  // namespace

TEST_CASE("center of a sampled standing wave") {
    const Domain dom = build_domain(6.0, 6.0, 0.01);
    for (double z : {0.0, 0.37, -1.5, 2.2}) {
        const Profile f = sample_wave(z, dom);
        CHECK(std::abs(solve_center(f, z + 0.05, 1e-13) - z) < 1e-10);
        const auto e = center_expansion(z, f);
        CHECK(e.first_order == 0.0);
        CHECK(e.second_order == 0.0);
    }
}

TEST_CASE("center solver errors") {
    const Domain dom = build_domain(4.0, 4.0, 0.02);
    CHECK(kind_of([&] { solve_center(Profile(dom), 0.0, 1e-10); }) == ErrorKind::Tube);
    // A wide tube lets a profile without a crossing through the check.
    const Profile flat = Profile::sample(dom, [](double) { return -0.99; });
    StoppingSpec wide;
    wide.tube_radius = 2.0;
    CHECK(kind_of([&] { solve_center(flat, 3.5, 1e-10, wide); }) == ErrorKind::Bracketing);
    StoppingSpec bad;
    bad.center_fraction = 1.0;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("residual contract, uniqueness and shift equivariance") {
    const Domain dom = build_domain(6.0, 6.0, 0.01);
    const Profile f = perturbed(dom, 0.3, 0.05, 1.0);
    const double tol = 1e-12;
    const double z = solve_center(f, 0.3, tol);
    CHECK(std::abs(center_residual(f, z)) <= tol * 4.0 / 3.0);
    for (double g : {0.2, 0.25, 0.35, 0.4}) CHECK(std::abs(solve_center(f, g, tol) - z) < 1e-11);

    // Shift by whole grid cells, so the shifted profile is sampled exactly.
    const double s = 50 * dom.dx();
    const Profile shifted = perturbed(dom, 0.3 + s, 0.05, 1.0 + s);
    CHECK(solve_center(shifted, 0.3 + s, tol) == doctest::Approx(z + s).epsilon(1e-9));
}

TEST_CASE("first-order coefficient and quadratic remainder") {
    const Domain dom = build_domain(6.0, 6.0, 0.01);
    const Profile p = Profile::sample(dom, [](double x) { return std::exp(-(x - 0.5) * (x - 0.5)); });
    const double proj = inner(sample_wave_derivative(0.0, dom), p);
    auto coeff = [&](double d) {
        Profile f = sample_wave(0.0, dom);
        for (std::size_t i = 0; i < f.size(); ++i) f[i] += d * p[i];
        return solve_center(f, 0.0, 1e-14) / (-d * proj);
    };
    const double d = 0.02;
    const double c1 = coeff(d), c2 = coeff(d / 2), c3 = coeff(d / 4);
    CHECK(2.0 * c2 - c1 == doctest::Approx(0.75).epsilon(0.01));
    const double r1 = (c1 - 0.75) * d, r2 = (c2 - 0.75) * d / 2, r3 = (c3 - 0.75) * d / 4;
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.15));
    CHECK(r2 / r3 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("second-order term matches two composed first-order steps") {
    const Domain dom = build_domain(6.0, 6.0, 0.01);
    for (double d : {0.02, 0.01}) {
        const Profile f = perturbed(dom, 0.0, d, 0.7);
        const auto e = center_expansion(0.0, f);
        const double again = center_expansion(e.first_order, f).first_order;
        CHECK(std::abs(again - e.second_order) < 20.0 * d * d * d);
    }
}

TEST_CASE("expansion remainder is cubic") {
    const Domain dom = build_domain(6.0, 6.0, 0.01);
    auto remainder = [&](double d) {
        const Profile f = perturbed(dom, 0.2, d, 0.9);
        const auto e = center_expansion(0.2, f);
        return std::abs(solve_center(f, 0.2, 1e-15) - (0.2 + e.first_order + e.second_order));
    };
    const double r1 = remainder(0.04), r2 = remainder(0.02);
    CHECK(r1 / r2 == doctest::Approx(8.0).epsilon(0.15));
}

TEST_CASE("tracking a symmetric deterministic run") {
    const Domain dom = build_domain(5.0, 5.0, 0.05);
    SpdeConfig cfg;
    cfg.domain = dom;
    cfg.initial = wave_initial(dom, 0.0);
    cfg.dt = 0.05;
    cfg.horizon = 5.0;
    cfg.stride = 10;
    const auto traj = simulate(cfg);
    const double tol = 1e-12;
    const auto path = track_centers(traj, StoppingSpec{}, tol);
    CHECK_FALSE(path.stopped_at.has_value());
    REQUIRE(path.centers.size() == traj.snapshots.size());
    for (std::size_t k = 0; k < path.centers.size(); ++k) {
        CHECK(std::abs(path.centers[k]) < 1e-6);
        CHECK(std::abs(center_residual(traj.snapshots[k], path.centers[k])) <= tol * 4.0 / 3.0);
    }
    for (const auto& b : block_sequence(path, 1.0)) CHECK(std::abs(b.center) < 1e-6);
}

TEST_CASE("stopping rule") {
    const Domain dom = build_domain(6.0, 6.0, 0.05);
    FieldTrajectory traj;
    traj.config.domain = dom;
    for (int k = 0; k <= 45; ++k) {
        traj.times.push_back(k);
        traj.snapshots.push_back(sample_wave(0.13 * k, dom));
    }
    const auto path = track_centers(traj, StoppingSpec{}, 1e-12);
    REQUIRE(path.stopped_at.has_value());
    CHECK(*path.stopped_at == 37.0);  // first center beyond 0.8 a = 4.8
    CHECK(path.times.back() == 37.0);
    CHECK(path.centers.size() == 38);

    // Jump out of the tube between snapshots.
    traj.snapshots[3] = Profile::sample(dom, [](double x) { return std::tanh(x) + 0.5 * std::exp(-x * x); });
    const auto cut = track_centers(traj, StoppingSpec{}, 1e-12);
    REQUIRE(cut.stopped_at.has_value());
    CHECK(*cut.stopped_at == 3.0);
    CHECK(cut.times.size() == 3);

    traj.snapshots[0] = Profile(dom);
    CHECK(kind_of([&] { track_centers(traj, StoppingSpec{}, 1e-12); }) == ErrorKind::Tube);
}

TEST_CASE("rescaling") {
    InterfacePath p;
    p.times = {0.0, 3.3, 10.0};
    p.centers = {0.1, -0.7, 0.3};
    p.stopped_at = 10.0;
    const auto soft = rescale_path(p, 0.1, RescaleMode::Soft);
    CHECK(soft.scale == TimeScale::Soft);
    CHECK(soft.times[2] == doctest::Approx(1.0));
    CHECK(soft.centers == p.centers);
    const auto back = unscale_path(soft);
    CHECK(back.times == p.times);
    CHECK(back.centers == p.centers);
    CHECK(back.scale == TimeScale::Raw);

    const double eps = std::exp(-4.0);
    const auto hard = rescale_path(p, eps, RescaleMode::Hard);
    CHECK(hard.lambda == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(hard.centers[1] == doctest::Approx(-0.35).epsilon(1e-14));
    CHECK(hard.times[2] == doctest::Approx(eps * 10.0 / 4.0).epsilon(1e-14));
    CHECK(unscale_path(hard).times == p.times);
    CHECK_THROWS_AS(rescale_path(p, 1.5, RescaleMode::Soft), Error);
}

TEST_CASE("block sequence") {
    InterfacePath p;
    for (int k = 0; k <= 40; ++k) {
        p.times.push_back(0.25 * k);
        p.centers.push_back(k);
    }
    const auto blocks = block_sequence(p, 0.25 * 4);
    REQUIRE(blocks.size() == 11);
    for (std::size_t n = 0; n < blocks.size(); ++n) {
        CHECK(blocks[n].n == n);
        CHECK(blocks[n].center == 4.0 * n);
    }
    CHECK(kind_of([&] { block_sequence(p, 0.1); }) == ErrorKind::Resolution);
}

TEST_CASE("interface export") {
    InterfacePath p;
    p.times = {0.0, 1.0};
    p.centers = {0.25, -0.5};
    const auto soft = rescale_path(p, 0.01, RescaleMode::Hard);
    const std::string file = (std::filesystem::temp_directory_path() / "acwall_iface.csv").string();
    write_interface_csv(file, soft);
    const Table t = read_series(file);
    CHECK(t.header == std::vector<std::string>{"time", "center"});
    CHECK(t.rows[1][1] == soft.centers[1]);
    std::ifstream side(file + ".json");
    const auto meta = nlohmann::json::parse(side);
    CHECK(meta["mode"] == "hard");
    CHECK(meta["stopped_at"].is_null());
    CHECK(meta["lambda"].get<double>() == doctest::Approx(std::log(100.0)));
    std::filesystem::remove(file);
    std::filesystem::remove(file + ".json");
}

TEST_CASE("deterministic center is pushed away from the nearer wall") {
    const Domain dom = build_domain(2.0, 2.0, 0.02);
    for (double z : {0.3, -0.3}) {
        SpdeConfig cfg;
        cfg.domain = dom;
        cfg.initial = wave_initial(dom, z);
        cfg.dt = 0.05;
        cfg.horizon = 2.0;
        cfg.stride = 20;
        const auto path = track_centers(simulate(cfg), StoppingSpec{}, 1e-12);
        REQUIRE(path.centers.size() >= 2);
        const double v = (path.centers.back() - path.centers[1]) / (path.times.back() - path.times[1]);
        // Leading order: -24 e^{-4a} sinh(4 zeta).
        const double law = -24.0 * std::exp(-8.0) * std::sinh(4.0 * z);
        CHECK(v * z < 0.0);
        CHECK(v / law > 0.5);
        CHECK(v / law < 2.0);
    }
}
