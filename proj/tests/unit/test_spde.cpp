#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "acwall/error.hpp"
#include "acwall/io.hpp"
#include "acwall/profiles.hpp"
#include "acwall/spde.hpp"

using namespace acwall;

namespace {

SpdeConfig base_config(const Domain& dom) {
    SpdeConfig cfg;
    cfg.domain = dom;
    cfg.initial = wave_initial(dom, 0.0);
    return cfg;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("acwall_" + name)).string();
}

}  // namespace

TEST_CASE("grid construction") {
    CHECK(build_domain(3.0, 3.0, 0.01).size() == 601);
    CHECK(build_domain(1.0, 2.0, 0.5).size() == 7);
    CHECK(build_domain(1.0, 2.0, 0.4).dx() <= 0.4);
    CHECK_THROWS_AS(build_domain(-1.0, 2.0, 0.1), Error);
    try {
        build_domain(5.0, 5.0, 1e-9);
        FAIL("expected a resource error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Resource);
    }
}

TEST_CASE("noise increments") {
    const Domain dom = Domain::make(2.0, 2.0, 10'002);
    const CounterNormal rng(42);
    const double dt = 1e-3;
    const double target = dt / dom.dx();
    double s1 = 0.0, s2 = 0.0;
    std::size_t n = 0;
    for (std::uint64_t step = 0; step < 100; ++step) {
        for (double v : sample_noise_increment(dom, dt, rng, step)) {
            s1 += v;
            s2 += v * v;
            ++n;
        }
    }
    CHECK(n == 1'000'000);
    const double mean = s1 / n;
    const double var = s2 / n - mean * mean;
    CHECK(std::abs(mean) < 5.0 * std::sqrt(target / n));
    CHECK(var == doctest::Approx(target).epsilon(0.01));

    const auto a = sample_noise_increment(dom, dt, rng, 7);
    const auto b = sample_noise_increment(dom, dt, CounterNormal(42), 7);
    CHECK(a == b);
    CHECK(a != sample_noise_increment(dom, dt, rng, 8));
}

TEST_CASE("config validation names the field") {
    const Domain dom = Domain::make(2.0, 2.0, 41);
    SpdeConfig cfg = base_config(dom);
    cfg.dt = -1.0;
    try {
        cfg.validate();
        FAIL("expected a validation error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Validation);
        CHECK(std::string(e.what()).find("dt") != std::string::npos);
    }
    cfg = base_config(dom);
    cfg.initial[0] = -0.9;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = base_config(dom);
    cfg.initial = wave_initial(Domain::make(2.0, 2.0, 43), 0.0);
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("deterministic relaxation is a fixed point of the scheme") {
    const Domain dom = build_domain(3.0, 3.0, 0.01);
    const Profile m = relax_deterministic(dom, 1e-10);
    SpdeConfig cfg = base_config(dom);
    cfg.dt = 0.2;
    const Profile next = step_semi_implicit(m, cfg, 1);
    double change = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) change = std::max(change, std::abs(next[i] - m[i]));
    CHECK(change <= 1e-10);
    // Odd symmetry and closeness to the infinite-line wave.
    for (std::size_t i = 0; i < m.size(); ++i) CHECK(std::abs(m[i] + m[m.size() - 1 - i]) < 1e-9);
    CHECK(std::abs(m[300]) < 1e-12);
    double dist = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) dist = std::max(dist, std::abs(m[i] - std::tanh(dom.x(i))));
    CHECK(dist < 0.02);
}

TEST_CASE("heat mode decays at the discrete rate") {
    const Domain dom = Domain::make(2.0, 2.0, 401);
    const double L = dom.length();
    SpdeConfig cfg;
    cfg.domain = dom;
    cfg.reaction = false;
    cfg.dt = 0.01;
    cfg.horizon = 0.5;
    cfg.stride = 50;
    cfg.initial = Profile::sample(dom, [&](double x) {
        return (x + 2.0) / 2.0 - 1.0 + 0.3 * std::sin(std::numbers::pi * (x + 2.0) / L);
    });
    cfg.initial.values.front() = -1.0;
    cfg.initial.values.back() = 1.0;

    const auto traj = simulate(cfg);
    REQUIRE(traj.snapshots.size() == 2);
    const double h = dom.dx();
    const double factor = 1.0 / (1.0 + (1.0 - std::cos(std::numbers::pi * h / L)) * cfg.dt / (h * h));
    const double expected = 0.3 * std::pow(factor, 50);
    const std::size_t mid = 200;
    CHECK(traj.snapshots[1][mid] - dom.x(mid) / 2.0 == doctest::Approx(expected).epsilon(1e-10));
    CHECK(expected == doctest::Approx(0.3 * std::exp(-0.5 * std::pow(std::numbers::pi / L, 2) * 0.5)).epsilon(1e-3));
}

TEST_CASE("stochastic run: pinning, determinism, snapshot times") {
    const Domain dom = build_domain(3.0, 3.0, 0.05);
    SpdeConfig cfg = base_config(dom);
    cfg.eps = 0.01;
    cfg.dt = 0.01;
    cfg.horizon = 1.0;
    cfg.stride = 10;
    cfg.seed = 99;
    const auto t1 = simulate(cfg);
    const auto t2 = simulate(cfg);
    REQUIRE(t1.times.size() == 11);
    for (std::size_t k = 0; k < t1.times.size(); ++k) {
        CHECK(t1.times[k] == doctest::Approx(0.1 * k).epsilon(1e-12));
        CHECK(t1.snapshots[k].values == t2.snapshots[k].values);
        CHECK(t1.snapshots[k].values.front() == -1.0);
        CHECK(t1.snapshots[k].values.back() == 1.0);
    }
    CHECK(t1.snapshots.back().values != t1.snapshots.front().values);
    cfg.seed = 100;
    CHECK(simulate(cfg).snapshots.back().values != t1.snapshots.back().values);
}

TEST_CASE("blow-up is reported with the partial trajectory") {
    const Domain dom = build_domain(2.0, 2.0, 0.1);
    SpdeConfig cfg = base_config(dom);
    cfg.dt = 0.01;
    cfg.horizon = 5.0;
    cfg.eps = 1e6;
    cfg.stride = 1;
    try {
        simulate(cfg);
        FAIL("expected blow-up");
    } catch (const BlowUpError& e) {
        CHECK(e.kind() == ErrorKind::BlowUp);
        CHECK(e.step() >= 1);
        REQUIRE(e.partial().has_value());
        CHECK(e.partial()->times.size() == e.step());
    }
}

TEST_CASE("trajectory export") {
    const Domain dom = Domain::make(1.0, 1.0, 5);
    SpdeConfig cfg = base_config(dom);
    cfg.dt = 0.1;
    cfg.horizon = 0.2;
    cfg.eps = 0.1;
    const auto traj = simulate(cfg);

    const std::string csv = temp_path("traj.csv");
    write_trajectory_csv(csv, traj, "abc");
    const Table t = read_series(csv);
    REQUIRE(t.header.size() == 6);
    CHECK(t.header[0] == "time");
    CHECK(t.header[5] == "x4");
    REQUIRE(t.rows.size() == 3);
    CHECK(t.rows[2][0] == traj.times[2]);
    for (std::size_t i = 0; i < 5; ++i) CHECK(t.rows[1][i + 1] == traj.snapshots[1][i]);
    std::ifstream side(csv + ".json");
    const auto meta = nlohmann::json::parse(side);
    CHECK(meta["config_hash"] == "abc");
    CHECK(meta["grid_points"] == 5);
    CHECK(meta.contains("artifact_version"));

    const std::string bin = temp_path("traj.bin");
    write_trajectory_binary(bin, traj);
    std::ifstream in(bin, std::ios::binary);
    std::vector<double> raw(3 * 6);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size() * sizeof(double)));
    CHECK(in.gcount() == static_cast<std::streamsize>(raw.size() * sizeof(double)));
    CHECK(raw[1] == traj.times[1]);
    CHECK(raw[3 + 2] == traj.snapshots[2][0]);
    CHECK(raw[3 * 3 + 1] == traj.snapshots[1][2]);

    CHECK_THROWS_AS(write_trajectory_csv("/nonexistent-dir/x.csv", traj), Error);
    std::filesystem::remove(csv);
    std::filesystem::remove(csv + ".json");
    std::filesystem::remove(bin);
    std::filesystem::remove(bin + ".json");
}
