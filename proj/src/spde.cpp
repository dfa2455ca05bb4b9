#include "acwall/spde.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "acwall/io.hpp"
#include "acwall/profiles.hpp"

namespace acwall {

namespace {

constexpr double kBlowUpBound = 10.0;

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw Error(ErrorKind::Validation, field + ": " + what);
}

nlohmann::json grid_meta(const FieldTrajectory& traj, const std::string& config_hash) {
    const auto& c = traj.config;
    nlohmann::json j{{"a", c.domain.left()},
                     {"b", c.domain.right()},
                     {"grid_points", c.domain.size()},
                     {"dx", c.domain.dx()},
                     {"eps", c.eps},
                     {"dt", c.dt},
                     {"horizon", c.horizon},
                     {"stride", c.stride},
                     {"seed", c.seed},
                     {"snapshots", traj.times.size()}};
    if (!config_hash.empty()) j["config_hash"] = config_hash;
    return j;
}

}  // namespace

void SpdeConfig::validate() const {
    require(std::isfinite(eps) && eps >= 0.0, "eps", "must be finite and >= 0");
    require(std::isfinite(dt) && dt > 0.0, "dt", "must be finite and > 0");
    require(std::isfinite(horizon) && horizon >= dt, "horizon", "must be finite and >= dt");
    require(stride >= 1, "stride", "must be >= 1");
    require(initial.domain == domain, "initial", "profile grid does not match the domain");
    require(initial.values.front() == -1.0 && initial.values.back() == 1.0, "initial",
            "endpoints must be exactly -1 and +1");
}

std::size_t SpdeConfig::steps() const { return static_cast<std::size_t>(std::llround(horizon / dt)); }

std::vector<double> sample_noise_increment(const Domain& dom, double dt, const CounterNormal& rng, std::uint64_t step) {
    std::vector<double> xi(dom.interior_size());
    rng.fill(step, 0, xi);
    const double scale = std::sqrt(dt / dom.dx());
    for (double& v : xi) v *= scale;
    return xi;
}

SemiImplicitStepper::SemiImplicitStepper(const SpdeConfig& cfg)
    : cfg_(cfg),
      rng_(cfg.seed),
      coupling_(cfg.dt / (2.0 * cfg.domain.dx() * cfg.domain.dx())),
      noise_scale_(std::sqrt(cfg.eps * cfg.dt / cfg.domain.dx())) {
    const std::size_t n = cfg.domain.interior_size();
    upper_.resize(n);
    inv_den_.resize(n);
    rhs_.resize(n);
    noise_.resize(n);
    // Matrix: diagonal 1 + 2c, off-diagonal -c.
    const double diag = 1.0 + 2.0 * coupling_;
    const double off = -coupling_;
    double den = diag;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) den = diag - off * upper_[i - 1];
        inv_den_[i] = 1.0 / den;
        upper_[i] = off * inv_den_[i];
    }
}

void SemiImplicitStepper::step(Profile& state, std::uint64_t step) {
    const std::size_t n = rhs_.size();
    const double dt = cfg_.dt;
    for (std::size_t i = 0; i < n; ++i) {
        const double m = state[i + 1];
        rhs_[i] = cfg_.reaction ? m - dt * (m * m * m - m) : m;
    }
    if (cfg_.eps > 0.0) {
        rng_.fill(step, 0, noise_);
        for (std::size_t i = 0; i < n; ++i) rhs_[i] += noise_scale_ * noise_[i];
    }
    rhs_.front() += coupling_ * -1.0;
    rhs_.back() += coupling_ * 1.0;

    const double off = -coupling_;
    rhs_[0] *= inv_den_[0];
    for (std::size_t i = 1; i < n; ++i) rhs_[i] = (rhs_[i] - off * rhs_[i - 1]) * inv_den_[i];
    for (std::size_t i = n - 1; i-- > 0;) rhs_[i] -= upper_[i] * rhs_[i + 1];

    for (std::size_t i = 0; i < n; ++i) {
        const double v = rhs_[i];
        if (!std::isfinite(v) || std::abs(v) > kBlowUpBound) {
            std::ostringstream msg;
            msg << "state left |m| <= " << kBlowUpBound << " at step " << step << " (node " << i + 1 << ", value "
                << v << ")";
            throw BlowUpError(msg.str(), step);
        }
        state[i + 1] = v;
    }
    state.values.front() = -1.0;
    state.values.back() = 1.0;
}

Profile step_semi_implicit(const Profile& state, const SpdeConfig& cfg, std::uint64_t step) {
    if (!(state.domain == cfg.domain)) throw Error(ErrorKind::Validation, "state grid does not match the config");
    SemiImplicitStepper stepper(cfg);
    Profile next = state;
    stepper.step(next, step);
    return next;
}

Profile simulate(const SpdeConfig& cfg, const SnapshotObserver& observe) {
    cfg.validate();
    SemiImplicitStepper stepper(cfg);
    Profile state = cfg.initial;
    observe(0.0, state);
    const std::size_t steps = cfg.steps();
    for (std::size_t k = 1; k <= steps; ++k) {
        stepper.step(state, k);
        if (k % cfg.stride == 0) observe(static_cast<double>(k) * cfg.dt, state);
    }
    return state;
}

FieldTrajectory simulate(const SpdeConfig& cfg) {
    FieldTrajectory traj{{}, {}, cfg};
    try {
        simulate(cfg, [&](double t, const Profile& p) {
            traj.times.push_back(t);
            traj.snapshots.push_back(p);
        });
    } catch (const BlowUpError& e) {
        std::ostringstream msg;
        msg << e.what();
        if (!traj.times.empty()) msg << "; last good snapshot at t=" << traj.times.back();
        throw BlowUpError(msg.str(), e.step(), traj);
    }
    return traj;
}

Profile wave_initial(const Domain& dom, double zeta) {
    Profile p = sample_wave(zeta, dom);
    p.values.front() = -1.0;
    p.values.back() = 1.0;
    return p;
}

Profile relax_deterministic(const Domain& dom, double tol, double dt, std::size_t max_steps) {
    if (!(tol > 0.0)) throw Error(ErrorKind::Validation, "tol: must be > 0");
    SpdeConfig cfg;
    cfg.domain = dom;
    cfg.dt = dt;
    cfg.horizon = dt;
    cfg.initial = wave_initial(dom, 0.5 * (dom.right() - dom.left()));
    SemiImplicitStepper stepper(cfg);
    Profile state = cfg.initial;
    Profile prev = state;
    for (std::size_t k = 1; k <= max_steps; ++k) {
        prev.values = state.values;
        stepper.step(state, k);
        double change = 0.0;
        for (std::size_t i = 0; i < state.size(); ++i) change = std::max(change, std::abs(state[i] - prev[i]));
        if (change / dt <= tol) return state;
    }
    std::ostringstream msg;
    msg << "relaxation did not reach tol=" << tol << " within " << max_steps << " steps";
    throw Error(ErrorKind::Convergence, msg.str());
}

void write_trajectory_csv(const std::string& path, const FieldTrajectory& traj, const std::string& config_hash) {
    Table t;
    const std::size_t n = traj.config.domain.size();
    t.header.reserve(n + 1);
    t.header.push_back("time");
    for (std::size_t i = 0; i < n; ++i) t.header.push_back("x" + std::to_string(i));
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        std::vector<double> row;
        row.reserve(n + 1);
        row.push_back(traj.times[s]);
        row.insert(row.end(), traj.snapshots[s].values.begin(), traj.snapshots[s].values.end());
        t.rows.push_back(std::move(row));
    }
    write_series(path, t);
    auto meta = grid_meta(traj, config_hash);
    meta["format"] = "csv";
    write_sidecar(path, meta);
}

void write_trajectory_binary(const std::string& path, const FieldTrajectory& traj, const std::string& config_hash) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
    auto put = [&out](double v) { out.write(reinterpret_cast<const char*>(&v), sizeof v); };
    for (double t : traj.times) put(t);
    const std::size_t n = traj.config.domain.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& snap : traj.snapshots) put(snap[i]);
    }
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "write to '" + path + "' failed");
    auto meta = grid_meta(traj, config_hash);
    meta["format"] = "float64-le column-major";
    meta["columns"] = "time, x0 .. x" + std::to_string(n - 1);
    meta["rows"] = traj.times.size();
    write_sidecar(path, meta);
}

}  // namespace acwall
