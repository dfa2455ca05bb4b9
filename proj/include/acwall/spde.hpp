#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "acwall/error.hpp"
#include "acwall/grid.hpp"
#include "acwall/random.hpp"

namespace acwall {

// Stochastic Allen-Cahn equation dm = [m''/2 - V'(m)] dt + sqrt(eps) dW on
// [-a, b] with m(-a) = -1, m(b) = +1.

struct SpdeConfig {
    Domain domain;
    double eps = 0.0;
    double dt = 0.01;
    double horizon = 1.0;
    std::size_t stride = 1;
    std::uint64_t seed = 0;
    Profile initial;
    bool reaction = true;  // false turns the scheme into the plain heat equation (test hook)

    /// Throws ErrorKind::Validation naming the offending field.
    void validate() const;
    std::size_t steps() const;
};

struct FieldTrajectory {
    std::vector<double> times;
    std::vector<Profile> snapshots;
    SpdeConfig config;
};

/// Raised when the state leaves |m| <= 10 or turns non-finite.
class BlowUpError : public Error {
public:
    BlowUpError(const std::string& msg, std::size_t step, std::optional<FieldTrajectory> partial = std::nullopt)
        : Error(ErrorKind::BlowUp, msg), step_(step), partial_(std::move(partial)) {}

    std::size_t step() const { return step_; }
    /// Snapshots recorded before the failure, when produced by simulate().
    const std::optional<FieldTrajectory>& partial() const { return partial_; }

private:
    std::size_t step_;
    std::optional<FieldTrajectory> partial_;
};

/// Independent N(0, dt/dx) values for the interior nodes of step `step`;
/// entry i depends only on (seed, step, i).
std::vector<double> sample_noise_increment(const Domain& dom, double dt, const CounterNormal& rng, std::uint64_t step);

/// Semi-implicit Euler: (I - dt D2/2) m_new = m_old - dt V'(m_old) + sqrt(eps) xi
/// on interior nodes, endpoints pinned to -1 and +1. The constant matrix is
/// factored once.
class SemiImplicitStepper {
public:
    explicit SemiImplicitStepper(const SpdeConfig& cfg);

    /// Advances `state` in place by one step with noise index `step`.
    void step(Profile& state, std::uint64_t step);

private:
    SpdeConfig cfg_;
    CounterNormal rng_;
    double coupling_;              // dt / (2 dx^2)
    double noise_scale_;           // sqrt(eps dt / dx)
    std::vector<double> upper_;    // Thomas upper factors
    std::vector<double> inv_den_;  // Thomas inverse pivots
    std::vector<double> rhs_;
    std::vector<double> noise_;
};

/// One step from `state`; the noise is keyed by (cfg.seed, step).
Profile step_semi_implicit(const Profile& state, const SpdeConfig& cfg, std::uint64_t step = 0);

/// Called with (time, profile) at every snapshot, including t = 0.
using SnapshotObserver = std::function<void(double, const Profile&)>;

/// Streams snapshots to `observe` without storing them; returns the final state.
Profile simulate(const SpdeConfig& cfg, const SnapshotObserver& observe);

FieldTrajectory simulate(const SpdeConfig& cfg);

/// Deterministic relaxation from mbar centred at the midpoint (b - a)/2 until
/// ||m_new - m_old||_inf / dt <= tol. Throws ErrorKind::Convergence at the cap.
Profile relax_deterministic(const Domain& dom, double tol, double dt = 0.2, std::size_t max_steps = 2'000'000);

/// Initial condition mbar_zeta with exact Dirichlet endpoints.
Profile wave_initial(const Domain& dom, double zeta);

/// CSV with header time,x0..x{N-1} plus a JSON sidecar describing the grid.
void write_trajectory_csv(const std::string& path, const FieldTrajectory& traj, const std::string& config_hash = "");

/// Little-endian float64 dump of the (snapshots x (1 + N)) table in
/// column-major order (all times, then node 0 over time, ...), with sidecar.
void write_trajectory_binary(const std::string& path, const FieldTrajectory& traj, const std::string& config_hash = "");

}  // namespace acwall
