#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace acwall {

/// Uniformly sampled scalar path, values[k] at time k * dt.
struct Path {
    double dt = 1.0;
    std::vector<double> values;
    double sigma2 = 0.0;  // variance rate of the driving noise, when known

    std::size_t steps() const { return values.empty() ? 0 : values.size() - 1; }
    double horizon() const { return dt * static_cast<double>(steps()); }
    double time(std::size_t k) const { return dt * static_cast<double>(k); }
};

enum class DriftKind { SoftWall, Sinh, Penalized, ExpWall, Custom };

struct DriftSpec {
    DriftKind kind = DriftKind::SoftWall;
    double gamma = 0.0;
    std::function<double(double)> custom;

    static DriftSpec soft_wall() { return {DriftKind::SoftWall, 0.0, {}}; }
    static DriftSpec sinh() { return {DriftKind::Sinh, 0.0, {}}; }
    static DriftSpec penalized(double gamma) { return {DriftKind::Penalized, gamma, {}}; }
    static DriftSpec exp_wall(double gamma) { return {DriftKind::ExpWall, gamma, {}}; }
    static DriftSpec make_custom(std::function<double(double)> f) { return {DriftKind::Custom, 0.0, std::move(f)}; }

    void validate() const;
};

std::string to_string(DriftKind k);

/// soft_wall 12 e^{-4x}; sinh -24 sinh(4x); penalized gamma [x]_-; exp_wall 12 gamma e^{-4 gamma x}.
double drift_eval(const DriftSpec& spec, double x);

/// Partial sums of independent N(0, sigma2 dt) increments from 0. Increment k
/// is the k-th normal of (seed, stream), so paths on different streams are independent.
Path sample_brownian(double sigma2, double dt, std::size_t steps, std::uint64_t seed, std::uint64_t stream = 0);

/// y_{k+1} = y_k + drift(y_k) dt + (B_{k+1} - B_k) on the supplied noise.
/// A step whose drift plus noise displacement exceeds min(0.5, 0.5 * length
/// scale of the drift) is split into sub-steps of at most that displacement,
/// with the noise increment spread in proportion. Throws BlowUp on a non-finite state or when the sub-step
/// budget runs out.
Path euler_maruyama(const DriftSpec& spec, double y0, const Path& noise);

struct Reflection {
    Path reflected;
    Path local_time;
};

/// Y(t) = B(t) + sup_{s<=t} (-B(s)), L(t) = sup_{s<=t} (-B(s))^+.
Reflection skorokhod_map(const Path& b);

/// Z(t) = delta + B(t) + c t + sup_{s<=t} [-B(s) - c s], c = 12 gamma e^{-4 gamma delta}.
Path envelope_upper(double delta, double gamma, const Path& b);

struct WallComparison {
    Path penalized;  // Y_gamma
    Path exp_wall;   // X_gamma
    Path envelope;   // Z_{delta, gamma}
    double lower_violation;  // max (Y_gamma - X_gamma)^+
    double upper_violation;  // max (X_gamma - Z)^+
};

/// Integrates both walls from 0 on the shared noise b and builds the envelope.
WallComparison wall_comparison(double gamma, double delta, const Path& b);

/// CSV t,value plus sidecar.
void write_path_csv(const std::string& file, const Path& p, const std::string& config_hash = "");

}  // namespace acwall
