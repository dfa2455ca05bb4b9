#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "acwall/grid.hpp"
#include "acwall/spde.hpp"

namespace acwall {

/// Tube Upsilon(delta, l) around the standing-wave manifold and the stopping rule
/// |X| >= alpha a.
struct StoppingSpec {
    double tube_radius = 0.3;
    double wall_margin = 1.0;
    double center_fraction = 0.8;

    void validate() const;
};

enum class TimeScale { Raw, Soft, Hard };

std::string to_string(TimeScale s);

struct InterfacePath {
    std::vector<double> times;
    std::vector<double> centers;
    TimeScale scale = TimeScale::Raw;
    double eps = 0.0;     // set for soft and hard paths
    double lambda = 0.0;  // log(1/eps), set for hard paths
    std::optional<double> stopped_at;

    // Unscaled copy kept by rescale_path so that unscale_path is exact.
    std::vector<double> raw_times;
    std::vector<double> raw_centers;
};

/// g(zeta) = <f - mbar_zeta, mbar'_zeta>.
double center_residual(const Profile& f, double zeta);

/// Root of center_residual with |g| <= tol ||mbar'_zeta||^2, by Newton with a
/// bisection safeguard. Throws ErrorKind::Tube when ||f - mbar_guess||_inf >=
/// spec.tube_radius and ErrorKind::Bracketing when no sign change is found.
double solve_center(const Profile& f, double guess, double tol, const StoppingSpec& spec = {});

struct CenterExpansion {
    double first_order;
    double second_order;
};

/// First and second order terms of the center of f around z.
CenterExpansion center_expansion(double z, const Profile& f);

/// Incremental tracker: feed snapshots in time order, warm-starting each
/// solve from the previous center.
class CenterTracker {
public:
    CenterTracker(StoppingSpec spec, double tol);

    /// Returns false once the stopping rule has fired; later calls are ignored.
    /// Throws ErrorKind::Tube if the very first snapshot is outside the tube.
    bool feed(double t, const Profile& f);

    bool stopped() const { return path_.stopped_at.has_value(); }
    const InterfacePath& path() const { return path_; }
    InterfacePath take() { return std::move(path_); }

private:
    StoppingSpec spec_;
    double tol_;
    InterfacePath path_;
};

InterfacePath track_centers(const FieldTrajectory& traj, const StoppingSpec& spec, double tol);

/// Zero crossing of f by linear interpolation; a starting guess for solve_center.
double crossing_guess(const Profile& f);

enum class RescaleMode { Soft, Hard };

/// soft: tau = eps t, values unchanged. hard: theta = eps t / lambda,
/// values / sqrt(lambda), lambda = log(1/eps). Requires eps in (0, 1) and a raw path.
InterfacePath rescale_path(const InterfacePath& path, double eps, RescaleMode mode);

/// Inverse of rescale_path; returns the stored raw path.
InterfacePath unscale_path(const InterfacePath& path);

struct Block {
    std::size_t n;
    double center;
};

/// Centers at the snapshot times nearest to n T, n = 0, 1, ...
/// Throws ErrorKind::Resolution when T is below the snapshot spacing.
std::vector<Block> block_sequence(const InterfacePath& path, double T);

/// CSV time,center plus sidecar {eps, mode, lambda, stopped_at}.
void write_interface_csv(const std::string& path, const InterfacePath& ip, const std::string& config_hash = "");

}  // namespace acwall
