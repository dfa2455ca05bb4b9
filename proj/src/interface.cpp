#include "acwall/interface.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "acwall/error.hpp"
#include "acwall/io.hpp"
#include "acwall/profiles.hpp"

namespace acwall {

namespace {

struct Moments {
    double g;       // <f - m, m'>
    double norm2;   // <m', m'>
    double curv;    // <f - m, m''>
    double sup;     // ||f - m||_inf
};

Moments moments(const Profile& f, double zeta) {
    const Domain& dom = f.domain;
    const std::size_t n = dom.size();
    Moments r{0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const auto w = eval_wave(zeta, dom.x(i));
        const double u = f[i] - w.m;
        const double mpp = -2.0 * w.m * w.dm;
        const double wt = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        r.g += wt * u * w.dm;
        r.norm2 += wt * w.dm * w.dm;
        r.curv += wt * u * mpp;
        r.sup = std::max(r.sup, std::abs(u));
    }
    const double h = dom.dx();
    r.g *= h;
    r.norm2 *= h;
    r.curv *= h;
    return r;
}

double sup_distance_to_wave(const Profile& f, double zeta) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s = std::max(s, std::abs(f[i] - eval_wave(zeta, f.domain.x(i)).m));
    return s;
}

}  // namespace

void StoppingSpec::validate() const {
    if (!(tube_radius > 0.0)) throw Error(ErrorKind::Validation, "tube_radius: must be > 0");
    if (!(wall_margin > 0.0)) throw Error(ErrorKind::Validation, "wall_margin: must be > 0");
    if (!(center_fraction > 0.0 && center_fraction < 1.0)) {
        throw Error(ErrorKind::Validation, "center_fraction: must lie in (0, 1)");
    }
}

std::string to_string(TimeScale s) {
    switch (s) {
        case TimeScale::Raw: return "raw";
        case TimeScale::Soft: return "soft";
        case TimeScale::Hard: return "hard";
    }
    return "raw";
}

double center_residual(const Profile& f, double zeta) { return moments(f, zeta).g; }

double solve_center(const Profile& f, double guess, double tol, const StoppingSpec& spec) {
    const Domain& dom = f.domain;
    const double dist = sup_distance_to_wave(f, guess);
    if (!(dist < spec.tube_radius)) {
        std::ostringstream msg;
        msg << "profile is " << dist << " from the standing wave at " << guess << " (tube radius "
            << spec.tube_radius << ")";
        throw Error(ErrorKind::Tube, msg.str());
    }

    // g is increasing in zeta inside the tube; search within a window around the guess.
    const double width = std::max(1.0, 4.0 * spec.tube_radius);
    double lo = std::max(-dom.left(), guess - width);
    double hi = std::min(dom.right(), guess + width);
    double glo = center_residual(f, lo);
    double ghi = center_residual(f, hi);
    if (!(glo < 0.0 && ghi > 0.0)) {
        if (glo == 0.0) return lo;
        if (ghi == 0.0) return hi;
        std::ostringstream msg;
        msg << "no sign change of the center residual on [" << lo << ", " << hi << "]";
        throw Error(ErrorKind::Bracketing, msg.str());
    }

    double z = guess;
    for (int it = 0; it < 200; ++it) {
        const Moments m = moments(f, z);
        if (std::abs(m.g) <= tol * m.norm2) return z;
        if (m.g < 0.0) lo = z;
        else hi = z;
        const double dg = m.norm2 - m.curv;
        double next = z - m.g / dg;
        if (!(std::abs(dg) >= 0.1) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (hi - lo < 1e-15 * std::max(1.0, std::abs(z))) return next;
        z = next;
    }
    throw Error(ErrorKind::Convergence, "center iteration did not converge");
}

CenterExpansion center_expansion(double z, const Profile& f) {
    const Moments m = moments(f, z);
    return {-0.75 * m.g, -0.5625 * m.g * m.curv};
}

CenterTracker::CenterTracker(StoppingSpec spec, double tol) : spec_(spec), tol_(tol) { spec_.validate(); }

double crossing_guess(const Profile& f) {
    const Domain& dom = f.domain;
    for (std::size_t i = 0; i + 1 < f.size(); ++i) {
        if (f[i] <= 0.0 && f[i + 1] > 0.0) {
            const double s = f[i] / (f[i] - f[i + 1]);
            return dom.x(i) + s * dom.dx();
        }
    }
    return 0.5 * (dom.right() - dom.left());
}

bool CenterTracker::feed(double t, const Profile& f) {
    if (stopped()) return false;
    const Domain& dom = f.domain;
    const bool first = path_.times.empty();
    const double guess = first ? crossing_guess(f) : path_.centers.back();
    double z;
    try {
        z = solve_center(f, guess, tol_, spec_);
    } catch (const Error& e) {
        if (first) throw Error(ErrorKind::Tube, std::string("initial profile has no center: ") + e.what());
        path_.stopped_at = t;
        return false;
    }
    const bool in_tube = z > -dom.left() + spec_.wall_margin && z < dom.right() - spec_.wall_margin &&
                         sup_distance_to_wave(f, z) < spec_.tube_radius;
    if (!in_tube) {
        if (first) throw Error(ErrorKind::Tube, "initial profile outside the tube");
        path_.stopped_at = t;
        return false;
    }
    path_.times.push_back(t);
    path_.centers.push_back(z);
    if (std::abs(z) >= spec_.center_fraction * dom.left()) {
        path_.stopped_at = t;
        return false;
    }
    return true;
}

InterfacePath track_centers(const FieldTrajectory& traj, const StoppingSpec& spec, double tol) {
    CenterTracker tracker(spec, tol);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        if (!tracker.feed(traj.times[k], traj.snapshots[k])) break;
    }
    return tracker.take();
}

InterfacePath rescale_path(const InterfacePath& path, double eps, RescaleMode mode) {
    if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorKind::Validation, "eps: must lie in (0, 1)");
    if (path.scale != TimeScale::Raw) throw Error(ErrorKind::Validation, "path is already rescaled");
    InterfacePath out;
    out.eps = eps;
    out.raw_times = path.times;
    out.raw_centers = path.centers;
    double time_factor = eps;
    double value_factor = 1.0;
    if (mode == RescaleMode::Soft) {
        out.scale = TimeScale::Soft;
    } else {
        out.scale = TimeScale::Hard;
        out.lambda = std::log(1.0 / eps);
        time_factor = eps / out.lambda;
        value_factor = 1.0 / std::sqrt(out.lambda);
    }
    out.times.reserve(path.times.size());
    out.centers.reserve(path.centers.size());
    for (double t : path.times) out.times.push_back(t * time_factor);
    for (double c : path.centers) out.centers.push_back(c * value_factor);
    if (path.stopped_at) out.stopped_at = *path.stopped_at * time_factor;
    return out;
}

InterfacePath unscale_path(const InterfacePath& path) {
    if (path.scale == TimeScale::Raw) return path;
    InterfacePath out;
    out.times = path.raw_times;
    out.centers = path.raw_centers;
    if (path.stopped_at) {
        const double f = path.scale == TimeScale::Soft ? path.eps : path.eps / path.lambda;
        out.stopped_at = *path.stopped_at / f;
    }
    return out;
}

std::vector<Block> block_sequence(const InterfacePath& path, double T) {
    const auto& t = path.times;
    if (t.size() < 2) throw Error(ErrorKind::Validation, "path needs at least two samples");
    const double spacing = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    if (!(T >= spacing * (1.0 - 1e-9))) {
        std::ostringstream msg;
        msg << "block length " << T << " is below the snapshot spacing " << spacing;
        throw Error(ErrorKind::Resolution, msg.str());
    }
    std::vector<Block> out;
    for (std::size_t n = 0;; ++n) {
        const double target = static_cast<double>(n) * T;
        if (target > t.back() + 0.5 * spacing) break;
        if (target < t.front() - 0.5 * spacing) continue;
        auto it = std::lower_bound(t.begin(), t.end(), target);
        std::size_t k = static_cast<std::size_t>(it - t.begin());
        if (k == t.size() || (k > 0 && target - t[k - 1] <= t[k] - target)) --k;
        out.push_back({n, path.centers[k]});
    }
    return out;
}

void write_interface_csv(const std::string& path, const InterfacePath& ip, const std::string& config_hash) {
    Table table;
    table.header = {"time", "center"};
    for (std::size_t k = 0; k < ip.times.size(); ++k) table.rows.push_back({ip.times[k], ip.centers[k]});
    write_series(path, table);
    nlohmann::json meta{{"eps", ip.eps}, {"mode", to_string(ip.scale)}, {"lambda", ip.lambda}};
    meta["stopped_at"] = ip.stopped_at ? nlohmann::json(*ip.stopped_at) : nlohmann::json(nullptr);
    if (!config_hash.empty()) meta["config_hash"] = config_hash;
    write_sidecar(path, meta);
}

}  // namespace acwall
