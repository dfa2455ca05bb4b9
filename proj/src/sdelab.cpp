#include "acwall/sdelab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "acwall/error.hpp"
#include "acwall/io.hpp"
#include "acwall/random.hpp"

namespace acwall {

namespace {

// Distance over which the drift changes by an O(1) factor.
double length_scale(const DriftSpec& spec) {
    switch (spec.kind) {
        case DriftKind::SoftWall:
        case DriftKind::Sinh: return 0.25;
        case DriftKind::ExpWall: return 0.25 / spec.gamma;
        default: return std::numeric_limits<double>::infinity();
    }
}

constexpr std::size_t kMaxSubsteps = std::size_t{1} << 22;

// Advances y over time h with noise increment db. Sub-steps are sized so
// that drift plus noise displacement stays below `limit`; the noise is
// spread in proportion to the sub-step length.
double guarded_step(const DriftSpec& spec, double y, double h, double db, double limit) {
    double f = drift_eval(spec, y);
    const double rate = std::abs(db) / h;
    if ((std::abs(f) + rate) * h <= limit) return y + f * h + db;
    double left = h;
    std::size_t count = 0;
    while (left > 0.0) {
        double sub = limit / (std::abs(f) + rate);
        if (sub >= left * (1.0 - 1e-12)) sub = left;
        y += f * sub + db * (sub / h);
        left -= sub;
        if (!std::isfinite(y) || ++count > kMaxSubsteps) return std::numeric_limits<double>::quiet_NaN();
        f = drift_eval(spec, y);
    }
    return y;
}

}  // namespace

void DriftSpec::validate() const {
    if ((kind == DriftKind::Penalized || kind == DriftKind::ExpWall) && !(gamma > 0.0)) {
        throw Error(ErrorKind::Validation, "gamma: must be > 0");
    }
    if (kind == DriftKind::Custom && !custom) throw Error(ErrorKind::Validation, "custom drift: no function given");
}

std::string to_string(DriftKind k) {
    switch (k) {
        case DriftKind::SoftWall: return "soft_wall";
        case DriftKind::Sinh: return "sinh";
        case DriftKind::Penalized: return "penalized";
        case DriftKind::ExpWall: return "exp_wall";
        case DriftKind::Custom: return "custom";
    }
    return "custom";
}

double drift_eval(const DriftSpec& spec, double x) {
    switch (spec.kind) {
        case DriftKind::SoftWall: return 12.0 * std::exp(-4.0 * x);
        case DriftKind::Sinh: return -24.0 * std::sinh(4.0 * x);
        case DriftKind::Penalized: return spec.gamma * std::max(0.0, -x);
        case DriftKind::ExpWall: return 12.0 * spec.gamma * std::exp(-4.0 * spec.gamma * x);
        case DriftKind::Custom: return spec.custom(x);
    }
    return 0.0;
}

Path sample_brownian(double sigma2, double dt, std::size_t steps, std::uint64_t seed, std::uint64_t stream) {
    if (!(sigma2 >= 0.0)) throw Error(ErrorKind::Validation, "sigma2: must be >= 0");
    if (!(dt > 0.0)) throw Error(ErrorKind::Validation, "dt: must be > 0");
    Path p;
    p.dt = dt;
    p.sigma2 = sigma2;
    p.values.resize(steps + 1);
    p.values[0] = 0.0;
    if (steps == 0) return p;
    std::vector<double> z(steps);
    CounterNormal(seed).fill(stream, 0, z);
    const double scale = std::sqrt(sigma2 * dt);
    double acc = 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
        acc += scale * z[k];
        p.values[k + 1] = acc;
    }
    return p;
}

Path euler_maruyama(const DriftSpec& spec, double y0, const Path& noise) {
    spec.validate();
    if (noise.values.empty()) throw Error(ErrorKind::Validation, "noise path is empty");
    const double h = noise.dt;
    const double limit = std::min(0.5, 0.5 * length_scale(spec));
    Path out;
    out.dt = h;
    out.sigma2 = noise.sigma2;
    out.values.resize(noise.values.size());
    double y = y0;
    out.values[0] = y;
    for (std::size_t k = 0; k + 1 < noise.values.size(); ++k) {
        y = guarded_step(spec, y, h, noise.values[k + 1] - noise.values[k], limit);
        if (!std::isfinite(y)) {
            std::ostringstream msg;
            msg << to_string(spec.kind) << " drift: state became non-finite at step " << k + 1;
            throw Error(ErrorKind::BlowUp, msg.str());
        }
        out.values[k + 1] = y;
    }
    return out;
}

Reflection skorokhod_map(const Path& b) {
    Reflection r;
    r.reflected.dt = r.local_time.dt = b.dt;
    r.reflected.sigma2 = b.sigma2;
    r.reflected.values.resize(b.values.size());
    r.local_time.values.resize(b.values.size());
    double run = 0.0;
    for (std::size_t k = 0; k < b.values.size(); ++k) {
        run = std::max(run, -b.values[k]);
        r.local_time.values[k] = run;
        r.reflected.values[k] = b.values[k] + run;
    }
    return r;
}

Path envelope_upper(double delta, double gamma, const Path& b) {
    if (!(delta > 0.0 && gamma > 0.0)) throw Error(ErrorKind::Validation, "delta, gamma: must be > 0");
    const double c = 12.0 * gamma * std::exp(-4.0 * gamma * delta);
    Path z;
    z.dt = b.dt;
    z.sigma2 = b.sigma2;
    z.values.resize(b.values.size());
    double run = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < b.values.size(); ++k) {
        const double ct = c * b.time(k);
        run = std::max(run, -b.values[k] - ct);
        z.values[k] = delta + b.values[k] + ct + run;
    }
    return z;
}

WallComparison wall_comparison(double gamma, double delta, const Path& b) {
    if (!(gamma > 1.0)) throw Error(ErrorKind::Validation, "gamma: must be > 1");
    WallComparison w;
    w.penalized = euler_maruyama(DriftSpec::penalized(gamma), 0.0, b);
    w.exp_wall = euler_maruyama(DriftSpec::exp_wall(gamma), 0.0, b);
    w.envelope = envelope_upper(delta, gamma, b);
    w.lower_violation = 0.0;
    w.upper_violation = 0.0;
    for (std::size_t k = 0; k < b.values.size(); ++k) {
        w.lower_violation = std::max(w.lower_violation, w.penalized.values[k] - w.exp_wall.values[k]);
        w.upper_violation = std::max(w.upper_violation, w.exp_wall.values[k] - w.envelope.values[k]);
    }
    return w;
}

void write_path_csv(const std::string& file, const Path& p, const std::string& config_hash) {
    Table t;
    t.header = {"t", "value"};
    t.rows.reserve(p.values.size());
    for (std::size_t k = 0; k < p.values.size(); ++k) t.rows.push_back({p.time(k), p.values[k]});
    write_series(file, t);
    nlohmann::json meta{{"dt", p.dt}, {"sigma2", p.sigma2}, {"steps", p.steps()}};
    if (!config_hash.empty()) meta["config_hash"] = config_hash;
    write_sidecar(file, meta);
}

}  // namespace acwall
