#include "acwall/config.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "acwall/error.hpp"
#include "acwall/interface.hpp"
#include "acwall/io.hpp"
#include "acwall/random.hpp"
#include "acwall/sdelab.hpp"
#include "acwall/spde.hpp"
#include "acwall/spectral.hpp"
#include "acwall/stats.hpp"

namespace acwall {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
    throw Error(ErrorKind::Validation, field + ": " + what);
}

enum class FieldType { Number, Integer, Bool, String };

// Check on an individual value; returns an error message or "".
using Check = std::function<std::string(const json&)>;

struct Field {
    const char* name;
    FieldType type;
    json fallback;  // null: required; "optional" marker handled by `optional`
    Check check = {};
    bool optional = false;
};

std::string positive(const json& v) { return v.get<double>() > 0.0 ? "" : "must be > 0"; }
std::string non_negative(const json& v) { return v.get<double>() >= 0.0 ? "" : "must be >= 0"; }
std::string at_least_one(const json& v) { return v.get<std::int64_t>() >= 1 ? "" : "must be >= 1"; }
std::string fraction(const json& v) {
    const double x = v.get<double>();
    return x > 0.0 && x < 1.0 ? "" : "must lie in (0, 1)";
}
std::string drift_name(const json& v) {
    const auto s = v.get<std::string>();
    return s == "soft_wall" || s == "sinh" || s == "penalized" || s == "exp_wall"
               ? ""
               : "must be one of soft_wall, sinh, penalized, exp_wall";
}
std::string init_spec(const json& v) {
    const auto s = v.get<std::string>();
    if (s.rfind("file:", 0) == 0 && s.size() > 5) return "";
    if (s.rfind("wave:", 0) == 0) {
        try {
            std::size_t used = 0;
            std::stod(s.substr(5), &used);
            if (used == s.size() - 5) return "";
        } catch (const std::exception&) {
        }
    }
    return "must be wave:<center> or file:<path>";
}
std::string output_format(const json& v) {
    const auto s = v.get<std::string>();
    return s == "csv" || s == "binary" ? "" : "must be csv or binary";
}

const std::vector<Field>& schema(ExperimentKind kind) {
    static const std::vector<Field> spectral{
        {"a", FieldType::Number, nullptr, positive},
        {"b", FieldType::Number, nullptr, positive},
        {"dx", FieldType::Number, nullptr, positive},
        {"zeta", FieldType::Number, 0.0},
        {"modes", FieldType::Integer, 2, at_least_one},
        {"kellogg", FieldType::Bool, false},
    };
    static const std::vector<Field> spde{
        {"a", FieldType::Number, nullptr, positive},
        {"b", FieldType::Number, nullptr, positive},
        {"dx", FieldType::Number, nullptr, positive},
        {"eps", FieldType::Number, nullptr, non_negative},
        {"dt", FieldType::Number, 0.01, positive},
        {"horizon", FieldType::Number, 1.0, positive},
        {"stride", FieldType::Integer, 1, at_least_one},
        {"init", FieldType::String, "wave:0", init_spec},
        {"format", FieldType::String, "csv", output_format},
        {"track", FieldType::Bool, true},
        {"tube_radius", FieldType::Number, 0.3, positive},
        {"wall_margin", FieldType::Number, 1.0, positive},
        {"center_fraction", FieldType::Number, 0.8, fraction},
        {"tol", FieldType::Number, 1e-10, positive},
    };
    static const std::vector<Field> sde{
        {"drift", FieldType::String, "soft_wall", drift_name},
        {"gamma", FieldType::Number, 0.0, non_negative},
        {"sigma2", FieldType::Number, 0.75, non_negative},
        {"dt", FieldType::Number, 1e-3, positive},
        {"horizon", FieldType::Number, 1.0, positive},
        {"y0", FieldType::Number, 0.0},
    };
    static const std::vector<Field> wall{
        {"gamma", FieldType::Number, nullptr},
        {"delta", FieldType::Number, nullptr, positive},
        {"sigma2", FieldType::Number, 0.75, non_negative},
        {"dt", FieldType::Number, 1e-5, positive},
        {"horizon", FieldType::Number, 1.0, positive},
    };
    static const std::vector<Field> drift_fit{
        {"drift", FieldType::String, "soft_wall", drift_name},
        {"gamma", FieldType::Number, 0.0, non_negative},
        {"sigma2", FieldType::Number, 0.75, non_negative},
        {"dt", FieldType::Number, 1e-3, positive},
        {"horizon", FieldType::Number, 1.0, positive},
        {"y0", FieldType::Number, 0.0},
        {"lag", FieldType::Integer, 1, at_least_one},
        {"bins", FieldType::Integer, 20, at_least_one},
        {"min_count", FieldType::Integer, 200, at_least_one},
        {"lo", FieldType::Number, nullptr, {}, true},
        {"hi", FieldType::Number, nullptr, {}, true},
    };
    switch (kind) {
        case ExperimentKind::Spectral: return spectral;
        case ExperimentKind::Spde: return spde;
        case ExperimentKind::Sde: return sde;
        case ExperimentKind::Wall: return wall;
        case ExperimentKind::DriftFit: return drift_fit;
    }
    return spectral;
}

json coerce(const json& v, FieldType type, const std::string& field) {
    switch (type) {
        case FieldType::Number:
            if (!v.is_number()) invalid(field, "expected a number");
            if (!std::isfinite(v.get<double>())) invalid(field, "must be finite");
            return v.get<double>();
        case FieldType::Integer:
            if (v.is_number_integer()) return v.get<std::int64_t>();
            if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>() &&
                std::abs(v.get<double>()) < 9e15) {
                return static_cast<std::int64_t>(v.get<double>());
            }
            invalid(field, "expected an integer");
        case FieldType::Bool:
            if (!v.is_boolean()) invalid(field, "expected true or false");
            return v;
        case FieldType::String:
            if (!v.is_string()) invalid(field, "expected a string");
            return v;
    }
    return v;
}

std::uint64_t read_unsigned(const json& v, const std::string& field) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    invalid(field, "expected a non-negative integer");
}

void cross_check(ExperimentKind kind, const json& p) {
    auto num = [&](const char* k) { return p.at(k).get<double>(); };
    switch (kind) {
        case ExperimentKind::Spectral:
        case ExperimentKind::Spde:
            if (num("a") > num("b")) invalid("a", "must be <= b");
            if (kind == ExperimentKind::Spectral && !(num("zeta") > -num("a") && num("zeta") < num("b"))) {
                invalid("zeta", "must lie in (-a, b)");
            }
            if (kind == ExperimentKind::Spde) {
                if (num("horizon") < num("dt")) invalid("horizon", "must be >= dt");
                const auto init = p.at("init").get<std::string>();
                if (init.rfind("wave:", 0) == 0) {
                    const double z = std::stod(init.substr(5));
                    if (!(z > -num("a") && z < num("b"))) invalid("init", "wave center must lie in (-a, b)");
                }
            }
            break;
        case ExperimentKind::Sde:
        case ExperimentKind::DriftFit: {
            const auto d = p.at("drift").get<std::string>();
            if ((d == "penalized" || d == "exp_wall") && !(num("gamma") > 0.0)) {
                invalid("gamma", "must be > 0 for the " + d + " drift");
            }
            if (num("horizon") < num("dt")) invalid("horizon", "must be >= dt");
            if (kind == ExperimentKind::DriftFit && p.contains("lo") && p.contains("hi") && !(num("lo") < num("hi"))) {
                invalid("lo", "must be < hi");
            }
            break;
        }
        case ExperimentKind::Wall:
            if (!(num("gamma") > 1.0)) invalid("gamma", "must be > 1");
            if (num("horizon") < num("dt")) invalid("horizon", "must be >= dt");
            break;
    }
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Strips a trailing comment that is not inside a string.
std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

json toml_value(const std::string& raw, const std::string& key, int line) {
    auto fail = [&](const std::string& what) -> json {
        throw Error(ErrorKind::Validation, key + ": " + what + " (line " + std::to_string(line) + ")");
    };
    if (raw.empty()) return fail("missing value");
    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"') return fail("unterminated string");
        try {
            return json::parse(raw);
        } catch (const json::exception&) {
            return fail("malformed string");
        }
    }
    if (raw == "true") return true;
    if (raw == "false") return false;
    std::string num;
    for (char c : raw) {
        if (c != '_') num.push_back(c);
    }
    const bool looks_float = num.find_first_of(".eE") != std::string::npos || num == "inf" || num == "nan";
    try {
        std::size_t used = 0;
        if (!looks_float) {
            if (num.front() == '-') {
                const long long v = std::stoll(num, &used);
                if (used == num.size()) return v;
            } else {
                const unsigned long long v = std::stoull(num, &used);
                if (used == num.size()) return v;
            }
        } else {
            const double v = std::stod(num, &used);
            if (used == num.size()) return v;
        }
    } catch (const std::exception&) {
    }
    return fail("cannot parse value '" + raw + "'");
}

std::string replica_file(const std::string& dir, const std::string& stem, std::uint64_t i, const std::string& ext) {
    return (std::filesystem::path(dir) / (stem + "_" + std::to_string(i) + ext)).string();
}

// Runs job(i) for i < n on a small worker pool; rethrows the error of the
// lowest failing index.
void parallel_for(std::uint64_t n, const std::function<void(std::uint64_t)>& job) {
    const std::uint64_t workers = std::max<std::uint64_t>(1, std::min<std::uint64_t>(n, std::thread::hardware_concurrency()));
    std::vector<std::exception_ptr> errors(n);
    std::mutex mu;
    std::uint64_t next = 0;
    auto worker = [&] {
        for (;;) {
            std::uint64_t i;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (next >= n) return;
                i = next++;
            }
            try {
                job(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

DriftSpec drift_from(const json& p) {
    const auto name = p.at("drift").get<std::string>();
    const double gamma = p.at("gamma").get<double>();
    if (name == "sinh") return DriftSpec::sinh();
    if (name == "penalized") return DriftSpec::penalized(gamma);
    if (name == "exp_wall") return DriftSpec::exp_wall(gamma);
    return DriftSpec::soft_wall();
}

Profile initial_profile(const std::string& init, const Domain& dom) {
    if (init.rfind("wave:", 0) == 0) return wave_initial(dom, std::stod(init.substr(5)));
    const std::string file = init.substr(5);
    const Table t = read_series(file);
    if (t.rows.empty()) throw Error(ErrorKind::Validation, "init: '" + file + "' has no rows");
    std::vector<double> values;
    if (!t.header.empty() && t.header.front() == "time") {
        values.assign(t.rows.back().begin() + 1, t.rows.back().end());
    } else if (t.header.size() == 2) {
        for (const auto& r : t.rows) values.push_back(r[1]);
    } else {
        throw Error(ErrorKind::Validation, "init: '" + file + "' is neither a trajectory nor an x,value table");
    }
    if (values.size() != dom.size()) {
        throw Error(ErrorKind::Validation, "init: profile has " + std::to_string(values.size()) + " nodes, grid has " +
                                               std::to_string(dom.size()));
    }
    Profile p(dom, std::move(values));
    p.values.front() = -1.0;
    p.values.back() = 1.0;
    return p;
}

json run_spectral(const ExperimentConfig& cfg, const std::string& hash, json& outputs) {
    const auto& p = cfg.params;
    const double a = p.at("a").get<double>(), b = p.at("b").get<double>(), dx = p.at("dx").get<double>();
    const double zeta = p.at("zeta").get<double>();
    const Domain dom = build_domain(a, b, dx);
    const auto op = assemble_operator(zeta, dom);
    SpectralSummary s{a, b, zeta, dom.dx(), {}, std::nullopt};
    for (const auto& pair : eigenpairs(op, static_cast<std::size_t>(p.at("modes").get<std::int64_t>()))) {
        s.lambda.push_back(pair.eigenvalue);
    }
    if (p.at("kellogg").get<bool>()) s.kellogg = kellogg(zeta, dom);
    json report = json::parse(to_json(s));
    const std::string file = (std::filesystem::path(cfg.out_dir) / "spectral.json").string();
    std::ofstream out(file, std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open '" + file + "' for writing");
    out << report.dump(2) << '\n';
    if (!out) throw Error(ErrorKind::Io, "write to '" + file + "' failed");
    write_sidecar(file, {{"config_hash", hash}, {"kind", "spectral"}});
    outputs.push_back(file);
    return report;
}

json run_spde(const ExperimentConfig& cfg, const std::string& hash, json& outputs) {
    const auto& p = cfg.params;
    const Domain dom = build_domain(p.at("a").get<double>(), p.at("b").get<double>(), p.at("dx").get<double>());
    SpdeConfig base;
    base.domain = dom;
    base.eps = p.at("eps").get<double>();
    base.dt = p.at("dt").get<double>();
    base.horizon = p.at("horizon").get<double>();
    base.stride = static_cast<std::size_t>(p.at("stride").get<std::int64_t>());
    base.initial = initial_profile(p.at("init").get<std::string>(), dom);
    base.validate();
    StoppingSpec stop{p.at("tube_radius").get<double>(), p.at("wall_margin").get<double>(),
                      p.at("center_fraction").get<double>()};
    const bool binary = p.at("format").get<std::string>() == "binary";
    const bool track = p.at("track").get<bool>();
    const double tol = p.at("tol").get<double>();

    std::vector<json> per(cfg.replicas);
    std::vector<std::vector<std::string>> files(cfg.replicas);
    parallel_for(cfg.replicas, [&](std::uint64_t i) {
        SpdeConfig c = base;
        c.seed = replica_seed(cfg, i);
        const FieldTrajectory traj = simulate(c);
        const std::string f = replica_file(cfg.out_dir, "trajectory", i, binary ? ".bin" : ".csv");
        if (binary) write_trajectory_binary(f, traj, hash);
        else write_trajectory_csv(f, traj, hash);
        files[i].push_back(f);
        json r{{"replica", i}, {"seed", c.seed}, {"snapshots", traj.times.size()}};
        if (track) {
            const InterfacePath path = track_centers(traj, stop, tol);
            const std::string cf = replica_file(cfg.out_dir, "centers", i, ".csv");
            write_interface_csv(cf, path, hash);
            files[i].push_back(cf);
            r["final_center"] = path.centers.empty() ? json(nullptr) : json(path.centers.back());
            r["stopped_at"] = path.stopped_at ? json(*path.stopped_at) : json(nullptr);
        }
        per[i] = std::move(r);
    });
    for (const auto& fs : files) {
        for (const auto& f : fs) outputs.push_back(f);
    }
    return {{"grid_points", dom.size()}, {"dx", dom.dx()}, {"replicas", per}};
}

Path noise_for(const json& p, std::uint64_t seed) {
    const double dt = p.at("dt").get<double>();
    const auto steps = static_cast<std::size_t>(std::llround(p.at("horizon").get<double>() / dt));
    return sample_brownian(p.at("sigma2").get<double>(), dt, steps, seed);
}

json run_sde(const ExperimentConfig& cfg, const std::string& hash, json& outputs) {
    const auto& p = cfg.params;
    const DriftSpec drift = drift_from(p);
    std::vector<double> terminal(cfg.replicas);
    std::vector<std::string> files(cfg.replicas);
    parallel_for(cfg.replicas, [&](std::uint64_t i) {
        const Path y = euler_maruyama(drift, p.at("y0").get<double>(), noise_for(p, replica_seed(cfg, i)));
        files[i] = replica_file(cfg.out_dir, "path", i, ".csv");
        write_path_csv(files[i], y, hash);
        terminal[i] = y.values.back();
    });
    for (const auto& f : files) outputs.push_back(f);
    double mean = 0.0;
    for (double v : terminal) mean += v;
    mean /= static_cast<double>(terminal.size());
    return {{"drift", p.at("drift")}, {"terminal_values", terminal}, {"terminal_mean", mean}};
}

json run_wall(const ExperimentConfig& cfg, const std::string& hash, json& outputs) {
    const auto& p = cfg.params;
    const double gamma = p.at("gamma").get<double>(), delta = p.at("delta").get<double>();
    std::vector<double> sup(cfg.replicas), lower(cfg.replicas), upper(cfg.replicas);
    std::vector<double> y_end(cfg.replicas), r_end(cfg.replicas);
    std::vector<std::string> files(cfg.replicas);
    parallel_for(cfg.replicas, [&](std::uint64_t i) {
        const Path b = noise_for(p, replica_seed(cfg, i));
        const WallComparison w = wall_comparison(gamma, delta, b);
        const Reflection r = skorokhod_map(b);
        sup[i] = sup_distance(w.penalized, r.reflected);
        lower[i] = w.lower_violation;
        upper[i] = w.upper_violation;
        y_end[i] = w.penalized.values.back();
        r_end[i] = r.reflected.values.back();
        Table t;
        t.header = {"t", "B", "Y_penalized", "X_exp_wall", "Z_envelope", "reflected"};
        for (std::size_t k = 0; k < b.values.size(); ++k) {
            t.rows.push_back({b.time(k), b.values[k], w.penalized.values[k], w.exp_wall.values[k],
                              w.envelope.values[k], r.reflected.values[k]});
        }
        files[i] = replica_file(cfg.out_dir, "wall", i, ".csv");
        write_series(files[i], t);
        write_sidecar(files[i], {{"config_hash", hash}, {"gamma", gamma}, {"delta", delta}, {"dt", b.dt}});
    });
    for (const auto& f : files) outputs.push_back(f);
    json summary{{"gamma", gamma},
                 {"delta", delta},
                 {"sup_distance", sup},
                 {"violations", {{"lower", lower}, {"upper", upper}}}};
    const auto ks = ks_two_sample(y_end, r_end);
    summary["ks"] = {{"statistic", ks.statistic}, {"p_value", ks.p_value}};
    return summary;
}

json run_drift_fit(const ExperimentConfig& cfg, const std::string& hash, json& outputs) {
    const auto& p = cfg.params;
    const DriftSpec drift = drift_from(p);
    std::vector<Path> paths(cfg.replicas);
    parallel_for(cfg.replicas, [&](std::uint64_t i) {
        paths[i] = euler_maruyama(drift, p.at("y0").get<double>(), noise_for(p, replica_seed(cfg, i)));
    });
    DriftBinning bins;
    bins.bins = static_cast<std::size_t>(p.at("bins").get<std::int64_t>());
    bins.lag = static_cast<std::size_t>(p.at("lag").get<std::int64_t>());
    bins.min_count = static_cast<std::size_t>(p.at("min_count").get<std::int64_t>());
    if (p.contains("lo")) bins.lo = p.at("lo").get<double>();
    if (p.contains("hi")) bins.hi = p.at("hi").get<double>();
    const DriftFit fit = estimate_drift(paths, bins);
    const std::string file = (std::filesystem::path(cfg.out_dir) / "drift_fit.csv").string();
    write_drift_csv(file, fit, hash);
    outputs.push_back(file);
    json summary{{"bins", fit.bin_centers}, {"mean", fit.mean}, {"se", fit.se}, {"counts", fit.counts}};

    // Exponential drifts: straight line in log(drift) against y.
    std::vector<double> xs, ys, ws;
    for (std::size_t k = 0; k < fit.mean.size(); ++k) {
        if (fit.mean[k] <= 0.0) continue;
        xs.push_back(fit.bin_centers[k]);
        ys.push_back(std::log(fit.mean[k]));
        ws.push_back(std::pow(fit.mean[k] / fit.se[k], 2));
    }
    if (xs.size() >= 2) {
        const LineFit lf = fit_line(xs, ys, ws);
        summary["log_drift_fit"] = {{"slope", lf.slope}, {"intercept", lf.intercept}};
    }
    return summary;
}

}  // namespace

std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Spectral: return "spectral";
        case ExperimentKind::Spde: return "spde";
        case ExperimentKind::Sde: return "sde";
        case ExperimentKind::Wall: return "wall";
        case ExperimentKind::DriftFit: return "drift_fit";
    }
    return "spectral";
}

ExperimentKind parse_kind(const std::string& name) {
    for (auto k : {ExperimentKind::Spectral, ExperimentKind::Spde, ExperimentKind::Sde, ExperimentKind::Wall,
                   ExperimentKind::DriftFit}) {
        if (to_string(k) == name) return k;
    }
    invalid("kind", "unknown experiment kind '" + name + "'");
}

nlohmann::json parse_flat_toml(const std::string& text) {
    json doc = json::object();
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trim(strip_comment(line));
        if (s.empty()) continue;
        if (s.front() == '[') {
            throw Error(ErrorKind::Validation, "tables are not supported (line " + std::to_string(lineno) + ")");
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::Validation, "expected key = value (line " + std::to_string(lineno) + ")");
        }
        const std::string key = trim(s.substr(0, eq));
        if (key.empty()) throw Error(ErrorKind::Validation, "empty key (line " + std::to_string(lineno) + ")");
        if (doc.contains(key)) invalid(key, "duplicate key");
        doc[key] = toml_value(trim(s.substr(eq + 1)), key, lineno);
    }
    return doc;
}

ExperimentConfig parse_config_json(const nlohmann::json& doc, std::optional<ExperimentKind> default_kind) {
    if (!doc.is_object()) throw Error(ErrorKind::Validation, "config must be a flat object");
    ExperimentConfig cfg;
    if (doc.contains("kind")) {
        if (!doc["kind"].is_string()) invalid("kind", "expected a string");
        cfg.kind = parse_kind(doc["kind"].get<std::string>());
    } else if (default_kind) {
        cfg.kind = *default_kind;
    } else {
        invalid("kind", "missing");
    }
    if (doc.contains("seed")) cfg.seed = read_unsigned(doc["seed"], "seed");
    if (doc.contains("replicas")) {
        cfg.replicas = read_unsigned(doc["replicas"], "replicas");
        if (cfg.replicas < 1) invalid("replicas", "must be >= 1");
    }
    if (doc.contains("out")) {
        if (!doc["out"].is_string() || doc["out"].get<std::string>().empty()) invalid("out", "expected a directory path");
        cfg.out_dir = doc["out"].get<std::string>();
    }

    const auto& fields = schema(cfg.kind);
    for (const auto& [key, value] : doc.items()) {
        if (key == "kind" || key == "seed" || key == "replicas" || key == "out") continue;
        const bool known = std::any_of(fields.begin(), fields.end(), [&](const Field& f) { return key == f.name; });
        if (!known) invalid(key, "unknown field for a " + to_string(cfg.kind) + " experiment");
    }
    for (const auto& f : fields) {
        if (!doc.contains(f.name)) {
            if (f.optional) continue;
            if (f.fallback.is_null()) invalid(f.name, "missing");
            cfg.params[f.name] = f.fallback;
            continue;
        }
        const json v = coerce(doc[f.name], f.type, f.name);
        if (f.check) {
            const std::string msg = f.check(v);
            if (!msg.empty()) invalid(f.name, msg);
        }
        cfg.params[f.name] = v;
    }
    cross_check(cfg.kind, cfg.params);
    return cfg;
}

ExperimentConfig parse_config(const std::string& text, std::optional<ExperimentKind> default_kind) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json doc;
        try {
            doc = json::parse(text);
        } catch (const json::parse_error& e) {
            throw Error(ErrorKind::Validation, std::string("config is not valid JSON: ") + e.what());
        }
        return parse_config_json(doc, default_kind);
    }
    return parse_config_json(parse_flat_toml(text), default_kind);
}

std::string serialize(const ExperimentConfig& cfg) {
    json doc = cfg.params;
    doc["kind"] = to_string(cfg.kind);
    doc["seed"] = cfg.seed;
    doc["replicas"] = cfg.replicas;
    doc["out"] = cfg.out_dir;
    return doc.dump(2);
}

std::string config_hash(const ExperimentConfig& cfg) {
    ExperimentConfig c = cfg;
    c.out_dir = "-";
    return fnv1a_hex(serialize(c));
}

std::uint64_t replica_seed(const ExperimentConfig& cfg, std::uint64_t i) { return derive_seed(cfg.seed, i); }

nlohmann::json run_experiment(const ExperimentConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create output directory '" + cfg.out_dir + "': " + ec.message());

    const std::string hash = config_hash(cfg);
    json outputs = json::array();
    json result;
    switch (cfg.kind) {
        case ExperimentKind::Spectral: result = run_spectral(cfg, hash, outputs); break;
        case ExperimentKind::Spde: result = run_spde(cfg, hash, outputs); break;
        case ExperimentKind::Sde: result = run_sde(cfg, hash, outputs); break;
        case ExperimentKind::Wall: result = run_wall(cfg, hash, outputs); break;
        case ExperimentKind::DriftFit: result = run_drift_fit(cfg, hash, outputs); break;
    }
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t i = 0; i < cfg.replicas; ++i) seeds.push_back(replica_seed(cfg, i));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json summary{{"kind", to_string(cfg.kind)},
                 {"seed", cfg.seed},
                 {"replica_seeds", seeds},
                 {"config_hash", hash},
                 {"artifact_version", kArtifactVersion},
                 {"wall_clock_seconds", secs},
                 {"outputs", outputs},
                 {"result", result}};
    const std::string file = (std::filesystem::path(cfg.out_dir) / "summary.json").string();
    std::ofstream out(file, std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open '" + file + "' for writing");
    out << summary.dump(2) << '\n';
    if (!out) throw Error(ErrorKind::Io, "write to '" + file + "' failed");
    write_sidecar(file, {{"config_hash", hash}, {"kind", to_string(cfg.kind)}});
    return summary;
}

}  // namespace acwall
