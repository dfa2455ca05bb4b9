// acwall command line: one subcommand per experiment kind.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "acwall/config.hpp"
#include "acwall/error.hpp"

namespace {

struct Overrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> replicas;
    std::optional<std::string> out;
    std::optional<double> a, b, dx, eps, dt, horizon, zeta, gamma, delta;
    std::optional<std::int64_t> stride;
    std::optional<std::string> init;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_path, "JSON or flat TOML experiment file");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--replicas", o.replicas, "number of replicas");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw acwall::Error(acwall::ErrorKind::Io, "cannot read config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json load_document(const Overrides& o) {
    if (o.config_path.empty()) return nlohmann::json::object();
    const std::string text = read_file(o.config_path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        try {
            return nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw acwall::Error(acwall::ErrorKind::Validation, std::string("config is not valid JSON: ") + e.what());
        }
    }
    return acwall::parse_flat_toml(text);
}

template <class T>
void put(nlohmann::json& doc, const char* key, const std::optional<T>& v) {
    if (v) doc[key] = *v;
}

int run(acwall::ExperimentKind kind, const Overrides& o) {
    nlohmann::json doc = load_document(o);
    if (doc.contains("kind") && doc["kind"].is_string() && doc["kind"].get<std::string>() != acwall::to_string(kind)) {
        throw acwall::Error(acwall::ErrorKind::Validation,
                            "kind: config is for '" + doc["kind"].get<std::string>() + "', subcommand runs '" +
                                acwall::to_string(kind) + "'");
    }
    put(doc, "seed", o.seed);
    put(doc, "replicas", o.replicas);
    put(doc, "out", o.out);
    put(doc, "a", o.a);
    put(doc, "b", o.b);
    put(doc, "dx", o.dx);
    put(doc, "eps", o.eps);
    put(doc, "dt", o.dt);
    put(doc, "horizon", o.horizon);
    put(doc, "zeta", o.zeta);
    put(doc, "gamma", o.gamma);
    put(doc, "delta", o.delta);
    put(doc, "stride", o.stride);
    put(doc, "init", o.init);
    const acwall::ExperimentConfig cfg = acwall::parse_config_json(doc, kind);
    const nlohmann::json summary = acwall::run_experiment(cfg);
    std::cout << summary.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Allen-Cahn interface and wall-limit laboratory"};
    app.require_subcommand(1);

    Overrides o;
    auto* spectral = app.add_subcommand("spectral", "eigenvalues of the linearised operator, optional Kellogg report");
    auto* spde = app.add_subcommand("spde-run", "stochastic Allen-Cahn trajectories and interface centers");
    auto* sde = app.add_subcommand("sde-run", "limiting one-dimensional SDE paths");
    auto* wall = app.add_subcommand("wall-compare", "penalised, exponential and envelope walls on shared noise");
    auto* drift = app.add_subcommand("drift-fit", "binned drift estimate from an SDE ensemble");
    for (auto* c : {spectral, spde, sde, wall, drift}) add_common(c, o);

    for (auto* c : {spectral, spde}) {
        c->add_option("--a", o.a, "left half-length");
        c->add_option("--b", o.b, "right half-length");
        c->add_option("--dx", o.dx, "target grid spacing");
    }
    spectral->add_option("--zeta", o.zeta, "center of the standing wave");
    spde->add_option("--eps", o.eps, "noise strength");
    spde->add_option("--dt", o.dt, "time step");
    spde->add_option("--horizon", o.horizon, "final time");
    spde->add_option("--stride", o.stride, "steps between snapshots");
    spde->add_option("--init", o.init, "wave:<center> or file:<path>");
    for (auto* c : {sde, wall, drift}) {
        c->add_option("--dt", o.dt, "time step");
        c->add_option("--horizon", o.horizon, "final time");
        c->add_option("--gamma", o.gamma, "wall stiffness");
    }
    wall->add_option("--delta", o.delta, "envelope offset");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (spectral->parsed()) return run(acwall::ExperimentKind::Spectral, o);
        if (spde->parsed()) return run(acwall::ExperimentKind::Spde, o);
        if (sde->parsed()) return run(acwall::ExperimentKind::Sde, o);
        if (wall->parsed()) return run(acwall::ExperimentKind::Wall, o);
        if (drift->parsed()) return run(acwall::ExperimentKind::DriftFit, o);
    } catch (const acwall::Error& e) {
        std::cerr << e.what() << '\n';
        return acwall::exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}
