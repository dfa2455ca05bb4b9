#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace acwall {

enum class ExperimentKind { Spectral, Spde, Sde, Wall, DriftFit };

std::string to_string(ExperimentKind k);
/// Throws ErrorKind::Validation for unknown names.
ExperimentKind parse_kind(const std::string& name);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Spectral;
    nlohmann::json params = nlohmann::json::object();  // validated, defaults filled in
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    std::uint64_t replicas = 1;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Flat JSON object or flat TOML (key = value lines). Reserved keys are
/// kind, seed, replicas and out; everything else is a parameter of the
/// experiment kind. `default_kind` is used when the document has no kind.
/// Errors name the offending field.
ExperimentConfig parse_config(const std::string& text, std::optional<ExperimentKind> default_kind = std::nullopt);

/// Same, from an already parsed flat object.
ExperimentConfig parse_config_json(const nlohmann::json& doc, std::optional<ExperimentKind> default_kind = std::nullopt);

/// Flat TOML subset to a JSON object: strings, integers, floats, booleans, comments.
nlohmann::json parse_flat_toml(const std::string& text);

/// Canonical JSON with every default spelled out; parse_config reads it back unchanged.
std::string serialize(const ExperimentConfig& cfg);

/// FNV-1a of the canonical serialisation, ignoring the output directory.
std::string config_hash(const ExperimentConfig& cfg);

/// Seed of replica i.
std::uint64_t replica_seed(const ExperimentConfig& cfg, std::uint64_t i);

/// Runs the experiment, writes its files under cfg.out_dir (each with a
/// sidecar) and returns a summary with the seeds used and wall-clock time.
/// The summary is also written to <out>/summary.json.
nlohmann::json run_experiment(const ExperimentConfig& cfg);

}  // namespace acwall
