#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace acwall {

/// Column-named numeric table; every row has header.size() entries.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// CSV with 17 significant digits, so read_series returns identical doubles.
/// Throws ErrorKind::Io when the destination cannot be written.
void write_series(const std::string& path, const Table& table);

Table read_series(const std::string& path);

inline constexpr const char* kArtifactVersion = "0.1.0";

/// Writes `<path>.json` next to an output file. The record always carries
/// the artifact version; callers add the config hash and anything else.
void write_sidecar(const std::string& path, nlohmann::json meta);

/// 64-bit FNV-1a, hex-encoded.
std::string fnv1a_hex(const std::string& text);

}  // namespace acwall
