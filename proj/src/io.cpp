#include "acwall/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "acwall/error.hpp"

namespace acwall {

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_series(const std::string& path, const Table& table) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c) out << ',';
        out << table.header[c];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size()) {
            throw Error(ErrorKind::Validation, "row width does not match the header in '" + path + "'");
        }
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            out << format_double(row[c]);
        }
        out << '\n';
    }
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

Table read_series(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "' for reading");
    Table t;
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::Io, "'" + path + "' is empty");
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) t.header.push_back(cell);
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw Error(ErrorKind::Io, "non-numeric cell '" + cell + "' in '" + path + "'");
            }
        }
        if (row.size() != t.header.size()) throw Error(ErrorKind::Io, "ragged row in '" + path + "'");
        t.rows.push_back(std::move(row));
    }
    return t;
}

void write_sidecar(const std::string& path, nlohmann::json meta) {
    meta["artifact_version"] = kArtifactVersion;
    const std::string side = path + ".json";
    std::ofstream out(side, std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open '" + side + "' for writing");
    out << meta.dump(2) << '\n';
    if (!out) throw Error(ErrorKind::Io, "write to '" + side + "' failed");
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

}  // namespace acwall
