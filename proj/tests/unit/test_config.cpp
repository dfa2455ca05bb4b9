#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "acwall/config.hpp"
#include "acwall/error.hpp"
#include "acwall/io.hpp"

using namespace acwall;
namespace fs = std::filesystem;

namespace {

std::string message_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Validation);
        return e.what();
    }
    FAIL("expected a validation error");
    return "";
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("acwall_cfg_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("minimal spectral config") {
    const auto cfg = parse_config(R"({"a": 3, "b": 3, "dx": 0.002, "zeta": 0})", ExperimentKind::Spectral);
    CHECK(cfg.kind == ExperimentKind::Spectral);
    CHECK(cfg.params["dx"].get<double>() == 0.002);
    CHECK(cfg.params["modes"].get<int>() == 2);
    CHECK(cfg.replicas == 1);
    CHECK(message_of([] { parse_config(R"({"a": 3, "b": 3, "dx": 0.002})"); }).find("kind") != std::string::npos);
}

TEST_CASE("validation errors name the field") {
    CHECK(message_of([] { parse_config(R"({"kind": "spde", "a": 5, "b": 5, "dx": 0.02, "eps": -1})"); })
              .find("eps") != std::string::npos);
    CHECK(message_of([] { parse_config(R"({"kind": "spectral", "a": 3, "b": 3, "dx": 0.01, "bogus": 1})"); })
              .find("bogus") != std::string::npos);
    CHECK(message_of([] { parse_config(R"({"kind": "spectral", "a": 3, "b": 3})"); }).find("dx") != std::string::npos);
    CHECK(message_of([] { parse_config(R"({"kind": "spectral", "a": "3", "b": 3, "dx": 0.1})"); })
              .find("a: expected a number") != std::string::npos);
    CHECK(message_of([] { parse_config(R"({"kind": "telepathy"})"); }).find("kind") != std::string::npos);
    CHECK(message_of([] { parse_config(R"({"kind": "wall", "gamma": 0.5, "delta": 0.1})"); }).find("gamma") !=
          std::string::npos);
    CHECK(message_of([] { parse_config(R"({"kind": "sde", "drift": "penalized"})"); }).find("gamma") !=
          std::string::npos);
    CHECK(message_of([] { parse_config(R"({"kind": "spde", "a": 5, "b": 5, "dx": 0.02, "eps": 0, "stride": 1.5})"); })
              .find("stride") != std::string::npos);
    CHECK(message_of([] { parse_config("{\"kind\": "); }).find("JSON") != std::string::npos);
}

TEST_CASE("flat TOML") {
    const std::string text = R"(
# recipe
kind = "spde"
a = 5          # half-length
b = 5.0
dx = 0.02
eps = 1e-3
stride = 10
seed = 18446744073709551615
init = "wave:0.5"
track = false
)";
    const auto cfg = parse_config(text);
    CHECK(cfg.kind == ExperimentKind::Spde);
    CHECK(cfg.params["a"].get<double>() == 5.0);
    CHECK(cfg.params["eps"].get<double>() == 1e-3);
    CHECK(cfg.params["stride"].get<int>() == 10);
    CHECK(cfg.seed == 18446744073709551615ull);
    CHECK(cfg.params["init"] == "wave:0.5");
    CHECK(cfg.params["track"] == false);
    CHECK(message_of([] { parse_config("[section]\nkind = \"sde\"\n"); }).find("line 1") != std::string::npos);
    CHECK(message_of([] { parse_config("kind = \"sde\"\ndt = abc\n"); }).find("dt") != std::string::npos);
}

TEST_CASE("serialise round trip") {
    for (const char* text : {R"({"kind": "spectral", "a": 3, "b": 4, "dx": 0.01, "zeta": 0.5, "kellogg": true})",
                             R"({"kind": "spde", "a": 5, "b": 5, "dx": 0.02, "eps": 0.001, "seed": 9, "replicas": 3})",
                             R"({"kind": "drift_fit", "lo": -0.3, "hi": 0.6, "bins": 12})",
                             R"({"kind": "wall", "gamma": 100, "delta": 0.1, "out": "x/y"})"}) {
        const auto cfg = parse_config(text);
        const auto again = parse_config(serialize(cfg));
        CHECK(again == cfg);
        CHECK(serialize(again) == serialize(cfg));
        CHECK(config_hash(again) == config_hash(cfg));
    }
}

TEST_CASE("spectral run writes a report") {
    const fs::path dir = scratch("spectral");
    auto cfg = parse_config(R"({"kind": "spectral", "a": 3, "b": 3, "dx": 0.01, "modes": 3})");
    cfg.out_dir = dir.string();
    const auto summary = run_experiment(cfg);
    CHECK(summary["kind"] == "spectral");
    CHECK(summary["config_hash"] == config_hash(cfg));
    CHECK(summary["result"]["lambda"].size() == 3);
    CHECK(fs::exists(dir / "spectral.json"));
    CHECK(fs::exists(dir / "spectral.json.json"));
    CHECK(fs::exists(dir / "summary.json"));
    fs::remove_all(dir);
}

TEST_CASE("replicated spde run is deterministic") {
    const fs::path d1 = scratch("spde1"), d2 = scratch("spde2");
    auto cfg = parse_config(
        R"({"kind": "spde", "a": 3, "b": 3, "dx": 0.1, "eps": 0.01, "dt": 0.01, "horizon": 0.5, "stride": 10, "seed": 5, "replicas": 8})");
    cfg.out_dir = d1.string();
    const auto s1 = run_experiment(cfg);
    cfg.out_dir = d2.string();
    run_experiment(cfg);
    REQUIRE(s1["replica_seeds"].size() == 8);
    for (std::uint64_t i = 0; i < 8; ++i) {
        CHECK(s1["replica_seeds"][i].get<std::uint64_t>() == replica_seed(cfg, i));
        const std::string name = "trajectory_" + std::to_string(i) + ".csv";
        REQUIRE(fs::exists(d1 / name));
        CHECK(slurp(d1 / name) == slurp(d2 / name));
        CHECK(slurp(d1 / ("centers_" + std::to_string(i) + ".csv")) ==
              slurp(d2 / ("centers_" + std::to_string(i) + ".csv")));
        const auto meta = nlohmann::json::parse(slurp(d1 / (name + ".json")));
        CHECK(meta["config_hash"] == config_hash(cfg));
        CHECK(meta["artifact_version"] == kArtifactVersion);
    }
    CHECK(slurp(d1 / "trajectory_0.csv") != slurp(d1 / "trajectory_1.csv"));
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("sde, wall and drift runs") {
    const fs::path dir = scratch("sde");
    auto sde = parse_config(R"({"kind": "sde", "dt": 0.001, "horizon": 0.1, "replicas": 2})");
    sde.out_dir = dir.string();
    CHECK(run_experiment(sde)["result"]["terminal_values"].size() == 2);
    CHECK(fs::exists(dir / "path_1.csv"));

    auto wall = parse_config(R"({"kind": "wall", "gamma": 100, "delta": 0.1, "dt": 1e-4, "replicas": 3})");
    wall.out_dir = dir.string();
    const auto w = run_experiment(wall)["result"];
    CHECK(w["sup_distance"].size() == 3);
    CHECK(w.contains("ks"));
    CHECK(read_series((dir / "wall_0.csv").string()).header.size() == 6);

    auto fit = parse_config(R"({"kind": "drift_fit", "dt": 0.001, "horizon": 1, "replicas": 50, "lo": -0.3, "hi": 0.6, "bins": 6})");
    fit.out_dir = dir.string();
    const auto f = run_experiment(fit)["result"];
    CHECK(f.contains("log_drift_fit"));
    CHECK(fs::exists(dir / "drift_fit.csv"));
    fs::remove_all(dir);
}

TEST_CASE("series round trip and I/O errors") {
    const fs::path dir = scratch("io");
    fs::create_directories(dir);
    Table empty;
    empty.header = {"t", "v"};
    write_series((dir / "empty.csv").string(), empty);
    CHECK(slurp(dir / "empty.csv") == "t,v\n");

    Table t;
    t.header = {"x", "y"};
    t.rows = {{0.1, 1.0 / 3.0}, {-2.5e-300, 6.02214076e23}};
    write_series((dir / "t.csv").string(), t);
    const Table back = read_series((dir / "t.csv").string());
    CHECK(back.rows == t.rows);

    try {
        write_series((dir / "missing" / "t.csv").string(), t);
        FAIL("expected an I/O error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Io);
        CHECK(exit_code(e.kind()) == 4);
    }
    fs::remove_all(dir);
}
