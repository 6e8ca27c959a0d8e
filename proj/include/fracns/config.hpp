#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracns/constants.hpp"
#include "fracns/dynamics.hpp"
#include "fracns/harness.hpp"

namespace fracns {

/// Parse failure with source position; what() carries "line L, col C: msg".
struct ConfigError : std::runtime_error {
    int line;
    int col;
    ConfigError(int line_, int col_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ", col " + std::to_string(col_) +
                             ": " + msg),
          line(line_),
          col(col_) {}
};

struct OutputConfig {
    std::string directory = "out";
    std::string formats = "both";  // csv | json | both
    std::string basename = "trajectory";
};

struct RunConfig {
    GridSpec grid;
    SolverParams solver;
    DatumSpec datum;
    ConstantsLedger ledger;
    OutputConfig output;

    void validate() const {
        grid.validate();
        solver.validate();
        ledger.validate();
    }
};

struct StabilityEntry {
    std::string name;
    double beta = 1.25;
    double perturbation_hs = 0.0;
    std::uint64_t pert_seed = 1;
};

struct StabilityManifest {
    RunConfig base;
    double s = 1.0;
    double delta = 1.0;
    std::vector<StabilityEntry> entries;
};

/// Strict parsers: unknown sections or keys are rejected with position info.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);
StabilityManifest parse_stability_manifest(const std::string& text);
StabilityManifest load_stability_manifest(const std::string& path);

/// Canonical emission; parse(normalize(parse(x))) == parse(x) key for key.
std::string normalize_run_config(const RunConfig& config);

}  // namespace fracns
