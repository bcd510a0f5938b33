#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pseudometric/potentials.hpp"
#include "pseudometric/seed.hpp"
#include "pseudometric/series.hpp"
#include "pseudometric/verify.hpp"

namespace pseudometric::cli {

/// Raw flag values as parsed from the command line.
struct Options {
    std::string command;
    std::string model;
    std::string potential_path;
    double zeta = 0.1;
    std::string deltas;
    std::string gauge;
    std::optional<int> order; // default 1
    std::optional<int> n;     // default 129
    std::optional<double> extent;
    std::string seed_path;
    std::string preset_seed = "none";
    std::string checks;
    std::string cross_check;
    std::string out = "out";
    std::string kernel_path; // positional argument of verify
};

struct RunConfig {
    std::string model = "custom";
    PotentialSpec potential;
    double zeta = 0.0;
    double L = 0.0;
    Grid grid{1.0, 33};
    KConfig series;
    Tolerances tolerances;
    SeedPair seed = SeedPair::zero();
    std::string seed_name = "none";
    std::vector<std::string> checks;
    std::optional<int> n_modes;
    std::string out;
    nlohmann::json canonical; // everything that determines the outputs
};

/// Builds and validates a run configuration; throws ConfigError.
RunConfig build_config(const Options& o);

std::uint64_t fnv1a(const std::string& s);

int cmd_compute(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg, const std::string& kernel_path);
int cmd_oracle(const RunConfig& cfg, const std::string& cross_check_path);

/// Parses argv and dispatches; returns the process exit code
/// (0 ok, 1 check failure, 2 configuration error, 3 numerical exception).
int run(int argc, char** argv);

} // namespace pseudometric::cli
