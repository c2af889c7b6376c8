#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "output.hpp"
#include "ttqi/errors.hpp"
#include "ttqi/luminosity.hpp"
#include "ttqi/phase_space.hpp"

namespace ttqi::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kData = 3, kNumeric = 4 };

struct RunSpec {
    std::string command;
    Beam beam = Beam::PP;
    double sqrt_s = 13000.0;
    double m_top = kDefaultMTop;
    double alpha_s = kDefaultAlphaS;
    std::string q_scale = "mtt";
    std::string pdf = "toy-v1";
    std::optional<int> grid_n;
    std::optional<int> grid_m;
    std::optional<MassWindow> window;
    std::size_t n = 100000;
    std::uint64_t seed = 1;
    std::string format = "csv";
    std::string out = "-";
    // Command specific.
    std::string channel = "gg";           // scan-map: qqbar, gg, hadronic
    std::optional<double> w_gg;           // scan-map constant-weight mixture
    std::optional<MassWindow> energies;   // critical: sqrt(s) range
    std::string mode;                     // observables: threshold or high-pt
    std::string events;                   // tomography: optional event CSV
};

ColliderConfig collider(const RunSpec& spec);

Table cmd_scan_map(const RunSpec& spec);
Table cmd_observables(const RunSpec& spec);
Table cmd_critical(const RunSpec& spec);
Table cmd_luminosity(const RunSpec& spec);
/// JSON report (or a CSV of tier estimates with --format csv).
std::string cmd_tomography(const RunSpec& spec);

/// Output file content for a parsed spec.
std::string render(const RunSpec& spec);

int exit_code_for(ErrorKind kind);

/// Full front end: parse, run, write.  Returns the process exit code.
int run(int argc, char** argv);

}  // namespace ttqi::cli
