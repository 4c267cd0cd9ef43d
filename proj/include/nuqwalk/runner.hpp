#pragma once

// Configuration ingestion and the CLI subcommand bodies. Figure/sweep cells
// run on a bounded worker pool; every cell is a pure computation whose output
// block is assembled single-threaded in cell order, so identical configs give
// byte-identical CSVs regardless of worker count.

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nuqwalk/model.hpp"
#include "nuqwalk/two_particle.hpp"

namespace nuqwalk {

inline constexpr const char* kVersion = "0.1.0";

// Configuration or usage problem; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct SweepSpec {
    std::string param; // theta1 | theta2 | phi | gamma_exp
    double min = 0.0;
    double max = 0.0;
    int count = 0;     // 0 disables the sweep
    int t = 100;
};

struct CertifySpec {
    int t_max = 5;
    double tol = 1e-10;
};

// Flat key-value config (JSON file plus flag overrides; flags win). Angles
// are accepted in radians ("theta1") or as multiples of pi ("theta1_pi");
// the gain-loss axis is specified as e^gamma tokens, either numbers or the
// string "ep" for the exceptional point.
struct RunConfig {
    std::string preset;
    double theta1 = 0.0;
    double theta2 = 0.0;
    double phi = 0.0;
    std::vector<std::string> gamma_tokens = {"1.0"};
    std::string sym = "both"; // plus | minus | both
    int steps = 25;
    std::vector<int> density_times;
    SweepSpec sweep;
    std::map<std::string, std::array<double, 2>> regions;
    CertifySpec certify;
    std::string out_dir = "out";
    int workers = 0; // 0: NUQWALK_WORKERS env var, else hardware concurrency
};

// Flag-level overrides collected by the CLI.
struct CliOverrides {
    std::optional<std::string> out_dir;
    std::optional<int> workers;
    std::optional<double> gamma_exp;
    std::optional<std::string> sym;
    std::optional<int> steps;
};

RunConfig config_from_json_text(const std::string& text);
RunConfig config_from_file(const std::string& path);
RunConfig config_from_preset(const std::string& name);
void apply_overrides(RunConfig& cfg, const CliOverrides& ov);

struct GammaCell {
    double gamma = 0.0;
    double gamma_exp = 1.0;
    std::string tag;    // file-name tag: "g1.3", "gep", ...
    bool from_ep = false;
};

struct ResolvedConfig {
    RunConfig raw;
    std::vector<GammaCell> gammas;
    std::vector<Exchange> syms;
    int workers = 1;
    std::optional<double> gamma_ep; // for the configured angles
};

// Validates, resolves "ep" tokens and the worker count. Throws ConfigError.
ResolvedConfig resolve(const RunConfig& cfg);

// Subcommand bodies; each writes its data files plus manifest.json into
// cfg.raw.out_dir and returns the process exit code (0 ok, 1 certification
// failure, 2 config error).
int cmd_spectrum(const ResolvedConfig& cfg);
int cmd_evolve(const ResolvedConfig& cfg);
int cmd_density(const ResolvedConfig& cfg);
int cmd_sweep(const ResolvedConfig& cfg);
int cmd_certify(const ResolvedConfig& cfg);

} // namespace nuqwalk
