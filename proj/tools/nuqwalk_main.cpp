// Command-line harness: spectrum, evolve, density, sweep and certify
// subcommands over JSON configs or bundled presets. Exit codes: 0 ok,
// 1 certification/observable failure, 2 usage/config error.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "nuqwalk/errors.hpp"
#include "nuqwalk/presets.hpp"
#include "nuqwalk/runner.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string preset;
    std::string out_dir;
    std::string sym;
    int workers = 0;
    int steps = 0;
    double gamma_exp = 0.0;
    bool has_workers = false, has_steps = false, has_gamma = false, has_sym = false,
         has_out = false;
};

void add_common(CLI::App* sub, CommonFlags& f) {
    sub->add_option("--config", f.config_path, "JSON config file");
    sub->add_option("--preset", f.preset, "bundled preset name (fig1..fig5, certify)");
    sub->add_option("--out", f.out_dir, "output directory")
        ->each([&](const std::string&) { f.has_out = true; });
    sub->add_option("--workers", f.workers, "worker pool size (default: NUQWALK_WORKERS or hw)")
        ->each([&](const std::string&) { f.has_workers = true; });
    sub->add_option("--gamma-exp", f.gamma_exp, "single gain-loss value, e^gamma form")
        ->each([&](const std::string&) { f.has_gamma = true; });
    sub->add_option("--sym", f.sym, "symmetry sector: plus, minus or both")
        ->each([&](const std::string&) { f.has_sym = true; });
    sub->add_option("--steps", f.steps, "step count T")
        ->each([&](const std::string&) { f.has_steps = true; });
}

} // namespace

int main(int argc, char** argv) {
    using namespace nuqwalk;

    CLI::App app{"nuqwalk: one- and two-particle non-unitary quantum walks with "
                 "balanced gain and loss"};
    app.require_subcommand(1);

    CommonFlags f;
    CLI::App* sub_spectrum = app.add_subcommand("spectrum", "quasi-energy dispersion table");
    CLI::App* sub_evolve = app.add_subcommand("evolve", "per-step observable time series");
    CLI::App* sub_density = app.add_subcommand("density", "joint position density grids");
    CLI::App* sub_sweep = app.add_subcommand("sweep", "parameter sweep at fixed t");
    CLI::App* sub_certify = app.add_subcommand("certify", "dense-oracle certification");
    for (CLI::App* s : {sub_spectrum, sub_evolve, sub_density, sub_sweep, sub_certify}) {
        add_common(s, f);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!f.preset.empty() && !f.config_path.empty()) {
            throw ConfigError("--preset and --config are mutually exclusive");
        }

        RunConfig cfg;
        if (!f.preset.empty()) {
            cfg = config_from_preset(f.preset);
        } else if (!f.config_path.empty()) {
            cfg = config_from_file(f.config_path);
        } else if (app.got_subcommand(sub_certify)) {
            cfg = config_from_preset("certify");
        } else {
            cfg = config_from_preset("fig1");
        }

        CliOverrides ov;
        if (f.has_out) ov.out_dir = f.out_dir;
        if (f.has_workers) ov.workers = f.workers;
        if (f.has_gamma) ov.gamma_exp = f.gamma_exp;
        if (f.has_sym) ov.sym = f.sym;
        if (f.has_steps) ov.steps = f.steps;
        apply_overrides(cfg, ov);

        const ResolvedConfig rc = resolve(cfg);
        if (app.got_subcommand(sub_spectrum)) return cmd_spectrum(rc);
        if (app.got_subcommand(sub_evolve)) return cmd_evolve(rc);
        if (app.got_subcommand(sub_density)) return cmd_density(rc);
        if (app.got_subcommand(sub_sweep)) return cmd_sweep(rc);
        if (app.got_subcommand(sub_certify)) return cmd_certify(rc);
        return 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const TooLarge& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
