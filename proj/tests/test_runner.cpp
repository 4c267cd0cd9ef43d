#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nuqwalk/csv.hpp"
#include "nuqwalk/measures.hpp"
#include "nuqwalk/presets.hpp"
#include "nuqwalk/runner.hpp"

using namespace nuqwalk;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "nuqwalk_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

} // namespace

TEST_CASE("config parsing") {
    SUBCASE("angles in multiples of pi") {
        const auto cfg = config_from_json_text(R"({"theta1_pi": 0.25, "theta2_pi": -0.5})");
        CHECK(cfg.theta1 == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-15));
        CHECK(cfg.theta2 == doctest::Approx(-std::numbers::pi / 2.0).epsilon(1e-15));
    }

    SUBCASE("angles in radians") {
        const auto cfg = config_from_json_text(R"({"theta1": 0.7})");
        CHECK(cfg.theta1 == doctest::Approx(0.7));
    }

    SUBCASE("both angle forms at once is an error") {
        CHECK_THROWS_AS(config_from_json_text(R"({"theta1": 0.7, "theta1_pi": 0.25})"),
                        ConfigError);
    }

    SUBCASE("gamma tokens") {
        const auto cfg = config_from_json_text(R"({"gamma_exp": [1.0, "ep", 1.5]})");
        REQUIRE(cfg.gamma_tokens.size() == 3);
        CHECK(cfg.gamma_tokens[1] == "ep");
        const auto single = config_from_json_text(R"({"gamma_exp": 1.3})");
        REQUIRE(single.gamma_tokens.size() == 1);
        CHECK(single.gamma_tokens[0] == "1.3");
    }

    SUBCASE("malformed json carries a diagnostic") {
        try {
            config_from_json_text("{oops");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("parse error") != std::string::npos);
        }
    }
}

TEST_CASE("config resolution") {
    RunConfig cfg = config_from_json_text(
        R"({"theta1_pi": 0.25, "theta2_pi": -0.14285714285714285, "gamma_exp": ["ep"],
            "sym": "both", "steps": 4})");

    SUBCASE("ep token resolves to the exceptional point") {
        const auto rc = resolve(cfg);
        REQUIRE(rc.gamma_ep.has_value());
        CHECK(rc.gammas.size() == 1);
        CHECK(rc.gammas[0].from_ep);
        CHECK(std::exp(rc.gammas[0].gamma) == doctest::Approx(1.347).epsilon(1e-3));
        CHECK(rc.syms.size() == 2);
    }

    SUBCASE("ep token without an exceptional point is an error") {
        cfg.theta2 = 0.0;
        CHECK_THROWS_AS(resolve(cfg), ConfigError);
    }

    SUBCASE("bad sym") {
        cfg.sym = "either";
        CHECK_THROWS_AS(resolve(cfg), ConfigError);
    }

    SUBCASE("bad gamma token") {
        cfg.gamma_tokens = {"-2"};
        CHECK_THROWS_AS(resolve(cfg), ConfigError);
    }

    SUBCASE("workers from the environment") {
        cfg.workers = 0;
        setenv("NUQWALK_WORKERS", "3", 1);
        CHECK(resolve(cfg).workers == 3);
        unsetenv("NUQWALK_WORKERS");
    }

    SUBCASE("flag overrides win") {
        CliOverrides ov;
        ov.gamma_exp = 1.25;
        ov.sym = std::string("minus");
        ov.steps = 7;
        apply_overrides(cfg, ov);
        const auto rc = resolve(cfg);
        CHECK(rc.gammas.size() == 1);
        CHECK(rc.gammas[0].gamma_exp == doctest::Approx(1.25));
        CHECK(rc.syms.size() == 1);
        CHECK(rc.raw.steps == 7);
    }
}

TEST_CASE("presets parse and resolve") {
    for (const auto& name : preset_names()) {
        const RunConfig cfg = config_from_preset(name);
        CHECK_NOTHROW(resolve(cfg));
    }
    CHECK_THROWS_AS(config_from_preset("fig9"), ConfigError);
}

TEST_CASE("spectrum command output") {
    RunConfig cfg = config_from_json_text(
        R"({"theta1_pi": 0.25, "theta2_pi": -0.14285714285714285,
            "gamma_exp": [1.0, 1.5], "steps": 10, "workers": 1})");
    cfg.out_dir = fresh_dir("spectrum").string();
    REQUIRE(cmd_spectrum(resolve(cfg)) == 0);

    const auto unitary = parse_csv(slurp(fs::path(cfg.out_dir) / "spectrum_g1.csv"));
    REQUIRE(unitary.size() == 22u); // header + 21 modes
    CHECK(unitary[0][0] == "k");
    for (size_t i = 1; i < unitary.size(); ++i) {
        CHECK(std::abs(std::stod(unitary[i][2])) < 1e-14);
    }

    const auto broken = parse_csv(slurp(fs::path(cfg.out_dir) / "spectrum_g1.5.csv"));
    double max_im = 0.0;
    for (size_t i = 1; i < broken.size(); ++i) {
        max_im = std::max(max_im, std::abs(std::stod(broken[i][2])));
    }
    CHECK(max_im > 0.1);

    const auto manifest = nlohmann::json::parse(slurp(fs::path(cfg.out_dir) / "manifest.json"));
    CHECK(manifest["gamma_ep_exp"].get<double>() == doctest::Approx(1.347).epsilon(1e-3));
    CHECK(manifest["files"].size() == 2u);
}

TEST_CASE("evolve command is deterministic across worker counts") {
    const std::string base = R"({"theta1_pi": 0.25, "theta2_pi": -0.14285714285714285,
        "gamma_exp": [1.3, 1.5], "sym": "both", "steps": 20})";
    RunConfig cfg1 = config_from_json_text(base);
    RunConfig cfg3 = config_from_json_text(base);
    cfg1.workers = 1;
    cfg1.out_dir = fresh_dir("evolve_w1").string();
    cfg3.workers = 3;
    cfg3.out_dir = fresh_dir("evolve_w3").string();
    REQUIRE(cmd_evolve(resolve(cfg1)) == 0);
    REQUIRE(cmd_evolve(resolve(cfg3)) == 0);

    const auto manifest = nlohmann::json::parse(slurp(fs::path(cfg1.out_dir) / "manifest.json"));
    REQUIRE(manifest["files"].size() == 4u);
    for (const auto& f : manifest["files"]) {
        const std::string name = f.get<std::string>();
        CHECK(slurp(fs::path(cfg1.out_dir) / name) == slurp(fs::path(cfg3.out_dir) / name));
    }

    SUBCASE("manifest inventory matches the emitted files exactly") {
        size_t data_files = 0;
        for (const auto& entry : fs::directory_iterator(cfg1.out_dir)) {
            const std::string name = entry.path().filename().string();
            if (name == "manifest.json") continue;
            ++data_files;
            bool listed = false;
            for (const auto& f : manifest["files"]) listed = listed || f.get<std::string>() == name;
            CHECK(listed);
        }
        CHECK(data_files == manifest["files"].size());
    }

    SUBCASE("evolve rows carry the expected header and initial values") {
        const auto rows = parse_csv(slurp(fs::path(cfg1.out_dir) / "evolve_g1.3_symplus.csv"));
        REQUIRE(rows.size() == 22u); // header + t = 0..20
        CHECK(rows[0][0] == "t");
        CHECK(rows[0][11] == "status");
        CHECK(std::stod(rows[1][4]) == doctest::Approx(std::log(2.0)).epsilon(1e-12)); // E_q(0)
        CHECK(std::stod(rows[1][3]) == doctest::Approx(0.0));                          // E_Q(0)
        CHECK(std::stod(rows[1][8]) == doctest::Approx(1.0).epsilon(1e-12));           // C_S(0)
        CHECK(std::stod(rows[1][6]) == doctest::Approx(0.0));                          // C_Q(0)
    }
}

TEST_CASE("density command output") {
    RunConfig cfg = config_from_json_text(
        R"({"theta1_pi": 0.25, "theta2_pi": -0.14285714285714285,
            "gamma_exp": [1.3], "sym": "minus", "steps": 8, "density_times": [8],
            "workers": 2})");
    cfg.out_dir = fresh_dir("density").string();
    REQUIRE(cmd_density(resolve(cfg)) == 0);

    const auto rows = parse_csv(slurp(fs::path(cfg.out_dir) / "density_g1.3_symminus_t8.csv"));
    const int N = 17;
    REQUIRE(rows.size() == static_cast<size_t>(1 + N * N));
    double total = 0.0;
    for (size_t i = 1; i < rows.size(); ++i) total += std::stod(rows[i][2]);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    const auto marg = parse_csv(slurp(fs::path(cfg.out_dir) / "marginal_g1.3_symminus_t8.csv"));
    REQUIRE(marg.size() == static_cast<size_t>(1 + N));
    double mtotal = 0.0;
    for (size_t i = 1; i < marg.size(); ++i) mtotal += std::stod(marg[i][1]);
    CHECK(mtotal == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sweep command crosses the phase boundary and matches evolve") {
    RunConfig cfg = config_from_preset("fig4");
    cfg.sweep.count = 15;
    cfg.workers = 2;
    cfg.out_dir = fresh_dir("sweep").string();
    REQUIRE(cmd_sweep(resolve(cfg)) == 0);

    const auto rows = parse_csv(slurp(fs::path(cfg.out_dir) / "sweep_theta2.csv"));
    REQUIRE(rows.size() == 16u);
    CHECK(rows[0][1] == "phase");
    CHECK(rows[1][1] == "unbroken");
    CHECK(rows[15][1] == "unbroken");
    bool saw_broken = false;
    for (size_t i = 1; i < rows.size(); ++i) saw_broken = saw_broken || rows[i][1] == "broken";
    CHECK(saw_broken);

    SUBCASE("single-point sweep equals the evolve end point") {
        RunConfig one = config_from_preset("fig4");
        one.sweep.count = 1;
        one.sweep.min = one.theta2;
        one.sweep.max = one.theta2;
        one.sweep.t = 30;
        one.steps = 30;
        one.workers = 1;
        one.out_dir = fresh_dir("sweep_one").string();
        REQUIRE(cmd_sweep(resolve(one)) == 0);
        const auto srows = parse_csv(slurp(fs::path(one.out_dir) / "sweep_theta2.csv"));
        REQUIRE(srows.size() == 2u);

        const ModelParams p{one.theta1, one.theta2, one.phi, std::log(1.3), 30};
        const auto bs = bipartition_spectra(TwoParticleRun::make(p, Exchange::Symmetric, 30));
        const double expect = von_neumann_entropy(bs.spectrum_q);
        CHECK(std::stod(srows[1][2]) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("csv doubles are round-trippable") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng) * std::pow(10.0, (i % 61) - 30);
        const std::string s = fmt_g17(x);
        CHECK(std::stod(s) == x);
    }
    CHECK(fmt_g17(0.0) == "0");
    CHECK(fmt_g17(1.5) == "1.5");
}

TEST_CASE("every figure preset runs end-to-end") {
    // fig1 drives density, fig4 drives sweep, the others drive evolve; each
    // must finish quickly and leave a manifest whose inventory matches the
    // directory contents.
    struct Case {
        const char* preset;
        int (*cmd)(const ResolvedConfig&);
    };
    const std::vector<Case> cases = {{"fig1", cmd_density},
                                     {"fig2", cmd_evolve},
                                     {"fig3", cmd_evolve},
                                     {"fig4", cmd_sweep},
                                     {"fig5", cmd_evolve}};
    for (const auto& c : cases) {
        RunConfig cfg = config_from_preset(c.preset);
        cfg.out_dir = fresh_dir(std::string("preset_") + c.preset).string();
        cfg.workers = 2;
        REQUIRE(c.cmd(resolve(cfg)) == 0);

        const auto manifest =
            nlohmann::json::parse(slurp(fs::path(cfg.out_dir) / "manifest.json"));
        size_t on_disk = 0;
        for (const auto& entry : fs::directory_iterator(cfg.out_dir)) {
            if (entry.path().filename() == "manifest.json") continue;
            ++on_disk;
        }
        CHECK(on_disk == manifest["files"].size());
        CHECK(manifest["version"].get<std::string>() == std::string(kVersion));
    }
}

TEST_CASE("certify command writes a machine-readable report") {
    RunConfig cfg = config_from_preset("certify");
    cfg.gamma_tokens = {"1.3"};
    cfg.steps = 3;
    cfg.certify.t_max = 3;
    cfg.workers = 2;
    cfg.out_dir = fresh_dir("certify").string();
    REQUIRE(cmd_certify(resolve(cfg)) == 0);

    const auto rep = nlohmann::json::parse(slurp(fs::path(cfg.out_dir) / "certify_report.json"));
    CHECK(rep["passed"].get<bool>());
    CHECK(rep["reports"].size() == 2u);
}
