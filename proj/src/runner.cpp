#include "nuqwalk/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <mutex>
#include <numbers>
#include <thread>

#include <json.hpp>

#include "nuqwalk/csv.hpp"
#include "nuqwalk/errors.hpp"
#include "nuqwalk/evolution.hpp"
#include "nuqwalk/linalg.hpp"
#include "nuqwalk/measures.hpp"
#include "nuqwalk/oracle.hpp"
#include "nuqwalk/presets.hpp"

namespace nuqwalk {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

double entropy_of_spectrum(const std::vector<double>& spec) {
    double e = 0.0;
    for (double v : spec) {
        if (v > 0.0) e -= v * std::log(v);
    }
    return e;
}

void run_cells(int n, int workers, const std::function<void(int)>& fn) {
    workers = std::max(1, std::min(workers, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mtx;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) break;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(error_mtx);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::string gamma_tag(const std::string& token) {
    if (token == "ep") return "gep";
    return "g" + token;
}

std::string sym_name(Exchange e) { return to_string(e); } // "plus" / "minus"

struct OutputBundle {
    fs::path dir;
    std::vector<std::string> files; // inventory, in creation order

    void write(const std::string& name, const std::string& content) {
        fs::create_directories(dir);
        std::ofstream os(dir / name, std::ios::binary);
        if (!os) throw ConfigError("cannot write " + (dir / name).string());
        os << content;
        files.push_back(name);
    }
};

json cell_manifest(const ResolvedConfig& cfg) {
    json cells = json::array();
    for (const auto& g : cfg.gammas) {
        ModelParams p{cfg.raw.theta1, cfg.raw.theta2, cfg.raw.phi, g.gamma, cfg.raw.steps};
        const PhaseClass pc = classify_phase(p);
        cells.push_back({{"gamma_exp", g.gamma_exp},
                         {"tag", g.tag},
                         {"phase", to_string(pc.phase)},
                         {"f_max", pc.f_max}});
    }
    return cells;
}

json config_echo(const ResolvedConfig& cfg, const std::string& command) {
    json syms = json::array();
    for (auto s : cfg.syms) syms.push_back(sym_name(s));
    json gammas = json::array();
    for (const auto& g : cfg.gammas)
        gammas.push_back({{"gamma_exp", g.gamma_exp}, {"gamma", g.gamma}, {"tag", g.tag},
                          {"from_ep", g.from_ep}});
    json j{{"command", command},
           {"preset", cfg.raw.preset},
           {"theta1", cfg.raw.theta1},
           {"theta2", cfg.raw.theta2},
           {"phi", cfg.raw.phi},
           {"gamma", gammas},
           {"sym", syms},
           {"steps", cfg.raw.steps},
           {"workers", cfg.workers},
           {"out_dir", cfg.raw.out_dir}};
    if (cfg.gamma_ep) {
        j["gamma_ep"] = *cfg.gamma_ep;
        j["gamma_ep_exp"] = std::exp(*cfg.gamma_ep);
    } else {
        j["gamma_ep"] = nullptr;
    }
    return j;
}

void write_manifest(OutputBundle& out, const ResolvedConfig& cfg, const std::string& command,
                    double wall_s, json extra = json::object()) {
    json m = config_echo(cfg, command);
    m["version"] = kVersion;
    m["wall_time_s"] = wall_s;
    m["cells"] = cell_manifest(cfg);
    m["files"] = out.files;
    for (auto& [k, v] : extra.items()) m[k] = v;
    // Written last, and not listed in its own inventory.
    fs::create_directories(out.dir);
    std::ofstream os(out.dir / "manifest.json", std::ios::binary);
    os << m.dump(2) << "\n";
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

ModelParams params_for(const ResolvedConfig& cfg, double gamma) {
    ModelParams p{cfg.raw.theta1, cfg.raw.theta2, cfg.raw.phi, gamma, cfg.raw.steps};
    p.validate();
    return p;
}

} // namespace

RunConfig config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }

    RunConfig cfg;
    const auto fail = [](const std::string& field, const std::string& why) {
        throw ConfigError("config field '" + field + "': " + why);
    };
    const auto angle = [&](const char* key, const char* key_pi, double& dst) {
        const bool has_rad = j.contains(key);
        const bool has_pi = j.contains(key_pi);
        if (has_rad && has_pi) fail(key, "given both in radians and in multiples of pi");
        try {
            if (has_rad) dst = j.at(key).get<double>();
            if (has_pi) dst = j.at(key_pi).get<double>() * std::numbers::pi;
        } catch (const json::exception& e) {
            fail(key, e.what());
        }
    };
    angle("theta1", "theta1_pi", cfg.theta1);
    angle("theta2", "theta2_pi", cfg.theta2);
    angle("phi", "phi_pi", cfg.phi);

    try {
        if (j.contains("preset")) cfg.preset = j.at("preset").get<std::string>();
        if (j.contains("gamma_exp")) {
            cfg.gamma_tokens.clear();
            const auto& g = j.at("gamma_exp");
            const auto push_token = [&](const json& v) {
                if (v.is_string()) {
                    cfg.gamma_tokens.push_back(v.get<std::string>());
                } else if (v.is_number()) {
                    char buf[32];
                    std::snprintf(buf, sizeof buf, "%g", v.get<double>());
                    cfg.gamma_tokens.emplace_back(buf);
                } else {
                    fail("gamma_exp", "entries must be numbers or \"ep\"");
                }
            };
            if (g.is_array()) {
                for (const auto& v : g) push_token(v);
            } else {
                push_token(g);
            }
        }
        if (j.contains("sym")) cfg.sym = j.at("sym").get<std::string>();
        if (j.contains("steps")) cfg.steps = j.at("steps").get<int>();
        if (j.contains("density_times"))
            cfg.density_times = j.at("density_times").get<std::vector<int>>();
        if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
        if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
        if (j.contains("sweep")) {
            const auto& s = j.at("sweep");
            cfg.sweep.param = s.at("param").get<std::string>();
            cfg.sweep.min = s.at("min").get<double>();
            cfg.sweep.max = s.at("max").get<double>();
            cfg.sweep.count = s.at("count").get<int>();
            if (s.contains("t")) cfg.sweep.t = s.at("t").get<int>();
        }
        if (j.contains("regions")) {
            for (auto& [k, v] : j.at("regions").items()) {
                cfg.regions[k] = {v.at(0).get<double>(), v.at(1).get<double>()};
            }
        }
        if (j.contains("certify")) {
            const auto& c = j.at("certify");
            if (c.contains("t_max")) cfg.certify.t_max = c.at("t_max").get<int>();
            if (c.contains("tol")) cfg.certify.tol = c.at("tol").get<double>();
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config error: ") + e.what());
    }
    return cfg;
}

RunConfig config_from_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return config_from_json_text(text);
}

RunConfig config_from_preset(const std::string& name) {
    try {
        RunConfig cfg = config_from_json_text(preset_json(name));
        cfg.preset = name;
        return cfg;
    } catch (const std::out_of_range& e) {
        throw ConfigError(e.what());
    }
}

void apply_overrides(RunConfig& cfg, const CliOverrides& ov) {
    if (ov.out_dir) cfg.out_dir = *ov.out_dir;
    if (ov.workers) cfg.workers = *ov.workers;
    if (ov.gamma_exp) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", *ov.gamma_exp);
        cfg.gamma_tokens = {buf};
    }
    if (ov.sym) cfg.sym = *ov.sym;
    if (ov.steps) cfg.steps = *ov.steps;
}

ResolvedConfig resolve(const RunConfig& cfg) {
    ResolvedConfig r;
    r.raw = cfg;

    if (cfg.steps < 0) throw ConfigError("steps must be non-negative");
    if (!std::isfinite(cfg.theta1) || !std::isfinite(cfg.theta2) || !std::isfinite(cfg.phi)) {
        throw ConfigError("angles must be finite");
    }

    if (cfg.sym == "plus") {
        r.syms = {Exchange::Symmetric};
    } else if (cfg.sym == "minus") {
        r.syms = {Exchange::Antisymmetric};
    } else if (cfg.sym == "both") {
        r.syms = {Exchange::Symmetric, Exchange::Antisymmetric};
    } else {
        throw ConfigError("sym must be plus, minus or both");
    }

    r.gamma_ep = exceptional_gamma(cfg.theta1, cfg.theta2);
    if (cfg.gamma_tokens.empty()) throw ConfigError("gamma_exp list is empty");
    for (const auto& tok : cfg.gamma_tokens) {
        GammaCell cell;
        cell.tag = gamma_tag(tok);
        if (tok == "ep") {
            if (!r.gamma_ep) {
                throw ConfigError("gamma_exp \"ep\" requested but no exceptional point "
                                  "exists for these angles");
            }
            cell.gamma = *r.gamma_ep;
            cell.gamma_exp = std::exp(cell.gamma);
            cell.from_ep = true;
        } else {
            char* end = nullptr;
            const double ge = std::strtod(tok.c_str(), &end);
            if (end == tok.c_str() || *end != '\0' || !(ge > 0.0)) {
                throw ConfigError("gamma_exp token '" + tok + "' is not a positive number");
            }
            cell.gamma_exp = ge;
            cell.gamma = std::log(ge);
        }
        r.gammas.push_back(cell);
    }

    int workers = cfg.workers;
    if (workers <= 0) {
        if (const char* env = std::getenv("NUQWALK_WORKERS")) {
            workers = std::atoi(env);
        }
    }
    if (workers <= 0) {
        workers = static_cast<int>(std::thread::hardware_concurrency());
    }
    r.workers = std::max(1, workers);
    return r;
}

int cmd_spectrum(const ResolvedConfig& cfg) {
    Timer timer;
    OutputBundle out{fs::path(cfg.raw.out_dir), {}};

    const auto ks = mode_grid(2 * cfg.raw.steps + 1);
    std::vector<std::string> blocks(cfg.gammas.size());
    run_cells(static_cast<int>(cfg.gammas.size()), cfg.workers, [&](int i) {
        const GammaCell& g = cfg.gammas[static_cast<size_t>(i)];
        const ModelParams p = params_for(cfg, g.gamma);
        std::string text = csv_row({"k", "re_eps", "im_eps"});
        for (double k : ks) {
            const cplx eps = quasi_energy(p, k);
            text += csv_row({fmt_g17(k), fmt_g17(eps.real()), fmt_g17(eps.imag())});
        }
        blocks[static_cast<size_t>(i)] = std::move(text);
    });
    for (size_t i = 0; i < cfg.gammas.size(); ++i) {
        out.write("spectrum_" + cfg.gammas[i].tag + ".csv", blocks[i]);
    }
    write_manifest(out, cfg, "spectrum", timer.seconds());
    return 0;
}

namespace {

// One (gamma, sym) evolve cell: the full per-step observable table.
std::string evolve_cell_csv(const ResolvedConfig& cfg, const GammaCell& g, Exchange sym) {
    const ModelParams p = params_for(cfg, g.gamma);
    std::string text = csv_row({"t", "raw_trace", "distance_rms", "E_Q", "E_q", "E_op_q",
                                "C_Q", "C_q", "C_S", "C_p", "C_GME", "status"});

    OneParticleField psi0 = OneParticleField::localized(0, p.steps);
    OneParticleField psi1 = OneParticleField::localized(1, p.steps);
    for (int t = 0; t <= p.steps; ++t) {
        if (t > 0) {
            psi0 = step(psi0, p);
            psi1 = step(psi1, p);
        }
        std::string status = "ok";
        double rms = 0.0, eq = 0.0, eQ = 0.0, eop = 0.0, raw = 0.0;
        ConcurrenceRecord cr{};
        try {
            TwoParticleRun run{psi0, psi1, sym, p, t};
            const JointDensity jd = joint_density(run);
            rms = distance_rms(jd);
            const BipartitionSpectra bs = bipartition_spectra(run);
            eQ = entropy_of_spectrum(bs.spectrum_Q);
            eq = entropy_of_spectrum(bs.spectrum_q);
            cr = gme_concurrence(bs, t);
            raw = bs.trace.to_double();
            eop = qubit_entropy(psi0);
        } catch (const ZeroNorm&) {
            status = "zero_norm";
        }
        if (status == "ok") {
            text += csv_row({std::to_string(t), fmt_g17(raw), fmt_g17(rms), fmt_g17(eQ),
                             fmt_g17(eq), fmt_g17(eop), fmt_g17(cr.c_Q), fmt_g17(cr.c_q),
                             fmt_g17(cr.c_S), fmt_g17(cr.c_p), fmt_g17(cr.c_gme), status});
        } else {
            const std::string nan = "nan";
            text += csv_row({std::to_string(t), nan, nan, nan, nan, nan, nan, nan, nan, nan,
                             nan, status});
        }
    }
    return text;
}

} // namespace

int cmd_evolve(const ResolvedConfig& cfg) {
    Timer timer;
    OutputBundle out{fs::path(cfg.raw.out_dir), {}};

    struct Cell {
        GammaCell g;
        Exchange sym;
    };
    std::vector<Cell> cells;
    for (const auto& g : cfg.gammas)
        for (auto s : cfg.syms) cells.push_back({g, s});

    std::vector<std::string> blocks(cells.size());
    run_cells(static_cast<int>(cells.size()), cfg.workers, [&](int i) {
        blocks[static_cast<size_t>(i)] =
            evolve_cell_csv(cfg, cells[static_cast<size_t>(i)].g,
                            cells[static_cast<size_t>(i)].sym);
    });
    for (size_t i = 0; i < cells.size(); ++i) {
        out.write("evolve_" + cells[i].g.tag + "_sym" + sym_name(cells[i].sym) + ".csv",
                  blocks[i]);
    }
    write_manifest(out, cfg, "evolve", timer.seconds());
    return 0;
}

int cmd_density(const ResolvedConfig& cfg) {
    Timer timer;
    OutputBundle out{fs::path(cfg.raw.out_dir), {}};

    std::vector<int> times = cfg.raw.density_times;
    if (times.empty()) times = {cfg.raw.steps};
    for (int t : times) {
        if (t < 0 || t > cfg.raw.steps) {
            throw ConfigError("density time outside [0, steps]");
        }
    }

    struct Cell {
        GammaCell g;
        Exchange sym;
        int t;
    };
    std::vector<Cell> cells;
    for (const auto& g : cfg.gammas)
        for (auto s : cfg.syms)
            for (int t : times) cells.push_back({g, s, t});

    struct Block {
        std::string grid, marginal, status = "ok";
    };
    std::vector<Block> blocks(cells.size());
    run_cells(static_cast<int>(cells.size()), cfg.workers, [&](int i) {
        const Cell& c = cells[static_cast<size_t>(i)];
        const ModelParams p = params_for(cfg, c.g.gamma);
        Block b;
        try {
            const TwoParticleRun run = TwoParticleRun::make(p, c.sym, c.t);
            const JointDensity jd = joint_density(run);
            const auto marg = marginal_density(jd);
            const int N = jd.sites();
            b.grid = csv_row({"n1", "n2", "P"});
            for (int m1 = 0; m1 < N; ++m1)
                for (int m2 = 0; m2 < N; ++m2)
                    b.grid += csv_row({std::to_string(jd.site_of(m1)),
                                       std::to_string(jd.site_of(m2)),
                                       fmt_g17(jd.at(m1, m2))});
            b.marginal = csv_row({"n", "P"});
            for (int m = 0; m < N; ++m)
                b.marginal += csv_row({std::to_string(jd.site_of(m)),
                                       fmt_g17(marg[static_cast<size_t>(m)])});
        } catch (const ZeroNorm&) {
            b.status = "zero_norm";
        }
        blocks[static_cast<size_t>(i)] = std::move(b);
    });

    json flagged = json::array();
    for (size_t i = 0; i < cells.size(); ++i) {
        const Cell& c = cells[i];
        const std::string stem =
            c.g.tag + "_sym" + sym_name(c.sym) + "_t" + std::to_string(c.t);
        if (blocks[i].status == "ok") {
            out.write("density_" + stem + ".csv", blocks[i].grid);
            out.write("marginal_" + stem + ".csv", blocks[i].marginal);
        } else {
            flagged.push_back(stem);
        }
    }
    write_manifest(out, cfg, "density", timer.seconds(), {{"zero_norm_cells", flagged}});
    return 0;
}

int cmd_sweep(const ResolvedConfig& cfg) {
    Timer timer;
    OutputBundle out{fs::path(cfg.raw.out_dir), {}};

    const SweepSpec& sw = cfg.raw.sweep;
    if (sw.count < 1) throw ConfigError("sweep.count must be >= 1");
    static const std::vector<std::string> known = {"theta1", "theta2", "phi", "gamma_exp"};
    if (std::find(known.begin(), known.end(), sw.param) == known.end()) {
        throw ConfigError("sweep.param must be one of theta1, theta2, phi, gamma_exp");
    }
    if (cfg.gammas.size() != 1 && sw.param != "gamma_exp") {
        throw ConfigError("sweep requires a single gamma_exp value");
    }
    if (sw.t > cfg.raw.steps) throw ConfigError("sweep.t exceeds steps");

    struct Row {
        double value = 0.0;
        std::string phase;
        double eq_plus = 0.0, eq_minus = 0.0, eop = 0.0;
        std::string status = "ok";
    };
    std::vector<Row> rows(static_cast<size_t>(sw.count));
    run_cells(sw.count, cfg.workers, [&](int i) {
        Row row;
        row.value = sw.count == 1
                        ? sw.min
                        : sw.min + (sw.max - sw.min) * static_cast<double>(i) / (sw.count - 1);
        ModelParams p = params_for(cfg, cfg.gammas.front().gamma);
        if (sw.param == "theta1") p.theta1 = row.value;
        if (sw.param == "theta2") p.theta2 = row.value;
        if (sw.param == "phi") p.phi = row.value;
        if (sw.param == "gamma_exp") {
            if (!(row.value > 0.0)) {
                row.status = "bad_gamma";
                rows[static_cast<size_t>(i)] = row;
                return;
            }
            p.gamma = std::log(row.value);
        }
        row.phase = to_string(classify_phase(p).phase);
        try {
            const OneParticleField psi0 = evolve(0, p, sw.t);
            const OneParticleField psi1 = evolve(1, p, sw.t);
            for (auto sym : {Exchange::Symmetric, Exchange::Antisymmetric}) {
                const TwoParticleRun run{psi0, psi1, sym, p, sw.t};
                const Mat2 rq = rho_q(rho_Q(run));
                const double mean = 0.5 * (rq(0, 0).real() + rq(1, 1).real());
                const double half_gap = std::sqrt(
                    0.25 * std::pow(rq(0, 0).real() - rq(1, 1).real(), 2) + std::norm(rq(0, 1)));
                double e = 0.0;
                for (double v : {mean + half_gap, mean - half_gap}) {
                    if (v > 0.0) e -= v * std::log(v);
                }
                (sym == Exchange::Symmetric ? row.eq_plus : row.eq_minus) = e;
            }
            row.eop = qubit_entropy(psi0);
        } catch (const ZeroNorm&) {
            row.status = "zero_norm";
        }
        rows[static_cast<size_t>(i)] = row;
    });

    std::string text = csv_row({sw.param, "phase", "E_q_plus", "E_q_minus", "E_op_q", "status"});
    for (const auto& row : rows) {
        if (row.status == "ok") {
            text += csv_row({fmt_g17(row.value), row.phase, fmt_g17(row.eq_plus),
                             fmt_g17(row.eq_minus), fmt_g17(row.eop), row.status});
        } else {
            text += csv_row({fmt_g17(row.value), row.phase, "nan", "nan", "nan", row.status});
        }
    }
    out.write("sweep_" + sw.param + ".csv", text);

    json extra;
    extra["sweep"] = {{"param", sw.param}, {"min", sw.min}, {"max", sw.max},
                      {"count", sw.count}, {"t", sw.t}};
    if (!cfg.raw.regions.empty()) {
        json regions;
        for (const auto& [k, v] : cfg.raw.regions) regions[k] = {v[0], v[1]};
        extra["regions"] = regions;
    }
    write_manifest(out, cfg, "sweep", timer.seconds(), extra);
    return 0;
}

int cmd_certify(const ResolvedConfig& cfg) {
    Timer timer;
    OutputBundle out{fs::path(cfg.raw.out_dir), {}};

    if (cfg.raw.steps > kDenseMaxT) {
        throw TooLarge("certify requires steps <= 8");
    }

    struct Cell {
        GammaCell g;
        Exchange sym;
    };
    std::vector<Cell> cells;
    for (const auto& g : cfg.gammas)
        for (auto s : cfg.syms) cells.push_back({g, s});

    std::vector<CertifyReport> reports(cells.size());
    run_cells(static_cast<int>(cells.size()), cfg.workers, [&](int i) {
        const Cell& c = cells[static_cast<size_t>(i)];
        const ModelParams p = params_for(cfg, c.g.gamma);
        reports[static_cast<size_t>(i)] =
            certify(p, c.sym, std::min(cfg.raw.certify.t_max, p.steps), cfg.raw.certify.tol);
    });

    bool all_pass = true;
    json jreports = json::array();
    std::string text;
    for (size_t i = 0; i < cells.size(); ++i) {
        const auto& rep = reports[i];
        all_pass = all_pass && rep.passed;
        text += "gamma_exp=" + fmt_g17(cells[i].g.gamma_exp) + " " + rep.to_text();
        json rows = json::array();
        for (const auto& row : rep.rows) {
            rows.push_back({{"observable", row.observable},
                            {"max_dev", row.max_dev},
                            {"pass", row.pass}});
        }
        jreports.push_back({{"gamma_exp", cells[i].g.gamma_exp},
                            {"sym", sym_name(cells[i].sym)},
                            {"passed", rep.passed},
                            {"tol", rep.tol},
                            {"t_max", rep.t_max},
                            {"rows", rows}});
    }
    std::fputs(text.c_str(), stdout);
    out.write("certify_report.json", json{{"passed", all_pass}, {"reports", jreports}}.dump(2) + "\n");
    write_manifest(out, cfg, "certify", timer.seconds(), {{"passed", all_pass}});
    return all_pass ? 0 : 1;
}

} // namespace nuqwalk
