#include "nuqwalk/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "nuqwalk/linalg.hpp"

namespace nuqwalk {

namespace {

using Mat = std::vector<cplx>; // row-major square

Mat matmul(const Mat& a, const Mat& b, int n) {
    Mat r(static_cast<size_t>(n) * static_cast<size_t>(n), cplx{});
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const cplx aik = a[static_cast<size_t>(i * n + k)];
            if (aik == cplx{}) continue;
            for (int j = 0; j < n; ++j) {
                r[static_cast<size_t>(i * n + j)] += aik * b[static_cast<size_t>(k * n + j)];
            }
        }
    }
    return r;
}

Mat sitewise(const Mat2& m, int sites) {
    const int dim = 2 * sites;
    Mat r(static_cast<size_t>(dim) * static_cast<size_t>(dim), cplx{});
    for (int n = 0; n < sites; ++n) {
        for (int s = 0; s < 2; ++s) {
            for (int sp = 0; sp < 2; ++sp) {
                r[static_cast<size_t>((2 * n + s) * dim + (2 * n + sp))] = m(s, sp);
            }
        }
    }
    return r;
}

std::vector<double> descending_clipped(std::vector<double> ev) {
    for (auto& v : ev) {
        if (v < -kClipTol) throw std::logic_error("dense spectrum below clip tolerance");
        if (v < 0.0) v = 0.0;
    }
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

double entropy_of(const std::vector<double>& spec) {
    double e = 0.0;
    for (double v : spec) {
        if (v > 0.0) e -= v * std::log(v);
    }
    return e;
}

double purity_from_mat(const Mat& m) {
    double s = 0.0;
    for (const auto& v : m) s += std::norm(v);
    return s;
}

double concurrence_of(double purity) {
    return std::sqrt(std::max(0.0, 2.0 * (1.0 - purity)));
}

DenseState dense_from_initial(const ModelParams& p, std::vector<cplx> init, Exchange sym,
                              int t) {
    p.validate();
    if (p.steps > kDenseMaxT) {
        throw TooLarge("dense oracle capped at T <= 8");
    }
    if (t > p.steps) throw LatticeOverflow("dense_evolve: t exceeds params.steps");

    DenseState s;
    s.T = p.steps;
    s.sites = 4 * p.steps + 1;
    s.dim = 2 * s.sites;
    s.sym = sym;
    s.params = p;
    s.amp = std::move(init);

    const Mat u = dense_step_matrix(p, p.steps);
    const int d = s.dim;
    for (int stepi = 0; stepi < t; ++stepi) {
        // psi <- (U (x) U) psi, applied per particle index: Psi' = U Psi U^T.
        Mat tmp(static_cast<size_t>(d) * static_cast<size_t>(d), cplx{});
        for (int i = 0; i < d; ++i) {
            for (int k = 0; k < d; ++k) {
                const cplx uik = u[static_cast<size_t>(i * d + k)];
                if (uik == cplx{}) continue;
                for (int j = 0; j < d; ++j) {
                    tmp[static_cast<size_t>(i * d + j)] +=
                        uik * s.amp[static_cast<size_t>(k * d + j)];
                }
            }
        }
        Mat next(static_cast<size_t>(d) * static_cast<size_t>(d), cplx{});
        for (int i = 0; i < d; ++i) {
            for (int k = 0; k < d; ++k) {
                const cplx tik = tmp[static_cast<size_t>(i * d + k)];
                if (tik == cplx{}) continue;
                for (int j = 0; j < d; ++j) {
                    next[static_cast<size_t>(i * d + j)] +=
                        tik * u[static_cast<size_t>(j * d + k)];
                }
            }
        }
        s.amp = std::move(next);
        s.t = stepi + 1;
    }
    return s;
}

} // namespace

std::vector<cplx> dense_step_matrix(const ModelParams& p, int T) {
    const int sites = 4 * T + 1;
    const int dim = 2 * sites;
    Mat shift(static_cast<size_t>(dim) * static_cast<size_t>(dim), cplx{});
    for (int n = 0; n < sites; ++n) {
        // |n-1><n| (x) |0><0|  +  |n+1><n| (x) |1><1| ; edge amplitudes drop,
        // which is exact while the support stays inside the lattice.
        if (n - 1 >= 0) shift[static_cast<size_t>((2 * (n - 1) + 0) * dim + (2 * n + 0))] = 1.0;
        if (n + 1 < sites) shift[static_cast<size_t>((2 * (n + 1) + 1) * dim + (2 * n + 1))] = 1.0;
    }
    const Mat first = sitewise(gain_loss_op(-p.gamma) * phase_op(p.phi) * coin_op(p.theta1), sites);
    const Mat second = sitewise(gain_loss_op(p.gamma) * phase_op(p.phi) * coin_op(p.theta2), sites);
    return matmul(shift, matmul(second, matmul(shift, first, dim), dim), dim);
}

DenseState dense_evolve(const ModelParams& p, Exchange sym, int t) {
    const int sites = 4 * p.steps + 1;
    const int dim = 2 * sites;
    const int origin = 2 * p.steps; // site n = 0
    std::vector<cplx> init(static_cast<size_t>(dim) * static_cast<size_t>(dim), cplx{});
    const int i0 = 2 * origin + 0;
    const int i1 = 2 * origin + 1;
    const double inv = 1.0 / std::sqrt(2.0);
    init[static_cast<size_t>(i0 * dim + i1)] += inv;
    init[static_cast<size_t>(i1 * dim + i0)] += sign_of(sym) * inv;
    return dense_from_initial(p, std::move(init), sym, t);
}

DenseState dense_evolve_product(const ModelParams& p, int q1, int q2, int t) {
    const int sites = 4 * p.steps + 1;
    const int dim = 2 * sites;
    const int origin = 2 * p.steps;
    std::vector<cplx> init(static_cast<size_t>(dim) * static_cast<size_t>(dim), cplx{});
    init[static_cast<size_t>((2 * origin + q1) * dim + (2 * origin + q2))] = 1.0;
    return dense_from_initial(p, std::move(init), Exchange::Symmetric, t);
}

ReducedOperator dense_reduced(const DenseState& s, Bipartition b) {
    const int d = s.dim;
    const int sites = s.sites;
    const auto amp = [&](int i, int j) { return s.amp[static_cast<size_t>(i * d + j)]; };

    ReducedOperator r;
    switch (b) {
        case Bipartition::Particle: { // rho_S[i,i'] = sum_j Psi[i,j] conj(Psi[i',j])
            r.dim = d;
            r.mat.assign(static_cast<size_t>(d) * static_cast<size_t>(d), cplx{});
            for (int i = 0; i < d; ++i) {
                for (int ip = 0; ip < d; ++ip) {
                    cplx acc{};
                    for (int j = 0; j < d; ++j) acc += amp(i, j) * std::conj(amp(ip, j));
                    r.mat[static_cast<size_t>(i * d + ip)] = acc;
                }
            }
            break;
        }
        case Bipartition::TwoQubit: {
            r.dim = 4;
            r.mat.assign(16, cplx{});
            for (int s1 = 0; s1 < 2; ++s1)
                for (int s2 = 0; s2 < 2; ++s2)
                    for (int s1p = 0; s1p < 2; ++s1p)
                        for (int s2p = 0; s2p < 2; ++s2p) {
                            cplx acc{};
                            for (int n1 = 0; n1 < sites; ++n1)
                                for (int n2 = 0; n2 < sites; ++n2)
                                    acc += amp(2 * n1 + s1, 2 * n2 + s2) *
                                           std::conj(amp(2 * n1 + s1p, 2 * n2 + s2p));
                            r.mat[static_cast<size_t>((2 * s1 + s2) * 4 + (2 * s1p + s2p))] = acc;
                        }
            break;
        }
        case Bipartition::Qubit: {
            const ReducedOperator q2 = dense_reduced(s, Bipartition::TwoQubit);
            r.dim = 2;
            r.mat.assign(4, cplx{});
            for (int a = 0; a < 2; ++a)
                for (int ap = 0; ap < 2; ++ap)
                    for (int u = 0; u < 2; ++u)
                        r.mat[static_cast<size_t>(a * 2 + ap)] +=
                            q2.mat[static_cast<size_t>((2 * a + u) * 4 + (2 * ap + u))];
            break;
        }
        case Bipartition::Position: {
            const ReducedOperator sp = dense_reduced(s, Bipartition::Particle);
            r.dim = sites;
            r.mat.assign(static_cast<size_t>(sites) * static_cast<size_t>(sites), cplx{});
            for (int n = 0; n < sites; ++n)
                for (int np = 0; np < sites; ++np)
                    for (int u = 0; u < 2; ++u)
                        r.mat[static_cast<size_t>(n * sites + np)] +=
                            sp.mat[static_cast<size_t>((2 * n + u) * d + (2 * np + u))];
            break;
        }
        case Bipartition::TwoPosition: {
            const int dp = sites * sites;
            r.dim = dp;
            r.mat.assign(static_cast<size_t>(dp) * static_cast<size_t>(dp), cplx{});
            for (int n1 = 0; n1 < sites; ++n1)
                for (int n2 = 0; n2 < sites; ++n2)
                    for (int n1p = 0; n1p < sites; ++n1p)
                        for (int n2p = 0; n2p < sites; ++n2p) {
                            cplx acc{};
                            for (int s1 = 0; s1 < 2; ++s1)
                                for (int s2 = 0; s2 < 2; ++s2)
                                    acc += amp(2 * n1 + s1, 2 * n2 + s2) *
                                           std::conj(amp(2 * n1p + s1, 2 * n2p + s2));
                            r.mat[static_cast<size_t>((n1 * sites + n2) * dp +
                                                      (n1p * sites + n2p))] = acc;
                        }
            break;
        }
    }

    double tr = 0.0;
    for (int i = 0; i < r.dim; ++i) tr += r.mat[static_cast<size_t>(i * r.dim + i)].real();
    if (!(tr > 0.0)) throw ZeroNorm("dense_reduced: trace underflowed");
    for (auto& v : r.mat) v /= tr;

    if (b != Bipartition::TwoPosition) {
        r.spectrum = descending_clipped(hermitian_eigenvalues(r.mat, r.dim));
    }
    return r;
}

ObservableSet fast_observables(const TwoParticleRun& run) {
    ObservableSet o;
    const JointDensity jd = joint_density(run);
    o.joint = jd.grid;
    o.marginal = marginal_density(jd);
    o.rms = 0.0;
    {
        const int N = jd.sites();
        double acc = 0.0;
        for (int m1 = 0; m1 < N; ++m1)
            for (int m2 = 0; m2 < N; ++m2) {
                const double dd = static_cast<double>(jd.site_of(m1) - jd.site_of(m2));
                acc += jd.at(m1, m2) * dd * dd;
            }
        o.rms = std::sqrt(acc);
    }
    const BipartitionSpectra bs = bipartition_spectra(run);
    o.spectrum_Q = bs.spectrum_Q;
    o.spectrum_q = bs.spectrum_q;
    o.spectrum_S = bs.spectrum_S;
    o.purity_p = bs.purity_p;
    o.entropy_Q = entropy_of(bs.spectrum_Q);
    o.entropy_q = entropy_of(bs.spectrum_q);
    o.c_Q = concurrence_of(bs.purity_Q);
    o.c_q = concurrence_of(bs.purity_q);
    o.c_S = concurrence_of(bs.purity_S);
    o.c_p = concurrence_of(bs.purity_p);
    o.c_gme = std::min({o.c_Q, o.c_q, o.c_S, o.c_p});
    o.raw_trace = bs.trace.to_double();
    return o;
}

ObservableSet dense_observables(const DenseState& s) {
    ObservableSet o;
    const int sites = s.sites;
    const int T = s.T;
    const int N = 2 * T + 1; // even sites
    const auto amp = [&](int i, int j) { return s.amp[static_cast<size_t>(i * s.dim + j)]; };

    // Joint density over all integer site pairs; fold out the even-even block
    // and account the rest as odd-site mass.
    std::vector<double> joint(static_cast<size_t>(N) * static_cast<size_t>(N), 0.0);
    double total = 0.0;
    double odd_mass = 0.0;
    for (int n1 = 0; n1 < sites; ++n1) {
        for (int n2 = 0; n2 < sites; ++n2) {
            double cell = 0.0;
            for (int s1 = 0; s1 < 2; ++s1)
                for (int s2 = 0; s2 < 2; ++s2)
                    cell += std::norm(amp(2 * n1 + s1, 2 * n2 + s2));
            total += cell;
            const bool even1 = (n1 % 2) == 0;
            const bool even2 = (n2 % 2) == 0;
            if (even1 && even2) {
                joint[static_cast<size_t>((n1 / 2) * N + (n2 / 2))] = cell;
            } else {
                odd_mass += cell;
            }
        }
    }
    if (!(total > 0.0)) throw ZeroNorm("dense_observables: zero total");
    for (auto& v : joint) v /= total;
    o.joint = std::move(joint);
    o.odd_site_mass = odd_mass / total;
    o.raw_trace = total;

    o.marginal.assign(static_cast<size_t>(N), 0.0);
    double acc = 0.0;
    for (int m1 = 0; m1 < N; ++m1) {
        for (int m2 = 0; m2 < N; ++m2) {
            const double v = o.joint[static_cast<size_t>(m1 * N + m2)];
            o.marginal[static_cast<size_t>(m1)] += v;
            const double dd = 2.0 * static_cast<double>(m1 - m2);
            acc += v * dd * dd;
        }
    }
    o.rms = std::sqrt(acc);

    const ReducedOperator rq2 = dense_reduced(s, Bipartition::TwoQubit);
    const ReducedOperator rq1 = dense_reduced(s, Bipartition::Qubit);
    const ReducedOperator rsp = dense_reduced(s, Bipartition::Particle);
    const ReducedOperator rp = dense_reduced(s, Bipartition::Position);

    o.spectrum_Q = rq2.spectrum;
    o.spectrum_q = rq1.spectrum;
    o.spectrum_S = {rsp.spectrum[0], rsp.spectrum[1]};
    for (size_t i = 2; i < rsp.spectrum.size(); ++i) {
        o.s_tail = std::max(o.s_tail, std::abs(rsp.spectrum[i]));
    }
    o.purity_p = purity_from_mat(rp.mat);

    o.entropy_Q = entropy_of(rq2.spectrum);
    o.entropy_q = entropy_of(rq1.spectrum);

    const auto purity_spec = [](const std::vector<double>& spec) {
        double p = 0.0;
        for (double v : spec) p += v * v;
        return p;
    };
    o.c_Q = concurrence_of(purity_spec(rq2.spectrum));
    o.c_q = concurrence_of(purity_spec(rq1.spectrum));
    o.c_S = concurrence_of(purity_spec(rsp.spectrum));
    o.c_p = concurrence_of(o.purity_p);
    o.c_gme = std::min({o.c_Q, o.c_q, o.c_S, o.c_p});
    return o;
}

std::vector<CertifyRow> compare_observables(const ObservableSet& dense,
                                            const ObservableSet& fast, double tol) {
    std::vector<CertifyRow> rows;
    const auto vec_dev = [](const std::vector<double>& a, const std::vector<double>& b) {
        if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
        double r = 0.0;
        for (size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
        return r;
    };
    const auto push = [&](const std::string& name, double dev) {
        rows.push_back({name, dev, tol, dev <= tol});
    };
    push("joint_density", vec_dev(dense.joint, fast.joint));
    push("marginal", vec_dev(dense.marginal, fast.marginal));
    push("distance_rms", std::abs(dense.rms - fast.rms));
    push("spectrum_Q", vec_dev(dense.spectrum_Q, fast.spectrum_Q));
    push("spectrum_q", vec_dev(dense.spectrum_q, fast.spectrum_q));
    push("spectrum_S", vec_dev(dense.spectrum_S, fast.spectrum_S));
    push("spectrum_S_tail", dense.s_tail);
    push("purity_p", std::abs(dense.purity_p - fast.purity_p));
    push("entropy_Q", std::abs(dense.entropy_Q - fast.entropy_Q));
    push("entropy_q", std::abs(dense.entropy_q - fast.entropy_q));
    push("concurrence_Q", std::abs(dense.c_Q - fast.c_Q));
    push("concurrence_q", std::abs(dense.c_q - fast.c_q));
    push("concurrence_S", std::abs(dense.c_S - fast.c_S));
    push("concurrence_p", std::abs(dense.c_p - fast.c_p));
    push("concurrence_GME", std::abs(dense.c_gme - fast.c_gme));
    push("odd_site_mass", dense.odd_site_mass);
    // Raw traces agree only up to the fast path's tracked rescaling, so they
    // are compared as a ratio.
    const double ratio_dev =
        dense.raw_trace > 0.0 && fast.raw_trace > 0.0 && std::isfinite(fast.raw_trace)
            ? std::abs(dense.raw_trace / fast.raw_trace - 1.0)
            : std::numeric_limits<double>::infinity();
    push("raw_trace_ratio", ratio_dev);
    return rows;
}

CertifyReport certify(const ModelParams& p, Exchange sym, int t_max, double tol) {
    CertifyReport rep;
    rep.t_max = t_max;
    rep.tol = tol;
    rep.params = p;
    rep.sym = sym;

    for (int t = 0; t <= t_max; ++t) {
        ModelParams pt = p;
        const DenseState ds = dense_evolve(pt, sym, t);
        const TwoParticleRun run = TwoParticleRun::make(pt, sym, t);
        const auto rows = compare_observables(dense_observables(ds), fast_observables(run), tol);
        if (rep.rows.empty()) {
            rep.rows = rows;
        } else {
            for (size_t i = 0; i < rows.size(); ++i) {
                rep.rows[i].max_dev = std::max(rep.rows[i].max_dev, rows[i].max_dev);
                rep.rows[i].pass = rep.rows[i].max_dev <= tol;
            }
        }
    }
    rep.passed = true;
    for (const auto& row : rep.rows) rep.passed = rep.passed && row.pass;
    return rep;
}

std::string CertifyReport::to_text() const {
    std::ostringstream os;
    os << "certify sym=" << to_string(sym) << " T=" << params.steps << " t_max=" << t_max
       << " tol=" << tol << "\n";
    for (const auto& row : rows) {
        os << "  " << (row.pass ? "pass" : "FAIL") << "  " << row.observable
           << "  max_dev=" << row.max_dev << "\n";
    }
    os << (passed ? "PASS" : "FAIL") << "\n";
    return os.str();
}

} // namespace nuqwalk
