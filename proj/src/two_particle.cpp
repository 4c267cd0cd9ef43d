#include "nuqwalk/two_particle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nuqwalk/linalg.hpp"

namespace nuqwalk {

namespace {

// Relative floor under which the raw trace counts as cancelled.
constexpr double kTraceRelTol = 1e-12;

struct Overlaps {
    double a = 0.0; // <psi0|psi0>
    double b = 0.0; // <psi1|psi1>
    cplx c{};       // <psi0|psi1>
    double trace = 0.0;
};

Overlaps overlaps_of(const TwoParticleRun& run) {
    Overlaps o;
    o.a = run.psi0.norm_sq();
    o.b = run.psi1.norm_sq();
    o.c = overlap(run.psi0, run.psi1);
    o.trace = o.a * o.b + sign_of(run.sym) * std::norm(o.c);
    const double floor = kTraceRelTol * std::max(o.a * o.b, std::norm(o.c));
    if (!std::isfinite(o.trace) || o.trace <= floor) {
        throw ZeroNorm("two-particle raw trace underflowed");
    }
    return o;
}

double clip_eigenvalue(double v) {
    if (v < -kClipTol) {
        throw std::logic_error("reduced-operator eigenvalue below clip tolerance");
    }
    return v < 0.0 ? 0.0 : v;
}

std::vector<double> clipped_descending(std::vector<double> ev) {
    for (auto& v : ev) v = clip_eigenvalue(v);
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

double purity_of(const std::vector<double>& spectrum) {
    double s = 0.0;
    for (double v : spectrum) s += v * v;
    return s;
}

} // namespace

const char* to_string(Exchange e) {
    return e == Exchange::Symmetric ? "plus" : "minus";
}

TwoParticleRun TwoParticleRun::make(const ModelParams& p, Exchange sym, int t) {
    TwoParticleRun run{evolve(0, p, t), evolve(1, p, t), sym, p, t};
    for (OneParticleField* f : {&run.psi0, &run.psi1}) {
        const double m = f->max_abs();
        if (m > 0.0) f->rescale_by(1.0 / m);
    }
    return run;
}

double RawTrace::to_double() const { return value * std::exp(log_scale); }

RawTrace raw_trace(const TwoParticleRun& run) {
    const Overlaps o = overlaps_of(run);
    return {o.trace, 2.0 * (run.psi0.log_scale() + run.psi1.log_scale())};
}

JointDensity joint_density(const TwoParticleRun& run) {
    const int N = run.psi0.sites();
    if (N != run.psi1.sites()) throw SizeMismatch("joint_density: lattice mismatch");
    const double sgn = sign_of(run.sym);

    JointDensity jd;
    jd.T = run.psi0.T();
    jd.sym = run.sym;
    jd.grid.assign(static_cast<size_t>(N) * static_cast<size_t>(N), 0.0);

    double total = 0.0;
    for (int m1 = 0; m1 < N; ++m1) {
        for (int m2 = 0; m2 < N; ++m2) {
            double cell = 0.0;
            for (int s1 = 0; s1 < 2; ++s1) {
                for (int s2 = 0; s2 < 2; ++s2) {
                    const cplx amp = run.psi0.at(m1, s1) * run.psi1.at(m2, s2) +
                                     sgn * run.psi1.at(m1, s1) * run.psi0.at(m2, s2);
                    cell += std::norm(amp);
                }
            }
            cell *= 0.5;
            jd.grid[static_cast<size_t>(m1 * N + m2)] = cell;
            total += cell;
        }
    }

    // The grid total is the raw trace; cross-checked against the overlap form.
    const Overlaps o = overlaps_of(run);
    if (!std::isfinite(total) || total <= kTraceRelTol * std::max(o.a * o.b, std::norm(o.c))) {
        throw ZeroNorm("joint_density: raw trace underflowed");
    }
    for (auto& v : jd.grid) v /= total;
    jd.norm_used = total;
    jd.log_scale = 2.0 * (run.psi0.log_scale() + run.psi1.log_scale());
    return jd;
}

std::vector<double> marginal_density(const JointDensity& jd) {
    const int N = jd.sites();
    std::vector<double> m(static_cast<size_t>(N), 0.0);
    for (int m1 = 0; m1 < N; ++m1) {
        double row = 0.0;
        for (int m2 = 0; m2 < N; ++m2) row += jd.at(m1, m2);
        m[static_cast<size_t>(m1)] = row;
    }
    return m;
}

std::array<Mat2, 4> qubit_correlators(const TwoParticleRun& run) {
    const int N = run.psi0.sites();
    if (N != run.psi1.sites()) throw SizeMismatch("qubit_correlators: lattice mismatch");
    const OneParticleField* psi[2] = {&run.psi0, &run.psi1};

    std::array<Mat2, 4> m{};
    for (int q = 0; q < 2; ++q) {
        for (int qp = 0; qp < 2; ++qp) {
            Mat2 acc;
            for (int n = 0; n < N; ++n) {
                for (int s = 0; s < 2; ++s) {
                    for (int sp = 0; sp < 2; ++sp) {
                        acc(s, sp) += psi[q]->at(n, s) * std::conj(psi[qp]->at(n, sp));
                    }
                }
            }
            m[static_cast<size_t>(2 * q + qp)] = acc;
        }
    }
    return m;
}

std::array<cplx, 16> rho_Q(const TwoParticleRun& run) {
    const auto m = qubit_correlators(run);
    const double sgn = sign_of(run.sym);

    std::array<cplx, 16> r{};
    for (int q = 0; q < 2; ++q) {
        for (int qp = 0; qp < 2; ++qp) {
            const Mat2& first = m[static_cast<size_t>(2 * q + qp)];
            const Mat2& second = m[static_cast<size_t>(2 * (1 - q) + (1 - qp))];
            const double s = ((q + qp) % 2 == 0) ? 1.0 : sgn;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    for (int k = 0; k < 2; ++k)
                        for (int l = 0; l < 2; ++l)
                            r[static_cast<size_t>((2 * i + j) * 4 + (2 * k + l))] +=
                                s * first(i, k) * second(j, l);
        }
    }

    // Hermitize away rounding and normalize.
    for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) {
            const cplx h = 0.5 * (r[static_cast<size_t>(4 * i + j)] +
                                  std::conj(r[static_cast<size_t>(4 * j + i)]));
            r[static_cast<size_t>(4 * i + j)] = h;
            r[static_cast<size_t>(4 * j + i)] = std::conj(h);
        }
    }
    double tr = 0.0;
    for (int i = 0; i < 4; ++i) tr += r[static_cast<size_t>(5 * i)].real();
    const Overlaps o = overlaps_of(run); // also runs the ZeroNorm guard
    if (!(tr > kTraceRelTol * std::max(o.a * o.b, std::norm(o.c)))) {
        throw ZeroNorm("rho_Q: trace underflowed");
    }
    for (auto& v : r) v /= tr;
    return r;
}

Mat2 rho_q(const std::array<cplx, 16>& rhoQ) {
    const auto el = [&](int i, int j) { return rhoQ[static_cast<size_t>(4 * i + j)]; };
    Mat2 over2; // trace out qubit 2
    Mat2 over1; // trace out qubit 1
    for (int s = 0; s < 2; ++s) {
        for (int sp = 0; sp < 2; ++sp) {
            over2(s, sp) = el(2 * s + 0, 2 * sp + 0) + el(2 * s + 1, 2 * sp + 1);
            over1(s, sp) = el(0 + s, 0 + sp) + el(2 + s, 2 + sp);
        }
    }
    if (max_abs_diff(over2, over1) > 1e-10) {
        throw std::logic_error("rho_q: qubit marginals disagree beyond 1e-10");
    }
    return over2;
}

std::array<double, 2> rho_S_spectrum(const TwoParticleRun& run) {
    const Overlaps o = overlaps_of(run);
    if (run.sym == Exchange::Antisymmetric) {
        // A*G is proportional to the identity on the rank-2 block: the
        // spectrum is exactly {1/2, 1/2} whenever the trace is positive.
        return {0.5, 0.5};
    }
    const double root = std::sqrt(o.a * o.b);
    const double cm = std::abs(o.c);
    const double lp = 0.5 * (root + cm) * (root + cm) / o.trace;
    const double lm = 0.5 * (root - cm) * (root - cm) / o.trace;
    return {clip_eigenvalue(std::max(lp, lm)), clip_eigenvalue(std::min(lp, lm))};
}

double rho_p_purity(const TwoParticleRun& run) {
    const int N = run.psi0.sites();
    if (N != run.psi1.sites()) throw SizeMismatch("rho_p_purity: lattice mismatch");
    const Overlaps o = overlaps_of(run);
    const double sgn = sign_of(run.sym);

    // rho_S = sum_ij A_ij |psi^i><psi^j| with A = (1/2) [[b, s c], [s conj(c), a]];
    // tracing the qubit leaves rho_p[n,n'] = sum_ij A_ij sum_s psi^i_{n,s} conj(psi^j_{n',s}).
    const cplx A00 = 0.5 * o.b;
    const cplx A01 = 0.5 * sgn * o.c;
    const cplx A10 = std::conj(A01);
    const cplx A11 = 0.5 * o.a;

    const OneParticleField& p0 = run.psi0;
    const OneParticleField& p1 = run.psi1;

    double frob2 = 0.0;
    double tr = 0.0;
    for (int n = 0; n < N; ++n) {
        for (int np = 0; np < N; ++np) {
            cplx val{};
            for (int s = 0; s < 2; ++s) {
                const cplx c00 = p0.at(n, s) * std::conj(p0.at(np, s));
                const cplx c01 = p0.at(n, s) * std::conj(p1.at(np, s));
                const cplx c10 = p1.at(n, s) * std::conj(p0.at(np, s));
                const cplx c11 = p1.at(n, s) * std::conj(p1.at(np, s));
                val += A00 * c00 + A01 * c01 + A10 * c10 + A11 * c11;
            }
            frob2 += std::norm(val);
            if (n == np) tr += val.real();
        }
    }
    if (!(tr > kTraceRelTol * std::max(o.a * o.b, std::norm(o.c)))) {
        throw ZeroNorm("rho_p_purity: trace underflowed");
    }
    return frob2 / (tr * tr);
}

BipartitionSpectra bipartition_spectra(const TwoParticleRun& run) {
    BipartitionSpectra out;

    const auto rq4 = rho_Q(run);
    out.spectrum_Q = clipped_descending(
        hermitian_eigenvalues(std::vector<cplx>(rq4.begin(), rq4.end()), 4));

    const Mat2 rq = rho_q(rq4);
    const double mean = 0.5 * (rq(0, 0).real() + rq(1, 1).real());
    const double half_gap =
        std::sqrt(0.25 * std::pow(rq(0, 0).real() - rq(1, 1).real(), 2) +
                  std::norm(rq(0, 1)));
    out.spectrum_q = clipped_descending({mean + half_gap, mean - half_gap});

    const auto s2 = rho_S_spectrum(run);
    out.spectrum_S = {s2[0], s2[1]};

    out.purity_Q = purity_of(out.spectrum_Q);
    out.purity_q = purity_of(out.spectrum_q);
    out.purity_S = purity_of(out.spectrum_S);
    out.purity_p = rho_p_purity(run);
    out.trace = raw_trace(run);
    return out;
}

} // namespace nuqwalk
