#include "nuqwalk/measures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "nuqwalk/errors.hpp"
#include "nuqwalk/evolution.hpp"

namespace nuqwalk {

namespace {

double binary_entropy(double p) {
    double e = 0.0;
    if (p > 0.0) e -= p * std::log(p);
    if (p < 1.0) e -= (1.0 - p) * std::log(1.0 - p);
    return e;
}

// H(p) = E on the p in (0, 1/2] branch, by bisection; H is monotone there.
double invert_binary_entropy(double e) {
    double lo = 1e-300;
    double hi = 0.5;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (binary_entropy(mid) < e ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Ordinary least squares y ~ m x + b.
void linear_fit(const std::vector<double>& x, const std::vector<double>& y,
                double& m, double& b) {
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    m = (n * sxy - sx * sy) / det;
    b = (sxx * sy - sx * sxy) / det;
}

double golden_min(const std::function<double(double)>& f, double lo, double hi) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < 80; ++i) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - phi * (b - a); f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + phi * (b - a); f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

double r_squared_of(std::span<const double> data, const std::vector<double>& model) {
    double mean = 0.0;
    for (double v : data) mean += v;
    mean /= static_cast<double>(data.size());
    double ssr = 0.0, sst = 0.0;
    for (size_t i = 0; i < data.size(); ++i) {
        ssr += (data[i] - model[i]) * (data[i] - model[i]);
        sst += (data[i] - mean) * (data[i] - mean);
    }
    if (sst <= 0.0) return ssr <= 0.0 ? 1.0 : 0.0;
    return 1.0 - ssr / sst;
}

} // namespace

double von_neumann_entropy(std::span<const double> spectrum) {
    double sum = 0.0;
    for (double v : spectrum) {
        if (v < -kClipTol) throw InvalidSpectrum("eigenvalue below clip tolerance");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-8) {
        throw InvalidSpectrum("spectrum does not sum to 1");
    }
    double e = 0.0;
    for (double v : spectrum) {
        if (v > 0.0) e -= v * std::log(v);
    }
    return e;
}

double linear_entropy(double purity) { return 1.0 - purity; }

double concurrence_from_purity(double purity) {
    return std::sqrt(std::max(0.0, 2.0 * (1.0 - purity)));
}

ConcurrenceRecord gme_concurrence(const BipartitionSpectra& rec, int t) {
    ConcurrenceRecord c;
    c.t = t;
    c.c_Q = concurrence_from_purity(rec.purity_Q);
    c.c_q = concurrence_from_purity(rec.purity_q);
    c.c_S = concurrence_from_purity(rec.purity_S);
    c.c_p = concurrence_from_purity(rec.purity_p);
    c.c_gme = std::min({c.c_Q, c.c_q, c.c_S, c.c_p});
    return c;
}

double distance_rms(const JointDensity& jd) {
    const int N = jd.sites();
    double acc = 0.0;
    for (int m1 = 0; m1 < N; ++m1) {
        for (int m2 = 0; m2 < N; ++m2) {
            const double d = static_cast<double>(jd.site_of(m1) - jd.site_of(m2));
            acc += jd.at(m1, m2) * d * d;
        }
    }
    return std::sqrt(acc);
}

double scaling_exponent(std::span<const TimePoint> series, const Window& w) {
    std::vector<double> x, y;
    for (const auto& p : series) {
        if (p.t < w.t_min || p.t > w.t_max) continue;
        if (!(p.value > 0.0)) {
            throw InsufficientData("scaling_exponent: non-positive value in window");
        }
        x.push_back(std::log(p.t));
        y.push_back(std::log(p.value));
    }
    if (x.size() < 5) {
        throw InsufficientData("scaling_exponent: fewer than 5 points in window");
    }
    double m = 0.0, b = 0.0;
    linear_fit(x, y, m, b);
    return m;
}

DecayFit entropy_decay_fit(std::span<const TimePoint> series, const Window& w,
                           bool include_c2) {
    const double ln2 = std::log(2.0);
    std::vector<double> ts, ps;
    for (const auto& pt : series) {
        if (pt.t < w.t_min || pt.t > w.t_max) continue;
        if (!(pt.value > 0.0) || pt.value > ln2 + 1e-12 || pt.t <= 0.0) continue;
        ts.push_back(pt.t);
        ps.push_back(invert_binary_entropy(std::min(pt.value, ln2)));
    }
    const size_t n_params = include_c2 ? 2u : 1u;
    if (ts.size() < n_params) {
        throw FitFailure("entropy_decay_fit: inversion left no usable points");
    }

    DecayFit fit;
    fit.window = w;
    if (include_c2) {
        // Normal equations for p ~ c1/t + c2/t^2.
        double s22 = 0.0, s23 = 0.0, s44 = 0.0, b1 = 0.0, b2 = 0.0;
        for (size_t i = 0; i < ts.size(); ++i) {
            const double x1 = 1.0 / ts[i];
            const double x2 = x1 * x1;
            s22 += x1 * x1;
            s23 += x1 * x2;
            s44 += x2 * x2;
            b1 += x1 * ps[i];
            b2 += x2 * ps[i];
        }
        const double det = s22 * s44 - s23 * s23;
        fit.c1 = (b1 * s44 - b2 * s23) / det;
        fit.c2 = (s22 * b2 - s23 * b1) / det;
    } else {
        double sxx = 0.0, sxy = 0.0;
        for (size_t i = 0; i < ts.size(); ++i) {
            const double x1 = 1.0 / ts[i];
            sxx += x1 * x1;
            sxy += x1 * ps[i];
        }
        fit.c1 = sxy / sxx;
        fit.c2 = 0.0;
    }

    double sse = 0.0, spp = 0.0;
    for (size_t i = 0; i < ts.size(); ++i) {
        const double pfit = fit.c1 / ts[i] + fit.c2 / (ts[i] * ts[i]);
        sse += (pfit - ps[i]) * (pfit - ps[i]);
        spp += ps[i] * ps[i];
    }
    fit.residual = sse;
    fit.rel_residual = spp > 0.0 ? std::sqrt(sse / spp)
                                 : std::numeric_limits<double>::infinity();
    return fit;
}

GaussianFit gaussian_fit(std::span<const double> marginal, int T) {
    const int N = 2 * T + 1;
    GaussianFit g;
    for (int m = 0; m < N; ++m) {
        g.mean += 2.0 * (m - T) * marginal[static_cast<size_t>(m)];
    }
    for (int m = 0; m < N; ++m) {
        const double d = 2.0 * (m - T) - g.mean;
        g.variance += d * d * marginal[static_cast<size_t>(m)];
    }

    std::vector<double> model(static_cast<size_t>(N), 0.0);
    if (g.variance <= 0.0) {
        // Point mass: the model is the delta at the mean site.
        int best = 0;
        double bd = std::numeric_limits<double>::max();
        for (int m = 0; m < N; ++m) {
            const double d = std::abs(2.0 * (m - T) - g.mean);
            if (d < bd) { bd = d; best = m; }
        }
        model[static_cast<size_t>(best)] = 1.0;
    } else {
        double z = 0.0;
        for (int m = 0; m < N; ++m) {
            const double d = 2.0 * (m - T) - g.mean;
            model[static_cast<size_t>(m)] = std::exp(-d * d / (2.0 * g.variance));
            z += model[static_cast<size_t>(m)];
        }
        for (auto& v : model) v /= z;
    }
    g.r_squared = r_squared_of(marginal, model);
    return g;
}

AntisymPairFit antisym_pair_fit(std::span<const double> marginal, int T) {
    const int N = 2 * T + 1;

    // Marginal of (N(n1;s,+nbar) N(n2;s,-nbar) - N(n1;s,-nbar) N(n2;s,+nbar))^2:
    //   m(n) ~ g+(n)^2 + g-(n)^2 - 2 exp(-nbar^2/s^2) g+(n) g-(n)
    // with g+- the two Gaussians. Normalized over the even sites.
    const auto model_for = [&](double nbar, double sigma) {
        std::vector<double> model(static_cast<size_t>(N), 0.0);
        const double cross = std::exp(-nbar * nbar / (sigma * sigma));
        double z = 0.0;
        for (int m = 0; m < N; ++m) {
            const double n = 2.0 * (m - T);
            const double gp = std::exp(-(n - nbar) * (n - nbar) / (2.0 * sigma * sigma));
            const double gm = std::exp(-(n + nbar) * (n + nbar) / (2.0 * sigma * sigma));
            const double v = gp * gp + gm * gm - 2.0 * cross * gp * gm;
            model[static_cast<size_t>(m)] = v;
            z += v;
        }
        if (z > 0.0) {
            for (auto& v : model) v /= z;
        }
        return model;
    };
    const auto sse_for = [&](double nbar, double sigma) {
        const auto model = model_for(nbar, sigma);
        double sse = 0.0;
        for (size_t i = 0; i < model.size(); ++i) {
            sse += (marginal[i] - model[i]) * (marginal[i] - model[i]);
        }
        return sse;
    };

    // Moment-based start: |n| mean locates the peaks, the remaining spread
    // sets sigma; then a few rounds of coordinate golden-section refinement.
    double mean_abs = 0.0, var = 0.0;
    for (int m = 0; m < N; ++m) {
        const double n = 2.0 * (m - T);
        mean_abs += std::abs(n) * marginal[static_cast<size_t>(m)];
        var += n * n * marginal[static_cast<size_t>(m)];
    }
    double nbar = std::max(1.0, mean_abs);
    double sigma = std::sqrt(std::max(1.0, var - nbar * nbar));

    for (int round = 0; round < 4; ++round) {
        nbar = golden_min([&](double x) { return sse_for(x, sigma); }, 0.0,
                          2.0 * static_cast<double>(2 * T));
        sigma = golden_min([&](double x) { return sse_for(nbar, x); }, 0.3,
                           2.0 * static_cast<double>(2 * T));
    }

    AntisymPairFit fit;
    fit.nbar = nbar;
    fit.sigma = sigma;
    fit.r_squared = r_squared_of(marginal, model_for(nbar, sigma));
    return fit;
}

double qubit_entropy(const OneParticleField& f) {
    Mat2 m;
    for (int n = 0; n < f.sites(); ++n) {
        for (int s = 0; s < 2; ++s) {
            for (int sp = 0; sp < 2; ++sp) {
                m(s, sp) += f.at(n, s) * std::conj(f.at(n, sp));
            }
        }
    }
    const double tr = m(0, 0).real() + m(1, 1).real();
    if (!(tr > 0.0) || !std::isfinite(tr)) {
        throw ZeroNorm("qubit_entropy: trace underflowed");
    }
    // Normalized 2x2 spectrum: 1/2 +- sqrt((delta/2)^2 + |off|^2).
    const double half_gap = std::sqrt(
        0.25 * std::pow((m(0, 0).real() - m(1, 1).real()) / tr, 2) +
        std::norm(m(0, 1)) / (tr * tr));
    const double ev[2] = {std::clamp(0.5 + half_gap, 0.0, 1.0),
                          std::clamp(0.5 - half_gap, 0.0, 1.0)};
    double e = 0.0;
    for (double v : ev) {
        if (v > 0.0) e -= v * std::log(v);
    }
    return e;
}

double one_particle_entropy(const ModelParams& p, int t) {
    return qubit_entropy(evolve(0, p, t));
}

} // namespace nuqwalk
