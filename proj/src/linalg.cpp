#include "nuqwalk/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nuqwalk {

std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n) {
    const auto idx = [n](int i, int j) { return static_cast<size_t>(i * n + j); };

    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(a[idx(i, i)]));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) scale = std::max(scale, std::abs(a[idx(i, j)]));
    if (scale == 0.0) return std::vector<double>(static_cast<size_t>(n), 0.0);

    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a[idx(i, j)] * a[idx(i, j)];
        if (std::sqrt(off) <= 1e-15 * scale * n) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a[idx(p, q)];
                if (std::abs(apq) <= 1e-18 * scale) continue;
                const double app = a[idx(p, p)];
                const double aqq = a[idx(q, q)];
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0)
                                     ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                     : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                a[idx(p, p)] = app - t * apq;
                a[idx(q, q)] = aqq + t * apq;
                a[idx(p, q)] = 0.0;
                a[idx(q, p)] = 0.0;
                for (int i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = a[idx(i, p)];
                    const double aiq = a[idx(i, q)];
                    a[idx(i, p)] = c * aip - s * aiq;
                    a[idx(p, i)] = a[idx(i, p)];
                    a[idx(i, q)] = c * aiq + s * aip;
                    a[idx(q, i)] = a[idx(i, q)];
                }
            }
        }
    }

    std::vector<double> ev(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) ev[static_cast<size_t>(i)] = a[idx(i, i)];
    std::sort(ev.begin(), ev.end());
    return ev;
}

std::vector<double> hermitian_eigenvalues(const std::vector<cplx>& a, int n) {
    if (a.size() != static_cast<size_t>(n) * static_cast<size_t>(n)) {
        throw std::invalid_argument("hermitian_eigenvalues: size mismatch");
    }
    const int m = 2 * n;
    std::vector<double> e(static_cast<size_t>(m) * static_cast<size_t>(m), 0.0);
    const auto src = [&](int i, int j) { return a[static_cast<size_t>(i * n + j)]; };
    const auto dst = [&](int i, int j) -> double& {
        return e[static_cast<size_t>(i * m + j)];
    };
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double re = src(i, j).real();
            const double im = src(i, j).imag();
            dst(i, j) = re;
            dst(n + i, n + j) = re;
            dst(i, n + j) = -im;
            dst(n + i, j) = im;
        }
    }
    std::vector<double> doubled = symmetric_eigenvalues(std::move(e), m);
    // Every eigenvalue appears twice in the embedding; keep one of each pair.
    std::vector<double> ev(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) ev[static_cast<size_t>(i)] = doubled[static_cast<size_t>(2 * i)];
    return ev;
}

double hermiticity_error(const std::vector<cplx>& a, int n) {
    double r = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            r = std::max(r, std::abs(a[static_cast<size_t>(i * n + j)] -
                                     std::conj(a[static_cast<size_t>(j * n + i)])));
    return r;
}

} // namespace nuqwalk
