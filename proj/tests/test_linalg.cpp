#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "nuqwalk/linalg.hpp"

using namespace nuqwalk;

TEST_CASE("symmetric eigenvalues: known 2x2") {
    // [[2, 1], [1, 2]] -> {1, 3}
    const auto ev = symmetric_eigenvalues({2.0, 1.0, 1.0, 2.0}, 2);
    CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(ev[1] == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("hermitian eigenvalues: sigma2 has spectrum {-1, +1}") {
    const std::vector<cplx> sy = {cplx(0, 0), cplx(0, -1), cplx(0, 1), cplx(0, 0)};
    const auto ev = hermitian_eigenvalues(sy, 2);
    CHECK(ev[0] == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(ev[1] == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("hermitian eigenvalues: diagonal matrix is exact") {
    std::vector<cplx> d(9, cplx{});
    d[0] = 0.3;
    d[4] = -1.5;
    d[8] = 2.25;
    const auto ev = hermitian_eigenvalues(d, 3);
    CHECK(ev[0] == doctest::Approx(-1.5).epsilon(1e-14));
    CHECK(ev[1] == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(ev[2] == doctest::Approx(2.25).epsilon(1e-14));
}

TEST_CASE("hermitian eigenvalues: random matrices satisfy trace identities") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int n : {2, 4, 9, 17}) {
        std::vector<cplx> a(static_cast<size_t>(n) * static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            a[static_cast<size_t>(i * n + i)] = u(rng);
            for (int j = i + 1; j < n; ++j) {
                const cplx v(u(rng), u(rng));
                a[static_cast<size_t>(i * n + j)] = v;
                a[static_cast<size_t>(j * n + i)] = std::conj(v);
            }
        }
        CHECK(hermiticity_error(a, n) == 0.0);
        const auto ev = hermitian_eigenvalues(a, n);

        double tr = 0.0, fro2 = 0.0;
        for (int i = 0; i < n; ++i) tr += a[static_cast<size_t>(i * n + i)].real();
        for (const auto& v : a) fro2 += std::norm(v);
        double s1 = 0.0, s2 = 0.0;
        for (double v : ev) {
            s1 += v;
            s2 += v * v;
        }
        CHECK(s1 == doctest::Approx(tr).epsilon(1e-12));
        CHECK(s2 == doctest::Approx(fro2).epsilon(1e-12));
    }
}

TEST_CASE("hermitian eigenvalues: degenerate spectra are stable") {
    // 4x4 with eigenvalues {1/2, 1/2, 0, 0}: a Bell-marginal-like projector.
    std::vector<cplx> a(16, cplx{});
    a[5] = 0.5;
    a[6] = 0.5;
    a[9] = 0.5;
    a[10] = 0.5;
    const auto ev = hermitian_eigenvalues(a, 4);
    CHECK(ev[0] == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(ev[1] == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(ev[2] == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(ev[3] == doctest::Approx(1.0).epsilon(1e-13));
}
