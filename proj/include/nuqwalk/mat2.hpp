#pragma once

// Complex 2x2 operators and 2-component spinors. The whole mode-space
// calculus of the walk lives on these two types.

#include <array>
#include <cmath>
#include <complex>
#include <utility>

namespace nuqwalk {

using cplx = std::complex<double>;

struct Spinor {
    std::array<cplx, 2> v{};

    cplx& operator[](int i) { return v[static_cast<size_t>(i)]; }
    const cplx& operator[](int i) const { return v[static_cast<size_t>(i)]; }

    static Spinor basis(int q) {
        Spinor s;
        s[q] = 1.0;
        return s;
    }

    double norm_sq() const { return std::norm(v[0]) + std::norm(v[1]); }
};

inline cplx dot(const Spinor& a, const Spinor& b) {
    return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
}

inline Spinor operator*(cplx c, const Spinor& s) {
    Spinor r;
    r[0] = c * s[0];
    r[1] = c * s[1];
    return r;
}

// Row-major complex 2x2 matrix.
struct Mat2 {
    std::array<cplx, 4> m{};

    cplx& operator()(int i, int j) { return m[static_cast<size_t>(2 * i + j)]; }
    const cplx& operator()(int i, int j) const { return m[static_cast<size_t>(2 * i + j)]; }

    static Mat2 identity() {
        Mat2 r;
        r(0, 0) = 1.0;
        r(1, 1) = 1.0;
        return r;
    }

    static Mat2 diag(cplx a, cplx b) {
        Mat2 r;
        r(0, 0) = a;
        r(1, 1) = b;
        return r;
    }

    Mat2 adjoint() const {
        Mat2 r;
        r(0, 0) = std::conj((*this)(0, 0));
        r(0, 1) = std::conj((*this)(1, 0));
        r(1, 0) = std::conj((*this)(0, 1));
        r(1, 1) = std::conj((*this)(1, 1));
        return r;
    }

    cplx trace() const { return (*this)(0, 0) + (*this)(1, 1); }

    cplx det() const {
        return (*this)(0, 0) * (*this)(1, 1) - (*this)(0, 1) * (*this)(1, 0);
    }

    // Eigenvalues from the characteristic polynomial; exact for the 2x2 case
    // and valid at defective (exceptional) points where eigenvectors coalesce.
    std::pair<cplx, cplx> eigenvalues() const {
        const cplx t = trace();
        const cplx d = det();
        const cplx s = std::sqrt(t * t - 4.0 * d);
        return {0.5 * (t + s), 0.5 * (t - s)};
    }

    double max_abs() const {
        double r = 0.0;
        for (const auto& e : m) r = std::max(r, std::abs(e));
        return r;
    }
};

inline Mat2 operator*(const Mat2& a, const Mat2& b) {
    Mat2 r;
    r(0, 0) = a(0, 0) * b(0, 0) + a(0, 1) * b(1, 0);
    r(0, 1) = a(0, 0) * b(0, 1) + a(0, 1) * b(1, 1);
    r(1, 0) = a(1, 0) * b(0, 0) + a(1, 1) * b(1, 0);
    r(1, 1) = a(1, 0) * b(0, 1) + a(1, 1) * b(1, 1);
    return r;
}

inline Spinor operator*(const Mat2& a, const Spinor& s) {
    Spinor r;
    r[0] = a(0, 0) * s[0] + a(0, 1) * s[1];
    r[1] = a(1, 0) * s[0] + a(1, 1) * s[1];
    return r;
}

inline Mat2 operator+(const Mat2& a, const Mat2& b) {
    Mat2 r;
    for (size_t i = 0; i < 4; ++i) r.m[i] = a.m[i] + b.m[i];
    return r;
}

inline Mat2 operator-(const Mat2& a, const Mat2& b) {
    Mat2 r;
    for (size_t i = 0; i < 4; ++i) r.m[i] = a.m[i] - b.m[i];
    return r;
}

inline Mat2 operator*(cplx c, const Mat2& a) {
    Mat2 r;
    for (size_t i = 0; i < 4; ++i) r.m[i] = c * a.m[i];
    return r;
}

inline double max_abs_diff(const Mat2& a, const Mat2& b) {
    double r = 0.0;
    for (size_t i = 0; i < 4; ++i) r = std::max(r, std::abs(a.m[i] - b.m[i]));
    return r;
}

} // namespace nuqwalk
