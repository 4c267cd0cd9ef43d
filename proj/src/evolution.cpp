#include "nuqwalk/evolution.hpp"

#include <cmath>
#include <stdexcept>

namespace nuqwalk {

OneParticleField::OneParticleField(int T, int q) : T_(T), origin_qubit_(q) {
    amp_.assign(static_cast<size_t>(2 * sites()), cplx{});
}

OneParticleField OneParticleField::localized(int qubit, int T) {
    if (qubit != 0 && qubit != 1) throw std::invalid_argument("qubit must be 0 or 1");
    if (T < 0) throw std::invalid_argument("T must be non-negative");
    OneParticleField f(T, qubit);
    f.at(T, qubit) = 1.0; // m = T is site n = 0
    return f;
}

double OneParticleField::norm_sq() const {
    double s = 0.0;
    for (const auto& a : amp_) s += std::norm(a);
    return s;
}

double OneParticleField::max_abs() const {
    double s = 0.0;
    for (const auto& a : amp_) s = std::max(s, std::abs(a));
    return s;
}

void OneParticleField::rescale_by(double factor) {
    if (!(factor > 0.0) || !std::isfinite(factor)) {
        throw std::invalid_argument("rescale factor must be positive and finite");
    }
    for (auto& a : amp_) a *= factor;
    log_scale_ -= std::log(factor);
}

OneParticleField step(const OneParticleField& f, const ModelParams& p) {
    p.validate();
    if (f.elapsed_ >= f.T_) {
        throw LatticeOverflow("step: field already at its allocated step budget");
    }

    const Mat2 first = gain_loss_op(-p.gamma) * phase_op(p.phi) * coin_op(p.theta1);
    const Mat2 second = gain_loss_op(p.gamma) * phase_op(p.phi) * coin_op(p.theta2);

    const int N = f.sites();
    OneParticleField out(f.T_, f.origin_qubit_);
    out.elapsed_ = f.elapsed_ + 1;
    out.log_scale_ = f.log_scale_;

    // Odd staging sites o = 2(j - T) - 1 for j in [0, N]. The first shift
    // sends even-site s=0 to o = n-1 (j = m) and s=1 to o = n+1 (j = m+1).
    std::vector<cplx> stage(static_cast<size_t>(2 * (N + 1)), cplx{});
    for (int m = 0; m < N; ++m) {
        Spinor v;
        v[0] = f.at(m, 0);
        v[1] = f.at(m, 1);
        v = first * v;
        stage[static_cast<size_t>(2 * m + 0)] += v[0];
        stage[static_cast<size_t>(2 * (m + 1) + 1)] += v[1];
    }

    // Second shift: odd-site s=0 to n = o-1 (m = j-1), s=1 to n = o+1 (m = j).
    double dropped = 0.0;
    for (int j = 0; j <= N; ++j) {
        Spinor v;
        v[0] = stage[static_cast<size_t>(2 * j + 0)];
        v[1] = stage[static_cast<size_t>(2 * j + 1)];
        v = second * v;
        if (j > 0) {
            out.at(j - 1, 0) += v[0];
        } else {
            dropped += std::norm(v[0]);
        }
        if (j < N) {
            out.at(j, 1) += v[1];
        } else {
            dropped += std::norm(v[1]);
        }
    }
    if (dropped != 0.0) {
        throw LatticeOverflow("step: amplitude reached the lattice edge");
    }

    const double m = out.max_abs();
    if (m > 0.0 && (m > 1e100 || m < 1e-100)) out.rescale_by(1.0 / m);
    return out;
}

OneParticleField evolve(int qubit, const ModelParams& p, int t) {
    p.validate();
    if (t > p.steps) {
        throw LatticeOverflow("evolve: t exceeds params.steps");
    }
    OneParticleField f = OneParticleField::localized(qubit, p.steps);
    for (int i = 0; i < t; ++i) f = step(f, p);
    return f;
}

Spinor mode_evolve(const ModelParams& p, double k, int qubit, int t) {
    if (t < 0) throw std::invalid_argument("mode_evolve: t must be non-negative");
    const Mat2 u = mode_operator(p, k);
    Spinor s = Spinor::basis(qubit);
    for (int i = 0; i < t; ++i) s = u * s;
    return s;
}

cplx overlap(const OneParticleField& a, const OneParticleField& b) {
    if (a.sites() != b.sites()) {
        throw SizeMismatch("overlap: fields live on different lattices");
    }
    cplx s{};
    const auto& va = a.amplitudes();
    const auto& vb = b.amplitudes();
    for (size_t i = 0; i < va.size(); ++i) s += std::conj(va[i]) * vb[i];
    return s;
}

} // namespace nuqwalk
