#pragma once

// Position-space time stepping of the one-particle amplitude field, plus the
// per-mode spectral route used for cross-checks.
//
// The field lives on the even sites n in {-2T, ..., 2T} only (N = 2T+1 sites);
// the odd-site occupancy between the two shifts of a step is handled by an
// internal staging buffer and never exposed. Amplitudes are stored raw
// (growing or decaying with gamma); normalization happens in the measures.
// A tracked log-scale keeps stored magnitudes inside [1e-100, 1e+100] on
// extreme runs, and every normalized quantity is invariant under it.

#include <vector>

#include "nuqwalk/errors.hpp"
#include "nuqwalk/mat2.hpp"
#include "nuqwalk/model.hpp"

namespace nuqwalk {

class OneParticleField {
  public:
    // Amplitude 1 at (n=0, s=q), zero elsewhere.
    static OneParticleField localized(int qubit, int T);

    int T() const { return T_; }
    int sites() const { return 2 * T_ + 1; }
    int origin_qubit() const { return origin_qubit_; }
    int elapsed_steps() const { return elapsed_; }

    // True amplitude = stored amplitude * exp(log_scale).
    double log_scale() const { return log_scale_; }

    // Site value for storage index m in [0, sites()).
    int site_of(int m) const { return 2 * (m - T_); }

    cplx at(int m, int s) const { return amp_[static_cast<size_t>(2 * m + s)]; }
    cplx& at(int m, int s) { return amp_[static_cast<size_t>(2 * m + s)]; }

    const std::vector<cplx>& amplitudes() const { return amp_; }

    double norm_sq() const;  // of the stored amplitudes
    double max_abs() const;

    // Multiply stored amplitudes by `factor` and absorb it into log_scale, so
    // the represented field is unchanged.
    void rescale_by(double factor);

    friend OneParticleField step(const OneParticleField& f, const ModelParams& p);

  private:
    OneParticleField(int T, int q);

    int T_ = 0;
    int origin_qubit_ = 0;
    int elapsed_ = 0;
    double log_scale_ = 0.0;
    std::vector<cplx> amp_;
};

// One full split-step: C(theta1), Phi, G(-gamma), shift, C(theta2), Phi,
// G(gamma), shift. Throws LatticeOverflow once elapsed_steps reaches T.
OneParticleField step(const OneParticleField& f, const ModelParams& p);

// localized(q) advanced t steps on a lattice sized for p.steps.
OneParticleField evolve(int qubit, const ModelParams& p, int t);

// (U_k)^t |q> by repeated multiplication; exact to rounding even where U_k is
// defective, which rules out the eigendecomposition route.
Spinor mode_evolve(const ModelParams& p, double k, int qubit, int t);

// Sum conj(a) * b over the stored amplitudes; throws SizeMismatch.
cplx overlap(const OneParticleField& a, const OneParticleField& b);

} // namespace nuqwalk
