#pragma once

// Split-step non-unitary walk: closed-form mode operators, quasi-energy
// dispersion and PT-phase classification.
//
// One step in mode space is
//   U_k = S_k G(gamma) Phi(phi) C(theta2) S_k G(-gamma) Phi(phi) C(theta1)
// with C = exp(i theta sigma1), G = exp(gamma sigma3), Phi = exp(i phi sigma3),
// S_k = exp(i k sigma3). The walker lives on even sites, Brillouin zone
// [-pi/2, pi/2).

#include <optional>
#include <vector>

#include "nuqwalk/mat2.hpp"

namespace nuqwalk {

struct ModelParams {
    double theta1 = 0.0; // radians
    double theta2 = 0.0; // radians
    double phi = 0.0;    // radians
    double gamma = 0.0;  // gain-loss exponent, e^gamma is the amplification
    int steps = 0;       // lattice is sized to 2*steps+1 even sites

    int lattice_sites() const { return 2 * steps + 1; }

    // Throws std::invalid_argument on non-finite angles or negative steps.
    void validate() const;
};

enum class PtPhase { Unbroken, ExceptionalPoint, Broken };

// Tolerance on f_max - 1 separating the three phases. gamma_ep is computed in
// closed form, so the only noise here is floating-point evaluation of the
// dispersion.
inline constexpr double kPhaseTol = 1e-9;

struct PhaseClass {
    PtPhase phase = PtPhase::Unbroken;
    double f_max = 0.0;          // extremal |f(k)| over the Brillouin zone
    std::vector<double> gap_k;   // wavevector(s) attaining f_max; the gap
                                 // closes there at and beyond the exceptional
                                 // point (empty while unbroken)
};

const char* to_string(PtPhase p);

Mat2 coin_op(double theta);       // exp(i theta sigma1)
Mat2 gain_loss_op(double gamma);  // diag(e^gamma, e^-gamma)
Mat2 phase_op(double phi);        // diag(e^{i phi}, e^{-i phi})
Mat2 shift_mode_op(double k);     // diag(e^{ik}, e^{-ik})

// The full 8-factor product, rightmost factor acting first.
Mat2 mode_operator(const ModelParams& p, double k);

// Dispersion argument f(k) = cos t1 cos t2 cos(2(k+phi)) - sin t1 sin t2 cosh(2 gamma);
// the quasi-energy is eps_k = arccos(f(k)).
double dispersion_f(const ModelParams& p, double k);

// Principal-branch arccos of f(k); real while |f| <= 1, complex beyond. The
// eigenvalues of mode_operator are exp(-i eps) and exp(+i eps).
cplx quasi_energy(const ModelParams& p, double k);

PhaseClass classify_phase(const ModelParams& p);

// Gain-loss exponent closing the quasi-energy gap, from
// |cos t1 cos t2| + |sin t1 sin t2| cosh(2 gamma_ep) = 1.
// Empty when no finite positive gamma closes the gap: sin t1 sin t2 = 0, or
// the walk is already gapless/broken at the unitary limit.
std::optional<double> exceptional_gamma(double theta1, double theta2);

// N-point mode grid over the even-site Brillouin zone [-pi/2, pi/2).
std::vector<double> mode_grid(int sites);

} // namespace nuqwalk
