#pragma once

// Symmetric/antisymmetric two-particle states assembled from two one-particle
// fields. The full two-particle state (dimension (2N)^2) is never
// materialized here: evolution is separable (U tensor U), so the joint
// density costs O(N^2) and every reduced operator comes from the rank-2
// span of the two fields. The dense construction lives in oracle.*.

#include <array>
#include <vector>

#include "nuqwalk/evolution.hpp"
#include "nuqwalk/mat2.hpp"
#include "nuqwalk/model.hpp"

namespace nuqwalk {

enum class Exchange { Symmetric, Antisymmetric };

inline int sign_of(Exchange e) { return e == Exchange::Symmetric ? +1 : -1; }
const char* to_string(Exchange e);

// Eigenvalues in [-kClipTol, 0) are clipped to 0; anything below -kClipTol is
// a hard error (a bug, not noise).
inline constexpr double kClipTol = 1e-10;

// Both one-particle fields evolved to the same t. The fields are balanced on
// construction (stored max amplitude 1, remainder in log_scale) so that
// bilinear combinations stay inside double range on strongly non-unitary runs.
struct TwoParticleRun {
    OneParticleField psi0; // evolved from |0,0>
    OneParticleField psi1; // evolved from |0,1>
    Exchange sym;
    ModelParams params;
    int t = 0;

    static TwoParticleRun make(const ModelParams& p, Exchange sym, int t);
};

// Raw two-particle trace ab + sign*|c|^2 in stored units, with the log scale
// that restores true units.
struct RawTrace {
    double value = 0.0;
    double log_scale = 0.0;

    double to_double() const; // value * exp(log_scale), may overflow to inf
};

RawTrace raw_trace(const TwoParticleRun& run);

// Normalized joint position probability density over even-site pairs.
struct JointDensity {
    int T = 0;
    Exchange sym = Exchange::Symmetric;
    std::vector<double> grid; // N x N row-major, N = 2T+1
    double norm_used = 0.0;   // raw trace divided out (stored units)
    double log_scale = 0.0;   // true raw trace = norm_used * exp(log_scale)

    int sites() const { return 2 * T + 1; }
    int site_of(int m) const { return 2 * (m - T); }
    double at(int m1, int m2) const {
        return grid[static_cast<size_t>(m1 * sites() + m2)];
    }
};

// P(n1,n2) from the separable amplitude form, normalized to total 1;
// algebraically identical to the diagonal of the two-position reduced
// operator, which the dense oracle enforces. Throws ZeroNorm if the raw
// trace cancels to nothing.
JointDensity joint_density(const TwoParticleRun& run);

// Row sum of the grid; identical whether summed over n1 or n2.
std::vector<double> marginal_density(const JointDensity& jd);

// M^{qq'} = sum_n |psi^q_n><psi^{q'}_n| over site spinors, indexed [2q + q'].
// Position-space equivalent of the per-mode qubit correlator sums.
std::array<Mat2, 4> qubit_correlators(const TwoParticleRun& run);

// Normalized two-qubit reduced operator (4x4 row-major, first factor is the
// qubit of particle 1): sum over (q,q') of sign^{q xor q'} M^{qq'} (x) M^{q-bar q-bar'}.
std::array<cplx, 16> rho_Q(const TwoParticleRun& run);

// Partial trace of a normalized rho_Q over either qubit; the two marginals
// agree by exchange symmetry and that is asserted to 1e-10.
Mat2 rho_q(const std::array<cplx, 16>& rhoQ);

// The two nonzero eigenvalues of the normalized one-particle reduced operator
// (descending; the rest of the spectrum is exactly zero). rho_S has rank <= 2
// because it lives in span{psi0, psi1}:
//   lambda_{+,-} = (sqrt(ab) +- |c|)^2 / (2 (ab + sign |c|^2))   for sym = +1
//   lambda_{+,-} = 1/2, 1/2                                      for sym = -1
// with a = <psi0|psi0>, b = <psi1|psi1>, c = <psi0|psi1>.
std::array<double, 2> rho_S_spectrum(const TwoParticleRun& run);

// Purity of the normalized single-position reduced operator, built as the
// N x N qubit trace of the four |psi^i><psi^j| blocks.
double rho_p_purity(const TwoParticleRun& run);

// Everything the entropy/concurrence measures need, in one record.
struct BipartitionSpectra {
    std::vector<double> spectrum_Q; // 4 entries, descending, sum 1
    std::vector<double> spectrum_q; // 2 entries, descending, sum 1
    std::vector<double> spectrum_S; // the 2 nonzero entries, descending, sum 1
    double purity_Q = 1.0;
    double purity_q = 1.0;
    double purity_S = 1.0;
    double purity_p = 1.0;
    RawTrace trace;
};

BipartitionSpectra bipartition_spectra(const TwoParticleRun& run);

} // namespace nuqwalk
