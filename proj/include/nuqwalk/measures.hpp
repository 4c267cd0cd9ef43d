#pragma once

// Entropies, concurrences, spatial statistics, and the asymptotic fits used
// for the decay-law and scaling comparisons. Natural logarithm throughout.

#include <span>
#include <vector>

#include "nuqwalk/model.hpp"
#include "nuqwalk/two_particle.hpp"

namespace nuqwalk {

struct EntropyRecord {
    int t = 0;
    double E_Q = 0.0;  // two-qubit entropy, in [0, ln 4]
    double E_q = 0.0;  // single-qubit entropy, in [0, ln 2]
    double E_q_op = 0.0; // one-particle companion value
};

struct ConcurrenceRecord {
    int t = 0;
    double c_Q = 0.0;
    double c_q = 0.0;
    double c_S = 0.0;
    double c_p = 0.0;
    double c_gme = 0.0; // min of the four
};

struct Window {
    double t_min = 0.0;
    double t_max = 0.0;
};

struct TimePoint {
    double t = 0.0;
    double value = 0.0;
};

struct DecayFit {
    double c1 = 0.0;
    double c2 = 0.0;       // zero when fitted with the 1/t form only
    double residual = 0.0; // sum of squared errors in p
    double rel_residual = 0.0; // sqrt(SSE / sum p^2)
    Window window;
};

struct GaussianFit {
    double mean = 0.0;
    double variance = 0.0;
    double r_squared = 0.0;
};

// Two-component variant for the antisymmetric broken phase: the marginal of
// the squared-difference of two Gaussians centered at +-nbar.
struct AntisymPairFit {
    double nbar = 0.0;
    double sigma = 0.0;
    double r_squared = 0.0;
};

// -sum lambda ln lambda with 0 ln 0 := 0. Throws InvalidSpectrum when the
// entries do not form a probability distribution (sum off by more than 1e-8,
// or negative beyond the clip tolerance).
double von_neumann_entropy(std::span<const double> spectrum);

double linear_entropy(double purity);            // 1 - purity
double concurrence_from_purity(double purity);   // sqrt(2 (1 - purity))

ConcurrenceRecord gme_concurrence(const BipartitionSpectra& rec, int t);

double distance_rms(const JointDensity& jd);

// Least-squares slope of ln(value) against ln(t) over the window. Throws
// InsufficientData with fewer than 5 points in the window or non-positive
// values.
double scaling_exponent(std::span<const TimePoint> series, const Window& w);

// Inverts the binary entropy per point on the p <= 1/2 branch (the minority
// eigenvalue is the vanishing one as the state purifies), then fits
// p(t) = c1/t + c2/t^2 (or c1/t only). Throws FitFailure when inversion
// leaves fewer points than fit parameters.
DecayFit entropy_decay_fit(std::span<const TimePoint> series, const Window& w,
                           bool include_c2 = true);

// Moment-matched Gaussian on the even-site support plus the coefficient of
// determination against the marginal.
GaussianFit gaussian_fit(std::span<const double> marginal, int T);

AntisymPairFit antisym_pair_fit(std::span<const double> marginal, int T);

// Entropy of the normalized qubit operator sum_n |psi_n><psi_n| / trace of an
// already-evolved field.
double qubit_entropy(const OneParticleField& f);

// Entropy of the normalized qubit operator of a single walker started in
// |0,0>.
double one_particle_entropy(const ModelParams& p, int t);

} // namespace nuqwalk
