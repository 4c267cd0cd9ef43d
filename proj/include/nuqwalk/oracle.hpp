#pragma once

// Dense brute-force reference on tiny lattices: materializes the full
// two-particle state, takes literal partial traces, and certifies every
// fast-path observable against them. Deliberately shares no code with the
// fast path beyond the 2x2 factor constructors.
//
// The dense one-particle space is the full integer lattice n in [-2T, 2T]
// (so the single conditional shift is representable); full-step states have
// support on the even sites only, which the certification also checks.

#include <string>
#include <vector>

#include "nuqwalk/model.hpp"
#include "nuqwalk/two_particle.hpp"

namespace nuqwalk {

inline constexpr int kDenseMaxT = 8;

struct DenseState {
    int T = 0;
    int sites = 0; // 4T+1 integer sites
    int dim = 0;   // 2 * sites
    int t = 0;
    Exchange sym = Exchange::Symmetric;
    ModelParams params;
    std::vector<cplx> amp; // dim x dim row-major: amp[i1 * dim + i2]

    int index_of(int n, int s) const { return 2 * (n + 2 * T) + s; }
};

// One-particle full-lattice step matrix (dim x dim, row-major), built from
// the conditional shift and the site-wise 2x2 factors.
std::vector<cplx> dense_step_matrix(const ModelParams& p, int T);

// Tensor-square evolution of the symmetrized initial state. Throws TooLarge
// when p.steps > kDenseMaxT.
DenseState dense_evolve(const ModelParams& p, Exchange sym, int t);

// Same machinery from the non-symmetrized product |0,q1> (x) |0,q2>.
DenseState dense_evolve_product(const ModelParams& p, int q1, int q2, int t);

enum class Bipartition { TwoQubit, Qubit, Particle, Position, TwoPosition };

struct ReducedOperator {
    int dim = 0;
    std::vector<cplx> mat;        // normalized, row-major
    std::vector<double> spectrum; // descending; left empty for TwoPosition
};

// Literal index-contraction partial trace, normalized by its trace.
ReducedOperator dense_reduced(const DenseState& s, Bipartition b);

// The observables certified between the fast path and the dense path.
struct ObservableSet {
    std::vector<double> joint;    // even-site N x N grid, normalized
    std::vector<double> marginal; // even-site marginal
    double rms = 0.0;
    std::vector<double> spectrum_Q;
    std::vector<double> spectrum_q;
    std::vector<double> spectrum_S; // leading two eigenvalues
    double purity_p = 0.0;
    double entropy_Q = 0.0;
    double entropy_q = 0.0;
    double c_Q = 0.0, c_q = 0.0, c_S = 0.0, c_p = 0.0, c_gme = 0.0;
    double raw_trace = 0.0;
    double odd_site_mass = 0.0;   // dense only; must vanish at full steps
    double s_tail = 0.0;          // dense only; spectrum_S beyond rank 2
};

ObservableSet fast_observables(const TwoParticleRun& run);
ObservableSet dense_observables(const DenseState& s);

struct CertifyRow {
    std::string observable;
    double max_dev = 0.0;
    double tol = 0.0;
    bool pass = false;
};

struct CertifyReport {
    bool passed = false;
    int t_max = 0;
    double tol = 0.0;
    ModelParams params;
    Exchange sym = Exchange::Symmetric;
    std::vector<CertifyRow> rows;

    std::string to_text() const;
};

// Per-observable max absolute deviation between the two sets; used directly
// by certify and by the corrupted-path negative control.
std::vector<CertifyRow> compare_observables(const ObservableSet& dense,
                                            const ObservableSet& fast, double tol);

// Runs every t <= t_max and aggregates the worst deviation per observable.
CertifyReport certify(const ModelParams& p, Exchange sym, int t_max, double tol);

} // namespace nuqwalk
