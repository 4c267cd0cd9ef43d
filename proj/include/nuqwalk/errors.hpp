#pragma once

#include <stdexcept>
#include <string>

namespace nuqwalk {

// Step requested past the allocated lattice (caller must size T >= steps).
struct LatticeOverflow : std::runtime_error {
    explicit LatticeOverflow(const std::string& what) : std::runtime_error(what) {}
};

// Two fields with different lattice sizes were combined.
struct SizeMismatch : std::runtime_error {
    explicit SizeMismatch(const std::string& what) : std::runtime_error(what) {}
};

// The raw trace underflowed or cancelled to nothing; normalized quantities
// are undefined for this run.
struct ZeroNorm : std::runtime_error {
    explicit ZeroNorm(const std::string& what) : std::runtime_error(what) {}
};

// An eigenvalue list fed to an entropy does not look like a probability
// distribution (negative beyond the clip tolerance, or sum far from 1).
struct InvalidSpectrum : std::runtime_error {
    explicit InvalidSpectrum(const std::string& what) : std::runtime_error(what) {}
};

// Too few usable points in the requested fit window.
struct InsufficientData : std::runtime_error {
    explicit InsufficientData(const std::string& what) : std::runtime_error(what) {}
};

// Binary-entropy inversion left no valid points to fit.
struct FitFailure : std::runtime_error {
    explicit FitFailure(const std::string& what) : std::runtime_error(what) {}
};

// Dense-oracle request beyond the hard size cap.
struct TooLarge : std::runtime_error {
    explicit TooLarge(const std::string& what) : std::runtime_error(what) {}
};

} // namespace nuqwalk
