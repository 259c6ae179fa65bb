#pragma once

#include <optional>
#include <vector>

#include <gmpxx.h>

#include "torrec/linalg.hpp"

namespace torrec {

/// One certified polynomial root: the true root lies in the closed disk
/// |z - (re, im)| <= radius. When the root was recovered exactly as a
/// rational, `exact` is set and radius is 0.
struct CertifiedRoot {
    double re = 0.0;
    double im = 0.0;
    double radius = 0.0;
    std::optional<Rat> exact;

    double modulus() const;
    /// |root^n - 1| with first-order radius propagation; exact value via
    /// `power_distance_exact` when the root is exact.
    double power_distance(unsigned long n) const;
    double power_distance_radius(unsigned long n) const;
};

/// All roots of an integer-coefficient polynomial (lowest degree first,
/// nonzero leading coefficient), with multiplicity, each enclosed in a
/// disk of radius <= tol. Rational roots come back exact. Throws
/// PrecisionFailure when disks cannot be shrunk below tol or separated.
std::vector<CertifiedRoot> certified_roots(const std::vector<Int>& poly, double tol);

/// One modulus |lambda_i| with certification data.
struct SpectrumEntry {
    double value = 0.0;
    double radius = 0.0;
    std::optional<Rat> exact;  // set when the modulus is known exactly

    double log_value() const;
    double log_radius() const;  // radius transported through log
};

/// Certified eigenvalue moduli of an integer matrix, ascending.
struct Spectrum {
    std::vector<SpectrumEntry> entries;
    bool hypothesis_ok = false;  // every modulus certified > 1
    double hypothesis_margin = 0.0;

    std::size_t dim() const { return entries.size(); }
    const SpectrumEntry& modulus(std::size_t i1) const { return entries.at(i1 - 1); }  // 1-based

    /// Build from already-known exact moduli (tests, diagonal data).
    static Spectrum from_exact(const std::vector<Rat>& moduli);
    static Spectrum from_values(const std::vector<double>& moduli, double radius = 0.0);
};

/// Moduli of the eigenvalues of A, sorted ascending, each certified to
/// radius <= tol. hypothesis_ok is false (not an error) when some
/// modulus fails to be certified > 1 + tol.
Spectrum eigen_moduli(const IntegerMatrix& a, double tol);

/// The underlying certified eigenvalues themselves (used for the
/// |lambda^n - 1| axis models).
std::vector<CertifiedRoot> eigen_roots(const IntegerMatrix& a, double tol);

/// One certified singular value; exact_square is the exact eigenvalue of
/// M^T M when that root was rational.
struct SingularValue {
    double value = 0.0;
    double radius = 0.0;
    std::optional<Rat> exact_square;
};

/// Certified singular values of M, ascending.
std::vector<SingularValue> singular_values(const IntegerMatrix& m, double tol);

/// Certified singular values of an exact rational matrix.
std::vector<SingularValue> singular_values(const RationalMatrix& m, double tol);

}  // namespace torrec
