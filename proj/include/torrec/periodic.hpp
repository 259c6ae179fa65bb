#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "torrec/rate.hpp"
#include "torrec/roots.hpp"
#include "torrec/torus.hpp"

namespace torrec {

/// A map x -> Ax mod 1 together with its certified spectral data, shared
/// by everything downstream. Immutable after analyze().
struct TorusSystem {
    IntegerMatrix A;
    std::vector<CertifiedRoot> roots;  // eigenvalues, certified
    Spectrum spectrum;
    double tol = 0.0;

    static TorusSystem analyze(const IntegerMatrix& a, double tol = 1e-9);

    std::size_t dim() const { return A.dim(); }
    /// Throws RootOfUnity unless every |lambda_i| is certified != 1.
    void require_no_unit_modulus() const;

    /// Model factor |lambda_j^n - 1| (1-based j, ascending moduli).
    double power_factor(int j, unsigned long n) const;
    /// Exact power factor when eigenvalue j is exact.
    std::optional<Rat> power_factor_exact(int j, unsigned long n) const;
    /// Modulus power |lambda_j|^n - 1 (the counting/selection bounds are
    /// written with moduli).
    double modulus_power_factor(int j, unsigned long n) const;
    std::optional<Rat> modulus_power_factor_exact(int j, unsigned long n) const;
};

/// The set of period-n points: cardinality always, coordinates when
/// materialized. Every stored x satisfies (A^n - I) x integral, exactly.
struct PeriodicSet {
    unsigned long period = 0;
    Int cardinality;
    IntegerMatrix M;  // A^n - I
    std::vector<RatVec> points;

    bool materialized() const { return !points.empty() || cardinality == 0; }
};

/// H_n = |det(A^n - I)|, exact.
Int count_periodic(const TorusSystem& sys, unsigned long n);

/// All H_n period-n points as exact rationals in [0,1)^d via the Smith
/// decomposition of A^n - I. Throws CapExceeded when H_n > cap.
PeriodicSet enumerate_periodic(const TorusSystem& sys, unsigned long n, const Int& cap);

/// Streamed enumeration; fn is called once per point with the exact
/// coordinates and the linear index. Order is deterministic (mixed-radix
/// counter over the invariant-factor box).
void for_each_periodic(const IntegerMatrix& M, const std::function<void(std::size_t, const RatVec&)>& fn);

/// Streamed enumeration in double precision for big families; exact
/// recovery of a single point via periodic_point_at.
void for_each_periodic_d(const IntegerMatrix& M,
                         const std::function<void(std::size_t, const std::vector<double>&)>& fn);
RatVec periodic_point_at(const IntegerMatrix& M, std::size_t index);

struct BallCountReport {
    Int count;
    Int product_bound;       // prod over large factors of ceil((lambda_j^n - 1) r)
    double bound_ratio = 0;  // count / product_bound
    bool two_sided_applicable = false;  // r (lambda_1^n - 1) > 1
    double two_sided_ratio = 0.0;       // count / (r^d H_n)
};

/// Exact count of period-n points within quotient distance < r of
/// center, with the counting-bound report.
BallCountReport count_in_ball(const TorusSystem& sys, const PeriodicSet& pset, const RatVec& center,
                              const Scalar& r);

struct EllipsoidCountReport {
    Int count;
    double model = 0.0;  // psi(n)^d H_m / H_n
    double ratio = 0.0;
    bool hypothesis_ok = false;  // ell_{n,d} (lambda_1^m - 1) / sqrt(d) > 1
};

class Ellipsoid;  // recurrence.hpp

/// Exact count of period-m points inside one degree-n ellipsoid.
EllipsoidCountReport count_in_ellipsoid(const TorusSystem& sys, const PeriodicSet& pset_m,
                                        const Ellipsoid& ell);

}  // namespace torrec
