#pragma once

#include <cstdint>
#include <vector>

#include "torrec/dimension.hpp"
#include "torrec/linalg.hpp"
#include "torrec/rate.hpp"

namespace torrec {

/// Exact change of coordinates A = P_tilde^{-1} D P_tilde for maps that
/// are diagonalizable over Q with integer eigenvalues. Rows of P are the
/// left eigenvectors normalized to leading coordinate 1; beta clears the
/// denominators minimally.
struct ConjugacyData {
    RationalMatrix P;
    IntegerMatrix P_tilde;
    Int beta;
    IntegerMatrix D;
    double e_min = 0.0;  // certified lower bound on sigma_min(P_tilde)
    double e_max = 0.0;  // certified upper bound on sigma_max(P_tilde)
};

ConjugacyData rational_diagonalize(const IntegerMatrix& a);

struct CommutationReport {
    unsigned samples = 0;
    unsigned failures = 0;
    std::uint64_t seed = 0;
};

/// Exact check of P_tilde(Ax mod 1) = D(P_tilde x mod 1) mod 1 on random
/// rationals with denominator <= 10^4.
CommutationReport commutation_check(const ConjugacyData& cd, const IntegerMatrix& a,
                                    unsigned samples, std::uint64_t seed);

struct SandwichRow {
    double r = 0.0;
    bool exp1_lower = false;  // B(0, e_min r) inside the image
    bool exp1_upper = false;  // image inside B(0, e_max r)
    bool expd_lower = false;  // same with e_min^d
    bool expd_upper = false;  // same with e_max^d
};

/// Ball-image sandwich for f = P_tilde x mod 1, by the singular-value
/// characterization of the linear image. The exponent-1 statement is the
/// sharp one; the exponent-d variant is evaluated alongside.
std::vector<SandwichRow> lipschitz_sandwich(const ConjugacyData& cd,
                                            const std::vector<double>& radii);

/// Dimension formula evaluated on |diag D|; bi-Lipschitz conjugacy
/// preserves the value.
DimensionResult transported_dimension(const IntegerMatrix& a, const Alpha& alpha);

}  // namespace torrec
