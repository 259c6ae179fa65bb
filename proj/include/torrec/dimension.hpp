#pragma once

#include <string>
#include <vector>

#include "torrec/rate.hpp"
#include "torrec/roots.hpp"

namespace torrec {

/// Result of one of the min-quotient dimension formulas.
struct DimensionResult {
    double value = 0.0;
    int argmin_j = 1;  // 1-based, ties resolved toward smaller j
    std::vector<double> per_j;
    std::vector<std::vector<int>> k_sets;  // populated by the corrected formula
    std::string label;                     // "exact" or "upper_bound"
    double alpha_threshold = 0.0;
};

enum class Cert { True, False, Unknown };

/// Certified strict comparison log|lambda_i| > log|lambda_j| + alpha.
/// Decides exactly when both moduli and alpha carry exact forms, else by
/// disjoint intervals; throws AmbiguousComparison when undecidable.
bool certified_log_greater(const SpectrumEntry& li, const SpectrumEntry& lj, const Alpha& alpha);

/// The index set {i : log|lambda_i| > log|lambda_j| + alpha}, 1-based.
std::vector<int> dominant_indices(const Spectrum& spec, const Alpha& alpha, int j);

/// log(lambda_d / lambda_1).
double spread_threshold(const Spectrum& spec);
/// Certified alpha >= spread threshold (Unknown when undecidable).
Cert alpha_at_least_spread(const Spectrum& spec, const Alpha& alpha);

/// min_j (j log|lambda_j| + sum_{i>j} log|lambda_i|) / (alpha + log|lambda_j|).
/// Exact value for alpha at or above the spread threshold, an upper bound
/// below it; the label records which.
DimensionResult dimension_formula(const Spectrum& spec, const Alpha& alpha);

/// Same quotient family with the correction sum over the dominant index
/// sets; valid for every alpha >= 0 when the map is diagonalizable over Q
/// with integer eigenvalues.
DimensionResult dimension_formula_corrected(const Spectrum& spec, const Alpha& alpha);

/// d log(lambda) / (alpha + log(lambda)) for equal-moduli spectra.
double dimension_equal_moduli(unsigned d, double lambda, const Alpha& alpha);

}  // namespace torrec
