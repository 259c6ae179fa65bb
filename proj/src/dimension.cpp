#include "torrec/dimension.hpp"

#include <cmath>

#include "torrec/errors.hpp"

namespace torrec {

namespace {

void require_expanding(const Spectrum& spec) {
    if (spec.dim() == 0) throw InvalidSpectrum("empty spectrum");
    for (const auto& e : spec.entries) {
        const bool ok = e.exact ? (*e.exact > 1) : (e.value - e.radius > 1.0);
        if (!ok) throw InvalidSpectrum();
    }
}

double alpha_rounding_radius(const Alpha& a) {
    return a.exact_base ? 0.0 : 4e-16 * (1.0 + std::abs(a.value));
}

}  // namespace

bool certified_log_greater(const SpectrumEntry& li, const SpectrumEntry& lj, const Alpha& alpha) {
    if (alpha.infinite) return false;
    if (li.exact && lj.exact && alpha.exact_base) {
        // lambda_i > lambda_j * base, exact
        return *li.exact > *lj.exact * *alpha.exact_base;
    }
    const double lhs_lo = li.log_value() - li.log_radius();
    const double lhs_hi = li.log_value() + li.log_radius();
    const double ar = alpha_rounding_radius(alpha);
    const double rhs_lo = lj.log_value() - lj.log_radius() + alpha.value - ar;
    const double rhs_hi = lj.log_value() + lj.log_radius() + alpha.value + ar;
    if (lhs_lo > rhs_hi) return true;
    if (lhs_hi <= rhs_lo) return false;
    throw AmbiguousComparison();
}

std::vector<int> dominant_indices(const Spectrum& spec, const Alpha& alpha, int j) {
    if (j < 1 || static_cast<std::size_t>(j) > spec.dim()) throw UsageError("index j out of range");
    std::vector<int> out;
    for (std::size_t i = 1; i <= spec.dim(); ++i)
        if (certified_log_greater(spec.modulus(i), spec.modulus(j), alpha))
            out.push_back(static_cast<int>(i));
    return out;
}

double spread_threshold(const Spectrum& spec) {
    const auto& lo = spec.entries.front();
    const auto& hi = spec.entries.back();
    if (lo.exact && hi.exact) {
        Rat q = *hi.exact / *lo.exact;
        return std::log(q.get_d());
    }
    return hi.log_value() - lo.log_value();
}

Cert alpha_at_least_spread(const Spectrum& spec, const Alpha& alpha) {
    if (alpha.infinite) return Cert::True;
    const auto& lo = spec.entries.front();
    const auto& hi = spec.entries.back();
    if (lo.exact && hi.exact && alpha.exact_base)
        return (*alpha.exact_base * *lo.exact >= *hi.exact) ? Cert::True : Cert::False;
    const double thr = spread_threshold(spec);
    const double thr_r = lo.log_radius() + hi.log_radius() + 4e-16 * (1.0 + std::abs(thr));
    const double ar = alpha_rounding_radius(alpha);
    if (alpha.value - ar >= thr + thr_r) return Cert::True;
    if (alpha.value + ar < thr - thr_r) return Cert::False;
    return Cert::Unknown;
}

namespace {

DimensionResult evaluate_min_quotient(const Spectrum& spec, const Alpha& alpha, bool corrected) {
    require_expanding(spec);
    if (!alpha.infinite && alpha.value < 0) throw UsageError("alpha must be nonnegative");

    const std::size_t d = spec.dim();
    DimensionResult res;
    res.alpha_threshold = spread_threshold(spec);

    if (alpha.infinite) {
        res.value = 0.0;
        res.argmin_j = 1;
        res.per_j.assign(d, 0.0);
        if (corrected) res.k_sets.assign(d, {});
        res.label = "exact";
        return res;
    }

    std::vector<double> logs(d);
    for (std::size_t i = 0; i < d; ++i) logs[i] = spec.entries[i].log_value();

    res.per_j.resize(d);
    if (corrected) res.k_sets.resize(d);
    for (std::size_t j = 1; j <= d; ++j) {
        double tail = 0.0;
        for (std::size_t i = j + 1; i <= d; ++i) tail += logs[i - 1];
        double correction = 0.0;
        if (corrected) {
            auto ks = dominant_indices(spec, alpha, static_cast<int>(j));
            for (int k : ks) correction += alpha.value + logs[j - 1] - logs[k - 1];
            res.k_sets[j - 1] = std::move(ks);
        }
        const double num = static_cast<double>(j) * logs[j - 1] + correction + tail;
        const double den = alpha.value + logs[j - 1];
        res.per_j[j - 1] = num / den;
    }
    res.argmin_j = 1;
    res.value = res.per_j[0];
    for (std::size_t j = 2; j <= d; ++j)
        if (res.per_j[j - 1] < res.value) {
            res.value = res.per_j[j - 1];
            res.argmin_j = static_cast<int>(j);
        }

    if (corrected) {
        bool all_exact = true;
        for (const auto& e : spec.entries) all_exact = all_exact && e.exact.has_value();
        res.label = (all_exact || alpha_at_least_spread(spec, alpha) == Cert::True) ? "exact"
                                                                                    : "upper_bound";
    } else {
        res.label = (alpha_at_least_spread(spec, alpha) == Cert::True) ? "exact" : "upper_bound";
    }
    return res;
}

}  // namespace

DimensionResult dimension_formula(const Spectrum& spec, const Alpha& alpha) {
    return evaluate_min_quotient(spec, alpha, false);
}

DimensionResult dimension_formula_corrected(const Spectrum& spec, const Alpha& alpha) {
    return evaluate_min_quotient(spec, alpha, true);
}

double dimension_equal_moduli(unsigned d, double lambda, const Alpha& alpha) {
    if (!(lambda > 1.0)) throw InvalidSpectrum("equal-moduli formula needs lambda > 1");
    if (alpha.infinite) return 0.0;
    const double l = std::log(lambda);
    return static_cast<double>(d) * l / (alpha.value + l);
}

}  // namespace torrec
