#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "torrec/linalg.hpp"

namespace torrec {

/// A real value that may carry an exact rational form. Exactness flows
/// through the geometry code so that set/containment tests stay
/// tolerance-free whenever the inputs allow it.
struct Scalar {
    double value = 0.0;
    std::optional<Rat> exact;

    Scalar() = default;
    explicit Scalar(double v) : value(v) {}
    explicit Scalar(const Rat& q) : value(q.get_d()), exact(q) {}

    bool is_exact() const { return exact.has_value(); }
};

/// The decay exponent of the return radius. Values parsed from
/// "ln<rational>" tokens keep the exact form alpha = log(base) so that
/// strict comparisons against log-linear combinations of an exact
/// spectrum can be decided with integer arithmetic.
struct Alpha {
    double value = 0.0;
    bool infinite = false;
    std::optional<Rat> exact_base;  // alpha = log(exact_base), base >= 1

    static Alpha from_double(double v);
    static Alpha log_of(const Rat& base);
    static Alpha infinity();

    /// Accepts "ln2", "ln(3/2)", "ln3/2", a plain decimal, or "inf".
    static Alpha parse(const std::string& text);

    bool is_zero() const { return !infinite && (exact_base ? *exact_base == 1 : value == 0.0); }
    std::string to_string() const;
};

/// Positive decreasing return radius psi. Either exponential
/// psi(n) = e^{-alpha n} or a finite table.
class RateFunction {
public:
    static RateFunction exponential(const Alpha& a);
    static RateFunction table(std::vector<std::pair<unsigned long, Scalar>> rows);

    /// Parse a CSV body "n,psi" (one row per line, '#' comments allowed);
    /// decimal psi values are kept exact as rationals.
    static RateFunction table_from_csv(const std::string& csv_body);

    bool is_exponential() const { return table_.empty(); }
    const Alpha& alpha() const { return alpha_; }
    /// For tables, alpha is a finite-horizon proxy of the lower order:
    /// min over the upper half of the rows of -log psi(n) / n.
    unsigned long alpha_horizon() const { return horizon_; }

    Scalar psi(unsigned long n) const;
    bool covers(unsigned long n) const;
    unsigned long max_n() const;

private:
    RateFunction() = default;
    Alpha alpha_;
    std::vector<std::pair<unsigned long, Scalar>> table_;
    unsigned long horizon_ = 0;
};

}  // namespace torrec
