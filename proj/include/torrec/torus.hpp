#pragma once

#include <vector>

#include <gmpxx.h>

#include "torrec/linalg.hpp"

namespace torrec {

using RatVec = std::vector<Rat>;

/// Canonical representative: every coordinate reduced to [0,1).
RatVec reduce_mod1(RatVec v);
Rat frac_part(const Rat& q);  // q - floor(q), in [0,1)

/// True when every coordinate is an integer.
bool is_integral(const RatVec& v);

/// Squared quotient distance on the torus. The euclidean quotient
/// distance minimizes over integer translates coordinatewise, so this is
/// exact: sum_i min(delta_i, 1-delta_i)^2 with delta_i = |a_i-b_i| mod 1.
Rat quotient_dist2(const RatVec& a, const RatVec& b);
double quotient_dist2(const std::vector<double>& a, const std::vector<double>& b);

/// Squared quotient distance to 0.
Rat quotient_dist2_zero(const RatVec& a);
double quotient_dist2_zero(const std::vector<double>& a);

std::vector<double> to_double(const RatVec& v);

/// One application of x -> Ax mod 1, exact.
RatVec apply_mod1(const IntegerMatrix& a, const RatVec& x);

}  // namespace torrec
