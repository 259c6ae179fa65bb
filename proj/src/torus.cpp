#include "torrec/torus.hpp"

#include <cmath>

namespace torrec {

Rat frac_part(const Rat& q) {
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return q - Rat(fl);
}

RatVec reduce_mod1(RatVec v) {
    for (auto& q : v) q = frac_part(q);
    return v;
}

bool is_integral(const RatVec& v) {
    for (const auto& q : v)
        if (q.get_den() != 1) return false;
    return true;
}

Rat quotient_dist2(const RatVec& a, const RatVec& b) {
    Rat acc(0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        Rat delta = frac_part(a[i] - b[i]);  // in [0,1)
        Rat other = 1 - delta;
        const Rat& d = delta < other ? delta : other;
        acc += d * d;
    }
    return acc;
}

Rat quotient_dist2_zero(const RatVec& a) {
    Rat acc(0);
    for (const auto& q : a) {
        Rat delta = frac_part(q);
        Rat other = 1 - delta;
        const Rat& d = delta < other ? delta : other;
        acc += d * d;
    }
    return acc;
}

double quotient_dist2(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double delta = a[i] - b[i];
        delta -= std::floor(delta);
        const double d = delta < 1.0 - delta ? delta : 1.0 - delta;
        acc += d * d;
    }
    return acc;
}

double quotient_dist2_zero(const std::vector<double>& a) {
    double acc = 0.0;
    for (double q : a) {
        double delta = q - std::floor(q);
        const double d = delta < 1.0 - delta ? delta : 1.0 - delta;
        acc += d * d;
    }
    return acc;
}

std::vector<double> to_double(const RatVec& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].get_d();
    return out;
}

RatVec apply_mod1(const IntegerMatrix& a, const RatVec& x) {
    return reduce_mod1(a.apply(x));
}

}  // namespace torrec
