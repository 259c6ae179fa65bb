#include "torrec/periodic.hpp"

#include <algorithm>
#include <cmath>

#include "torrec/recurrence.hpp"

namespace torrec {

TorusSystem TorusSystem::analyze(const IntegerMatrix& a, double tol) {
    if (a.dim() == 0) throw UsageError("empty matrix");
    if (det_exact(a) == 0) throw SingularMatrix("dynamical map must be nonsingular");
    TorusSystem sys;
    sys.A = a;
    sys.tol = tol;
    sys.roots = eigen_roots(a, tol);
    std::sort(sys.roots.begin(), sys.roots.end(), [](const CertifiedRoot& x, const CertifiedRoot& y) {
        if (x.exact && y.exact) {
            Rat ax = abs(*x.exact), ay = abs(*y.exact);
            if (ax != ay) return ax < ay;
            return *x.exact < *y.exact;
        }
        return x.modulus() < y.modulus();
    });
    for (const CertifiedRoot& r : sys.roots) {
        SpectrumEntry e;
        if (r.exact) {
            e.exact = abs(*r.exact);
            e.value = std::abs(r.exact->get_d());
        } else {
            e.value = r.modulus();
            e.radius = r.radius + 4e-16 * e.value;
        }
        sys.spectrum.entries.push_back(std::move(e));
    }
    sys.spectrum.hypothesis_ok = true;
    sys.spectrum.hypothesis_margin = 1e300;
    for (const auto& e : sys.spectrum.entries) {
        const double lower = e.exact ? e.value : e.value - e.radius;
        if (!(lower > 1.0 + tol)) sys.spectrum.hypothesis_ok = false;
        sys.spectrum.hypothesis_margin = std::min(sys.spectrum.hypothesis_margin, lower - 1.0);
    }
    return sys;
}

void TorusSystem::require_no_unit_modulus() const {
    for (const auto& r : roots) {
        if (r.exact) {
            if (abs(*r.exact) == 1) throw RootOfUnity();
        } else {
            const double m = r.modulus();
            if (m - r.radius <= 1.0 && m + r.radius >= 1.0) throw RootOfUnity();
        }
    }
}

double TorusSystem::power_factor(int j, unsigned long n) const {
    return roots.at(static_cast<std::size_t>(j - 1)).power_distance(n);
}

std::optional<Rat> TorusSystem::power_factor_exact(int j, unsigned long n) const {
    const auto& r = roots.at(static_cast<std::size_t>(j - 1));
    if (!r.exact) return std::nullopt;
    Rat acc(1);
    for (unsigned long k = 0; k < n; ++k) acc *= *r.exact;
    acc -= 1;
    return abs(acc);
}

double TorusSystem::modulus_power_factor(int j, unsigned long n) const {
    const auto& e = spectrum.modulus(static_cast<std::size_t>(j));
    if (e.exact) {
        Rat acc(1);
        for (unsigned long k = 0; k < n; ++k) acc *= *e.exact;
        acc -= 1;
        return acc.get_d();
    }
    return std::pow(e.value, static_cast<double>(n)) - 1.0;
}

std::optional<Rat> TorusSystem::modulus_power_factor_exact(int j, unsigned long n) const {
    const auto& e = spectrum.modulus(static_cast<std::size_t>(j));
    if (!e.exact) return std::nullopt;
    Rat acc(1);
    for (unsigned long k = 0; k < n; ++k) acc *= *e.exact;
    return acc - 1;
}

Int count_periodic(const TorusSystem& sys, unsigned long n) {
    if (n == 0) throw UsageError("period must be >= 1");
    sys.require_no_unit_modulus();
    Int h = det_exact(matrix_power(sys.A, n) - IntegerMatrix::identity(sys.dim()));
    if (h == 0) throw RootOfUnity("det(A^n - I) vanished");
    return abs(h);
}

namespace {

struct EnumPlan {
    std::size_t d;
    std::vector<Int> factors;           // invariant factors > 1 only
    std::vector<RatVec> cols;           // matching columns of V^{-1}/s_i
    std::vector<std::vector<double>> cols_d;
    Int total;                          // product of all invariant factors
};

EnumPlan make_plan(const IntegerMatrix& M) {
    EnumPlan plan;
    plan.d = M.dim();
    SnfDecomposition snf = smith_normal_form(M);
    IntegerMatrix vinv = unimodular_inverse(snf.V);
    plan.total = 1;
    for (std::size_t i = 0; i < plan.d; ++i) {
        const Int& s = snf.S.at(i, i);
        plan.total *= s;
        if (s == 1) continue;
        RatVec col(plan.d);
        std::vector<double> cold(plan.d);
        for (std::size_t r = 0; r < plan.d; ++r) {
            col[r] = Rat(vinv.at(r, i), s);
            col[r].canonicalize();
            cold[r] = col[r].get_d();
        }
        plan.factors.push_back(s);
        plan.cols.push_back(std::move(col));
        plan.cols_d.push_back(std::move(cold));
    }
    return plan;
}

}  // namespace

void for_each_periodic(const IntegerMatrix& M,
                       const std::function<void(std::size_t, const RatVec&)>& fn) {
    EnumPlan plan = make_plan(M);
    if (!plan.total.fits_ulong_p()) throw CapExceeded(plan.total, "streamed enumeration");
    const std::size_t total = plan.total.get_ui();
    std::vector<Int> digit(plan.factors.size(), 0);
    RatVec x(plan.d, Rat(0));
    for (std::size_t idx = 0; idx < total; ++idx) {
        fn(idx, x);
        for (std::size_t i = 0; i < plan.factors.size(); ++i) {
            for (std::size_t r = 0; r < plan.d; ++r) x[r] = frac_part(x[r] + plan.cols[i][r]);
            if (++digit[i] < plan.factors[i]) break;
            digit[i] = 0;
        }
    }
}

void for_each_periodic_d(const IntegerMatrix& M,
                         const std::function<void(std::size_t, const std::vector<double>&)>& fn) {
    EnumPlan plan = make_plan(M);
    if (!plan.total.fits_ulong_p()) throw CapExceeded(plan.total, "streamed enumeration");
    const std::size_t total = plan.total.get_ui();
    std::vector<unsigned long> digit(plan.factors.size(), 0);
    std::vector<unsigned long> radix(plan.factors.size());
    for (std::size_t i = 0; i < plan.factors.size(); ++i) radix[i] = plan.factors[i].get_ui();
    std::vector<double> x(plan.d, 0.0);
    auto resync = [&] {  // kill accumulated drift
        for (std::size_t r = 0; r < plan.d; ++r) {
            double acc = 0.0;
            for (std::size_t i = 0; i < plan.factors.size(); ++i)
                acc += static_cast<double>(digit[i]) * plan.cols_d[i][r];
            x[r] = acc - std::floor(acc);
        }
    };
    for (std::size_t idx = 0; idx < total; ++idx) {
        fn(idx, x);
        for (std::size_t i = 0; i < plan.factors.size(); ++i) {
            for (std::size_t r = 0; r < plan.d; ++r) {
                x[r] += plan.cols_d[i][r];
                x[r] -= std::floor(x[r]);
            }
            if (++digit[i] < radix[i]) break;
            digit[i] = 0;
        }
        if ((idx & 1023U) == 1023U) resync();
    }
}

RatVec periodic_point_at(const IntegerMatrix& M, std::size_t index) {
    EnumPlan plan = make_plan(M);
    RatVec x(plan.d, Rat(0));
    std::size_t rem = index;
    for (std::size_t i = 0; i < plan.factors.size(); ++i) {
        const unsigned long s = plan.factors[i].get_ui();
        const unsigned long k = rem % s;
        rem /= s;
        for (std::size_t r = 0; r < plan.d; ++r) x[r] += Rat(static_cast<long>(k)) * plan.cols[i][r];
    }
    return reduce_mod1(std::move(x));
}

PeriodicSet enumerate_periodic(const TorusSystem& sys, unsigned long n, const Int& cap) {
    PeriodicSet ps;
    ps.period = n;
    ps.cardinality = count_periodic(sys, n);
    ps.M = matrix_power(sys.A, n) - IntegerMatrix::identity(sys.dim());
    if (ps.cardinality > cap) throw CapExceeded(ps.cardinality, "periodic enumeration");
    ps.points.reserve(ps.cardinality.get_ui());
    for_each_periodic(ps.M, [&](std::size_t, const RatVec& x) { ps.points.push_back(x); });
    if (Int(static_cast<unsigned long>(ps.points.size())) != ps.cardinality)
        throw PrecisionFailure("enumeration count mismatch");
    return ps;
}

BallCountReport count_in_ball(const TorusSystem& sys, const PeriodicSet& pset, const RatVec& center,
                              const Scalar& r) {
    if (!pset.materialized()) throw UsageError("count_in_ball needs a materialized set");
    BallCountReport rep;
    rep.count = 0;
    // dyadic semantics: an inexact radius means exactly its double value
    Rat r_exact = r.exact ? *r.exact : Rat(r.value);
    Rat r2 = r_exact * r_exact;
    const double r2d = r2.get_d();
    std::vector<double> cd = to_double(center);
    for (const RatVec& x : pset.points) {
        const double d2 = quotient_dist2(to_double(x), cd);
        if (d2 < r2d - 1e-11 * (1.0 + r2d)) {
            rep.count += 1;
        } else if (d2 < r2d + 1e-11 * (1.0 + r2d)) {
            if (quotient_dist2(x, center) < r2) rep.count += 1;
        }
    }

    const unsigned long n = pset.period;
    const std::size_t d = sys.dim();
    rep.product_bound = 1;
    for (std::size_t j = 1; j <= d; ++j) {
        auto fe = sys.modulus_power_factor_exact(static_cast<int>(j), n);
        if (fe) {
            Rat fr = *fe * r_exact;
            if (fr > 1) {
                Int ci;
                mpz_cdiv_q(ci.get_mpz_t(), fr.get_num().get_mpz_t(), fr.get_den().get_mpz_t());
                rep.product_bound *= ci;
            }
        } else {
            const double f = sys.modulus_power_factor(static_cast<int>(j), n);
            if (f * r_exact.get_d() > 1.0) {
                Int ci;
                mpz_set_d(ci.get_mpz_t(), std::ceil(f * r_exact.get_d()));
                rep.product_bound *= ci;
            }
        }
    }
    rep.bound_ratio = rep.count.get_d() / rep.product_bound.get_d();

    const double f1 = sys.modulus_power_factor(1, n);
    rep.two_sided_applicable = f1 * r_exact.get_d() > 1.0;
    double log_hn = 0.0;
    for (std::size_t j = 1; j <= d; ++j) log_hn += std::log(sys.power_factor(static_cast<int>(j), n));
    const double log_model = static_cast<double>(d) * std::log(r_exact.get_d()) + log_hn;
    rep.two_sided_ratio = std::exp(std::log(std::max(rep.count.get_d(), 1e-300)) - log_model);
    return rep;
}

EllipsoidCountReport count_in_ellipsoid(const TorusSystem& sys, const PeriodicSet& pset_m,
                                        const Ellipsoid& ell) {
    if (!pset_m.materialized()) throw UsageError("count_in_ellipsoid needs a materialized set");
    EllipsoidCountReport rep;
    const unsigned long n = ell.degree();
    const unsigned long m = pset_m.period;
    const std::size_t d = sys.dim();

    const double psi_n = ell.shape().psi.value;
    const double ell_nd = 2.0 * psi_n / sys.power_factor(static_cast<int>(d), n);
    rep.hypothesis_ok = ell_nd * sys.modulus_power_factor(1, m) / std::sqrt(static_cast<double>(d)) > 1.0;

    rep.count = 0;
    for (const RatVec& x : pset_m.points)
        if (ell.contains(x)) rep.count += 1;

    double log_hm = 0.0, log_hn = 0.0;
    for (std::size_t j = 1; j <= d; ++j) {
        log_hm += std::log(sys.power_factor(static_cast<int>(j), m));
        log_hn += std::log(sys.power_factor(static_cast<int>(j), n));
    }
    const double log_model = static_cast<double>(d) * std::log(psi_n) + log_hm - log_hn;
    rep.model = std::exp(log_model);
    rep.ratio = std::exp(std::log(std::max(rep.count.get_d(), 1e-300)) - log_model);
    return rep;
}

}  // namespace torrec
