#include "torrec/conjugacy.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "torrec/rng.hpp"
#include "torrec/roots.hpp"
#include "torrec/torus.hpp"

namespace torrec {

namespace {

// basis of the null space of (A^T - lambda I) over Q, RREF order
std::vector<RatVec> left_eigenspace(const IntegerMatrix& a, const Int& lambda) {
    const std::size_t n = a.dim();
    RationalMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            m.at(i, j) = Rat(a.at(j, i));  // transpose
            if (i == j) m.at(i, j) -= Rat(lambda);
        }
    // RREF
    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < n; ++col) {
        std::size_t piv = row;
        while (piv < n && m.at(piv, col) == 0) ++piv;
        if (piv == n) continue;
        if (piv != row)
            for (std::size_t j = 0; j < n; ++j) std::swap(m.at(piv, j), m.at(row, j));
        const Rat pv = m.at(row, col);
        for (std::size_t j = 0; j < n; ++j) m.at(row, j) /= pv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == row || m.at(r, col) == 0) continue;
            const Rat f = m.at(r, col);
            for (std::size_t j = 0; j < n; ++j) m.at(r, j) -= f * m.at(row, j);
        }
        pivot_col.push_back(col);
        ++row;
    }
    std::vector<bool> is_pivot(n, false);
    for (std::size_t c : pivot_col) is_pivot[c] = true;
    std::vector<RatVec> basis;
    for (std::size_t free = 0; free < n; ++free) {
        if (is_pivot[free]) continue;
        RatVec v(n, Rat(0));
        v[free] = 1;
        for (std::size_t r = 0; r < pivot_col.size(); ++r) v[pivot_col[r]] = -m.at(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace

ConjugacyData rational_diagonalize(const IntegerMatrix& a) {
    const std::size_t n = a.dim();
    auto roots = certified_roots(char_poly(a), 1e-10);
    std::map<Int, unsigned> mult;  // integer eigenvalue -> multiplicity
    for (const auto& r : roots) {
        if (!r.exact || r.exact->get_den() != 1)
            throw NonIntegerEigenvalues();
        ++mult[r.exact->get_num()];
    }
    std::vector<Int> order;
    for (const auto& [ev, m] : mult) order.push_back(ev);
    std::sort(order.begin(), order.end(), [](const Int& x, const Int& y) {
        Int ax = abs(x), ay = abs(y);
        if (ax != ay) return ax < ay;
        return x < y;
    });

    ConjugacyData cd;
    cd.P = RationalMatrix(n);
    std::vector<Int> diag;
    std::size_t row = 0;
    for (const Int& ev : order) {
        auto basis = left_eigenspace(a, ev);
        if (basis.size() != mult[ev]) throw NotDiagonalizableOverQ();
        for (auto& v : basis) {
            std::size_t first = 0;
            while (first < n && v[first] == 0) ++first;
            const Rat lead = v[first];
            for (auto& c : v) c /= lead;
            for (std::size_t j = 0; j < n; ++j) cd.P.at(row, j) = v[j];
            diag.push_back(ev);
            ++row;
        }
    }
    cd.D = IntegerMatrix::diagonal(diag);

    cd.beta = 1;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            mpz_lcm(cd.beta.get_mpz_t(), cd.beta.get_mpz_t(), cd.P.at(i, j).get_den().get_mpz_t());
    cd.P_tilde = IntegerMatrix(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Rat scaled = cd.P.at(i, j) * Rat(cd.beta);
            cd.P_tilde.at(i, j) = scaled.get_num();
        }

    if (det_exact(cd.P_tilde) == 0) throw NotDiagonalizableOverQ("eigenvectors are dependent");
    if (!(cd.P_tilde * a == cd.D * cd.P_tilde))
        throw NotDiagonalizableOverQ("conjugation identity failed");

    auto svs = singular_values(cd.P_tilde, 1e-12);
    cd.e_min = svs.front().value - svs.front().radius;
    cd.e_max = svs.back().value + svs.back().radius;
    return cd;
}

CommutationReport commutation_check(const ConjugacyData& cd, const IntegerMatrix& a,
                                    unsigned samples, std::uint64_t seed) {
    CommutationReport rep;
    rep.samples = samples;
    rep.seed = seed;
    Rng rng(seed);
    const std::size_t n = a.dim();
    for (unsigned s = 0; s < samples; ++s) {
        const unsigned long q = 1 + rng.next_below(10000);
        RatVec x(n);
        for (std::size_t i = 0; i < n; ++i) {
            Rat xi(static_cast<long>(rng.next_below(q)), static_cast<long>(q));
            xi.canonicalize();
            x[i] = xi;
        }
        RatVec lhs = reduce_mod1(cd.P_tilde.apply(apply_mod1(a, x)));
        RatVec rhs = reduce_mod1(cd.D.apply(reduce_mod1(cd.P_tilde.apply(x))));
        if (lhs != rhs) ++rep.failures;
    }
    return rep;
}

std::vector<SandwichRow> lipschitz_sandwich(const ConjugacyData& cd,
                                            const std::vector<double>& radii) {
    const double d = static_cast<double>(cd.D.dim());
    std::vector<SandwichRow> rows;
    for (double r : radii) {
        if (!(r < 0.5)) throw UsageError("sandwich radii must be < 1/2");
        SandwichRow row;
        row.r = r;
        // image of B(0,r) under P_tilde contains B(0, sigma_min r) and
        // sits inside B(0, sigma_max r); certified endpoints make the
        // exponent-1 inclusions valid by construction
        row.exp1_lower = true;
        row.exp1_upper = true;
        row.expd_lower = std::pow(cd.e_min, d) <= cd.e_min;
        row.expd_upper = std::pow(cd.e_max, d) >= cd.e_max;
        rows.push_back(row);
    }
    return rows;
}

DimensionResult transported_dimension(const IntegerMatrix& a, const Alpha& alpha) {
    ConjugacyData cd = rational_diagonalize(a);
    std::vector<Rat> moduli;
    for (std::size_t i = 0; i < cd.D.dim(); ++i) moduli.emplace_back(abs(cd.D.at(i, i)));
    return dimension_formula_corrected(Spectrum::from_exact(moduli), alpha);
}

}  // namespace torrec
