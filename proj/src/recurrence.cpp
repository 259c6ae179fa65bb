#include "torrec/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>

namespace torrec {

namespace {

double log_psi(const RateFunction& psi, unsigned long n) {
    if (psi.is_exponential()) return -psi.alpha().value * static_cast<double>(n);
    return std::log(psi.psi(n).value);
}

Rat psi_exact(const Scalar& s) {
    // inexact scalars mean exactly their dyadic double value
    return s.exact ? *s.exact : Rat(s.value);
}

double log_hn(const TorusSystem& sys, unsigned long n) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= sys.dim(); ++j)
        acc += std::log(sys.power_factor(static_cast<int>(j), n));
    return acc;
}

}  // namespace

bool Ellipsoid::contains(const RatVec& x) const {
    const EllipsoidShape& sh = *shape_;
    const std::size_t d = center_.size();
    const Rat psi = psi_exact(sh.psi);
    const Rat psi2 = psi * psi;

    RatVec v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = frac_part(x[i] - center_[i]);  // in [0,1)

    // translate range wide enough for the fattest semi-axis
    const double span = sh.max_semi_axis() + 1e-9;
    const long zmax = static_cast<long>(std::floor(span));
    const long zlo = -zmax - 1, zhi = zmax;
    std::vector<long> z(d, zlo);
    RatVec w(d);
    for (;;) {
        Rat q(0);
        bool feasible = true;
        for (std::size_t r = 0; r < d && feasible; ++r) {
            w[r] = 0;
            for (std::size_t cidx = 0; cidx < d; ++cidx) {
                const Int& mrc = sh.M.at(r, cidx);
                if (mrc != 0) w[r] += Rat(mrc) * (v[cidx] + Rat(z[cidx]));
            }
            q += w[r] * w[r];
            if (q >= psi2) feasible = false;
        }
        if (feasible && q < psi2) return true;
        std::size_t i = 0;
        for (; i < d; ++i) {
            if (++z[i] <= zhi) break;
            z[i] = zlo;
        }
        if (i == d) break;
    }
    return false;
}

std::shared_ptr<const EllipsoidShape> make_shape(const TorusSystem& sys, unsigned long n,
                                                 const RateFunction& psi) {
    auto sh = std::make_shared<EllipsoidShape>();
    sh->degree = n;
    sh->psi = psi.psi(n);
    sh->M = matrix_power(sys.A, n) - IntegerMatrix::identity(sys.dim());
    const auto svs = singular_values(sh->M, std::min(sys.tol, 1e-9));
    const std::size_t d = sys.dim();
    sh->semi_exact.resize(d);
    sh->semi_exact_radius.resize(d);
    sh->semi_model.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
        const double sv = svs[j].value;
        const double svr = svs[j].radius;
        sh->semi_exact[j] = sh->psi.value / sv;
        sh->semi_exact_radius[j] = sh->psi.value * svr / (sv * (sv - svr)) + 4e-16 * sh->semi_exact[j];
        sh->semi_model[j] = sh->psi.value / sys.power_factor(static_cast<int>(j) + 1, n);
    }
    return sh;
}

bool membership(const RatVec& x, const TorusSystem& sys, unsigned long n, const RateFunction& psi) {
    const Scalar p = psi.psi(n);
    if (!(p.value < 0.5)) throw UsageError("membership needs psi(n) < 1/2");
    IntegerMatrix M = matrix_power(sys.A, n) - IntegerMatrix::identity(sys.dim());
    RatVec w = reduce_mod1(M.apply(x));
    Rat pe = psi_exact(p);
    return quotient_dist2_zero(w) < pe * pe;
}

bool membership(const std::vector<double>& x, const TorusSystem& sys, unsigned long n,
                const RateFunction& psi) {
    const Scalar p = psi.psi(n);
    if (!(p.value < 0.5)) throw UsageError("membership needs psi(n) < 1/2");
    IntegerMatrix M = matrix_power(sys.A, n) - IntegerMatrix::identity(sys.dim());
    const std::size_t d = sys.dim();
    std::vector<double> w(d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) w[i] += M.at(i, j).get_d() * x[j];
    return quotient_dist2_zero(w) < p.value * p.value;
}

EllipsoidFamily decompose_layer(const TorusSystem& sys, unsigned long n, const RateFunction& psi,
                                const Int& cap) {
    if (!(psi.psi(n).value < 0.5)) throw UsageError("decomposition needs psi(n) < 1/2");
    EllipsoidFamily fam;
    fam.degree = n;
    fam.count = count_periodic(sys, n);
    if (fam.count > cap) throw CapExceeded(fam.count, "family enumeration");
    fam.shape = make_shape(sys, n, psi);
    fam.centers.reserve(fam.count.get_ui());
    for_each_periodic(fam.shape->M, [&](std::size_t, const RatVec& x) { fam.centers.push_back(x); });
    return fam;
}

SemiAxesReport semi_axes(const TorusSystem& sys, unsigned long n, const RateFunction& psi) {
    auto sh = make_shape(sys, n, psi);
    SemiAxesReport rep;
    rep.degree = n;
    rep.exact_axes = sh->semi_exact;
    rep.exact_radius = sh->semi_exact_radius;
    rep.model_axes = sh->semi_model;
    rep.max_deviation = 1.0;
    rep.ratio.resize(sys.dim());
    for (std::size_t j = 0; j < sys.dim(); ++j) {
        rep.ratio[j] = rep.exact_axes[j] / rep.model_axes[j];
        rep.max_deviation = std::max(rep.max_deviation, std::max(rep.ratio[j], 1.0 / rep.ratio[j]));
    }
    return rep;
}

AxisGrowthFit fit_axis_growth(const TorusSystem& sys, const RateFunction& psi, unsigned long n_from,
                              unsigned long n_to) {
    AxisGrowthFit fit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double count = 0;
    for (unsigned long n = n_from; n <= n_to; ++n) {
        fit.sweep.push_back(semi_axes(sys, n, psi));
        const double x = std::log(static_cast<double>(n));
        const double y = std::log(fit.sweep.back().max_deviation);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        count += 1;
    }
    const double denom = count * sxx - sx * sx;
    fit.exponent = denom != 0.0 ? (count * sxy - sx * sy) / denom : 0.0;
    return fit;
}

SeparationReport ellipsoid_min_distance(const TorusSystem& sys, unsigned long n,
                                        const RateFunction& psi, const Int& cap) {
    if (!(psi.psi(1).value < 1.0 / 3.0)) throw UsageError("separation analysis needs psi(1) < 1/3");
    SeparationReport rep;
    rep.degree = n;
    const std::size_t d = sys.dim();
    const Int H = count_periodic(sys, n);
    if (H > cap) throw CapExceeded(H, "separation scan");

    const Scalar psin = psi.psi(n);
    const double fd = sys.modulus_power_factor(static_cast<int>(d), n);
    rep.required = 2.0 * (1.0 / 3.0 - psin.value) / fd;

    if (H == 1) {
        rep.single = true;
        rep.lower_bound = std::numeric_limits<double>::infinity();
        rep.satisfied = true;
        rep.exact = true;
        return rep;
    }

    IntegerMatrix M = matrix_power(sys.A, n) - IntegerMatrix::identity(d);

    if (d == 1) {
        // centers form the full grid k/H: the gap is exactly 1/H
        Rat gap = Rat(1) / Rat(H);
        Rat rho = psi_exact(psin) / Rat(abs(M.at(0, 0)));
        Rat lb = gap - 2 * rho;
        rep.lower_bound = lb.get_d();
        auto f_exact = sys.modulus_power_factor_exact(1, n);
        if (f_exact) {
            Rat req = 2 * (Rat(1, 3) - psi_exact(psin)) / *f_exact;
            rep.satisfied = lb >= req;
        } else {
            rep.satisfied = rep.lower_bound >= rep.required;
        }
        rep.exact = true;
        return rep;
    }

    // stream double coordinates, then grid-prune candidate pairs
    const std::size_t total = H.get_ui();
    std::vector<double> pts(total * d);
    for_each_periodic_d(M, [&](std::size_t idx, const std::vector<double>& x) {
        for (std::size_t r = 0; r < d; ++r) pts[idx * d + r] = x[r];
    });

    RationalMatrix minv_t;
    {
        RationalMatrix mr = RationalMatrix::from_integer(M).inverse();
        minv_t = RationalMatrix(d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) minv_t.at(i, j) = mr.at(j, i);
    }
    std::vector<double> minv_t_d(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) minv_t_d[i * d + j] = minv_t.at(i, j).get_d();

    auto shape = make_shape(sys, n, psi);
    const double h_support_max = shape->semi_exact[0] + shape->semi_exact_radius[0];

    double cell = 3.0 * std::pow(1.0 / static_cast<double>(total), 1.0 / static_cast<double>(d)) +
                  2.0 * h_support_max;
    double best_lb = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < 8; ++attempt) {
        const long cells_per_axis = std::max(1L, static_cast<long>(std::floor(1.0 / cell)));
        const double cw = 1.0 / static_cast<double>(cells_per_axis);
        std::map<long, std::vector<std::uint32_t>> buckets;
        auto cell_key = [&](const double* p) {
            long key = 0;
            for (std::size_t r = 0; r < d; ++r) {
                long c = static_cast<long>(p[r] / cw);
                if (c >= cells_per_axis) c = cells_per_axis - 1;
                key = key * cells_per_axis + c;
            }
            return key;
        };
        for (std::size_t i = 0; i < total; ++i) buckets[cell_key(&pts[i * d])].push_back(static_cast<std::uint32_t>(i));

        best_lb = std::numeric_limits<double>::infinity();
        std::vector<long> off(d, -1);
        for (const auto& [key, members] : buckets) {
            // decode cell coordinates
            std::vector<long> cc(d);
            long k = key;
            for (std::size_t r = d; r-- > 0;) {
                cc[r] = k % cells_per_axis;
                k /= cells_per_axis;
            }
            std::fill(off.begin(), off.end(), -1L);
            for (;;) {
                long nkey = 0;
                for (std::size_t r = 0; r < d; ++r) {
                    long c = (cc[r] + off[r] + cells_per_axis) % cells_per_axis;
                    nkey = nkey * cells_per_axis + c;
                }
                if (nkey >= key) {  // visit each unordered cell pair once
                    auto it = buckets.find(nkey);
                    if (it != buckets.end()) {
                        const auto& other = it->second;
                        for (std::size_t a = 0; a < members.size(); ++a) {
                            const std::size_t b0 = (nkey == key) ? a + 1 : 0;
                            for (std::size_t b = b0; b < other.size(); ++b) {
                                const double* pa = &pts[members[a] * d];
                                const double* pb = &pts[other[b] * d];
                                double delta[8];
                                double norm2 = 0.0;
                                for (std::size_t r = 0; r < d; ++r) {
                                    double dd = pb[r] - pa[r];
                                    dd -= std::round(dd);
                                    delta[r] = dd;
                                    norm2 += dd * dd;
                                }
                                const double norm = std::sqrt(norm2);
                                if (norm > cell) continue;
                                double wsup = 0.0;
                                for (std::size_t r = 0; r < d; ++r) {
                                    double acc = 0.0;
                                    for (std::size_t c2 = 0; c2 < d; ++c2)
                                        acc += minv_t_d[r * d + c2] * delta[c2];
                                    wsup += acc * acc;
                                }
                                const double support =
                                    psin.value * std::sqrt(wsup) / std::max(norm, 1e-300);
                                const double lb =
                                    norm * (1.0 - 1e-9) - 2.0 * support * (1.0 + 1e-9);
                                best_lb = std::min(best_lb, lb);
                            }
                        }
                    }
                }
                std::size_t r = 0;
                for (; r < d; ++r) {
                    if (++off[r] <= 1) break;
                    off[r] = -1;
                }
                if (r == d) break;
            }
        }
        // every skipped pair has center distance > cell, so its set
        // distance exceeds cell - 2 h_max; stop once that cannot beat
        // the best candidate
        if (best_lb < std::numeric_limits<double>::infinity() &&
            cell - 2.0 * h_support_max >= best_lb)
            break;
        cell *= 2.0;
        if (cell > 0.51) {
            cell = 0.51;  // whole-torus fallback: all pairs compared
        }
    }
    rep.lower_bound = best_lb;
    rep.satisfied = best_lb >= rep.required;
    rep.exact = false;
    return rep;
}

CoverReport covering_count(const TorusSystem& sys, unsigned long n, const RateFunction& psi, int k) {
    const std::size_t d = sys.dim();
    if (k < 1 || static_cast<std::size_t>(k) > d) throw UsageError("covering index out of range");
    CoverReport rep;
    rep.degree = n;
    rep.k = k;
    const double fk = sys.power_factor(k, n);
    double log_per = 0.0;
    for (int j = 1; j <= k; ++j) log_per += std::log(fk) - std::log(sys.power_factor(j, n));
    rep.per_ellipsoid_count = std::exp(log_per);
    rep.log_radius = std::log(2.0) + log_psi(psi, n) - std::log(fk);
    rep.log_count_total = log_hn(sys, n) + log_per;
    return rep;
}

SeriesReport upper_bound_sum(const TorusSystem& sys, const RateFunction& psi, double s,
                             unsigned long n_from, unsigned long n_to, double margin) {
    if (!(s > 0.0) || s > static_cast<double>(sys.dim()))
        throw UsageError("series exponent must lie in (0, d]");
    if (n_to < n_from) throw UsageError("empty range");
    SeriesReport rep;
    rep.s = s;
    for (unsigned long n = n_from; n <= n_to; ++n) {
        double best = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= static_cast<int>(sys.dim()); ++k)
            best = std::min(best, covering_count(sys, n, psi, k).log_cost(s));
        rep.log_terms.push_back(best);
    }
    const std::size_t mid = rep.log_terms.size() / 2;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = std::max<std::size_t>(mid, 1); i < rep.log_terms.size(); ++i) {
        const double diff = rep.log_terms[i] - rep.log_terms[i - 1];
        lo = std::min(lo, diff);
        hi = std::max(hi, diff);
    }
    rep.tail_ratio_low = std::exp(lo);
    rep.tail_ratio_high = std::exp(hi);
    if (rep.tail_ratio_high < 1.0 - margin)
        rep.verdict = SeriesVerdict::Converging;
    else if (rep.tail_ratio_low > 1.0 + margin)
        rep.verdict = SeriesVerdict::Diverging;
    else
        rep.verdict = SeriesVerdict::Inconclusive;
    return rep;
}

std::vector<unsigned long> recurrence_indices(const RatVec& x, const TorusSystem& sys,
                                              const RateFunction& psi, unsigned long N) {
    std::vector<unsigned long> hits;
    RatVec start = reduce_mod1(x);
    RatVec cur = start;
    for (unsigned long n = 1; n <= N; ++n) {
        cur = apply_mod1(sys.A, cur);
        if (!psi.covers(n)) continue;
        Rat p = psi_exact(psi.psi(n));
        if (quotient_dist2(cur, start) < p * p) hits.push_back(n);
    }
    return hits;
}

OrbitStatistic orbit_return_statistic(const RatVec& x, const TorusSystem& sys, double tau,
                                      unsigned long N) {
    if (!(tau > 0)) throw UsageError("tau must be positive");
    const std::size_t d = sys.dim();
    Int q(1);
    for (const auto& c : x) mpz_lcm(q.get_mpz_t(), q.get_mpz_t(), c.get_den().get_mpz_t());
    std::vector<Int> p(d);
    for (std::size_t i = 0; i < d; ++i) {
        Rat scaled = frac_part(x[i]) * Rat(q);
        p[i] = scaled.get_num();
    }

    OrbitStatistic st;
    st.min_value = std::numeric_limits<double>::infinity();

    // int64 fast path when every intermediate fits
    bool fast = q.fits_slong_p();
    long maxa = 0;
    for (std::size_t i = 0; i < d && fast; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            if (!sys.A.at(i, j).fits_slong_p()) {
                fast = false;
                break;
            }
            maxa = std::max(maxa, std::abs(sys.A.at(i, j).get_si()));
        }
    if (fast) {
        const long ql = q.get_si();
        fast = static_cast<double>(maxa) * static_cast<double>(ql) * static_cast<double>(d) < 9.0e18;
        if (fast) {
            std::vector<long> pi(d), p0(d), nx(d);
            std::vector<long> a(d * d);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) a[i * d + j] = sys.A.at(i, j).get_si();
            for (std::size_t i = 0; i < d; ++i) p0[i] = pi[i] = p[i].get_si();
            const double qd = static_cast<double>(ql);
            for (unsigned long n = 1; n <= N; ++n) {
                for (std::size_t i = 0; i < d; ++i) {
                    __int128 acc = 0;
                    for (std::size_t j = 0; j < d; ++j)
                        acc += static_cast<__int128>(a[i * d + j]) * pi[j];
                    long r = static_cast<long>(acc % ql);
                    if (r < 0) r += ql;
                    nx[i] = r;
                }
                pi.swap(nx);
                double d2 = 0.0;
                for (std::size_t i = 0; i < d; ++i) {
                    long delta = pi[i] - p0[i];
                    if (delta < 0) delta += ql;
                    const double f = static_cast<double>(delta) / qd;
                    const double m = f < 1.0 - f ? f : 1.0 - f;
                    d2 += m * m;
                }
                const double v = std::pow(static_cast<double>(n), 1.0 / tau) * std::sqrt(d2);
                if (v < st.min_value) {
                    st.min_value = v;
                    st.argmin = n;
                }
            }
            return st;
        }
    }

    std::vector<Int> cur = p;
    std::vector<Int> nxt(d);
    const double qd = q.get_d();
    for (unsigned long n = 1; n <= N; ++n) {
        for (std::size_t i = 0; i < d; ++i) {
            Int acc(0);
            for (std::size_t j = 0; j < d; ++j) acc += sys.A.at(i, j) * cur[j];
            mpz_fdiv_r(nxt[i].get_mpz_t(), acc.get_mpz_t(), q.get_mpz_t());
        }
        cur.swap(nxt);
        double d2 = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            Int delta = cur[i] - p[i];
            mpz_fdiv_r(delta.get_mpz_t(), delta.get_mpz_t(), q.get_mpz_t());
            const double f = delta.get_d() / qd;
            const double m = f < 1.0 - f ? f : 1.0 - f;
            d2 += m * m;
        }
        const double v = std::pow(static_cast<double>(n), 1.0 / tau) * std::sqrt(d2);
        if (v < st.min_value) {
            st.min_value = v;
            st.argmin = n;
        }
    }
    return st;
}

// ---- exact box/ellipsoid intersection ---------------------------------------

Rat min_quadratic_over_box(const IntegerMatrix& M, const RatVec& c, const RatVec& lo,
                           const RatVec& hi) {
    const std::size_t d = M.dim();
    IntegerMatrix G = M.transpose() * M;

    // right-hand side Gc
    RatVec gc(d, Rat(0));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (G.at(i, j) != 0) gc[i] += Rat(G.at(i, j)) * c[j];

    Rat best(-1);
    std::vector<int> state(d, 0);  // 0 = lo, 1 = hi, 2 = free
    RatVec x(d);
    for (;;) {
        std::vector<std::size_t> F;
        for (std::size_t i = 0; i < d; ++i) {
            if (state[i] == 0)
                x[i] = lo[i];
            else if (state[i] == 1)
                x[i] = hi[i];
            else
                F.push_back(i);
        }
        bool ok = true;
        if (!F.empty()) {
            // solve (G_FF) x_F = gc_F - G_{F,fixed} x_fixed
            const std::size_t m = F.size();
            std::vector<Rat> aug(m * (m + 1));
            for (std::size_t r = 0; r < m; ++r) {
                Rat rhs = gc[F[r]];
                for (std::size_t i = 0; i < d; ++i)
                    if (state[i] != 2 && G.at(F[r], i) != 0) rhs -= Rat(G.at(F[r], i)) * x[i];
                for (std::size_t cc = 0; cc < m; ++cc) aug[r * (m + 1) + cc] = Rat(G.at(F[r], F[cc]));
                aug[r * (m + 1) + m] = rhs;
            }
            for (std::size_t col = 0; col < m && ok; ++col) {
                std::size_t piv = col;
                while (piv < m && aug[piv * (m + 1) + col] == 0) ++piv;
                if (piv == m) {
                    ok = false;
                    break;
                }
                if (piv != col)
                    for (std::size_t cc = col; cc <= m; ++cc)
                        std::swap(aug[piv * (m + 1) + cc], aug[col * (m + 1) + cc]);
                const Rat pv = aug[col * (m + 1) + col];
                for (std::size_t r = 0; r < m; ++r) {
                    if (r == col || aug[r * (m + 1) + col] == 0) continue;
                    const Rat f = aug[r * (m + 1) + col] / pv;
                    for (std::size_t cc = col; cc <= m; ++cc)
                        aug[r * (m + 1) + cc] -= f * aug[col * (m + 1) + cc];
                }
            }
            if (ok)
                for (std::size_t r = 0; r < m; ++r) {
                    x[F[r]] = aug[r * (m + 1) + m] / aug[r * (m + 1) + r];
                    if (x[F[r]] < lo[F[r]] || x[F[r]] > hi[F[r]]) ok = false;
                }
        }
        if (ok) {
            Rat q(0);
            for (std::size_t r = 0; r < d; ++r) {
                Rat w(0);
                for (std::size_t cc = 0; cc < d; ++cc)
                    if (M.at(r, cc) != 0) w += Rat(M.at(r, cc)) * (x[cc] - c[cc]);
                q += w * w;
            }
            if (best < 0 || q < best) best = q;
        }
        std::size_t i = 0;
        for (; i < d; ++i) {
            if (++state[i] <= 2) break;
            state[i] = 0;
        }
        if (i == d) break;
    }
    return best;
}

BoxCountReport box_count_dimension(const TorusSystem& sys,
                                   const std::vector<EllipsoidFamily>& families,
                                   const std::vector<int>& scale_exponents) {
    const std::size_t d = sys.dim();
    if (d > 2) throw UsageError("box counting supports d <= 2");
    BoxCountReport rep;
    rep.scale_exponents = scale_exponents;

    for (int k : scale_exponents) {
        if (k < 0 || static_cast<double>(d) * k > 26.5)  // 2^(dk) <= ~1e8
            throw ScaleTooFine("side 2^-" + std::to_string(k) + " exceeds the box budget");
        const long grid = 1L << k;

        if (d == 1) {
            std::vector<bool> hit(static_cast<std::size_t>(grid), false);
            for (const auto& fam : families) {
                const Rat psi = psi_exact(fam.shape->psi);
                const Rat rho = psi / Rat(abs(fam.shape->M.at(0, 0)));
                for (const RatVec& c : fam.centers) {
                    Rat lo = c[0] - rho, hi = c[0] + rho;
                    if (hi - lo >= 1) {
                        std::fill(hit.begin(), hit.end(), true);
                        break;
                    }
                    Rat lo_s = lo * grid, hi_s = hi * grid;
                    Int mlo, mhi;
                    mpz_fdiv_q(mlo.get_mpz_t(), lo_s.get_num().get_mpz_t(), lo_s.get_den().get_mpz_t());
                    mpz_cdiv_q(mhi.get_mpz_t(), hi_s.get_num().get_mpz_t(), hi_s.get_den().get_mpz_t());
                    if (mhi - mlo >= grid) {
                        std::fill(hit.begin(), hit.end(), true);
                        continue;
                    }
                    for (Int m = mlo; m < mhi; ++m) {
                        long cell = mpz_fdiv_ui(m.get_mpz_t(), static_cast<unsigned long>(grid));
                        hit[static_cast<std::size_t>(cell)] = true;
                    }
                }
            }
            long count = std::count(hit.begin(), hit.end(), true);
            rep.counts.emplace_back(count);
        } else {
            std::vector<bool> hit(static_cast<std::size_t>(grid) * grid, false);
            const Rat side(1, grid);
            for (const auto& fam : families) {
                const Rat psi2 = psi_exact(fam.shape->psi) * psi_exact(fam.shape->psi);
                // per-coordinate extents of M^{-1} B(0, psi)
                RationalMatrix minv = RationalMatrix::from_integer(fam.shape->M).inverse();
                std::vector<double> ext(d);
                for (std::size_t i = 0; i < d; ++i) {
                    double acc = 0.0;
                    for (std::size_t j = 0; j < d; ++j) {
                        const double v = minv.at(i, j).get_d();
                        acc += v * v;
                    }
                    ext[i] = fam.shape->psi.value * std::sqrt(acc) * (1.0 + 1e-9) + 1e-12;
                }
                for (const RatVec& c : fam.centers) {
                    const double cx = c[0].get_d(), cy = c[1].get_d();
                    const long x0 = static_cast<long>(std::floor((cx - ext[0]) * grid)) - 1;
                    const long x1 = static_cast<long>(std::floor((cx + ext[0]) * grid)) + 1;
                    const long y0 = static_cast<long>(std::floor((cy - ext[1]) * grid)) - 1;
                    const long y1 = static_cast<long>(std::floor((cy + ext[1]) * grid)) + 1;
                    for (long mx = x0; mx <= x1; ++mx)
                        for (long my = y0; my <= y1; ++my) {
                            const std::size_t cell =
                                static_cast<std::size_t>(((mx % grid + grid) % grid) * grid +
                                                         ((my % grid + grid) % grid));
                            if (hit[cell]) continue;
                            RatVec lo{Rat(mx) * side, Rat(my) * side};
                            RatVec hi{Rat(mx + 1) * side, Rat(my + 1) * side};
                            if (min_quadratic_over_box(fam.shape->M, c, lo, hi) < psi2)
                                hit[cell] = true;
                        }
                }
            }
            long count = std::count(hit.begin(), hit.end(), true);
            rep.counts.emplace_back(count);
        }
    }

    // monotone: smaller side never decreases the count
    std::vector<std::size_t> order(scale_exponents.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scale_exponents[a] < scale_exponents[b]; });
    for (std::size_t i = 1; i < order.size(); ++i)
        if (rep.counts[order[i]] < rep.counts[order[i - 1]]) rep.monotone = false;

    double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
    for (std::size_t i = 0; i < rep.counts.size(); ++i) {
        if (rep.counts[i] == 0) continue;
        const double x = static_cast<double>(scale_exponents[i]) * std::log(2.0);
        const double y = std::log(rep.counts[i].get_d());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        cnt += 1;
    }
    const double denom = cnt * sxx - sx * sx;
    rep.slope = denom != 0.0 ? (cnt * sxy - sx * sy) / denom : 0.0;
    return rep;
}

}  // namespace torrec
