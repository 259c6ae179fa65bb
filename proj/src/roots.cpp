#include "torrec/roots.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>

#include "torrec/errors.hpp"

namespace torrec {

namespace {

// Polynomials are vectors of exact rationals, lowest degree first,
// normalized monic. All factor arithmetic below is exact.
using PolyQ = std::vector<Rat>;

std::size_t degree(const PolyQ& p) { return p.empty() ? 0 : p.size() - 1; }

void trim(PolyQ& p) {
    while (p.size() > 1 && p.back() == 0) p.pop_back();
}

PolyQ make_monic(PolyQ p) {
    trim(p);
    const Rat lead = p.back();
    if (lead != 1)
        for (auto& c : p) c /= lead;
    return p;
}

PolyQ derivative(const PolyQ& p) {
    if (p.size() <= 1) return {Rat(0)};
    PolyQ d(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * Rat(static_cast<long>(i));
    return d;
}

PolyQ poly_rem(PolyQ a, const PolyQ& b) {
    // remainder of a by b (b nonzero), exact
    if (degree(b) == 0) return {Rat(0)};
    trim(a);
    while (degree(a) >= degree(b) && !(a.size() == 1 && a[0] == 0)) {
        const Rat f = a.back() / b.back();
        const std::size_t shift = degree(a) - degree(b);
        for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
        a.pop_back();
        trim(a);
    }
    return a;
}

PolyQ poly_div_exact(const PolyQ& a, const PolyQ& b) {
    PolyQ rem = a;
    PolyQ q(degree(a) - degree(b) + 1, Rat(0));
    for (std::size_t k = degree(a) - degree(b) + 1; k-- > 0;) {
        if (rem.size() < b.size() + k) continue;
        const Rat f = rem[b.size() - 1 + k] / b.back();
        q[k] = f;
        for (std::size_t i = 0; i < b.size(); ++i) rem[i + k] -= f * b[i];
    }
    trim(rem);
    if (!(rem.size() == 1 && rem[0] == 0)) throw PrecisionFailure("inexact polynomial division");
    return q;
}

PolyQ poly_gcd(PolyQ a, PolyQ b) {
    trim(a);
    trim(b);
    while (!(b.size() == 1 && b[0] == 0)) {
        PolyQ r = poly_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(a);
}

Rat eval_q(const PolyQ& p, const Rat& x) {
    Rat acc(0);
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

// Exact complex-rational Horner evaluation; z given as dyadic rationals,
// so this is the true residual of the input polynomial at z.
void eval_q_complex(const PolyQ& p, const Rat& zr, const Rat& zi, Rat& out_re, Rat& out_im) {
    Rat ar(0), ai(0), tr;
    for (std::size_t i = p.size(); i-- > 0;) {
        tr = ar * zr - ai * zi + p[i];
        ai = ar * zi + ai * zr;
        ar = tr;
    }
    out_re = ar;
    out_im = ai;
}

// ---- high-precision complex scratch type -----------------------------------

struct MpC {
    mpf_class re, im;
    MpC(unsigned long prec) : re(0, prec), im(0, prec) {}
};

void mul(const MpC& a, const MpC& b, MpC& out, mpf_class& t1, mpf_class& t2) {
    t1 = a.re * b.re - a.im * b.im;
    t2 = a.re * b.im + a.im * b.re;
    out.re = t1;
    out.im = t2;
}

void div(const MpC& a, const MpC& b, MpC& out, mpf_class& t1, mpf_class& t2, mpf_class& t3) {
    t3 = b.re * b.re + b.im * b.im;
    t1 = (a.re * b.re + a.im * b.im) / t3;
    t2 = (a.im * b.re - a.re * b.im) / t3;
    out.re = t1;
    out.im = t2;
}

mpf_class abs_c(const MpC& a, unsigned long prec) {
    mpf_class n(a.re * a.re + a.im * a.im, prec);
    return sqrt(n);
}

// ---- plain double Durand-Kerner for initial guesses ------------------------

std::vector<std::complex<double>> dk_double(const std::vector<double>& coeff, unsigned restart) {
    const std::size_t m = coeff.size() - 1;
    double bound = 0.0;
    for (std::size_t i = 0; i < m; ++i) bound = std::max(bound, std::abs(coeff[i] / coeff[m]));
    bound = 1.0 + bound;
    std::vector<std::complex<double>> z(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double ang = 6.283185307179586 * (static_cast<double>(i) + 0.3) / static_cast<double>(m) +
                           0.7 * static_cast<double>(restart + 1);
        z[i] = std::polar(bound * (0.5 + 0.1 * static_cast<double>(restart + 1)), ang);
    }
    auto eval = [&](std::complex<double> x) {
        std::complex<double> acc = 0.0;
        for (std::size_t i = coeff.size(); i-- > 0;) acc = acc * x + coeff[i];
        return acc;
    };
    for (int it = 0; it < 600; ++it) {
        double moved = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            std::complex<double> den = coeff[m];
            for (std::size_t j = 0; j < m; ++j)
                if (j != i) den *= z[i] - z[j];
            if (std::abs(den) == 0.0) {
                den = 1e-30;
            }
            const std::complex<double> w = eval(z[i]) / den;
            z[i] -= w;
            moved = std::max(moved, std::abs(w));
        }
        if (moved < 1e-14) break;
    }
    return z;
}

struct DiskRoot {
    // disk center and radius at high precision, downconverted on output
    double re, im, radius;
};

// Simple roots of a monic square-free polynomial with no rational roots.
// Certification: the roots of p are the eigenvalues of the diagonal-plus-
// rank-one matrix diag(z_i) - e w^T built from the corrections
// w_i = p(z_i) / prod_{j != i} (z_i - z_j); column Gershgorin disks
// centered at z_i - w_i with radius (m-1)|w_i| isolate one root each
// once pairwise disjoint. Numerators p(z_i) are evaluated in exact
// rational arithmetic, so only the product in the denominator carries
// rounding, which the inflation factor absorbs.
std::vector<DiskRoot> simple_roots_certified(const PolyQ& p, double tol) {
    const std::size_t m = degree(p);
    std::vector<double> coeff_d(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) coeff_d[i] = p[i].get_d();

    for (unsigned long prec = 192; prec <= 4096; prec *= 2) {
        for (unsigned restart = 0; restart < 3; ++restart) {
            auto z0 = dk_double(coeff_d, restart);
            std::vector<MpC> z(m, MpC(prec));
            for (std::size_t i = 0; i < m; ++i) {
                z[i].re = z0[i].real();
                z[i].im = z0[i].imag();
            }
            std::vector<mpf_class> coeff_f(p.size(), mpf_class(0, prec));
            for (std::size_t i = 0; i < p.size(); ++i)
                mpf_set_q(coeff_f[i].get_mpf_t(), p[i].get_mpq_t());

            mpf_class t1(0, prec), t2(0, prec), t3(0, prec);
            MpC num(prec), den(prec), w(prec), diff(prec);

            const int max_iter = 220;
            for (int it = 0; it < max_iter; ++it) {
                mpf_class moved(0, prec);
                for (std::size_t i = 0; i < m; ++i) {
                    // Horner at z_i
                    num.re = 0;
                    num.im = 0;
                    for (std::size_t k = p.size(); k-- > 0;) {
                        mul(num, z[i], num, t1, t2);
                        num.re += coeff_f[k];
                    }
                    den.re = 1;
                    den.im = 0;
                    for (std::size_t j = 0; j < m; ++j) {
                        if (j == i) continue;
                        diff.re = z[i].re - z[j].re;
                        diff.im = z[i].im - z[j].im;
                        mul(den, diff, den, t1, t2);
                    }
                    div(num, den, w, t1, t2, t3);
                    z[i].re -= w.re;
                    z[i].im -= w.im;
                    mpf_class aw = abs_c(w, prec);
                    if (aw > moved) moved = aw;
                }
                mpf_class stop(0, prec);
                mpf_set_ui(stop.get_mpf_t(), 1);
                mpf_div_2exp(stop.get_mpf_t(), stop.get_mpf_t(), prec * 3 / 4);
                if (moved < stop) break;
            }

            // certification pass with exact numerators
            std::vector<DiskRoot> disks(m);
            bool ok = true;
            std::vector<mpf_class> rad(m, mpf_class(0, prec));
            std::vector<MpC> center(m, MpC(prec));
            for (std::size_t i = 0; i < m && ok; ++i) {
                Rat zr, zi;
                mpq_set_f(zr.get_mpq_t(), z[i].re.get_mpf_t());
                mpq_set_f(zi.get_mpq_t(), z[i].im.get_mpf_t());
                Rat vr, vi;
                eval_q_complex(p, zr, zi, vr, vi);
                num.re = 0;
                num.im = 0;
                mpf_set_q(num.re.get_mpf_t(), vr.get_mpq_t());
                mpf_set_q(num.im.get_mpf_t(), vi.get_mpq_t());
                den.re = 1;
                den.im = 0;
                for (std::size_t j = 0; j < m; ++j) {
                    if (j == i) continue;
                    diff.re = z[i].re - z[j].re;
                    diff.im = z[i].im - z[j].im;
                    mul(den, diff, den, t1, t2);
                }
                if (den.re == 0 && den.im == 0) {
                    ok = false;
                    break;
                }
                div(num, den, w, t1, t2, t3);
                center[i].re = z[i].re - w.re;
                center[i].im = z[i].im - w.im;
                mpf_class aw = abs_c(w, prec);
                // inflation absorbs the rounded denominator product
                rad[i] = aw * static_cast<double>(m > 1 ? m - 1 : 1) * (1.0 + 1e-9) + 1e-60;
            }
            if (!ok) continue;

            // disks pairwise disjoint and small enough
            for (std::size_t i = 0; i < m && ok; ++i) {
                if (rad[i] > tol * 0.5) ok = false;
                for (std::size_t j = i + 1; j < m && ok; ++j) {
                    diff.re = center[i].re - center[j].re;
                    diff.im = center[i].im - center[j].im;
                    mpf_class dist = abs_c(diff, prec);
                    if (!(dist > rad[i] + rad[j])) ok = false;
                }
            }
            if (!ok) continue;

            for (std::size_t i = 0; i < m; ++i) {
                disks[i].re = center[i].re.get_d();
                disks[i].im = center[i].im.get_d();
                // double conversion error folded into the radius
                disks[i].radius = rad[i].get_d() + 1e-15 * (1.0 + std::abs(disks[i].re) + std::abs(disks[i].im));
            }
            return disks;
        }
    }
    throw PrecisionFailure("root certification failed at maximum working precision");
}

// Extract rational roots of a monic-normalized polynomial exactly, guided
// by a double-precision sweep; deflates p in place.
std::vector<Rat> extract_rational_roots(PolyQ& p) {
    std::vector<Rat> found;
    // x = 0 factors first
    while (p.size() > 1 && p[0] == 0) {
        found.emplace_back(0);
        p.erase(p.begin());
    }
    bool progress = true;
    while (progress && degree(p) >= 1) {
        progress = false;
        if (degree(p) == 1) {
            found.push_back(-p[0] / p[1]);
            p = {Rat(1)};
            break;
        }
        std::vector<double> cd(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) cd[i] = p[i].get_d();
        auto zs = dk_double(cd, 0);
        for (const auto& z : zs) {
            if (std::abs(z.imag()) > 1e-5) continue;
            const double r = z.real();
            // candidates: nearest integers, then nearest small-denominator rationals
            std::vector<Rat> cands;
            const double rr = std::round(r);
            if (std::abs(rr) < 9.0e15) {
                for (int off = -1; off <= 1; ++off) cands.emplace_back(Rat(static_cast<long>(rr) + off));
            }
            for (long den = 2; den <= 64; ++den) {
                const double num = std::round(r * static_cast<double>(den));
                if (std::abs(num) < 9.0e15 && std::abs(num / static_cast<double>(den) - r) < 1e-7)
                    cands.push_back(Rat(static_cast<long>(num), den));
            }
            for (auto& c : cands) {
                c.canonicalize();
                if (degree(p) >= 1 && eval_q(p, c) == 0) {
                    found.push_back(c);
                    // deflate by (x - c), exact synthetic division
                    PolyQ q(degree(p));
                    Rat carry = p.back();
                    for (std::size_t i = degree(p); i-- > 0;) {
                        q[i] = carry;
                        carry = p[i] + carry * c;
                    }
                    p = make_monic(std::move(q));
                    progress = true;
                    break;
                }
            }
            if (progress) break;
        }
    }
    return found;
}

// roots with multiplicity = simple roots of p/gcd(p,p') plus, recursively,
// roots of gcd(p,p') (each with multiplicity one less).
void roots_rec(const PolyQ& p, double tol, std::vector<CertifiedRoot>& out) {
    if (degree(p) == 0) return;
    PolyQ g = poly_gcd(p, derivative(p));
    PolyQ w = (degree(g) == 0) ? p : poly_div_exact(p, g);
    w = make_monic(std::move(w));

    PolyQ rest = w;
    for (const Rat& r : extract_rational_roots(rest)) {
        CertifiedRoot cr;
        cr.exact = r;
        cr.re = r.get_d();
        cr.im = 0.0;
        cr.radius = 0.0;
        out.push_back(std::move(cr));
    }
    if (degree(rest) >= 1) {
        for (const DiskRoot& dencl : simple_roots_certified(rest, tol)) {
            CertifiedRoot cr;
            cr.re = dencl.re;
            cr.im = dencl.im;
            cr.radius = dencl.radius;
            out.push_back(std::move(cr));
        }
    }
    if (degree(g) >= 1) roots_rec(make_monic(g), tol, out);
}

}  // namespace

double CertifiedRoot::modulus() const {
    if (exact) return std::abs(exact->get_d());
    return std::hypot(re, im);
}

double CertifiedRoot::power_distance(unsigned long n) const {
    if (exact) {
        Rat p = *exact;
        Rat acc(1);
        for (unsigned long k = 0; k < n; ++k) acc *= p;
        acc -= 1;
        return std::abs(acc.get_d());
    }
    std::complex<double> z(re, im);
    return std::abs(std::pow(z, static_cast<double>(n)) - 1.0);
}

double CertifiedRoot::power_distance_radius(unsigned long n) const {
    if (exact) return 0.0;
    const double mod = std::hypot(re, im);
    return static_cast<double>(n) * std::pow(mod + radius, static_cast<double>(n - 1)) * radius +
           1e-14 * (1.0 + std::pow(mod, static_cast<double>(n)));
}

std::vector<CertifiedRoot> certified_roots(const std::vector<Int>& poly, double tol) {
    if (poly.empty() || poly.back() == 0) throw UsageError("polynomial has zero leading coefficient");
    if (tol <= 0) throw UsageError("tolerance must be positive");
    PolyQ p(poly.size());
    for (std::size_t i = 0; i < poly.size(); ++i) p[i] = Rat(poly[i]);
    p = make_monic(std::move(p));
    std::vector<CertifiedRoot> out;
    roots_rec(p, tol, out);
    return out;
}

double SpectrumEntry::log_value() const {
    if (exact) return std::log(exact->get_d());
    return std::log(value);
}

double SpectrumEntry::log_radius() const {
    if (exact) return 4e-16 * std::abs(log_value()) + 1e-300;
    // |d log x| = |dx| / x, plus double-eval slack
    return radius / (value - radius) + 4e-16 * (1.0 + std::abs(std::log(value)));
}

Spectrum Spectrum::from_exact(const std::vector<Rat>& moduli) {
    Spectrum s;
    for (const Rat& m : moduli) {
        SpectrumEntry e;
        e.exact = abs(m);
        e.value = std::abs(m.get_d());
        e.radius = 0.0;
        s.entries.push_back(std::move(e));
    }
    std::sort(s.entries.begin(), s.entries.end(),
              [](const SpectrumEntry& a, const SpectrumEntry& b) { return *a.exact < *b.exact; });
    s.hypothesis_ok = !s.entries.empty() && *s.entries.front().exact > 1;
    s.hypothesis_margin = s.entries.empty() ? 0.0 : s.entries.front().value - 1.0;
    return s;
}

Spectrum Spectrum::from_values(const std::vector<double>& moduli, double radius) {
    Spectrum s;
    for (double m : moduli) {
        SpectrumEntry e;
        e.value = m;
        e.radius = radius;
        s.entries.push_back(e);
    }
    std::sort(s.entries.begin(), s.entries.end(),
              [](const SpectrumEntry& a, const SpectrumEntry& b) { return a.value < b.value; });
    s.hypothesis_ok = !s.entries.empty() && s.entries.front().value - radius > 1.0;
    s.hypothesis_margin = s.entries.empty() ? 0.0 : s.entries.front().value - radius - 1.0;
    return s;
}

std::vector<CertifiedRoot> eigen_roots(const IntegerMatrix& a, double tol) {
    return certified_roots(char_poly(a), tol);
}

Spectrum eigen_moduli(const IntegerMatrix& a, double tol) {
    Spectrum s;
    for (const CertifiedRoot& r : eigen_roots(a, tol)) {
        SpectrumEntry e;
        if (r.exact) {
            e.exact = abs(*r.exact);
            e.value = std::abs(r.exact->get_d());
            e.radius = 0.0;
        } else {
            e.value = r.modulus();
            e.radius = r.radius + 4e-16 * e.value;
        }
        s.entries.push_back(std::move(e));
    }
    std::sort(s.entries.begin(), s.entries.end(), [](const SpectrumEntry& a_, const SpectrumEntry& b_) {
        if (a_.exact && b_.exact) return *a_.exact < *b_.exact;
        return a_.value < b_.value;
    });
    s.hypothesis_ok = true;
    s.hypothesis_margin = 1e300;
    for (const auto& e : s.entries) {
        const double lower = e.exact ? e.value : e.value - e.radius;
        if (!(lower > 1.0 + tol)) s.hypothesis_ok = false;
        s.hypothesis_margin = std::min(s.hypothesis_margin, lower - 1.0);
    }
    return s;
}

namespace {

std::vector<SingularValue> singular_from_gram_poly(const std::vector<Int>& gram_poly, double tol) {
    std::vector<SingularValue> out;
    for (const CertifiedRoot& r : certified_roots(gram_poly, tol * tol)) {
        SingularValue sv;
        if (r.exact) {
            sv.exact_square = *r.exact;
            sv.value = std::sqrt(r.exact->get_d());
            sv.radius = 4e-16 * sv.value;
        } else {
            // Gram eigenvalues are real nonnegative; the disk may dip
            // below zero only for tiny singular values.
            const double lo = std::max(0.0, r.re - r.radius);
            const double hi = r.re + r.radius;
            sv.value = std::sqrt(std::max(0.0, r.re));
            sv.radius = std::max(std::sqrt(hi) - sv.value, sv.value - std::sqrt(lo)) + 4e-16 * (1.0 + sv.value);
        }
        out.push_back(std::move(sv));
    }
    std::sort(out.begin(), out.end(),
              [](const SingularValue& a, const SingularValue& b) { return a.value < b.value; });
    return out;
}

}  // namespace

std::vector<SingularValue> singular_values(const IntegerMatrix& m, double tol) {
    return singular_from_gram_poly(char_poly(m.transpose() * m), tol);
}

std::vector<SingularValue> singular_values(const RationalMatrix& m, double tol) {
    // clear denominators: sigma(M) = sigma(k M) / k
    Int k(1);
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j)
            mpz_lcm(k.get_mpz_t(), k.get_mpz_t(), m.at(i, j).get_den().get_mpz_t());
    IntegerMatrix mi(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) {
            Rat scaled = m.at(i, j) * Rat(k);
            mi.at(i, j) = scaled.get_num();
        }
    auto svs = singular_values(mi, tol * k.get_d());
    const double kd = k.get_d();
    for (auto& sv : svs) {
        sv.value /= kd;
        sv.radius /= kd;
        if (sv.exact_square) *sv.exact_square /= Rat(k * k);
    }
    return svs;
}

}  // namespace torrec
