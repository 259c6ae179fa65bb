#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "torrec/dimension.hpp"
#include "torrec/rng.hpp"

using namespace torrec;

namespace {

Spectrum exact_spec(std::initializer_list<long> moduli) {
    std::vector<Rat> v;
    for (long m : moduli) v.emplace_back(m);
    return Spectrum::from_exact(v);
}

// reference evaluation of the min-quotient family with plain doubles
double oracle_formula(const std::vector<double>& lambda, double alpha) {
    double best = 1e300;
    const std::size_t d = lambda.size();
    for (std::size_t j = 1; j <= d; ++j) {
        double num = static_cast<double>(j) * std::log(lambda[j - 1]);
        for (std::size_t i = j + 1; i <= d; ++i) num += std::log(lambda[i - 1]);
        best = std::min(best, num / (alpha + std::log(lambda[j - 1])));
    }
    return best;
}

}  // namespace

TEST_CASE("general formula: pinned examples") {
    // [2,2] at alpha = ln 2: 2 log2 / (2 log2) = 1
    auto r = dimension_formula(exact_spec({2, 2}), Alpha::log_of(Rat(2)));
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.label == "exact");

    // equal moduli at alpha = 0 gives full dimension
    for (int d = 1; d <= 5; ++d) {
        std::vector<Rat> v(d, Rat(3));
        auto rd = dimension_formula(Spectrum::from_exact(v), Alpha::from_double(0.0));
        CHECK(rd.value == doctest::Approx(static_cast<double>(d)).epsilon(1e-14));
    }

    // [2,4] at alpha = ln 8: j=1 gives 3/4, j=2 gives 4/5
    auto r2 = dimension_formula(exact_spec({2, 4}), Alpha::log_of(Rat(8)));
    CHECK(r2.per_j[0] == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(r2.per_j[1] == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(r2.value == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(r2.argmin_j == 1);
    CHECK(r2.label == "exact");
}

TEST_CASE("equal-moduli closed form") {
    CHECK(dimension_equal_moduli(2, 2.0, Alpha::from_double(0.0)) == doctest::Approx(2.0));
    CHECK(dimension_equal_moduli(2, 2.0, Alpha::log_of(Rat(2))) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dimension_equal_moduli(3, 5.0, Alpha::log_of(Rat(5))) == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("dominant index sets") {
    // [2,8], alpha = ln2, j=1: log8 > log2 + log2
    auto k1 = dominant_indices(exact_spec({2, 8}), Alpha::log_of(Rat(2)), 1);
    CHECK(k1 == std::vector<int>{2});

    // at or above the spread threshold every set is empty
    Rng rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Rat> v;
        const int d = 2 + static_cast<int>(rng.next_below(4));
        for (int i = 0; i < d; ++i) v.emplace_back(2 + static_cast<long>(rng.next_below(30)));
        Spectrum s = Spectrum::from_exact(v);
        Rat spread = *s.entries.back().exact / *s.entries.front().exact;
        Alpha a = Alpha::log_of(spread * Rat(1 + static_cast<long>(rng.next_below(3))));
        for (int j = 1; j <= d; ++j) CHECK(dominant_indices(s, a, j).empty());
    }

    // equal moduli at alpha = 0: strict inequality fails
    for (int j = 1; j <= 3; ++j)
        CHECK(dominant_indices(exact_spec({2, 2, 2}), Alpha::from_double(0.0), j).empty());
}

TEST_CASE("ambiguous comparison demands precision") {
    Spectrum s = Spectrum::from_values({2.0, 2.0 + 1e-14}, 1e-13);
    CHECK_THROWS_AS(dominant_indices(s, Alpha::from_double(1e-15), 1), AmbiguousComparison);
}

TEST_CASE("corrected formula: pinned examples") {
    // [2,8] at alpha = ln2: both quotients equal 3/2
    auto r = dimension_formula_corrected(exact_spec({2, 8}), Alpha::log_of(Rat(2)));
    CHECK(r.per_j[0] == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(r.per_j[1] == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(r.value == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(r.argmin_j == 1);  // tie resolved toward smaller j
    CHECK(r.k_sets[0] == std::vector<int>{2});
    CHECK(r.k_sets[1].empty());
    CHECK(r.label == "exact");

    // above the spread threshold the corrected value matches the general one
    auto g = dimension_formula(exact_spec({2, 4}), Alpha::log_of(Rat(8)));
    auto c = dimension_formula_corrected(exact_spec({2, 4}), Alpha::log_of(Rat(8)));
    CHECK(c.value == g.value);

    auto eq = dimension_formula_corrected(exact_spec({3, 3}), Alpha::from_double(0.0));
    CHECK(eq.value == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("spread threshold") {
    CHECK(spread_threshold(exact_spec({2, 2})) == doctest::Approx(0.0));
    CHECK(spread_threshold(exact_spec({2, 4})) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    // (5+sqrt5)/(5-sqrt5) from the quadratic-formula spectrum
    const double lo = (5.0 - std::sqrt(5.0)) / 2.0, hi = (5.0 + std::sqrt(5.0)) / 2.0;
    Spectrum s = Spectrum::from_values({lo, hi}, 1e-14);
    CHECK(spread_threshold(s) == doctest::Approx(std::log(hi / lo)).epsilon(1e-12));
    CHECK(spread_threshold(s) == doctest::Approx(0.9624236501192069).epsilon(1e-10));
}

TEST_CASE("corrected equals general on 200 random spectra above the spread") {
    Rng rng(22);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 1 + static_cast<int>(rng.next_below(6));
        std::vector<Rat> v;
        for (int i = 0; i < d; ++i) v.emplace_back(2 + static_cast<long>(rng.next_below(49)));
        Spectrum s = Spectrum::from_exact(v);
        Rat spread = *s.entries.back().exact / *s.entries.front().exact;
        // alpha = log(spread * k) >= log(spread), k in {1,2,3}
        Alpha a = Alpha::log_of(spread * Rat(1 + static_cast<long>(rng.next_below(3))));
        auto g = dimension_formula(s, a);
        auto c = dimension_formula_corrected(s, a);
        CHECK(std::abs(g.value - c.value) <= 1e-12);
        CHECK(g.argmin_j == c.argmin_j);
    }
}

TEST_CASE("value decreases strictly in alpha and meets the coarse bound") {
    Rng rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = 1 + static_cast<int>(rng.next_below(5));
        std::vector<Rat> v;
        for (int i = 0; i < d; ++i) v.emplace_back(2 + static_cast<long>(rng.next_below(20)));
        Spectrum s = Spectrum::from_exact(v);
        double prev = dimension_formula(s, Alpha::from_double(0.0)).value;
        CHECK(prev == doctest::Approx(static_cast<double>(d)).epsilon(1e-12));
        for (double a : {0.25, 1.0, 3.0, 10.0}) {
            const double cur = dimension_formula(s, Alpha::from_double(a)).value;
            CHECK(cur < prev);
            const double ld = s.entries.back().log_value();
            CHECK(cur <= static_cast<double>(d) * ld / (a + ld) + 1e-12);
            CHECK(cur < static_cast<double>(d));
            prev = cur;
        }
        // alpha -> infinity limit, checked against the coarse bound at 1e6
        const double far = dimension_formula(s, Alpha::from_double(1e6)).value;
        CHECK(far <= static_cast<double>(d) * s.entries.back().log_value() / 1e6 + 1e-18);
        CHECK(dimension_formula(s, Alpha::infinity()).value == 0.0);
    }
}

TEST_CASE("correction terms are strictly negative on the dominant set") {
    Rng rng(24);
    for (int trial = 0; trial < 60; ++trial) {
        const int d = 2 + static_cast<int>(rng.next_below(5));
        std::vector<Rat> v;
        for (int i = 0; i < d; ++i) v.emplace_back(2 + static_cast<long>(rng.next_below(40)));
        Spectrum s = Spectrum::from_exact(v);
        Alpha a = Alpha::log_of(Rat(1 + static_cast<long>(rng.next_below(4))));
        for (int j = 1; j <= d; ++j) {
            for (int k : dominant_indices(s, a, j)) {
                const double term =
                    a.value + s.modulus(j).log_value() - s.modulus(k).log_value();
                CHECK(term < 0.0);
            }
        }
    }
}

TEST_CASE("joint power scaling leaves both formulas unchanged") {
    Rng rng(25);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = 1 + static_cast<int>(rng.next_below(5));
        std::vector<Rat> v;
        for (int i = 0; i < d; ++i) v.emplace_back(2 + static_cast<long>(rng.next_below(12)));
        Spectrum s = Spectrum::from_exact(v);
        Rat base(1 + static_cast<long>(rng.next_below(5)));
        Alpha a = Alpha::log_of(base);
        for (long t : {2L, 3L}) {
            std::vector<Rat> vt;
            for (const Rat& m : v) {
                Rat p(1);
                for (long k = 0; k < t; ++k) p *= m;
                vt.push_back(p);
            }
            Rat bt(1);
            for (long k = 0; k < t; ++k) bt *= base;
            Spectrum st = Spectrum::from_exact(vt);
            Alpha at = Alpha::log_of(bt);
            CHECK(std::abs(dimension_formula(s, a).value - dimension_formula(st, at).value) <= 1e-10);
            CHECK(std::abs(dimension_formula_corrected(s, a).value -
                           dimension_formula_corrected(st, at).value) <= 1e-10);
        }
    }
}

TEST_CASE("matches an independent double-precision oracle") {
    Rng rng(26);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 1 + static_cast<int>(rng.next_below(5));
        std::vector<Rat> v;
        std::vector<double> vd;
        for (int i = 0; i < d; ++i) {
            long m = 2 + static_cast<long>(rng.next_below(30));
            v.emplace_back(m);
            vd.push_back(static_cast<double>(m));
        }
        std::sort(vd.begin(), vd.end());
        const double a = 5.0 * rng.next_double();
        auto r = dimension_formula(Spectrum::from_exact(v), Alpha::from_double(a));
        CHECK(r.value == doctest::Approx(oracle_formula(vd, a)).epsilon(1e-12));
    }
}

TEST_CASE("invalid spectra are rejected") {
    std::vector<Rat> v{Rat(1), Rat(3)};
    CHECK_THROWS_AS(dimension_formula(Spectrum::from_exact(v), Alpha::from_double(1.0)),
                    InvalidSpectrum);
}

TEST_CASE("value stays within [0, d]") {
    Rng rng(27);
    for (int trial = 0; trial < 60; ++trial) {
        const int d = 1 + static_cast<int>(rng.next_below(6));
        std::vector<Rat> v;
        for (int i = 0; i < d; ++i) v.emplace_back(2 + static_cast<long>(rng.next_below(60)));
        const double a = 20.0 * rng.next_double();
        auto r = dimension_formula(Spectrum::from_exact(v), Alpha::from_double(a));
        CHECK(r.value >= 0.0);
        CHECK(r.value <= static_cast<double>(d));
        CHECK(r.value == r.per_j[r.argmin_j - 1]);
    }
}
