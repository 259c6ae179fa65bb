#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "torrec/linalg.hpp"
#include "torrec/rng.hpp"
#include "torrec/roots.hpp"

using namespace torrec;

namespace {

IntegerMatrix mat2(long a, long b, long c, long d) {
    return IntegerMatrix(2, {Int(a), Int(b), Int(c), Int(d)});
}

IntegerMatrix random_matrix(Rng& rng, std::size_t d, long lo, long hi) {
    IntegerMatrix m(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            m.at(i, j) = Int(lo + static_cast<long>(rng.next_below(static_cast<std::uint64_t>(hi - lo + 1))));
    return m;
}

// reference 2x2 invariant factors: s1 = gcd of entries, s1 s2 = |det|
std::pair<Int, Int> snf2_oracle(const IntegerMatrix& m) {
    Int g(0);
    for (const auto& e : m.entries()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.get_mpz_t());
    Int d = abs(det_exact(m));
    return {g, d / g};
}

}  // namespace

TEST_CASE("matrix power: scalar, identity, hand product") {
    CHECK(matrix_power(IntegerMatrix(1, {Int(2)}), 5).at(0, 0) == 32);
    CHECK(matrix_power(IntegerMatrix::identity(2), 7) == IntegerMatrix::identity(2));
    // [[3,1],[1,2]]^2 = [[10,5],[5,5]] by hand
    CHECK(matrix_power(mat2(3, 1, 1, 2), 2) == mat2(10, 5, 5, 5));
}

TEST_CASE("matrix power is multiplicative in the exponent") {
    Rng rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t d = 1 + rng.next_below(3);
        IntegerMatrix a = random_matrix(rng, d, -3, 3);
        const unsigned long m = 1 + rng.next_below(8);
        const unsigned long n = 1 + rng.next_below(8);
        CHECK(matrix_power(a, m + n) == matrix_power(a, m) * matrix_power(a, n));
    }
}

TEST_CASE("exact determinant") {
    CHECK(det_exact(mat2(2, 0, 0, 3)) == 6);
    CHECK(det_exact(mat2(9, 5, 5, 4)) == Int(9 * 4 - 5 * 5));
    CHECK(det_exact(IntegerMatrix::identity(5)) == 1);
}

TEST_CASE("det of powers") {
    Rng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t d = 1 + rng.next_below(3);
        IntegerMatrix a = random_matrix(rng, d, -3, 3);
        const unsigned long n = 1 + rng.next_below(6);
        Int dn = det_exact(matrix_power(a, n));
        Int expect(1);
        Int da = det_exact(a);
        for (unsigned long k = 0; k < n; ++k) expect *= da;
        CHECK(dn == expect);
    }
}

TEST_CASE("characteristic polynomial, small oracles") {
    // x - 2
    auto p1 = char_poly(IntegerMatrix(1, {Int(2)}));
    CHECK(p1 == std::vector<Int>{Int(-2), Int(1)});
    // trace/det oracle: x^2 - 5x + 5
    auto p2 = char_poly(mat2(3, 1, 1, 2));
    CHECK(p2 == std::vector<Int>{Int(5), Int(-5), Int(1)});
    // x^2 - 4x + 4
    auto p3 = char_poly(mat2(2, 0, 0, 2));
    CHECK(p3 == std::vector<Int>{Int(4), Int(-4), Int(1)});
}

TEST_CASE("Cayley-Hamilton residual vanishes exactly") {
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t d = 1 + rng.next_below(4);
        IntegerMatrix a = random_matrix(rng, d, -4, 4);
        auto p = char_poly(a);
        IntegerMatrix acc(d);  // zero
        for (std::size_t k = p.size(); k-- > 0;) {
            acc = acc * a;
            for (std::size_t i = 0; i < d; ++i) acc.at(i, i) += p[k];
        }
        CHECK(acc == IntegerMatrix(d));
    }
}

TEST_CASE("smith normal form: pinned examples") {
    auto s1 = smith_normal_form(mat2(2, 0, 0, 2));
    CHECK(s1.invariant_factors() == std::vector<Int>{Int(2), Int(2)});

    // gcd/lcm oracle
    auto s2 = smith_normal_form(mat2(2, 0, 0, 3));
    CHECK(s2.invariant_factors() == std::vector<Int>{Int(1), Int(6)});

    auto s3 = smith_normal_form(mat2(9, 5, 5, 4));
    auto oracle = snf2_oracle(mat2(9, 5, 5, 4));
    CHECK(s3.invariant_factors() == std::vector<Int>{oracle.first, oracle.second});
    CHECK(s3.invariant_factors() == std::vector<Int>{Int(1), Int(11)});
}

TEST_CASE("smith normal form properties on random nonsingular matrices") {
    Rng rng(14);
    int done = 0;
    while (done < 40) {
        const std::size_t d = 1 + rng.next_below(4);
        IntegerMatrix m = random_matrix(rng, d, -6, 6);
        if (det_exact(m) == 0) continue;
        ++done;
        auto snf = smith_normal_form(m);
        CHECK(snf.U * snf.S * snf.V == m);
        CHECK(abs(det_exact(snf.U)) == 1);
        CHECK(abs(det_exact(snf.V)) == 1);
        Int prod(1);
        auto f = snf.invariant_factors();
        for (std::size_t i = 0; i < f.size(); ++i) {
            CHECK(f[i] >= 1);
            if (i + 1 < f.size()) CHECK(f[i + 1] % f[i] == 0);
            prod *= f[i];
        }
        CHECK(prod == abs(det_exact(m)));
    }
}

TEST_CASE("singular matrix is rejected") {
    CHECK_THROWS_AS(smith_normal_form(mat2(1, 2, 2, 4)), SingularMatrix);
}

TEST_CASE("eigen moduli: diagonal, quadratic-formula oracle, hypothesis flag") {
    auto s1 = eigen_moduli(mat2(2, 0, 0, 3), 1e-12);
    REQUIRE(s1.dim() == 2);
    CHECK(s1.entries[0].exact.has_value());
    CHECK(*s1.entries[0].exact == 2);
    CHECK(*s1.entries[1].exact == 3);
    CHECK(s1.hypothesis_ok);

    // roots of x^2 - 5x + 5: (5 +- sqrt 5)/2
    auto s2 = eigen_moduli(mat2(3, 1, 1, 2), 1e-12);
    const double r1 = (5.0 - std::sqrt(5.0)) / 2.0;
    const double r2 = (5.0 + std::sqrt(5.0)) / 2.0;
    CHECK(s2.entries[0].value == doctest::Approx(r1).epsilon(1e-12));
    CHECK(s2.entries[1].value == doctest::Approx(r2).epsilon(1e-12));
    CHECK(s2.entries[0].radius <= 1e-12);
    CHECK(s2.hypothesis_ok);

    // roots of x^2 - 3x + 1: (3 - sqrt 5)/2 ~ 0.382 < 1
    auto s3 = eigen_moduli(mat2(2, 1, 1, 1), 1e-12);
    CHECK_FALSE(s3.hypothesis_ok);
    CHECK(s3.entries[0].value == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-10));
}

TEST_CASE("eigen moduli: repeated and negative integer roots stay exact") {
    auto s = eigen_moduli(mat2(2, 0, 0, 2), 1e-12);
    REQUIRE(s.dim() == 2);
    CHECK(*s.entries[0].exact == 2);
    CHECK(*s.entries[1].exact == 2);

    // char poly x^2 - 4: roots +-2, both modulus exactly 2
    auto sneg = eigen_moduli(mat2(0, 2, 2, 0), 1e-12);
    REQUIRE(sneg.dim() == 2);
    CHECK(*sneg.entries[0].exact == 2);
    CHECK(*sneg.entries[1].exact == 2);
}

TEST_CASE("eigen moduli product matches |det|") {
    Rng rng(15);
    int done = 0;
    while (done < 15) {
        const std::size_t d = 1 + rng.next_below(3);
        IntegerMatrix a = random_matrix(rng, d, -4, 4);
        Int da = det_exact(a);
        if (da == 0) continue;
        ++done;
        auto s = eigen_moduli(a, 1e-10);
        double prod = 1.0;
        for (const auto& e : s.entries) prod *= e.value;
        CHECK(prod == doctest::Approx(std::abs(da.get_d())).epsilon(1e-8));
    }
}

TEST_CASE("complex pair moduli are certified") {
    // char poly x^2 - 2x + 3, roots 1 +- i sqrt 2, modulus sqrt 3
    IntegerMatrix a = mat2(1, -2, 1, 1);
    auto s = eigen_moduli(a, 1e-12);
    REQUIRE(s.dim() == 2);
    CHECK(s.entries[0].value == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    CHECK(s.entries[1].value == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    CHECK(s.entries[0].radius <= 1e-12);
    CHECK(s.hypothesis_ok);
}

TEST_CASE("certified singular values") {
    // diagonal: exact squares
    auto sv = singular_values(mat2(2, 0, 0, 3), 1e-10);
    REQUIRE(sv.size() == 2);
    CHECK(sv[0].exact_square.has_value());
    CHECK(*sv[0].exact_square == 4);
    CHECK(*sv[1].exact_square == 9);

    // sigma_min * sigma_max = |det| for 2x2
    auto sv2 = singular_values(mat2(2, 1, 1, 1), 1e-10);
    CHECK(sv2[0].value * sv2[1].value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("matrix parsing: JSON and compact forms") {
    CHECK(parse_matrix("[[2,0],[0,3]]") == mat2(2, 0, 0, 3));
    CHECK(parse_matrix("2; 2 0 0 3") == mat2(2, 0, 0, 3));
    CHECK(parse_matrix("[[-1]]") == IntegerMatrix(1, {Int(-1)}));
    CHECK_THROWS_AS(parse_matrix("[[1,2],[3]]"), UsageError);
}

TEST_CASE("unimodular inverse is exact") {
    IntegerMatrix v = mat2(2, 1, 1, 1);  // det 1
    IntegerMatrix vi = unimodular_inverse(v);
    CHECK(v * vi == IntegerMatrix::identity(2));
}
