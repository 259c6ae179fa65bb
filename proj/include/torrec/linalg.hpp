#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "torrec/errors.hpp"

namespace torrec {

using Int = mpz_class;
using Rat = mpq_class;

/// Square integer matrix with arbitrary-precision entries. Immutable in
/// spirit: operations return new values instead of mutating shared state.
class IntegerMatrix {
public:
    IntegerMatrix() = default;
    explicit IntegerMatrix(std::size_t dim) : dim_(dim), e_(dim * dim) {}
    IntegerMatrix(std::size_t dim, std::vector<Int> entries);

    static IntegerMatrix identity(std::size_t dim);
    static IntegerMatrix diagonal(const std::vector<Int>& diag);

    std::size_t dim() const { return dim_; }
    const Int& at(std::size_t r, std::size_t c) const { return e_[r * dim_ + c]; }
    Int& at(std::size_t r, std::size_t c) { return e_[r * dim_ + c]; }
    const std::vector<Int>& entries() const { return e_; }

    bool operator==(const IntegerMatrix& o) const = default;

    IntegerMatrix operator*(const IntegerMatrix& o) const;
    IntegerMatrix operator-(const IntegerMatrix& o) const;
    IntegerMatrix operator+(const IntegerMatrix& o) const;
    IntegerMatrix transpose() const;

    std::vector<Int> apply(const std::vector<Int>& v) const;
    std::vector<Rat> apply(const std::vector<Rat>& v) const;

    std::string to_string() const;

private:
    std::size_t dim_ = 0;
    std::vector<Int> e_;
};

/// Square matrix of exact rationals (gmp keeps entries canonical).
class RationalMatrix {
public:
    RationalMatrix() = default;
    explicit RationalMatrix(std::size_t dim) : dim_(dim), e_(dim * dim) {}

    static RationalMatrix identity(std::size_t dim);
    static RationalMatrix from_integer(const IntegerMatrix& m);

    std::size_t dim() const { return dim_; }
    const Rat& at(std::size_t r, std::size_t c) const { return e_[r * dim_ + c]; }
    Rat& at(std::size_t r, std::size_t c) { return e_[r * dim_ + c]; }

    bool operator==(const RationalMatrix& o) const = default;

    RationalMatrix operator*(const RationalMatrix& o) const;
    std::vector<Rat> apply(const std::vector<Rat>& v) const;

    /// Exact inverse by Gauss-Jordan. Throws SingularMatrix.
    RationalMatrix inverse() const;

    /// True when every entry has denominator 1.
    bool is_integral() const;
    IntegerMatrix to_integer() const;

private:
    std::size_t dim_ = 0;
    std::vector<Rat> e_;
};

/// M = U * S * V with U, V unimodular and S = diag(s_1 | s_2 | ... | s_d),
/// all invariant factors positive.
struct SnfDecomposition {
    IntegerMatrix U, S, V;
    std::vector<Int> invariant_factors() const;
};

/// Exact A^n by binary exponentiation, n >= 1.
IntegerMatrix matrix_power(const IntegerMatrix& a, unsigned long n);

/// Exact determinant, fraction-free (Bareiss).
Int det_exact(const IntegerMatrix& m);

/// Monic characteristic polynomial of A, exact integer coefficients,
/// returned lowest degree first: c[0] + c[1] x + ... + c[d] x^d, c[d] = 1.
std::vector<Int> char_poly(const IntegerMatrix& a);

/// Smith normal form of a nonsingular square integer matrix.
/// Pivot choice: smallest absolute nonzero entry, ties by lexicographic
/// position, so the output is deterministic.
SnfDecomposition smith_normal_form(const IntegerMatrix& m);

/// Inverse of a unimodular integer matrix (exact, integer result).
IntegerMatrix unimodular_inverse(const IntegerMatrix& m);

// -- parsing / formatting ----------------------------------------------------

/// Parse either a JSON array-of-arrays "[[2,0],[0,3]]" or the compact
/// text form "d; a11 a12 ... a1d a21 ...".
IntegerMatrix parse_matrix(const std::string& text);

}  // namespace torrec
