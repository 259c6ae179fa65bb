#include "torrec/linalg.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <utility>

namespace torrec {

IntegerMatrix::IntegerMatrix(std::size_t dim, std::vector<Int> entries)
    : dim_(dim), e_(std::move(entries)) {
    if (e_.size() != dim * dim) throw UsageError("matrix entry count does not match dimension");
}

IntegerMatrix IntegerMatrix::identity(std::size_t dim) {
    IntegerMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = 1;
    return m;
}

IntegerMatrix IntegerMatrix::diagonal(const std::vector<Int>& diag) {
    IntegerMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m.at(i, i) = diag[i];
    return m;
}

IntegerMatrix IntegerMatrix::operator*(const IntegerMatrix& o) const {
    IntegerMatrix r(dim_);
    Int t;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t k = 0; k < dim_; ++k) {
            const Int& aik = at(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < dim_; ++j) {
                t = aik * o.at(k, j);
                r.at(i, j) += t;
            }
        }
    return r;
}

IntegerMatrix IntegerMatrix::operator-(const IntegerMatrix& o) const {
    IntegerMatrix r(dim_);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] - o.e_[i];
    return r;
}

IntegerMatrix IntegerMatrix::operator+(const IntegerMatrix& o) const {
    IntegerMatrix r(dim_);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] + o.e_[i];
    return r;
}

IntegerMatrix IntegerMatrix::transpose() const {
    IntegerMatrix r(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) r.at(j, i) = at(i, j);
    return r;
}

std::vector<Int> IntegerMatrix::apply(const std::vector<Int>& v) const {
    std::vector<Int> r(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) r[i] += at(i, j) * v[j];
    return r;
}

std::vector<Rat> IntegerMatrix::apply(const std::vector<Rat>& v) const {
    std::vector<Rat> r(dim_, Rat(0));
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            if (at(i, j) != 0) r[i] += Rat(at(i, j)) * v[j];
    return r;
}

std::string IntegerMatrix::to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < dim_; ++i) {
        os << (i ? ",[" : "[");
        for (std::size_t j = 0; j < dim_; ++j) os << (j ? "," : "") << at(i, j).get_str();
        os << "]";
    }
    os << "]";
    return os.str();
}

RationalMatrix RationalMatrix::identity(std::size_t dim) {
    RationalMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = 1;
    return m;
}

RationalMatrix RationalMatrix::from_integer(const IntegerMatrix& m) {
    RationalMatrix r(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) r.at(i, j) = m.at(i, j);
    return r;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& o) const {
    RationalMatrix r(dim_);
    Rat t;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t k = 0; k < dim_; ++k) {
            const Rat& aik = at(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < dim_; ++j) {
                t = aik * o.at(k, j);
                r.at(i, j) += t;
            }
        }
    return r;
}

std::vector<Rat> RationalMatrix::apply(const std::vector<Rat>& v) const {
    std::vector<Rat> r(dim_, Rat(0));
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            if (at(i, j) != 0) r[i] += at(i, j) * v[j];
    return r;
}

RationalMatrix RationalMatrix::inverse() const {
    const std::size_t n = dim_;
    RationalMatrix a = *this;
    RationalMatrix inv = identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a.at(piv, col) == 0) ++piv;
        if (piv == n) throw SingularMatrix();
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a.at(piv, j), a.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        }
        const Rat p = a.at(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a.at(col, j) /= p;
            inv.at(col, j) /= p;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || a.at(i, col) == 0) continue;
            const Rat f = a.at(i, col);
            for (std::size_t j = 0; j < n; ++j) {
                a.at(i, j) -= f * a.at(col, j);
                inv.at(i, j) -= f * inv.at(col, j);
            }
        }
    }
    return inv;
}

bool RationalMatrix::is_integral() const {
    for (std::size_t i = 0; i < e_.size(); ++i)
        if (e_[i].get_den() != 1) return false;
    return true;
}

IntegerMatrix RationalMatrix::to_integer() const {
    if (!is_integral()) throw UsageError("rational matrix is not integral");
    IntegerMatrix r(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) r.at(i, j) = at(i, j).get_num();
    return r;
}

std::vector<Int> SnfDecomposition::invariant_factors() const {
    std::vector<Int> f(S.dim());
    for (std::size_t i = 0; i < S.dim(); ++i) f[i] = S.at(i, i);
    return f;
}

IntegerMatrix matrix_power(const IntegerMatrix& a, unsigned long n) {
    if (n == 0) return IntegerMatrix::identity(a.dim());
    IntegerMatrix base = a;
    IntegerMatrix acc = IntegerMatrix::identity(a.dim());
    while (n > 0) {
        if (n & 1UL) acc = acc * base;
        n >>= 1UL;
        if (n > 0) base = base * base;
    }
    return acc;
}

Int det_exact(const IntegerMatrix& m) {
    const std::size_t n = m.dim();
    if (n == 0) return 1;
    std::vector<Int> a = m.entries();
    auto e = [&](std::size_t i, std::size_t j) -> Int& { return a[i * n + j]; };
    Int prev(1);
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (e(k, k) == 0) {
            std::size_t r = k + 1;
            while (r < n && e(r, k) == 0) ++r;
            if (r == n) return 0;
            for (std::size_t j = k; j < n; ++j) std::swap(e(k, j), e(r, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Int t = e(i, j) * e(k, k) - e(i, k) * e(k, j);
                mpz_divexact(e(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
        prev = e(k, k);
    }
    Int d = e(n - 1, n - 1);
    if (sign < 0) d = -d;
    return d;
}

std::vector<Int> char_poly(const IntegerMatrix& a) {
    // Faddeev-LeVerrier: every division below is exact over Z.
    const std::size_t d = a.dim();
    std::vector<Int> c(d + 1);
    c[d] = 1;
    IntegerMatrix m(d);  // zero
    for (std::size_t k = 1; k <= d; ++k) {
        for (std::size_t i = 0; i < d; ++i) m.at(i, i) += c[d - k + 1];
        m = a * m;
        Int tr(0);
        for (std::size_t i = 0; i < d; ++i) tr += m.at(i, i);
        Int ck = -tr;
        mpz_divexact_ui(ck.get_mpz_t(), ck.get_mpz_t(), static_cast<unsigned long>(k));
        c[d - k] = ck;
    }
    return c;
}

namespace {

struct SnfState {
    std::size_t n;
    IntegerMatrix M;  // working copy, reduced in place
    IntegerMatrix U;  // accumulates inverse row ops, input = U*M*V
    IntegerMatrix V;  // accumulates inverse column ops

    // row i of M <- row i - q * row j;  U gets column i added to column j.
    void row_sub(std::size_t i, std::size_t j, const Int& q) {
        if (q == 0) return;
        for (std::size_t k = 0; k < n; ++k) M.at(i, k) -= q * M.at(j, k);
        for (std::size_t k = 0; k < n; ++k) U.at(k, j) += q * U.at(k, i);
    }
    // col i of M <- col i - q * col j;  V gets row i added to row j.
    void col_sub(std::size_t i, std::size_t j, const Int& q) {
        if (q == 0) return;
        for (std::size_t k = 0; k < n; ++k) M.at(k, i) -= q * M.at(k, j);
        for (std::size_t k = 0; k < n; ++k) V.at(j, k) += q * V.at(i, k);
    }
    void row_swap(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t k = 0; k < n; ++k) std::swap(M.at(i, k), M.at(j, k));
        for (std::size_t k = 0; k < n; ++k) std::swap(U.at(k, i), U.at(k, j));
    }
    void col_swap(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t k = 0; k < n; ++k) std::swap(M.at(k, i), M.at(k, j));
        for (std::size_t k = 0; k < n; ++k) std::swap(V.at(i, k), V.at(j, k));
    }
    void row_negate(std::size_t i) {
        for (std::size_t k = 0; k < n; ++k) M.at(i, k) = -M.at(i, k);
        for (std::size_t k = 0; k < n; ++k) U.at(k, i) = -U.at(k, i);
    }
};

}  // namespace

SnfDecomposition smith_normal_form(const IntegerMatrix& m) {
    const std::size_t n = m.dim();
    if (det_exact(m) == 0) throw SingularMatrix("smith normal form requires a nonsingular matrix");

    SnfState st{n, m, IntegerMatrix::identity(n), IntegerMatrix::identity(n)};

    for (std::size_t t = 0; t < n; ++t) {
        for (;;) {
            // pivot: smallest |entry| != 0 in the trailing block, ties by position
            std::size_t pr = t, pc = t;
            Int best(0);
            for (std::size_t i = t; i < n; ++i)
                for (std::size_t j = t; j < n; ++j) {
                    const Int& v = st.M.at(i, j);
                    if (v == 0) continue;
                    Int av = abs(v);
                    if (best == 0 || av < best) {
                        best = av;
                        pr = i;
                        pc = j;
                    }
                }
            // nonsingular input guarantees a pivot exists
            st.row_swap(t, pr);
            st.col_swap(t, pc);

            bool clean = true;
            for (std::size_t i = t + 1; i < n; ++i) {
                if (st.M.at(i, t) == 0) continue;
                Int q;
                // round-to-nearest quotient keeps remainders small
                Int r;
                mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), st.M.at(i, t).get_mpz_t(),
                            st.M.at(t, t).get_mpz_t());
                st.row_sub(i, t, q);
                if (st.M.at(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (st.M.at(t, j) == 0) continue;
                Int q, r;
                mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), st.M.at(t, j).get_mpz_t(),
                            st.M.at(t, t).get_mpz_t());
                st.col_sub(j, t, q);
                if (st.M.at(t, j) != 0) clean = false;
            }
            if (!clean) continue;

            // pivot divides the rest of the block, or pull a bad row in and retry
            bool divides_all = true;
            for (std::size_t i = t + 1; i < n && divides_all; ++i)
                for (std::size_t j = t + 1; j < n && divides_all; ++j)
                    if (st.M.at(i, j) % st.M.at(t, t) != 0) {
                        st.row_sub(t, i, Int(-1));  // adds row i into row t
                        divides_all = false;
                    }
            if (divides_all) break;
        }
        if (st.M.at(t, t) < 0) st.row_negate(t);
    }

    SnfDecomposition out;
    out.U = std::move(st.U);
    out.S = std::move(st.M);
    out.V = std::move(st.V);
    return out;
}

IntegerMatrix unimodular_inverse(const IntegerMatrix& m) {
    RationalMatrix inv = RationalMatrix::from_integer(m).inverse();
    return inv.to_integer();
}

IntegerMatrix parse_matrix(const std::string& text) {
    // compact form: "d; a11 a12 ..."
    if (text.find('[') == std::string::npos) {
        std::istringstream is(text);
        std::string dim_tok;
        if (!std::getline(is, dim_tok, ';')) throw UsageError("bad matrix text");
        std::size_t d = std::stoul(dim_tok);
        std::vector<Int> entries;
        std::string tok;
        while (is >> tok) entries.emplace_back(tok);
        if (entries.size() != d * d) throw UsageError("matrix entry count does not match dimension");
        return IntegerMatrix(d, std::move(entries));
    }
    // JSON array-of-arrays, parsed by hand so this header stays light
    std::vector<std::vector<Int>> rows;
    std::vector<Int> cur;
    std::string num;
    int depth = 0;
    auto flush_num = [&] {
        if (!num.empty()) {
            cur.emplace_back(num);
            num.clear();
        }
    };
    for (char ch : text) {
        if (ch == '[') {
            ++depth;
            if (depth == 2) cur.clear();
        } else if (ch == ']') {
            flush_num();
            if (depth == 2) rows.push_back(cur);
            --depth;
        } else if (ch == ',') {
            flush_num();
        } else if (ch == '-' || (ch >= '0' && ch <= '9')) {
            num.push_back(ch);
        } else if (ch == ' ' || ch == '\n' || ch == '\t' || ch == '\r') {
            flush_num();
        } else {
            throw UsageError(std::string("unexpected character in matrix: ") + ch);
        }
    }
    if (rows.empty()) throw UsageError("empty matrix");
    const std::size_t d = rows.size();
    std::vector<Int> entries;
    for (auto& r : rows) {
        if (r.size() != d) throw UsageError("matrix is not square");
        for (auto& v : r) entries.push_back(std::move(v));
    }
    return IntegerMatrix(d, std::move(entries));
}

}  // namespace torrec
