#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace gridtrees {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Integer power of a rational; exponent may be negative.
inline Rational rational_pow(const Rational& base, long exp) {
    if (exp == 0) return Rational(1);
    if (exp < 0) {
        if (base == 0) throw std::domain_error("rational_pow: zero base with negative exponent");
        return rational_pow(Rational(1) / base, -exp);
    }
    Rational acc(1), b = base;
    unsigned long e = static_cast<unsigned long>(exp);
    while (e > 0) {
        if (e & 1UL) acc *= b;
        e >>= 1UL;
        if (e > 0) b *= b;
    }
    acc.canonicalize();
    return acc;
}

/// Dense square integer matrix with row-major storage.
class IntMatrix {
public:
    explicit IntMatrix(std::size_t n) : n_(n), a_(n * n) {}

    std::size_t size() const { return n_; }
    BigInt& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const BigInt& at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    /// Largest |i-j| over nonzero entries (0 for diagonal/empty matrices).
    std::size_t bandwidth() const {
        std::size_t bw = 0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                if (at(i, j) != 0) {
                    std::size_t d = i > j ? i - j : j - i;
                    if (d > bw) bw = d;
                }
        return bw;
    }

private:
    std::size_t n_;
    std::vector<BigInt> a_;
};

namespace detail {

inline void mul_assign(BigInt& x, const BigInt& y) { mpz_mul(x.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t()); }

inline void divexact_assign(BigInt& x, const BigInt& y) {
    mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
}

// Fraction-free (Bareiss) forward elimination. Exploits band structure:
// a row outside the active window is untouched, and its true value after
// step k-1 equals the stored value times the pivot p_{k-1}; it is
// materialized when it enters the window. Falls back to full-width rows
// with swaps if a zero pivot appears (never the case for the positive
// definite / M-matrices this library builds). Returns the sign from swaps,
// or 0 when a pivot column vanishes entirely (determinant zero). rhs, when
// present, is eliminated alongside.
inline int bareiss_forward(IntMatrix& m, std::vector<BigInt>* rhs) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    std::size_t bw = m.bandwidth();
    if (bw == 0) bw = 1;
    int sign = 1;
    bool full = bw >= n;
    BigInt prev(1);
    BigInt tmp;
    // first row index not yet materialized
    std::size_t pending = full ? n : bw + 1;

    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (!full && pending == k + bw && pending < n) {
            // row enters the window: scale by p_{k-1} (= prev)
            if (prev != 1) {
                for (std::size_t j = pending >= bw ? pending - bw : 0; j < std::min(n, pending + bw + 1); ++j)
                    if (m.at(pending, j) != 0) mul_assign(m.at(pending, j), prev);
                if (rhs && (*rhs)[pending] != 0) mul_assign((*rhs)[pending], prev);
            }
            ++pending;
        }
        if (m.at(k, k) == 0) {
            // materialize everything, widen to full, and pivot by swapping
            for (std::size_t r = pending; r < n; ++r) {
                if (prev != 1) {
                    for (std::size_t j = 0; j < n; ++j)
                        if (m.at(r, j) != 0) mul_assign(m.at(r, j), prev);
                    if (rhs && (*rhs)[r] != 0) mul_assign((*rhs)[r], prev);
                }
            }
            pending = n;
            full = true;
            std::size_t swap_row = k;
            for (std::size_t i = k + 1; i < n; ++i)
                if (m.at(i, k) != 0) { swap_row = i; break; }
            if (swap_row == k) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(swap_row, j));
            if (rhs) std::swap((*rhs)[k], (*rhs)[swap_row]);
            sign = -sign;
        }
        const BigInt& pivot = m.at(k, k);
        const std::size_t row_hi = full ? n : std::min(n, k + bw + 1);
        const std::size_t piv_hi = full ? n : std::min(n, k + bw + 1);
        for (std::size_t i = k + 1; i < row_hi; ++i) {
            BigInt f = std::move(m.at(i, k));
            m.at(i, k) = 0;
            const std::size_t col_hi = full ? n : std::min(n, i + bw + 1);
            for (std::size_t j = k + 1; j < col_hi; ++j) {
                BigInt& x = m.at(i, j);
                mul_assign(x, pivot);
                if (f != 0 && j < piv_hi && m.at(k, j) != 0) {
                    mpz_mul(tmp.get_mpz_t(), f.get_mpz_t(), m.at(k, j).get_mpz_t());
                    x -= tmp;
                }
                if (x != 0) divexact_assign(x, prev);
            }
            if (rhs) {
                BigInt& x = (*rhs)[i];
                mul_assign(x, pivot);
                if (f != 0 && (*rhs)[k] != 0) {
                    mpz_mul(tmp.get_mpz_t(), f.get_mpz_t(), (*rhs)[k].get_mpz_t());
                    x -= tmp;
                }
                if (x != 0) divexact_assign(x, prev);
            }
        }
        prev = pivot;
    }
    return sign;
}

} // namespace detail

/// Exact determinant by fraction-free elimination. Consumes the matrix.
inline BigInt determinant(IntMatrix m) {
    const std::size_t n = m.size();
    if (n == 0) return BigInt(1);
    int sign = detail::bareiss_forward(m, nullptr);
    if (sign == 0) return BigInt(0);
    BigInt det = m.at(n - 1, n - 1);
    return sign < 0 ? BigInt(-det) : det;
}

/// Exact solution of A x = rhs over the rationals. Consumes both inputs.
/// Throws std::domain_error when A is singular.
inline std::vector<Rational> solve_linear_system(IntMatrix m, std::vector<BigInt> rhs) {
    const std::size_t n = m.size();
    if (rhs.size() != n) throw std::invalid_argument("solve_linear_system: size mismatch");
    if (n == 0) return {};
    if (detail::bareiss_forward(m, &rhs) == 0 || m.at(n - 1, n - 1) == 0)
        throw std::domain_error("singular matrix");
    // each eliminated row is still a valid equation; back-substitute exactly
    std::vector<Rational> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        Rational acc(rhs[ii]);
        for (std::size_t j = ii + 1; j < n; ++j)
            if (m.at(ii, j) != 0) acc -= Rational(m.at(ii, j)) * x[j];
        acc /= Rational(m.at(ii, ii));
        acc.canonicalize();
        x[ii] = std::move(acc);
    }
    return x;
}

/// "num/den" in lowest terms, or the plain integer when den == 1.
inline std::string to_fraction_string(const Rational& q) {
    Rational c = q;
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

} // namespace gridtrees
