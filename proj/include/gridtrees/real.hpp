#pragma once

#include <cstdarg>
#include <cstdio>
#include <string>
#include <utility>

#include <gmpxx.h>
#include <mpfr.h>

#include "gridtrees/exact.hpp"

namespace gridtrees {

/// Fixed-precision MPFR value with explicit rounding on every operation.
/// Only the handful of operations the library needs are wrapped.
class Real {
public:
    static constexpr mpfr_prec_t precision = 256;

    Real() { mpfr_init2(v_, precision); mpfr_set_zero(v_, 1); }
    Real(const Real& o) { mpfr_init2(v_, precision); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept { mpfr_init2(v_, precision); mpfr_swap(v_, o.v_); }
    Real& operator=(Real o) noexcept { mpfr_swap(v_, o.v_); return *this; }
    ~Real() { mpfr_clear(v_); }

    static Real of_long(long x) { Real r; mpfr_set_si(r.v_, x, MPFR_RNDN); return r; }
    static Real of_integer(const BigInt& z, mpfr_rnd_t rnd) {
        Real r; mpfr_set_z(r.v_, z.get_mpz_t(), rnd); return r;
    }
    static Real of_rational(const Rational& q, mpfr_rnd_t rnd) {
        Real r; mpfr_set_q(r.v_, q.get_mpq_t(), rnd); return r;
    }
    static Real pi(mpfr_rnd_t rnd) { Real r; mpfr_const_pi(r.v_, rnd); return r; }
    static Real catalan(mpfr_rnd_t rnd) { Real r; mpfr_const_catalan(r.v_, rnd); return r; }

    Real log(mpfr_rnd_t rnd) const { Real r; mpfr_log(r.v_, v_, rnd); return r; }
    Real exp(mpfr_rnd_t rnd) const { Real r; mpfr_exp(r.v_, v_, rnd); return r; }
    Real mul_ui(unsigned long k, mpfr_rnd_t rnd) const { Real r; mpfr_mul_ui(r.v_, v_, k, rnd); return r; }
    Real div(const Real& d, mpfr_rnd_t rnd) const { Real r; mpfr_div(r.v_, v_, d.v_, rnd); return r; }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    /// Exact dyadic rational equal to this value.
    Rational to_rational() const {
        mpz_class mant;
        mpfr_exp_t e = mpfr_get_z_2exp(mant.get_mpz_t(), v_);
        Rational q(mant);
        if (e >= 0) {
            mpz_mul_2exp(q.get_num().get_mpz_t(), q.get_num().get_mpz_t(), static_cast<mp_bitcnt_t>(e));
        } else {
            mpz_mul_2exp(q.get_den().get_mpz_t(), q.get_den().get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
        }
        q.canonicalize();
        return q;
    }

    int cmp(const Real& o) const { return mpfr_cmp(v_, o.v_); }

    /// Decimal string with the given number of significant digits.
    std::string str_significant(int digits) const {
        char* out = nullptr;
        mpfr_asprintf(&out, "%.*Rg", digits, v_);
        std::string s(out);
        mpfr_free_str(out);
        return s;
    }

    /// Fixed-point decimal string with the given number of fractional digits.
    std::string str_fixed(int digits) const {
        char* out = nullptr;
        mpfr_asprintf(&out, "%.*Rf", digits, v_);
        std::string s(out);
        mpfr_free_str(out);
        return s;
    }

private:
    mpfr_t v_;
};

/// Natural log of an exact positive integer, as a double.
inline double log_of_integer(const BigInt& z) {
    if (z <= 0) throw std::domain_error("log_of_integer: nonpositive argument");
    return Real::of_integer(z, MPFR_RNDN).log(MPFR_RNDN).to_double();
}

/// Decimal rendering of an exact rational with significant digits (>= 12 by default).
inline std::string rational_to_decimal(const Rational& q, int digits = 12) {
    return Real::of_rational(q, MPFR_RNDN).str_significant(digits);
}

/// Fixed-point rendering of an exact rational.
inline std::string rational_to_fixed(const Rational& q, int digits) {
    return Real::of_rational(q, MPFR_RNDN).str_fixed(digits);
}

} // namespace gridtrees
