#pragma once

#include <stdexcept>
#include <string>

#include "gridtrees/exact.hpp"
#include "gridtrees/real.hpp"

namespace gridtrees {

// The base of the bulk limit, b = exp(4*C/pi) with C Catalan's constant.
// All comparisons against the irrational constants go through certified
// rational brackets computed once with directed rounding, so a strict
// verdict is never the artifact of rounding. Catalan to 30 digits is
// 0.915965594177219015054603514932; the computed constant is checked
// against that prefix at startup.
struct BulkConstants {
    Rational b_lo, b_hi;        // b_lo < exp(4C/pi) < b_hi
    Rational ln_b_lo, ln_b_hi;  // brackets of 4C/pi
    Rational ln4_lo, ln4_hi;    // brackets of ln 4
    double b;                   // ~3.2099123
    double ln_b;                // ~1.1662436
    double ln4;                 // ~1.3862944
};

namespace detail {

inline BulkConstants compute_bulk_constants() {
    const std::string catalan_prefix = "0.91596559417721901505460351493";
    Real c_lo = Real::catalan(MPFR_RNDD);
    Real c_hi = Real::catalan(MPFR_RNDU);
    if (c_lo.str_fixed(29).substr(0, catalan_prefix.size()) != catalan_prefix)
        throw std::logic_error("Catalan constant self-check failed");

    // 4*C is exact in binary; the quotient uses the oppositely rounded pi
    Real lnb_lo = c_lo.mul_ui(4, MPFR_RNDD).div(Real::pi(MPFR_RNDU), MPFR_RNDD);
    Real lnb_hi = c_hi.mul_ui(4, MPFR_RNDU).div(Real::pi(MPFR_RNDD), MPFR_RNDU);
    Real b_lo = lnb_lo.exp(MPFR_RNDD);
    Real b_hi = lnb_hi.exp(MPFR_RNDU);
    Real four = Real::of_long(4);
    Real ln4_lo = four.log(MPFR_RNDD);
    Real ln4_hi = four.log(MPFR_RNDU);

    BulkConstants k;
    k.b_lo = b_lo.to_rational();
    k.b_hi = b_hi.to_rational();
    k.ln_b_lo = lnb_lo.to_rational();
    k.ln_b_hi = lnb_hi.to_rational();
    k.ln4_lo = ln4_lo.to_rational();
    k.ln4_hi = ln4_hi.to_rational();
    k.b = b_lo.to_double();
    k.ln_b = lnb_lo.to_double();
    k.ln4 = ln4_lo.to_double();
    if (!(k.b_lo < k.b_hi && Rational(32099, 10000) < k.b_lo && k.b_hi < Rational(32100, 10000)))
        throw std::logic_error("bulk-limit bracket self-check failed");
    return k;
}

} // namespace detail

inline const BulkConstants& bulk_constants() {
    static const BulkConstants k = detail::compute_bulk_constants();
    return k;
}

/// Certified "x > b": true only when x exceeds the upper bracket.
inline bool certified_above_b(const Rational& x) { return x > bulk_constants().b_hi; }

/// Certified "x < b": true only when x is below the lower bracket.
inline bool certified_below_b(const Rational& x) { return x < bulk_constants().b_lo; }

} // namespace gridtrees
