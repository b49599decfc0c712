#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace qpc {

using Integer = mpz_class;
using Rational = mpq_class;

// C(a, b) with the convention C(a, b) = 0 for a < 0, b < 0 or b > a.
inline Integer binomial(long long a, long long b) {
    Integer out;
    if (a < 0 || b < 0 || b > a) {
        return out;
    }
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(a), static_cast<unsigned long>(b));
    return out;
}

inline Integer pow2(unsigned long e) {
    Integer out;
    mpz_ui_pow_ui(out.get_mpz_t(), 2, e);
    return out;
}

inline Integer from_u64(std::uint64_t v) {
    Integer out;
    mpz_import(out.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    return out;
}

inline std::string to_decimal(const Integer& v) { return v.get_str(10); }

inline std::string to_fraction(const Rational& v) { return v.get_str(10); }

// Decimal rendering of a rational with a fixed number of digits after the
// point, rounded half away from zero.
std::string to_fixed(const Rational& v, int digits);

}  // namespace qpc
