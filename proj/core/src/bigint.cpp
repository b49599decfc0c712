#include "qpc/bigint.hpp"

namespace qpc {

std::string to_fixed(const Rational& v, int digits) {
    if (digits < 0) {
        digits = 0;
    }
    const bool negative = v < 0;
    const Rational a = negative ? Rational(-v) : v;
    const Integer scale = [&] {
        Integer s;
        mpz_ui_pow_ui(s.get_mpz_t(), 10, static_cast<unsigned long>(digits));
        return s;
    }();
    // round(a * 10^digits), halves away from zero
    Integer scaled = (a.get_num() * scale * 2 + a.get_den()) / (a.get_den() * 2);
    std::string s = scaled.get_str(10);
    if (digits > 0) {
        if (s.size() <= static_cast<std::size_t>(digits)) {
            s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
        }
        s.insert(s.size() - static_cast<std::size_t>(digits), ".");
    }
    if (negative && scaled != 0) {
        s.insert(0, "-");
    }
    return s;
}

}  // namespace qpc
