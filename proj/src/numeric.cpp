#include "geo4/numeric.hpp"

namespace geo4 {

std::string decimal_string(const Rat& r, unsigned digits) {
    Int num = rat_num(r);
    Int den = rat_den(r);
    bool neg = num < 0;
    if (neg) num = -num;

    Int whole = num / den;
    Int rem = num % den;

    std::string out;
    if (neg && (whole != 0 || rem != 0)) out += '-';
    out += whole.str();
    if (digits == 0) return out;
    out += '.';
    for (unsigned i = 0; i < digits; ++i) {
        rem *= 10;
        Int d = rem / den;
        rem %= den;
        out += static_cast<char>('0' + static_cast<int>(d));
    }
    return out;
}

std::string rational_string(const Rat& r) {
    if (rat_den(r) == 1) return rat_num(r).str();
    return rat_num(r).str() + "/" + rat_den(r).str();
}

} // namespace geo4
