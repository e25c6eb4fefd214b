#ifndef GEO4_NUMERIC_HPP
#define GEO4_NUMERIC_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace geo4 {

// All engine arithmetic is exact. Floating point never enters a predicate;
// it is only produced on demand for human-readable rendering. Expression
// templates are off so arithmetic yields plain values.
using Int = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                          boost::multiprecision::et_off>;
using Rat = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                          boost::multiprecision::et_off>;

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

// Mathematical mod: result in [0, m) for m > 0, regardless of the sign of a.
inline Int mod_floor(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

// Smallest integer >= r.
inline Int ceil_rat(const Rat& r) {
    Int q = rat_num(r) / rat_den(r);
    if (q * rat_den(r) < rat_num(r)) ++q;
    return q;
}

inline Int floor_rat(const Rat& r) {
    Int q = rat_num(r) / rat_den(r);
    if (q * rat_den(r) > rat_num(r)) --q;
    return q;
}

// Fixed-point decimal expansion of an exact rational, truncated (not rounded)
// to `digits` places after the point. Used for reports like "8.76009...".
std::string decimal_string(const Rat& r, unsigned digits);

// Renders p/q as "p/q", or "p" when q == 1.
std::string rational_string(const Rat& r);

} // namespace geo4

#endif
