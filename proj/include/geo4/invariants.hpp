#ifndef GEO4_INVARIANTS_HPP
#define GEO4_INVARIANTS_HPP

#include "geo4/numeric.hpp"

#include <optional>
#include <string>
#include <vector>

namespace geo4 {

// Characteristic numbers of a simply connected closed 4-manifold, kept
// mutually consistent:
//   e = 2 + b2+ + b2-,  sigma = b2+ - b2-,  4*chi = sigma + e,
//   c = 3*sigma + 2*e,  sigma = c - 8*chi.
// `lattice_model` marks bookkeeping-only values (a catalog block may model a
// lattice point whose derived b2- is negative; no actual manifold is claimed).
struct CharNumbers {
    Int e;
    Int sigma;
    Int chi;
    Int c;
    Int b2plus;
    Int b2minus;
    bool lattice_model = false;

    bool operator==(const CharNumbers&) const = default;
};

struct LatticePoint {
    Int chi;
    Int c;

    bool operator==(const LatticePoint&) const = default;
};

// Throws NonIntegralChi when 4 does not divide sigma + e.
CharNumbers char_from_betti(const Int& b2plus, const Int& b2minus);

// Inverse direction: b2+ = 2*chi - 1, b2- = 10*chi - 1 - c (simply connected).
// Throws ValidationError when a Betti number comes out negative, unless
// `allow_lattice_model` is set, in which case the result is flagged.
CharNumbers char_from_chi_c(const Int& chi, const Int& c, bool allow_lattice_model = false);

struct AllowedVerdict {
    bool allowed = false;
    std::vector<std::string> violations; // each failed constraint by name

    explicit operator bool() const { return allowed; }
};

// Allowed lattice point: c >= 0 and c == 8*chi (mod 16). Collects every
// failed constraint instead of failing fast.
AllowedVerdict is_allowed(const LatticePoint& p);

struct HomeoType {
    Int b2plus;
    Int b2minus;
    Int sigma;
    // Present when sigma == 0 and spin: the connected-sum model
    // "(2n+1)(S^2 x S^2)" with n = chi - 1, rendered with 2n+1 evaluated.
    std::optional<std::string> standard_name;
    std::optional<Int> standard_n;
    bool betti_valid = true; // both Betti numbers nonnegative

    bool same_type(const HomeoType& o) const {
        return b2plus == o.b2plus && b2minus == o.b2minus && sigma == o.sigma &&
               standard_name == o.standard_name;
    }
};

// Throws NotAllowed when spin is requested and the congruence fails.
HomeoType homeo_type(const LatticePoint& p, bool spin);

enum class LineName {
    Elliptic,        // c = 0
    Noether,         // c = 2*chi - 6
    NoetherParallel12, // c = 2*chi - 12
    SignatureZero,   // c = 8*chi
    Ratio876,        // c = (876/100)*chi
    BMY,             // c = 9*chi
    FLine,           // c = f(chi), slope/intercept from a chosen composite
};

const char* line_name_str(LineName n);

// An affine map chi -> c with exact rational coefficients.
struct RegionLine {
    LineName name;
    Rat slope;
    Rat intercept;

    Rat at(const Int& chi) const { return slope * Rat(chi) + intercept; }
    Rat at(const Rat& chi) const { return slope * chi + intercept; }
};

RegionLine named_line(LineName n);

// f(chi) = c(X)/chi(X) * [chi - c(X)/2 - 6] + c(X), slope exact rational.
// Throws ZeroChi when chi(X) == 0.
RegionLine f_line(const CharNumbers& x);
RegionLine f_line(const Int& chi_x, const Int& c_x);

} // namespace geo4

#endif
