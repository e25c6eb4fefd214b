#include "geo4/invariants.hpp"

#include "geo4/errors.hpp"

namespace geo4 {

CharNumbers char_from_betti(const Int& b2plus, const Int& b2minus) {
    if (b2plus < 0 || b2minus < 0)
        fail(Errc::ValidationError, "b2+ and b2- must be nonnegative");
    CharNumbers r;
    r.b2plus = b2plus;
    r.b2minus = b2minus;
    r.e = 2 + b2plus + b2minus;
    r.sigma = b2plus - b2minus;
    Int s = r.sigma + r.e;
    if (mod_floor(s, 4) != 0)
        fail(Errc::NonIntegralChi,
             "sigma + e = " + s.str() + " is not divisible by 4 (b2+ = " + b2plus.str() +
                 ", b2- = " + b2minus.str() + ")");
    r.chi = s / 4;
    r.c = 3 * r.sigma + 2 * r.e;
    return r;
}

CharNumbers char_from_chi_c(const Int& chi, const Int& c, bool allow_lattice_model) {
    CharNumbers r;
    r.chi = chi;
    r.c = c;
    r.sigma = c - 8 * chi;
    r.e = 4 * chi - r.sigma; // 4*chi = sigma + e
    r.b2plus = 2 * chi - 1;
    r.b2minus = 10 * chi - 1 - c;
    if (r.b2plus < 0 || r.b2minus < 0) {
        if (!allow_lattice_model)
            fail(Errc::ValidationError,
                 "(chi, c) = (" + chi.str() + ", " + c.str() +
                     ") has a negative Betti number (b2+ = " + r.b2plus.str() +
                     ", b2- = " + r.b2minus.str() + ")");
        r.lattice_model = true;
    }
    return r;
}

AllowedVerdict is_allowed(const LatticePoint& p) {
    AllowedVerdict v;
    if (p.c < 0) v.violations.push_back("c < 0");
    if (mod_floor(p.c - 8 * p.chi, 16) != 0) v.violations.push_back("congruence violated");
    v.allowed = v.violations.empty();
    return v;
}

HomeoType homeo_type(const LatticePoint& p, bool spin) {
    if (spin) {
        AllowedVerdict v = is_allowed(p);
        if (!v.allowed) {
            std::string why;
            for (const auto& s : v.violations) {
                if (!why.empty()) why += "; ";
                why += s;
            }
            fail(Errc::NotAllowed, "(" + p.chi.str() + ", " + p.c.str() + "): " + why);
        }
    }
    HomeoType h;
    h.b2plus = 2 * p.chi - 1;
    h.b2minus = 10 * p.chi - 1 - p.c;
    h.sigma = p.c - 8 * p.chi;
    h.betti_valid = h.b2plus >= 0 && h.b2minus >= 0;
    if (spin && h.sigma == 0 && p.chi >= 1) {
        Int n = p.chi - 1;
        h.standard_n = n;
        h.standard_name = (2 * n + 1).str() + "(S^2 x S^2)";
    }
    return h;
}

const char* line_name_str(LineName n) {
    switch (n) {
        case LineName::Elliptic: return "elliptic";
        case LineName::Noether: return "noether";
        case LineName::NoetherParallel12: return "noether12";
        case LineName::SignatureZero: return "sig0";
        case LineName::Ratio876: return "ratio876";
        case LineName::BMY: return "bmy";
        case LineName::FLine: return "fline";
    }
    return "?";
}

RegionLine named_line(LineName n) {
    switch (n) {
        case LineName::Elliptic: return {n, Rat(0), Rat(0)};
        case LineName::Noether: return {n, Rat(2), Rat(-6)};
        case LineName::NoetherParallel12: return {n, Rat(2), Rat(-12)};
        case LineName::SignatureZero: return {n, Rat(8), Rat(0)};
        case LineName::Ratio876: return {n, Rat(876, 100), Rat(0)};
        case LineName::BMY: return {n, Rat(9), Rat(0)};
        case LineName::FLine:
            fail(Errc::BadParams, "the f line needs a composite; use f_line()");
    }
    fail(Errc::BadParams, "unknown line");
}

RegionLine f_line(const Int& chi_x, const Int& c_x) {
    if (chi_x == 0) fail(Errc::ZeroChi, "f line is undefined for chi(X) = 0");
    Rat slope(c_x, chi_x);
    // f(chi) = slope * (chi - c/2 - 6) + c
    Rat intercept = Rat(c_x) - slope * (Rat(c_x, 2) + 6);
    return {LineName::FLine, slope, intercept};
}

RegionLine f_line(const CharNumbers& x) { return f_line(x.chi, x.c); }

} // namespace geo4
