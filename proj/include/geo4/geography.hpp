#ifndef GEO4_GEOGRAPHY_HPP
#define GEO4_GEOGRAPHY_HPP

#include "geo4/construct.hpp"

#include <optional>
#include <string>
#include <vector>

namespace geo4 {

// A machine-checkable realization: the expression re-evaluates to the lattice
// point with every required flag. `checks` lists each verified fact.
struct Certificate {
    LatticePoint point;
    ExprPtr expr;
    std::string expr_text;
    EvalReport report;
    std::vector<std::pair<std::string, bool>> checks;
    bool ok = false;
};

Certificate certify(const LatticePoint& p, const ExprPtr& expr);
std::string certificate_to_json(const Certificate& c);

// Realization by the base families:
//   c = 0              -> X2n(chi/2)                        (chi even >= 4)
//   c == 8  (mod 16)   -> H(8k'-1) #_f E(2n), n >= 0        (n = 0: H alone)
//   c == 0  (mod 16)   -> H(7) #_f H(8k'-1) #_f E(2n)       (n = 0 omits E)
// Preconditions: allowed point inside 0 <= c <= 2chi-12, on the line
// c = 2chi-6, or on the elliptic line (OutOfRegion otherwise; NoRealization
// when the arithmetic is infeasible, e.g. the elliptic point chi = 2).
struct BaseRealization {
    Certificate cert;
    Int k_prime = 0; // H(8k'-1) index, 0 when no H factor
    Int n = 0;       // E(2n) index, 0 when the E factor is omitted
    bool has_h7 = false;
    bool x2n_form = false;
};

BaseRealization realize_base(const LatticePoint& p);

// The composite X = Y #_{Sigma_g} ... #_{Sigma_g} Y (k) #_{Sigma_g} Z with its
// validation record: exact ratio c(X)/chi(X), the ratio > 8.76 flag and the
// positive-signature flag (recorded, not enforced).
struct CompositeX {
    ExprPtr expr;
    EvalReport report;
    Rat ratio;
    bool sigma_positive = false;
    bool ratio_gt_876 = false;
    std::string label;
};

CompositeX build_composite_X(const Int& x, const Int& g, const Int& k);
// Desk-scale stand-in: a synthetic catalog block used directly as X.
CompositeX composite_from_block(const BlockSpec& block);

// W = X #_f ... #_f X (m) #_f V with V from realize_base; searches m upward
// from 0 and takes the first feasible residual (m = 0 is realize_base
// itself). Preconditions: allowed, first quadrant, c <= f(chi) for the
// configured X. NotCovered carries the search trace.
struct GeneralRealization {
    Certificate cert;
    Int m = 0;
    BaseRealization base;
    std::vector<std::string> trace;
};

GeneralRealization realize_general(const LatticePoint& p, const CompositeX& X,
                                   bool require_e_factor = false);

// Region membership built from exact line inequalities and congruences.
struct RegionConstraint {
    enum class Kind { Nonneg, Congruence, LineLE, LineGE };
    Kind kind = Kind::Nonneg;
    Rat slope;      // lines: c <= / >= slope*chi + intercept
    Rat intercept;
    Int modulus = 16; // congruence: c - 8*chi == residue (mod modulus)
    Int residue = 0;
};

struct RegionSpec {
    std::string name;
    Int chi_max = 0;
    std::vector<RegionConstraint> constraints;

    bool contains(const LatticePoint& p) const;
    // Smallest line_le bound at chi; nullopt when the region is unbounded.
    std::optional<Rat> upper_bound(const Int& chi) const;
};

RegionSpec region_from_json_text(const std::string& text);
RegionSpec load_region(const std::string& path);

struct CoveragePoint {
    LatticePoint p;
    bool realized = false;
    Int m = 0;             // X copies used (0 = base families)
    std::string expr_text; // when realized
    std::string reason;    // when not
};

struct CoverageReport {
    std::string region_name;
    Int chi_max;
    std::vector<CoveragePoint> points; // chi ascending, then c ascending
    Int realized_count = 0;
    Int unrealized_count = 0;
    bool fully_covered = false;
};

// Enumerates the allowed points of the region up to chi_max and runs the
// realization search on each (base families first, then X lifting when a
// composite is configured). Point evaluation may run on several threads; the
// report order is independent of the schedule.
CoverageReport verify_coverage(const RegionSpec& region, const CompositeX* X = nullptr,
                               unsigned threads = 1);

std::string coverage_to_json(const CoverageReport& r);
std::string coverage_table(const CoverageReport& r);

// Spin complex surfaces inside the strip 2chi-6 <= c < 3(chi-5) exist only on
// the two exceptional families; the verdict contrasts that with symplectic
// realizability.
struct PpxVerdict {
    enum class Value { NotApplicable, Admissible, NotAdmissible };
    Value value = Value::NotApplicable;
    std::vector<std::string> reasons;
};

PpxVerdict ppx_admissible(const LatticePoint& p);

// Least chi with f(chi) >= 8*chi for the configured composite, exact.
// RatioTooSmall when the slope is <= 8.
Int exotic_threshold(const CompositeX& X);

struct ExoticMember {
    ExprPtr expr;
    std::string expr_text;
    std::optional<TorusKnot> knot; // base member has none
    EvalReport report;
    std::vector<Int> sw_multiset; // absolute coefficients, sorted
};

struct ExoticFamily {
    Int n;
    LatticePoint point;   // (n+1, 8n+8)
    HomeoType homeo;      // shared by every member
    Int threshold;        // chi threshold of the configured X
    Int m = 0;            // X copies inside W
    std::vector<ExoticMember> members;
    bool pairwise_distinct = false;
    std::vector<std::string> notes;
};

// The base W realizing (n+1, 8n+8) plus knot surgeries by
// T(2,3), T(2,5), ..., T(2, 2*count-1) on the E factor's fiber torus.
// BelowThreshold when n + 1 < exotic_threshold(X).
ExoticFamily exotic_family(const Int& n, std::int64_t count, const CompositeX& X);

} // namespace geo4

#endif
