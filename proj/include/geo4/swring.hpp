#ifndef GEO4_SWRING_HPP
#define GEO4_SWRING_HPP

#include "geo4/numeric.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace geo4 {

// A named second-cohomology class. `name` is the unique handle inside a
// basis; `provenance` records where in a construction the class came from
// (e.g. "leaf3:E(4)", "sum2", "knot(2,5)"). Merging two bases that claim the
// same name with different provenance is a BasisClash.
struct ClassGen {
    std::string name;
    std::string provenance;

    bool operator==(const ClassGen&) const = default;
};

class ClassBasis {
public:
    ClassBasis() = default;
    explicit ClassBasis(std::vector<ClassGen> gens);

    std::size_t size() const { return gens_.size(); }
    const ClassGen& gen(std::size_t i) const { return gens_[i]; }
    const std::vector<ClassGen>& gens() const { return gens_; }

    // Index of a generator by name, or nullopt.
    std::optional<std::size_t> index_of(const std::string& name) const;

    // Appends a generator; throws BasisClash on a name collision with
    // different provenance, returns the existing index when identical.
    std::size_t add(const ClassGen& g);

    bool operator==(const ClassBasis&) const = default;

private:
    std::vector<ClassGen> gens_;
};

using ExpVec = std::vector<std::int64_t>;

// Element of the integral group ring Z[H], H free abelian on the basis
// classes. Terms are kept in a canonical order (lexicographic on exponent
// vectors); zero coefficients are never stored.
class SWExpr {
public:
    SWExpr() = default;
    explicit SWExpr(ClassBasis basis) : basis_(std::move(basis)) {}

    static SWExpr zero(ClassBasis basis = {});
    static SWExpr constant(const Int& k, ClassBasis basis = {});
    // e^{coef * gen}: single-generator monomial with coefficient 1.
    static SWExpr monomial(const ClassBasis& basis, std::size_t gen_index, std::int64_t exponent,
                           const Int& coef = 1);
    // Bulk constructor: exponent vectors must already have basis width; equal
    // keys are aggregated and zero sums dropped.
    static SWExpr from_terms(ClassBasis basis, std::vector<std::pair<ExpVec, Int>> terms);

    const ClassBasis& basis() const { return basis_; }
    const std::map<ExpVec, Int>& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const ExpVec& exp, const Int& coef);

    bool operator==(const SWExpr&) const = default;

    // Rendering: descending lexicographic term order,
    // e.g. "+1*exp(2T) -2 +1*exp(-2T)".
    std::string text() const;

private:
    ClassBasis basis_;
    std::map<ExpVec, Int> terms_;
};

// Ring arithmetic. Operands over different bases are merged by name
// (left basis order first, new right generators appended).
SWExpr add(const SWExpr& a, const SWExpr& b);
SWExpr sub(const SWExpr& a, const SWExpr& b);
SWExpr negate(const SWExpr& a);
SWExpr mul(const SWExpr& a, const SWExpr& b);
SWExpr power(const SWExpr& a, unsigned n);
// Negates every exponent vector.
SWExpr conjugate(const SWExpr& a);

// Rewrites `a` over a merged basis that also contains the generators of
// `extra` (by name). Exposed for deterministic cross-expression comparisons.
SWExpr rebase(const SWExpr& a, const ClassBasis& extra);

// Symmetrized Alexander polynomial of the (p, q) torus knot as an element of
// Z[t, t^-1]:  t^{-(p-1)(q-1)/2} (t^{pq}-1)(t-1) / ((t^p-1)(t^q-1)).
// Computed by the numerical-semigroup expansion of the quotient; coefficients
// are all +-1. Requires gcd(p, q) = 1 and 2 <= p < q (BadKnotParams).
SWExpr alexander_torus_knot(std::int64_t p, std::int64_t q,
                            const std::string& var_name = "t");

// (e^T - e^{-T})^{n-2} over a fresh single-class basis: the elliptic-surface
// form whose support is the 2kT ladder. n >= 2; n == 2 gives the constant 1
// over an empty basis.
SWExpr sw_elliptic_form(std::int64_t n, const std::string& t_name, const std::string& provenance);

// e^K + (-1)^chi e^{-K}: the one-basic-class form for a minimal surface of
// general type, with the charge-conjugation sign convention
// SW(-K) = (-1)^chi SW(K) isolated here.
SWExpr sw_minimal_general_type(const std::string& k_name, const std::string& provenance,
                               const Int& chi);

// SW_{X #_f Y} = SW_X * SW_Y * (e^f - e^{-f})^2, with f a fresh class of this
// sum. The b2+ > 1 hypothesis is the caller's to check (the evaluator records
// a formal-only warning when violated).
SWExpr sw_fiber_sum_torus(const SWExpr& sw_a, const SWExpr& sw_b, const std::string& f_name,
                          const std::string& f_provenance);

// SW_{X_K} = SW_X * Delta_K(t) with t = e^{2T}: substitute exponent 2*T per
// power of t and multiply. T_name must be a basis generator of sw (or is
// added if sw does not mention it yet, e.g. SW = 1).
SWExpr sw_knot_surgery(const SWExpr& sw, const std::string& t_class_name, std::int64_t p,
                       std::int64_t q);

struct BasicClassSet {
    std::vector<ExpVec> classes;  // support; may be truncated for huge sets
    bool classes_complete = true;
    Int count = 0;
    Int count_up_to_sign = 0; // orbits under global negation
};

BasicClassSet basic_classes(const SWExpr& sw);

// Support sets of partially known invariants: a sign-closed set of exponent
// vectors known to have nonzero coefficient.
struct DesignatedSet {
    ClassBasis basis;
    std::vector<ExpVec> classes;
    bool classes_complete = true;
    Int count = 0;
    Int count_up_to_sign = 0;
};

// The basic-class census of
//   W = X #_f ... #_f X (m) #_f [H(7) #_f] H(8k'-1) #_f E(2n):
// K_H (+- K_{H7}) +- 2kT +- K_X ... +- K_X + {0,+-2f} + ... + {0,+-2f}
// with m+1 (m+2 with the H(7) factor) gluing-torus summands, closed under
// global negation. Counts are always exact; the class list is materialized
// only when its size is at most `materialize_cap`.
DesignatedSet w_basic_classes(std::int64_t m, std::int64_t k_prime, std::int64_t n, bool with_h7,
                              std::size_t materialize_cap = 200000);

// A class known to pair as <l, [Sigma]> = `pairing` against the surface of an
// upcoming genus-g sum.
struct DesignatedClass {
    std::string name;
    Int pairing;
};

// Genus-g (> 1) fiber sum: a pair of classes pairing 2g-2 against the summed
// surface induces a nonzero class of the composite. Returns the fresh class
// name; throws PairingMismatch otherwise.
std::string propagate_designated_class(const DesignatedClass& l1, const DesignatedClass& l2,
                                       const Int& genus, const std::string& fresh_name);

// Sorted multiset of absolute coefficients: the renaming-invariant
// distinctness proxy.
std::vector<Int> abs_coeff_multiset(const SWExpr& sw);

// Canonical fingerprint invariant under generator renaming/reordering:
// generators are sorted by their column signature before terms are listed.
std::string canonical_key(const SWExpr& sw);

// JSON text per the external interface:
// {"basis": [...], "terms": [{"exp": [...], "coef": ...}]}.
std::string sw_to_json(const SWExpr& sw);

} // namespace geo4

#endif
