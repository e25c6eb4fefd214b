#ifndef GEO4_CONSTRUCT_HPP
#define GEO4_CONSTRUCT_HPP

#include "geo4/catalog.hpp"
#include "geo4/invariants.hpp"
#include "geo4/swring.hpp"

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace geo4 {

struct TorusKnot {
    std::int64_t p = 2;
    std::int64_t q = 3;

    bool operator==(const TorusKnot&) const = default;
};

class ConstructionExpr;
using ExprPtr = std::shared_ptr<const ConstructionExpr>;

class ConstructionExpr {
public:
    struct Leaf {
        BlockSpec block;
    };
    struct FiberSum {
        ExprPtr left;
        ExprPtr right;
        std::string left_slot;
        std::string right_slot;
    };
    struct KnotSurgery {
        ExprPtr base;
        std::string torus_slot;
        TorusKnot knot;
    };

    std::variant<Leaf, FiberSum, KnotSurgery> node;
};

ExprPtr make_leaf(BlockSpec block);
ExprPtr make_fiber_sum(ExprPtr left, ExprPtr right, std::string left_slot, std::string right_slot);
// Validates gcd(p, q) = 1 and 2 <= p < q (BadKnotParams).
ExprPtr make_knot_surgery(ExprPtr base, std::string torus_slot, TorusKnot knot);

bool expr_equal(const ExprPtr& a, const ExprPtr& b);

// Left-associated chain of `copies` copies of `base` summed along `slot`,
// optionally closed off with `tail`. copies >= 1; copies == 1 with no tail
// returns `base` unchanged.
ExprPtr iterate_fiber_sum(const ExprPtr& base, std::int64_t copies, const std::string& slot,
                          const ExprPtr& tail = nullptr);

// A surface slot as visible in an evaluation report.
struct EvalSlot {
    SurfaceSlot slot;          // slot.id is the rendered (deduplicated) id
    std::string base_id;       // id before any "@" qualification
    int origin_leaf = -1;      // 1-based leaf index, -1 for induced surfaces
    std::string origin_tag;    // "3" for leaf 3, "s2" for the surface of sum 2
    std::string sw_class;      // name of the class a torus slot represents
};

enum class SWStatusKind { Exact, Partial, Unknown };

struct PartialSW {
    ClassBasis basis;
    std::vector<ExpVec> designated; // sign-closed set of known-nonzero classes
    std::optional<std::string> canonical; // class pairing 2g-2 with symplectic slots
};

struct SWStatus {
    SWStatusKind kind = SWStatusKind::Unknown;
    std::optional<SWExpr> exact;
    std::optional<PartialSW> partial;
    std::optional<std::string> canonical; // for exact single-class forms
    std::string note;
};

struct EvalReport {
    CharNumbers invariants;
    bool spin = false;
    bool simply_connected = false;
    bool symplectic = false;
    std::vector<EvalSlot> slots;
    SWStatus sw;
    std::vector<std::string> provenance; // deduplicated applied-rule notes
    bool sw_formal_warning = false;      // a torus product ran with b2+ <= 1
    bool model_approx = false;           // an approximate/lattice model block is involved
    int leaf_count = 0;

    const EvalSlot* find_slot(const std::string& id) const;
};

struct EvalOptions {
    bool with_sw = true; // coverage runs skip the (possibly huge) SW expansion
};

// Evaluates a construction: fiber sums add (g-1) to chi, 8(g-1) to c and
// nothing to sigma; spin and symplectic are preserved; simple connectivity
// needs a dual sphere on a consumed slot; knot surgery changes nothing but
// the formal SW invariant.
EvalReport eval(const ExprPtr& expr, const EvalOptions& opts = {});

// Text grammar:
//   expr  := block | "fsum(" slot "," slot ";" expr "," expr ")"
//          | "surgery(" slot ",(" int "," int ");" expr ")"
//   block := FAMILY "(" param "=" int {"," param "=" int} ")"
// Whitespace insignificant; slot names may use any non-delimiter UTF-8.
std::string serialize(const ExprPtr& expr);
// `catalog` resolves synthetic(id=...) references; standard families need no
// catalog entry.
ExprPtr parse(const std::string& text, const Catalog& catalog = {});

// JSON AST mirror of the grammar.
std::string expr_to_json(const ExprPtr& expr);
ExprPtr expr_from_json(const std::string& json_text, const Catalog& catalog = {});

enum class Admissibility { Admissible, NotAdmissible, Unknown };

struct AdmissibilityVerdict {
    Admissibility value = Admissibility::Unknown;
    std::vector<std::string> reasoning;
};

// Complex-surface admissibility of an evaluated construction: with c > 0,
// more than one basic class up to sign rules out a minimal complex surface of
// general type; with c = 0 the coefficient multiset is compared against the
// elliptic reference E(chi). Partial SW yields Unknown.
AdmissibilityVerdict is_complex_admissible(const EvalReport& report);

} // namespace geo4

#endif
