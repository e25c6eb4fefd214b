#ifndef GEO4_CATALOG_HPP
#define GEO4_CATALOG_HPP

#include "geo4/invariants.hpp"
#include "geo4/swring.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace geo4 {

enum class Family { E, H, Z, Y, X2n, Synthetic };

const char* family_str(Family f);
std::optional<Family> family_from_str(const std::string& s);

enum class SlotKind { LagrangianTorusInCusp, SymplecticSurface };

// A marked embedded surface available for fiber summing. Only square-zero
// surfaces participate; a torus-in-cusp slot always has genus 1.
struct SurfaceSlot {
    std::string id;
    Int genus = 1;
    Int self_intersection = 0;
    SlotKind kind = SlotKind::SymplecticSurface;
    bool has_dual_sphere = false; // a sphere meeting the surface once
    std::string host;             // informal provenance note
    bool assumed_disjoint = true; // disjoint from the block's other slots

    bool operator==(const SurfaceSlot&) const = default;
};

enum class SWKind { Elliptic, MinimalGeneralType, Explicit, PartiallyKnown };

const char* sw_kind_str(SWKind k);

struct SWSpec {
    SWKind kind = SWKind::PartiallyKnown;
    std::optional<SWExpr> explicit_expr;       // Explicit entries loaded from file
    std::vector<std::string> designated;       // PartiallyKnown: known-nonzero classes
    std::optional<std::string> canonical;      // class pairing 2g-2 with symplectic slots

    bool operator==(const SWSpec&) const = default;
};

using ParamMap = std::map<std::string, Int>;

struct BlockSpec {
    Family family = Family::Synthetic;
    ParamMap params;
    CharNumbers invariants;
    bool spin = false;
    bool simply_connected = true;
    std::vector<SurfaceSlot> surfaces;
    SWSpec sw;
    // Model caveats: `approx_model` marks invariants adopted from asymptotic
    // values (the Y family); `lattice_model` marks synthetic bookkeeping
    // blocks exempt from Betti-number positivity.
    bool approx_model = false;
    bool lattice_model = false;
    std::string note;

    bool operator==(const BlockSpec&) const = default;
};

// "E(n=2)", "H(k=2)", "synthetic(id=1)", ... (canonical parameter order).
std::string block_label(const BlockSpec& b);
std::string block_label(Family f, const ParamMap& params);

// Exact characteristic numbers of a family member:
//   E(n) -> (n, 0); H with parameter k -> (4k-1, 8k-8);
//   Z(g) -> (2g^2-g+1, 8g^2-16g+8); Y(x) -> (6857x^2, 60068x^2);
//   X2n(n) -> (2n, 0).
// BadParams outside the validity range (E: n>=1, H: k>=1, Z: g>=1,
// Y: x>=1, X2n: n>=2).
CharNumbers block_invariants(Family f, const ParamMap& params);

// E spin iff n even; H spin iff k even; Z, Y, X2n always spin.
bool block_spin(Family f, const ParamMap& params);

// The marked surfaces each family offers (see module docs for hosts).
// Y additionally requires params["g"] >= 2 for its fiber genus.
std::vector<SurfaceSlot> block_surfaces(Family f, const ParamMap& params);

// Fully assembled catalog entry for a standard family.
BlockSpec make_block(Family f, const ParamMap& params);

// Synthetic entry: invariants given directly. `lattice_model` permits
// bookkeeping blocks whose derived b2- would be negative.
BlockSpec make_synthetic_block(const Int& id, const Int& chi, const Int& c, bool spin = true,
                               bool simply_connected = true, SWKind sw_kind = SWKind::MinimalGeneralType,
                               bool lattice_model = false);

// Formal SW invariant of a block over freshly named classes:
//   Elliptic E(n) -> (e^T - e^{-T})^{n-2}; MinimalGeneralType -> e^K +- e^{-K};
//   Explicit -> the stored expression; PartiallyKnown -> designated set only.
// `name_suffix` (e.g. "@3") qualifies class names; `provenance` tags them.
struct BlockSW {
    bool exact = false;
    SWExpr expr;                           // when exact
    ClassBasis partial_basis;              // when partial
    std::vector<ExpVec> partial_designated;
    std::optional<std::string> canonical_class;
};
BlockSW sw_of_block(const BlockSpec& b, const std::string& name_suffix,
                    const std::string& provenance);

// Throws ValidationError (with a field path) on any invariant breach:
// wrong recomputed invariants, spin asserted where block_spin denies it,
// spin blocks failing the allowed-point test (approx/lattice models exempt),
// duplicate slot ids, nonzero slot self-intersection, torus slots of
// genus != 1.
void validate_block(const BlockSpec& b, const std::string& where);

class Catalog {
public:
    Catalog() = default;
    explicit Catalog(std::vector<BlockSpec> blocks);

    const std::vector<BlockSpec>& blocks() const { return blocks_; }
    void add(BlockSpec b);

    const BlockSpec* find_synthetic(const Int& id) const;

    // A small default instance set exercising every family.
    static Catalog builtin();

    bool operator==(const Catalog&) const = default;

private:
    std::vector<BlockSpec> blocks_;
};

// UTF-8 JSON per the documented schema; load validates every entry.
Catalog load_catalog(const std::string& path);
void save_catalog(const Catalog& c, const std::string& path);
Catalog catalog_from_json(const std::string& json_text);
std::string catalog_to_json(const Catalog& c);

} // namespace geo4

#endif
