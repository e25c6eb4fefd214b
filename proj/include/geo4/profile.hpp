#ifndef GEO4_PROFILE_HPP
#define GEO4_PROFILE_HPP

#include "geo4/geography.hpp"

#include <optional>
#include <string>

namespace geo4 {

// Engine configuration: the block catalog, the composite X used for lifting
// realizations, and the default enumeration bound. Profiles come from JSON
// files or from the built-in set:
//   desk           synthetic X = (1, 8): fine-grained lifting for coverage
//                  and strip runs at desk scale
//   desk-threshold synthetic X = (10, 96): the threshold worked example
//   desk-exotic    synthetic X = (1, 88), lattice model: small exotic
//                  families with tractable invariant expansions
//   paper          X = Y(x=10, g=3) summed k=100 times into Z(3)
struct Profile {
    std::string name = "desk";
    Int chi_max = 200;
    Catalog catalog;
    std::optional<CompositeX> composite;
};

Profile builtin_profile(const std::string& name);

// `spec` is a built-in profile name or a path to a profile JSON file:
// {"version": 1, "name": ..., "chi_max": ..., "catalog": "path"?,
//  "composite": {"type": "synthetic", "chi": .., "c": .., "id": ..,
//                "lattice_model": bool}
//            or {"type": "paper", "x": .., "g": .., "k": ..}}
Profile load_profile(const std::string& spec);

} // namespace geo4

#endif
