#include "geo4/profile.hpp"

#include "geo4/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace geo4 {

using nlohmann::json;

namespace {

Profile synthetic_profile(const std::string& name, const Int& chi, const Int& c,
                          bool lattice_model) {
    Profile p;
    p.name = name;
    p.catalog = Catalog::builtin();
    BlockSpec x = make_synthetic_block(1, chi, c, true, true, SWKind::MinimalGeneralType,
                                       lattice_model);
    p.catalog.add(x);
    p.composite = composite_from_block(x);
    return p;
}

} // namespace

Profile builtin_profile(const std::string& name) {
    if (name == "desk") return synthetic_profile(name, 1, 8, false);
    if (name == "desk-threshold") return synthetic_profile(name, 10, 96, false);
    if (name == "desk-exotic") return synthetic_profile(name, 1, 88, true);
    if (name == "paper") {
        Profile p;
        p.name = name;
        p.catalog = Catalog::builtin();
        p.composite = build_composite_X(10, 3, 100);
        return p;
    }
    fail(Errc::BadParams, "unknown built-in profile '" + name +
                              "' (have: desk, desk-threshold, desk-exotic, paper)");
}

Profile load_profile(const std::string& spec) {
    if (spec == "desk" || spec == "desk-threshold" || spec == "desk-exotic" || spec == "paper")
        return builtin_profile(spec);

    std::ifstream in(spec, std::ios::binary);
    if (!in) fail(Errc::IoError, "cannot open profile '" + spec + "' (not a built-in name"
                                 " either)");
    std::ostringstream ss;
    ss << in.rdbuf();
    json j;
    try {
        j = json::parse(ss.str());
    } catch (const json::exception& e) {
        fail(Errc::ParseError, std::string("profile JSON: ") + e.what());
    }

    Profile p;
    p.name = j.value("name", spec);
    if (j.contains("chi_max")) p.chi_max = Int(j.at("chi_max").get<std::int64_t>());
    p.catalog = j.contains("catalog") ? load_catalog(j.at("catalog").get<std::string>())
                                      : Catalog::builtin();
    if (j.contains("composite")) {
        const json& c = j.at("composite");
        std::string type = c.at("type").get<std::string>();
        if (type == "synthetic") {
            Int id = c.value("id", 1);
            bool lattice = c.value("lattice_model", false);
            const BlockSpec* existing = p.catalog.find_synthetic(id);
            BlockSpec x = existing ? *existing
                                   : make_synthetic_block(id, Int(c.at("chi").get<std::int64_t>()),
                                                          Int(c.at("c").get<std::int64_t>()), true,
                                                          true, SWKind::MinimalGeneralType, lattice);
            if (!existing) p.catalog.add(x);
            p.composite = composite_from_block(x);
        } else if (type == "paper") {
            p.composite = build_composite_X(Int(c.at("x").get<std::int64_t>()),
                                            Int(c.at("g").get<std::int64_t>()),
                                            Int(c.at("k").get<std::int64_t>()));
        } else {
            fail(Errc::ParseError, "profile composite type must be 'synthetic' or 'paper'");
        }
    }
    return p;
}

} // namespace geo4
