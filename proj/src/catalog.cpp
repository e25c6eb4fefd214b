#include "geo4/catalog.hpp"

#include "geo4/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace geo4 {

using nlohmann::json;

namespace {

Int param(const ParamMap& p, const std::string& key, const char* family) {
    auto it = p.find(key);
    if (it == p.end())
        fail(Errc::BadParams, std::string(family) + " needs parameter '" + key + "'");
    return it->second;
}

json int_to_json(const Int& v) {
    if (v >= Int(std::numeric_limits<std::int64_t>::min()) &&
        v <= Int(std::numeric_limits<std::int64_t>::max()))
        return v.convert_to<std::int64_t>();
    return v.str();
}

Int int_from_json(const json& j, const std::string& where) {
    if (j.is_number_integer()) return Int(j.get<std::int64_t>());
    if (j.is_string()) return Int(j.get<std::string>());
    fail(Errc::ParseError, where + ": expected an integer");
}

} // namespace

const char* family_str(Family f) {
    switch (f) {
        case Family::E: return "E";
        case Family::H: return "H";
        case Family::Z: return "Z";
        case Family::Y: return "Y";
        case Family::X2n: return "X2n";
        case Family::Synthetic: return "synthetic";
    }
    return "?";
}

std::optional<Family> family_from_str(const std::string& s) {
    if (s == "E") return Family::E;
    if (s == "H") return Family::H;
    if (s == "Z") return Family::Z;
    if (s == "Y") return Family::Y;
    if (s == "X2n") return Family::X2n;
    if (s == "synthetic") return Family::Synthetic;
    return std::nullopt;
}

const char* sw_kind_str(SWKind k) {
    switch (k) {
        case SWKind::Elliptic: return "elliptic";
        case SWKind::MinimalGeneralType: return "minimal_general_type";
        case SWKind::Explicit: return "explicit";
        case SWKind::PartiallyKnown: return "partial";
    }
    return "?";
}

static std::vector<std::string> family_param_order(Family f) {
    switch (f) {
        case Family::E: return {"n"};
        case Family::H: return {"k"};
        case Family::Z: return {"g"};
        case Family::Y: return {"x", "g"};
        case Family::X2n: return {"n"};
        case Family::Synthetic: return {"id"};
    }
    return {};
}

std::string block_label(Family f, const ParamMap& params) {
    std::string s = family_str(f);
    s += '(';
    bool first = true;
    for (const auto& key : family_param_order(f)) {
        auto it = params.find(key);
        if (it == params.end()) continue;
        if (!first) s += ',';
        first = false;
        s += key + "=" + it->second.str();
    }
    // Any extra parameters, alphabetically, for forward compatibility.
    for (const auto& [k, v] : params) {
        auto order = family_param_order(f);
        if (std::find(order.begin(), order.end(), k) != order.end()) continue;
        if (!first) s += ',';
        first = false;
        s += k + "=" + v.str();
    }
    s += ')';
    return s;
}

std::string block_label(const BlockSpec& b) { return block_label(b.family, b.params); }

CharNumbers block_invariants(Family f, const ParamMap& params) {
    switch (f) {
        case Family::E: {
            Int n = param(params, "n", "E");
            if (n < 1) fail(Errc::BadParams, "E needs n >= 1, got n = " + n.str());
            return char_from_chi_c(n, 0);
        }
        case Family::H: {
            Int k = param(params, "k", "H");
            if (k < 1) fail(Errc::BadParams, "H needs k >= 1, got k = " + k.str());
            return char_from_chi_c(4 * k - 1, 8 * k - 8);
        }
        case Family::Z: {
            Int g = param(params, "g", "Z");
            if (g < 1) fail(Errc::BadParams, "Z needs g >= 1, got g = " + g.str());
            return char_from_chi_c(2 * g * g - g + 1, 8 * g * g - 16 * g + 8);
        }
        case Family::Y: {
            Int x = param(params, "x", "Y");
            if (x < 1) fail(Errc::BadParams, "Y needs x >= 1, got x = " + x.str());
            return char_from_chi_c(6857 * x * x, 60068 * x * x);
        }
        case Family::X2n: {
            Int n = param(params, "n", "X2n");
            if (n < 2) fail(Errc::BadParams, "X2n needs n >= 2, got n = " + n.str());
            return char_from_chi_c(2 * n, 0);
        }
        case Family::Synthetic:
            fail(Errc::BadParams, "synthetic blocks carry their invariants explicitly");
    }
    fail(Errc::BadParams, "unknown family");
}

bool block_spin(Family f, const ParamMap& params) {
    switch (f) {
        case Family::E: return mod_floor(param(params, "n", "E"), 2) == 0;
        case Family::H: return mod_floor(param(params, "k", "H"), 2) == 0;
        case Family::Z:
        case Family::Y:
        case Family::X2n:
            block_invariants(f, params); // range check only
            return true;
        case Family::Synthetic: fail(Errc::BadParams, "synthetic blocks assert spin explicitly");
    }
    fail(Errc::BadParams, "unknown family");
}

std::vector<SurfaceSlot> block_surfaces(Family f, const ParamMap& params) {
    block_invariants(f, params); // validates ranges
    std::vector<SurfaceSlot> out;
    switch (f) {
        case Family::E: {
            Int n = param(params, "n", "E");
            out.push_back({"f", 1, 0, SlotKind::LagrangianTorusInCusp, true,
                           "B(2,3," + (6 * n - 1).str() + ") cusp neighborhood; dual sphere meets the cusp fiber once"});
            out.push_back({"T", 1, 0, SlotKind::SymplecticSurface, true,
                           "regular fiber in the nucleus C(" + n.str() + "); section sphere of self-intersection -" + n.str()});
            break;
        }
        case Family::H: {
            Int k = param(params, "k", "H");
            out.push_back({"f", 1, 0, SlotKind::LagrangianTorusInCusp, true,
                           "B(2,5," + (10 * k - 1).str() + ") cusp neighborhood; dual sphere meets the cusp fiber once"});
            SurfaceSlot t{"T", 2, 0, SlotKind::SymplecticSurface, true,
                          "genus-2 surface from 0-framed surgery on the (2,5)-torus knot; section sphere of self-intersection -" + k.str()};
            t.assumed_disjoint = true; // disjointness from f assumed, not stated
            out.push_back(t);
            break;
        }
        case Family::Z: {
            Int g = param(params, "g", "Z");
            out.push_back({"f", 1, 0, SlotKind::LagrangianTorusInCusp, true,
                           "B(2," + (2 * g + 1).str() + "," + (4 * g + 1).str() + ") cusp neighborhood, disjoint from the genus-" + g.str() + " surface"});
            out.push_back({"Σ", g, 0, SlotKind::SymplecticSurface, false,
                           "genus-" + g.str() + " symplectic surface (proper transform of the surgery surface minus the exceptional class)"});
            break;
        }
        case Family::Y: {
            Int g = param(params, "g", "Y");
            if (g < 2) fail(Errc::BadParams, "Y needs fiber genus g >= 2, got g = " + g.str());
            out.push_back({"Σ_g", g, 0, SlotKind::SymplecticSurface, true,
                           "generic fiber of the Lefschetz fibration over CP^1; a section sphere meets it once"});
            break;
        }
        case Family::X2n: {
            Int n = param(params, "n", "X2n");
            out.push_back({"f", 1, 0, SlotKind::LagrangianTorusInCusp, true,
                           "B(2,3,11) cusp neighborhood carried from the first elliptic piece"});
            out.push_back({"T", 1, 0, SlotKind::SymplecticSurface, true,
                           "regular fiber in the nucleus C(" + (2 * n - 2).str() + "); section sphere"});
            break;
        }
        case Family::Synthetic:
            fail(Errc::BadParams, "synthetic blocks carry their surfaces explicitly");
    }
    return out;
}

BlockSpec make_block(Family f, const ParamMap& params) {
    BlockSpec b;
    b.family = f;
    b.params = params;
    b.invariants = block_invariants(f, params);
    b.spin = block_spin(f, params);
    b.simply_connected = true;
    b.surfaces = block_surfaces(f, params);
    switch (f) {
        case Family::E: b.sw.kind = SWKind::Elliptic; break;
        case Family::H: b.sw.kind = SWKind::MinimalGeneralType; b.sw.canonical = "K"; break;
        case Family::Z:
            b.sw.kind = SWKind::PartiallyKnown;
            b.sw.designated = {"K_Z"};
            b.sw.canonical = "K_Z";
            break;
        case Family::Y: b.sw.kind = SWKind::MinimalGeneralType; b.sw.canonical = "K"; break;
        case Family::X2n: b.sw.kind = SWKind::Explicit; break;
        case Family::Synthetic: break;
    }
    if (f == Family::Y) {
        b.approx_model = true;
        b.note = "invariants adopt the asymptotic model values (6857x^2, 60068x^2) as exact; "
                 "only the ratio 60068/6857 is load-bearing";
    }
    validate_block(b, block_label(b));
    return b;
}

BlockSpec make_synthetic_block(const Int& id, const Int& chi, const Int& c, bool spin,
                               bool simply_connected, SWKind sw_kind, bool lattice_model) {
    BlockSpec b;
    b.family = Family::Synthetic;
    b.params["id"] = id;
    b.invariants = char_from_chi_c(chi, c, lattice_model);
    b.lattice_model = b.invariants.lattice_model;
    b.spin = spin;
    b.simply_connected = simply_connected;
    b.surfaces.push_back({"f", 1, 0, SlotKind::LagrangianTorusInCusp, true,
                          "modeled cusp neighborhood of the synthetic block"});
    b.sw.kind = sw_kind;
    if (sw_kind == SWKind::MinimalGeneralType) b.sw.canonical = "K";
    if (sw_kind == SWKind::PartiallyKnown) {
        b.sw.designated = {"K"};
        b.sw.canonical = "K";
    }
    if (b.lattice_model)
        b.note = "lattice bookkeeping block: derived b2- is negative, no manifold claimed";
    validate_block(b, block_label(b));
    return b;
}

BlockSW sw_of_block(const BlockSpec& b, const std::string& name_suffix,
                    const std::string& provenance) {
    BlockSW out;
    switch (b.sw.kind) {
        case SWKind::Elliptic: {
            if (b.invariants.chi < 2)
                fail(Errc::UnknownSW,
                     block_label(b) + " has b2+ = 1; no finite basic-class form is modeled");
            out.exact = true;
            out.expr = sw_elliptic_form(b.invariants.chi.convert_to<std::int64_t>(),
                                        "T" + name_suffix, provenance);
            return out;
        }
        case SWKind::MinimalGeneralType: {
            out.exact = true;
            out.expr = sw_minimal_general_type("K" + name_suffix, provenance, b.invariants.chi);
            out.canonical_class = "K" + name_suffix;
            return out;
        }
        case SWKind::Explicit: {
            out.exact = true;
            if (b.family == Family::X2n) {
                Int n = b.params.at("n");
                SWExpr ell = sw_elliptic_form((2 * n - 2).convert_to<std::int64_t>(),
                                              "T" + name_suffix, provenance);
                ClassBasis fb({{"f" + name_suffix, provenance + " internal gluing torus"}});
                SWExpr glue(fb);
                glue.add_term(ExpVec{2}, 1);
                glue.add_term(ExpVec{0}, -2);
                glue.add_term(ExpVec{-2}, 1);
                out.expr = mul(ell, glue);
                return out;
            }
            if (!b.sw.explicit_expr)
                fail(Errc::UnknownSW, block_label(b) + " is marked explicit but has no expression");
            // Requalify the stored generator names for this occurrence.
            std::vector<ClassGen> gens;
            for (const auto& g : b.sw.explicit_expr->basis().gens())
                gens.push_back({g.name + name_suffix, provenance});
            SWExpr e{ClassBasis(gens)};
            for (const auto& [exp, coef] : b.sw.explicit_expr->terms()) e.add_term(exp, coef);
            out.expr = e;
            return out;
        }
        case SWKind::PartiallyKnown: {
            out.exact = false;
            std::vector<ClassGen> gens;
            for (const auto& name : b.sw.designated) gens.push_back({name + name_suffix, provenance});
            out.partial_basis = ClassBasis(gens);
            for (std::size_t i = 0; i < gens.size(); ++i) {
                ExpVec v(gens.size(), 0);
                v[i] = 1;
                out.partial_designated.push_back(v);
                v[i] = -1;
                out.partial_designated.push_back(v);
            }
            if (b.sw.canonical) out.canonical_class = *b.sw.canonical + name_suffix;
            return out;
        }
    }
    fail(Errc::UnknownSW, "unhandled SW kind");
}

void validate_block(const BlockSpec& b, const std::string& where) {
    auto bad = [&](const std::string& field, const std::string& msg) {
        fail(Errc::ValidationError, where + "." + field + ": " + msg);
    };
    if (b.family != Family::Synthetic) {
        CharNumbers expect;
        try {
            expect = block_invariants(b.family, b.params);
        } catch (const Error& e) {
            bad("params", e.what());
        }
        if (b.invariants.chi != expect.chi || b.invariants.c != expect.c)
            bad("chi/c", "stated (" + b.invariants.chi.str() + ", " + b.invariants.c.str() +
                             ") but the family formula gives (" + expect.chi.str() + ", " +
                             expect.c.str() + ")");
        if (b.spin != block_spin(b.family, b.params))
            bad("spin", std::string("family rule says ") + (b.spin ? "false" : "true"));
        if (b.lattice_model) bad("lattice_model", "only synthetic blocks may be lattice models");
    }
    if (b.spin && !b.approx_model && !b.lattice_model) {
        AllowedVerdict v = is_allowed({b.invariants.chi, b.invariants.c});
        if (!v.allowed) {
            std::string why;
            for (const auto& s : v.violations) why += (why.empty() ? "" : "; ") + s;
            bad("spin", "spin block at a non-allowed lattice point (" + why + ")");
        }
    }
    for (std::size_t i = 0; i < b.surfaces.size(); ++i) {
        const auto& s = b.surfaces[i];
        std::string field = "surfaces[" + std::to_string(i) + "]";
        if (s.self_intersection != 0) bad(field, "only square-zero surfaces participate");
        if (s.genus < 1) bad(field, "genus must be >= 1");
        if (s.kind == SlotKind::LagrangianTorusInCusp && s.genus != 1)
            bad(field, "a torus-in-cusp slot must have genus 1");
        for (std::size_t j = 0; j < i; ++j)
            if (b.surfaces[j].id == s.id) bad(field, "duplicate slot id '" + s.id + "'");
    }
}

Catalog::Catalog(std::vector<BlockSpec> blocks) : blocks_(std::move(blocks)) {}

void Catalog::add(BlockSpec b) { blocks_.push_back(std::move(b)); }

const BlockSpec* Catalog::find_synthetic(const Int& id) const {
    for (const auto& b : blocks_) {
        if (b.family != Family::Synthetic) continue;
        auto it = b.params.find("id");
        if (it != b.params.end() && it->second == id) return &b;
    }
    return nullptr;
}

Catalog Catalog::builtin() {
    Catalog c;
    for (int n = 1; n <= 4; ++n) c.add(make_block(Family::E, {{"n", n}}));
    for (int k = 1; k <= 4; ++k) c.add(make_block(Family::H, {{"k", k}}));
    for (int g = 1; g <= 3; ++g) c.add(make_block(Family::Z, {{"g", g}}));
    c.add(make_block(Family::Y, {{"x", 1}, {"g", 3}}));
    for (int n = 2; n <= 3; ++n) c.add(make_block(Family::X2n, {{"n", n}}));
    return c;
}

namespace {

json slot_to_json(const SurfaceSlot& s) {
    return json{{"id", s.id},
                {"genus", int_to_json(s.genus)},
                {"self_intersection", int_to_json(s.self_intersection)},
                {"kind", s.kind == SlotKind::LagrangianTorusInCusp ? "torus_in_cusp" : "symplectic"},
                {"dual_sphere", s.has_dual_sphere},
                {"host", s.host},
                {"assumed_disjoint", s.assumed_disjoint}};
}

SurfaceSlot slot_from_json(const json& j, const std::string& where) {
    SurfaceSlot s;
    s.id = j.at("id").get<std::string>();
    s.genus = int_from_json(j.at("genus"), where + ".genus");
    s.self_intersection = int_from_json(j.value("self_intersection", json(0)), where);
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "torus_in_cusp")
        s.kind = SlotKind::LagrangianTorusInCusp;
    else if (kind == "symplectic")
        s.kind = SlotKind::SymplecticSurface;
    else
        fail(Errc::ParseError, where + ".kind: unknown kind '" + kind + "'");
    s.has_dual_sphere = j.at("dual_sphere").get<bool>();
    s.host = j.value("host", std::string());
    s.assumed_disjoint = j.value("assumed_disjoint", true);
    return s;
}

json sw_expr_to_json_obj(const SWExpr& e) {
    json basis = json::array();
    for (const auto& g : e.basis().gens())
        basis.push_back(json{{"name", g.name}, {"provenance", g.provenance}});
    json terms = json::array();
    for (auto it = e.terms().rbegin(); it != e.terms().rend(); ++it) {
        json exp = json::array();
        for (auto x : it->first) exp.push_back(x);
        terms.push_back(json{{"exp", exp}, {"coef", int_to_json(it->second)}});
    }
    return json{{"basis", basis}, {"terms", terms}};
}

SWExpr sw_expr_from_json_obj(const json& j, const std::string& where) {
    std::vector<ClassGen> gens;
    for (const auto& g : j.at("basis"))
        gens.push_back({g.at("name").get<std::string>(), g.value("provenance", std::string())});
    SWExpr e{ClassBasis(gens)};
    for (const auto& t : j.at("terms")) {
        ExpVec exp;
        for (const auto& x : t.at("exp")) exp.push_back(x.get<std::int64_t>());
        e.add_term(exp, int_from_json(t.at("coef"), where + ".coef"));
    }
    return e;
}

json block_to_json(const BlockSpec& b) {
    json params = json::object();
    for (const auto& [k, v] : b.params) params[k] = int_to_json(v);
    json sw{{"kind", sw_kind_str(b.sw.kind)}};
    if (b.sw.explicit_expr) sw["expr"] = sw_expr_to_json_obj(*b.sw.explicit_expr);
    if (!b.sw.designated.empty()) sw["designated"] = b.sw.designated;
    if (b.sw.canonical) sw["canonical"] = *b.sw.canonical;
    json surfaces = json::array();
    for (const auto& s : b.surfaces) surfaces.push_back(slot_to_json(s));
    json out{{"family", family_str(b.family)},
             {"params", params},
             {"chi", int_to_json(b.invariants.chi)},
             {"c", int_to_json(b.invariants.c)},
             {"spin", b.spin},
             {"simply_connected", b.simply_connected},
             {"surfaces", surfaces},
             {"sw", sw}};
    if (b.approx_model) out["approx_model"] = true;
    if (b.lattice_model) out["lattice_model"] = true;
    if (!b.note.empty()) out["note"] = b.note;
    return out;
}

BlockSpec block_from_json(const json& j, const std::string& where) {
    BlockSpec b;
    std::string fam = j.at("family").get<std::string>();
    auto f = family_from_str(fam);
    if (!f) fail(Errc::ParseError, where + ".family: unknown family '" + fam + "'");
    b.family = *f;
    if (j.contains("params"))
        for (auto it = j.at("params").begin(); it != j.at("params").end(); ++it)
            b.params[it.key()] = int_from_json(it.value(), where + ".params." + it.key());
    b.approx_model = j.value("approx_model", b.family == Family::Y);
    b.lattice_model = j.value("lattice_model", false);
    if (b.family == Family::Synthetic) {
        if (!j.contains("chi") || !j.contains("c"))
            fail(Errc::ValidationError, where + ": synthetic blocks need explicit chi and c");
        b.invariants = char_from_chi_c(int_from_json(j.at("chi"), where + ".chi"),
                                       int_from_json(j.at("c"), where + ".c"), b.lattice_model);
    } else {
        b.invariants = block_invariants(b.family, b.params);
        if (j.contains("chi") && int_from_json(j.at("chi"), where + ".chi") != b.invariants.chi)
            fail(Errc::ValidationError, where + ".chi: does not match the family formula");
        if (j.contains("c") && int_from_json(j.at("c"), where + ".c") != b.invariants.c)
            fail(Errc::ValidationError, where + ".c: does not match the family formula");
    }
    b.spin = j.at("spin").get<bool>();
    b.simply_connected = j.value("simply_connected", true);
    if (j.contains("surfaces")) {
        std::size_t i = 0;
        for (const auto& s : j.at("surfaces"))
            b.surfaces.push_back(slot_from_json(s, where + ".surfaces[" + std::to_string(i++) + "]"));
    } else if (b.family != Family::Synthetic) {
        b.surfaces = block_surfaces(b.family, b.params);
    }
    if (j.contains("sw")) {
        const json& sw = j.at("sw");
        std::string kind = sw.at("kind").get<std::string>();
        if (kind == "elliptic")
            b.sw.kind = SWKind::Elliptic;
        else if (kind == "minimal_general_type")
            b.sw.kind = SWKind::MinimalGeneralType;
        else if (kind == "explicit")
            b.sw.kind = SWKind::Explicit;
        else if (kind == "partial")
            b.sw.kind = SWKind::PartiallyKnown;
        else
            fail(Errc::ParseError, where + ".sw.kind: unknown kind '" + kind + "'");
        if (sw.contains("expr")) b.sw.explicit_expr = sw_expr_from_json_obj(sw.at("expr"), where + ".sw.expr");
        if (sw.contains("designated"))
            for (const auto& d : sw.at("designated")) b.sw.designated.push_back(d.get<std::string>());
        if (sw.contains("canonical")) b.sw.canonical = sw.at("canonical").get<std::string>();
        if (b.sw.kind == SWKind::MinimalGeneralType && !b.sw.canonical) b.sw.canonical = "K";
    } else {
        BlockSpec model = b.family == Family::Synthetic
                              ? BlockSpec{}
                              : make_block(b.family, b.params);
        b.sw = b.family == Family::Synthetic ? SWSpec{SWKind::MinimalGeneralType, {}, {}, "K"}
                                             : model.sw;
    }
    b.note = j.value("note", std::string());
    validate_block(b, where);
    return b;
}

} // namespace

std::string catalog_to_json(const Catalog& c) {
    json blocks = json::array();
    for (const auto& b : c.blocks()) blocks.push_back(block_to_json(b));
    json out{{"version", 1}, {"blocks", blocks}};
    return out.dump(2) + "\n";
}

Catalog catalog_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(Errc::ParseError, std::string("catalog JSON: ") + e.what());
    }
    if (!j.contains("version") || j.at("version").get<int>() != 1)
        fail(Errc::ParseError, "catalog JSON: unsupported or missing version");
    Catalog c;
    std::size_t i = 0;
    for (const auto& b : j.at("blocks"))
        c.add(block_from_json(b, "blocks[" + std::to_string(i++) + "]"));
    return c;
}

Catalog load_catalog(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::IoError, "cannot open catalog file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return catalog_from_json(ss.str());
}

void save_catalog(const Catalog& c, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::IoError, "cannot write catalog file '" + path + "'");
    out << catalog_to_json(c);
}

} // namespace geo4
