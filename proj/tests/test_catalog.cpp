#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "geo4/catalog.hpp"
#include "geo4/errors.hpp"

#include <cstdio>
#include <fstream>

using namespace geo4;

namespace {

Errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::IoError; // sentinel: "did not throw"
}

} // namespace

TEST_CASE("family invariants") {
    CharNumbers h7 = block_invariants(Family::H, {{"k", 2}});
    CHECK(h7.chi == 7);
    CHECK(h7.c == 8);

    CharNumbers z2 = block_invariants(Family::Z, {{"g", 2}});
    CHECK(z2.chi == 7);
    CHECK(z2.c == 8);

    CharNumbers y1 = block_invariants(Family::Y, {{"x", 1}});
    CHECK(y1.chi == 6857);
    CHECK(y1.c == 60068);

    CHECK(block_invariants(Family::E, {{"n", 2}}).chi == 2);
    CHECK(block_invariants(Family::E, {{"n", 2}}).c == 0);
    CHECK(block_invariants(Family::X2n, {{"n", 2}}).chi == 4);

    CHECK(code_of([] { block_invariants(Family::E, {{"n", 0}}); }) == Errc::BadParams);
    CHECK(code_of([] { block_invariants(Family::H, {{"k", 0}}); }) == Errc::BadParams);
    CHECK(code_of([] { block_invariants(Family::Z, {{"g", 0}}); }) == Errc::BadParams);
    CHECK(code_of([] { block_invariants(Family::Y, {{"x", 0}}); }) == Errc::BadParams);
    CHECK(code_of([] { block_invariants(Family::X2n, {{"n", 1}}); }) == Errc::BadParams);
    CHECK(code_of([] { block_invariants(Family::H, {}); }) == Errc::BadParams);
}

TEST_CASE("spin flags") {
    CHECK(block_spin(Family::H, {{"k", 2}}));
    CHECK(!block_spin(Family::H, {{"k", 1}}));
    CHECK(!block_spin(Family::E, {{"n", 3}}));
    CHECK(block_spin(Family::E, {{"n", 2}}));
    CHECK(block_spin(Family::Z, {{"g", 5}}));
    CHECK(block_spin(Family::Y, {{"x", 3}}));
    CHECK(block_spin(Family::X2n, {{"n", 7}}));
}

TEST_CASE("surface slots per family") {
    auto e2 = block_surfaces(Family::E, {{"n", 2}});
    REQUIRE(e2.size() == 2);
    CHECK(e2[0].id == "f");
    CHECK(e2[0].kind == SlotKind::LagrangianTorusInCusp);
    CHECK(e2[0].genus == 1);
    CHECK(e2[0].has_dual_sphere);
    CHECK(e2[1].id == "T");
    CHECK(e2[1].genus == 1);
    CHECK(e2[1].has_dual_sphere);

    auto h7 = block_surfaces(Family::H, {{"k", 2}});
    REQUIRE(h7.size() == 2);
    CHECK(h7[0].id == "f");
    CHECK(h7[1].id == "T");
    CHECK(h7[1].genus == 2);
    CHECK(h7[1].has_dual_sphere);

    auto z3 = block_surfaces(Family::Z, {{"g", 3}});
    REQUIRE(z3.size() == 2);
    CHECK(z3[0].id == "f");
    CHECK(z3[1].id == "Σ");
    CHECK(z3[1].genus == 3);
    CHECK(z3[1].kind == SlotKind::SymplecticSurface);
    CHECK(!z3[1].has_dual_sphere);

    auto y = block_surfaces(Family::Y, {{"x", 1}, {"g", 3}});
    REQUIRE(y.size() == 1);
    CHECK(y[0].id == "Σ_g");
    CHECK(y[0].genus == 3);
    CHECK(y[0].has_dual_sphere);
    CHECK(code_of([] { block_surfaces(Family::Y, {{"x", 1}, {"g", 1}}); }) == Errc::BadParams);

    // Every torus-in-cusp slot across the catalog has genus 1.
    for (const auto& b : Catalog::builtin().blocks())
        for (const auto& s : b.surfaces) {
            CHECK(s.self_intersection == 0);
            if (s.kind == SlotKind::LagrangianTorusInCusp) CHECK(s.genus == 1);
        }
}

TEST_CASE("spin catalog members sit on allowed points") {
    for (int n = 1; n <= 100; ++n) {
        BlockSpec b = make_block(Family::E, {{"n", n}});
        if (b.spin) CHECK(is_allowed({b.invariants.chi, b.invariants.c}).allowed);
    }
    for (int k = 1; k <= 100; ++k) {
        BlockSpec b = make_block(Family::H, {{"k", k}});
        if (b.spin) CHECK(is_allowed({b.invariants.chi, b.invariants.c}).allowed);
    }
    for (int g = 1; g <= 50; ++g) {
        BlockSpec b = make_block(Family::Z, {{"g", g}});
        CHECK(b.spin);
        CHECK(is_allowed({b.invariants.chi, b.invariants.c}).allowed);
    }
    for (int n = 2; n <= 50; ++n) {
        BlockSpec b = make_block(Family::X2n, {{"n", n}});
        CHECK(b.spin);
        CHECK(is_allowed({b.invariants.chi, b.invariants.c}).allowed);
    }
    // Y is the documented exception: its invariants are adopted model values,
    // and the congruence only survives the truncation for even x. The entries
    // are flagged so validation treats them as models, not manifold claims.
    for (int x = 1; x <= 10; ++x) {
        BlockSpec b = make_block(Family::Y, {{"x", x}, {"g", 3}});
        CHECK(b.spin);
        CHECK(b.approx_model);
        bool allowed = is_allowed({b.invariants.chi, b.invariants.c}).allowed;
        CHECK(allowed == (x % 2 == 0));
    }
}

TEST_CASE("Z(1) shares the K3 lattice point") {
    CharNumbers z1 = block_invariants(Family::Z, {{"g", 1}});
    CharNumbers e2 = block_invariants(Family::E, {{"n", 2}});
    CHECK(z1.chi == e2.chi);
    CHECK(z1.c == e2.c);
}

TEST_CASE("the Y ratio is exactly 60068/6857 for every x") {
    for (int x = 1; x <= 10; ++x) {
        CharNumbers y = block_invariants(Family::Y, {{"x", x}});
        CHECK(Rat(y.c, y.chi) == Rat(60068, 6857));
    }
    CHECK(decimal_string(Rat(60068, 6857), 5) == "8.76009");
}

TEST_CASE("block invariant forms") {
    CHECK(sw_of_block(make_block(Family::E, {{"n", 2}}), "", "x").expr == SWExpr::constant(1));
    CHECK(sw_of_block(make_block(Family::E, {{"n", 4}}), "", "x").expr.text() ==
          "+1*exp(2T) -2 +1*exp(-2T)");
    CHECK(sw_of_block(make_block(Family::H, {{"k", 2}}), "", "x").expr.text() ==
          "+1*exp(K) -1*exp(-K)");
    CHECK(sw_of_block(make_block(Family::X2n, {{"n", 2}}), "", "x").expr.text() ==
          "+1*exp(2f) -2 +1*exp(-2f)");

    BlockSW z = sw_of_block(make_block(Family::Z, {{"g", 3}}), "@5", "z");
    CHECK(!z.exact);
    REQUIRE(z.canonical_class.has_value());
    CHECK(*z.canonical_class == "K_Z@5");
    CHECK(z.partial_designated.size() == 2);

    CHECK(code_of([] { sw_of_block(make_block(Family::E, {{"n", 1}}), "", "x"); }) ==
          Errc::UnknownSW);
}

TEST_CASE("catalog files round trip and validate") {
    Catalog cat = Catalog::builtin();
    cat.add(make_synthetic_block(7, 10, 96));

    std::string path = "catalog_roundtrip_tmp.json";
    save_catalog(cat, path);
    Catalog back = load_catalog(path);
    CHECK(back == cat);
    std::remove(path.c_str());

    // Validation failures carry a field path.
    std::string bad_spin = R"({"version":1,"blocks":[
        {"family":"H","params":{"k":1},"spin":true,"simply_connected":true}]})";
    try {
        catalog_from_json(bad_spin);
        FAIL("expected ValidationError");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ValidationError);
        CHECK(std::string(e.what()).find("blocks[0].spin") != std::string::npos);
    }

    std::string bad_point = R"({"version":1,"blocks":[
        {"family":"synthetic","params":{"id":1},"chi":10,"c":90,"spin":true,
         "simply_connected":true,"surfaces":[],"sw":{"kind":"minimal_general_type"}}]})";
    CHECK(code_of([&] { catalog_from_json(bad_point); }) == Errc::ValidationError);

    std::string good_point = R"({"version":1,"blocks":[
        {"family":"synthetic","params":{"id":1},"chi":10,"c":96,"spin":true,
         "simply_connected":true,"surfaces":[],"sw":{"kind":"minimal_general_type"}}]})";
    Catalog ok = catalog_from_json(good_point);
    CHECK(ok.find_synthetic(1) != nullptr);

    std::string bad_chi = R"({"version":1,"blocks":[
        {"family":"E","params":{"n":2},"chi":3,"spin":true,"simply_connected":true}]})";
    CHECK(code_of([&] { catalog_from_json(bad_chi); }) == Errc::ValidationError);

    CHECK(code_of([] { catalog_from_json("{nope"); }) == Errc::ParseError);
    CHECK(code_of([] { load_catalog("does_not_exist.json"); }) == Errc::IoError);

    // Slot invariants are enforced on load.
    std::string bad_slot = R"({"version":1,"blocks":[
        {"family":"E","params":{"n":2},"spin":true,"simply_connected":true,
         "surfaces":[{"id":"f","genus":2,"kind":"torus_in_cusp","dual_sphere":true}],
         "sw":{"kind":"elliptic"}}]})";
    CHECK(code_of([&] { catalog_from_json(bad_slot); }) == Errc::ValidationError);

    std::string bad_self_int = R"({"version":1,"blocks":[
        {"family":"E","params":{"n":2},"spin":true,"simply_connected":true,
         "surfaces":[{"id":"f","genus":1,"self_intersection":-1,"kind":"torus_in_cusp",
                      "dual_sphere":true}],
         "sw":{"kind":"elliptic"}}]})";
    CHECK(code_of([&] { catalog_from_json(bad_self_int); }) == Errc::ValidationError);

    // Lattice-model blocks are only legal as synthetics.
    CHECK_NOTHROW(make_synthetic_block(9, 1, 88, true, true, SWKind::MinimalGeneralType, true));
    CHECK(code_of([] { make_synthetic_block(9, 1, 88); }) == Errc::ValidationError);
}

TEST_CASE("block labels use canonical parameter order") {
    CHECK(block_label(make_block(Family::H, {{"k", 2}})) == "H(k=2)");
    CHECK(block_label(make_block(Family::Y, {{"x", 1}, {"g", 3}})) == "Y(x=1,g=3)");
    CHECK(block_label(make_synthetic_block(1, 10, 96)) == "synthetic(id=1)");
}
