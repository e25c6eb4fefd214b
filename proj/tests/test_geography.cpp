#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "geo4/errors.hpp"
#include "geo4/geography.hpp"
#include "geo4/profile.hpp"

#include <functional>

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

RegionSpec wedge_region(std::int64_t chi_max) {
    RegionSpec r;
    r.name = "wedge";
    r.chi_max = chi_max;
    r.constraints.push_back({RegionConstraint::Kind::Nonneg});
    r.constraints.push_back({RegionConstraint::Kind::Congruence});
    r.constraints.push_back({RegionConstraint::Kind::LineLE, Rat(2), Rat(-6)});
    return r;
}

} // namespace

TEST_CASE("base realizations with their certificates") {
    BaseRealization noe = realize_base({15, 24});
    CHECK(noe.cert.expr_text == "H(k=4)");
    CHECK(noe.k_prime == 2);
    CHECK(noe.n == 0);
    CHECK(noe.cert.ok);

    BaseRealization he = realize_base({17, 8});
    CHECK(he.cert.expr_text == "fsum(f,f; H(k=2), E(n=10))");
    CHECK(he.cert.ok);

    BaseRealization hh = realize_base({14, 16});
    CHECK(hh.cert.expr_text == "fsum(f,f; H(k=2), H(k=2))");
    CHECK(hh.has_h7);
    CHECK(hh.n == 0);

    BaseRealization x4 = realize_base({4, 0});
    CHECK(x4.cert.expr_text == "X2n(n=2)");
    CHECK(x4.x2n_form);

    // A c == 8 (mod 16) point strictly between the two parallel lines.
    BaseRealization band = realize_base({9, 8});
    CHECK(band.cert.expr_text == "fsum(f,f; H(k=2), E(n=2))");

    // Every certificate re-evaluates cleanly.
    for (const auto* b : {&noe, &he, &hh, &x4, &band}) {
        CHECK(b->cert.ok);
        for (const auto& [name, pass] : b->cert.checks) CHECK(pass);
        CHECK(b->cert.report.invariants.chi == b->cert.point.chi);
        CHECK(b->cert.report.invariants.c == b->cert.point.c);
    }

    CHECK(code_of([] { realize_base({12, 16}); }) == Errc::OutOfRegion);
    CHECK(code_of([] { realize_base({3, 0}); }) == Errc::OutOfRegion);  // not allowed
    CHECK(code_of([] { realize_base({2, 0}); }) == Errc::NoRealization); // the K3 point
    CHECK(code_of([] { realize_base({7, 24}); }) == Errc::OutOfRegion); // above Noether
}

TEST_CASE("composite X arithmetic and flags") {
    CompositeX x = build_composite_X(1, 3, 1);
    CHECK(x.report.invariants.chi == 6875);
    CHECK(x.report.invariants.c == 60116);
    CHECK(x.report.invariants.sigma == 5116);
    CHECK(x.sigma_positive);
    CHECK(x.ratio == Rat(60116, 6875));
    CHECK(!x.ratio_gt_876);

    CompositeX big = build_composite_X(10, 3, 100);
    CHECK(big.ratio_gt_876);
    CHECK(big.sigma_positive);
    // Within 10^-3 of the limiting ratio 60068/6857.
    Rat diff = big.ratio - Rat(60068, 6857);
    if (diff < 0) diff = -diff;
    CHECK(diff < Rat(1, 1000));

    // sigma(Z(g)) = -8g(g+1), via sigma = c - 8 chi.
    for (int g = 1; g <= 12; ++g) {
        CharNumbers z = block_invariants(Family::Z, {{"g", g}});
        CHECK(z.sigma == -8 * g * (g + 1));
    }

    CHECK(code_of([] { build_composite_X(0, 3, 1); }) == Errc::BadParams);
    CHECK(code_of([] { build_composite_X(1, 1, 1); }) == Errc::BadParams);
}

TEST_CASE("general realization lifts by X copies") {
    Profile desk = builtin_profile("desk");

    // m = 0 reduces exactly to the base search.
    GeneralRealization g0 = realize_general({17, 8}, *desk.composite);
    CHECK(g0.m == 0);
    CHECK(g0.cert.expr_text == "fsum(f,f; H(k=2), E(n=10))");

    // (chi(X) + 17, c(X) + 8) with the worked synthetic profile: one copy of
    // X plus H(7) # E(10).
    Profile thr = builtin_profile("desk-threshold");
    GeneralRealization g1 = realize_general({27, 104}, *thr.composite);
    CHECK(g1.m == 1);
    CHECK(g1.base.cert.expr_text == "fsum(f,f; H(k=2), E(n=10))");
    CHECK(g1.cert.ok);
    CHECK(g1.cert.report.invariants.sigma == 16 - 48 - 80);

    // Points above the configured f line are out of scope by design.
    CHECK(code_of([&] { realize_general({9, 8}, *thr.composite); }) == Errc::OutOfRegion);

    // A signature-zero target: sigma(W) = 0, spin, the connected-sum type.
    GeneralRealization sz = realize_general({265, 2120}, *thr.composite);
    CHECK(sz.cert.report.invariants.sigma == 0);
    CHECK(sz.cert.report.spin);
    HomeoType h = homeo_type(sz.cert.point, true);
    REQUIRE(h.standard_name.has_value());
    CHECK(*h.standard_name == "529(S^2 x S^2)");

    // NotCovered carries the search trace. A degenerate c = 0 composite
    // admits exactly the elliptic line, whose chi = 2 point has no family
    // member, and the residual chain dies in one step.
    CompositeX flat = composite_from_block(make_synthetic_block(5, 2, 0));
    try {
        realize_general({2, 0}, flat);
        FAIL("expected NotCovered");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NotCovered);
        CHECK(std::string(e.what()).find("m = 0") != std::string::npos);
    }
}

TEST_CASE("coverage enumeration over regions") {
    Profile desk = builtin_profile("desk");

    CoverageReport rep = verify_coverage(wedge_region(60), &*desk.composite, 2);
    CHECK(rep.fully_covered);
    CHECK(rep.unrealized_count == 0);
    CHECK(rep.realized_count > 100);
    // chi ascending, then c ascending.
    for (std::size_t i = 1; i < rep.points.size(); ++i) {
        const auto &a = rep.points[i - 1], &b = rep.points[i];
        CHECK((a.p.chi < b.p.chi || (a.p.chi == b.p.chi && a.p.c < b.p.c)));
    }
    // Single- and multi-threaded runs agree point for point.
    CoverageReport rep1 = verify_coverage(wedge_region(60), &*desk.composite, 1);
    REQUIRE(rep1.points.size() == rep.points.size());
    for (std::size_t i = 0; i < rep.points.size(); ++i) {
        CHECK(rep.points[i].p == rep1.points[i].p);
        CHECK(rep.points[i].realized == rep1.points[i].realized);
        CHECK(rep.points[i].expr_text == rep1.points[i].expr_text);
    }

    // The strip between the 8.76 line and the BMY line holds no allowed
    // point with chi <= 5: vacuously covered.
    RegionSpec empty;
    empty.name = "under-bmy";
    empty.chi_max = 5;
    empty.constraints.push_back({RegionConstraint::Kind::Nonneg});
    empty.constraints.push_back({RegionConstraint::Kind::Congruence});
    empty.constraints.push_back({RegionConstraint::Kind::LineGE, Rat(876, 100), Rat(0)});
    empty.constraints.push_back({RegionConstraint::Kind::LineLE, Rat(9), Rat(0)});
    CoverageReport er = verify_coverage(empty, nullptr, 1);
    CHECK(er.points.empty());
    CHECK(er.fully_covered);

    // The translated wedge (10, 96) + Omega is fully covered through X lifts.
    Profile thr = builtin_profile("desk-threshold");
    RegionSpec translated;
    translated.name = "translated";
    translated.chi_max = 120;
    translated.constraints.push_back({RegionConstraint::Kind::Congruence});
    translated.constraints.push_back({RegionConstraint::Kind::LineGE, Rat(0), Rat(96)});
    translated.constraints.push_back({RegionConstraint::Kind::LineLE, Rat(2), Rat(64)});
    CoverageReport tr = verify_coverage(translated, &*thr.composite, 2);
    CHECK(tr.fully_covered);
    CHECK(tr.realized_count > 50);
    for (const auto& p : tr.points) CHECK(p.m >= 1);
}

TEST_CASE("region JSON parsing") {
    RegionSpec r = region_from_json_text(R"({"name":"w","chi_max":50,"constraints":[
        {"type":"nonneg"},{"type":"congruence"},
        {"type":"line_le","line":"noether"},
        {"type":"line_ge","slope":[1,2],"intercept":"-3/2"}]})");
    CHECK(r.name == "w");
    CHECK(r.chi_max == 50);
    REQUIRE(r.constraints.size() == 4);
    CHECK(r.constraints[3].slope == Rat(1, 2));
    CHECK(r.constraints[3].intercept == Rat(-3, 2));
    CHECK(r.contains({10, 14}));
    CHECK(!r.contains({10, 16})); // above the Noether line
    CHECK(!r.contains({10, 2}));  // below the custom lower line

    CHECK(code_of([] { region_from_json_text("{}"); }) == Errc::ParseError);
    CHECK(code_of([] {
              region_from_json_text(R"({"chi_max":5,"constraints":[{"type":"wat"}]})");
          }) == Errc::ParseError);
}

TEST_CASE("spin complex surfaces in the strip: the two exceptional families") {
    PpxVerdict a = ppx_admissible({13, 20});
    CHECK(a.value == PpxVerdict::Value::NotAdmissible);

    PpxVerdict b = ppx_admissible({7, 8});
    CHECK(b.value == PpxVerdict::Value::NotApplicable);

    PpxVerdict c = ppx_admissible({15, 24});
    CHECK(c.value == PpxVerdict::Value::Admissible);
    REQUIRE(!c.reasons.empty());
    CHECK(c.reasons[0].find("k odd") != std::string::npos);

    // The Noether-line points of the strip are exactly the H(8k'-1) points.
    for (int kp = 2; kp <= 12; ++kp) {
        LatticePoint p{8 * kp - 1, 16 * kp - 8};
        if (Rat(p.c) < Rat(3) * Rat(p.chi - 5)) {
            PpxVerdict v = ppx_admissible(p);
            CHECK(v.value == PpxVerdict::Value::Admissible);
        }
    }
}

TEST_CASE("exotic thresholds") {
    Profile thr = builtin_profile("desk-threshold");
    CHECK(exotic_threshold(*thr.composite) == 264);

    // f(264) = 8 * 264 exactly for the (10, 96) profile.
    RegionLine f = f_line(thr.composite->report.invariants);
    CHECK(f.at(Int(264)) == Rat(8 * 264));
    CHECK(f.at(Int(263)) < Rat(8 * 263));

    Profile desk = builtin_profile("desk"); // slope exactly 8
    CHECK(code_of([&] { exotic_threshold(*desk.composite); }) == Errc::RatioTooSmall);

    Profile ex = builtin_profile("desk-exotic");
    CHECK(exotic_threshold(*ex.composite) == 54);
}

TEST_CASE("exotic families at desk scale") {
    Profile ex = builtin_profile("desk-exotic");

    CHECK(code_of([&] { exotic_family(5, 1, *ex.composite); }) == Errc::BelowThreshold);

    ExoticFamily one = exotic_family(54, 1, *ex.composite);
    CHECK(one.members.size() == 1);
    CHECK(!one.members[0].knot);
    CHECK(one.pairwise_distinct); // vacuous
    REQUIRE(one.homeo.standard_name.has_value());
    CHECK(*one.homeo.standard_name == "109(S^2 x S^2)");

    ExoticFamily fam = exotic_family(54, 3, *ex.composite);
    REQUIRE(fam.members.size() == 3);
    CHECK(fam.members[1].knot == TorusKnot{2, 3});
    CHECK(fam.members[2].knot == TorusKnot{2, 5});
    CHECK(fam.pairwise_distinct);
    for (const auto& mem : fam.members) {
        CHECK(mem.report.invariants.chi == 55);
        CHECK(mem.report.invariants.c == 440);
        CHECK(mem.report.invariants.sigma == 0);
        CHECK(mem.report.spin);
        CHECK(mem.report.simply_connected);
        HomeoType h = homeo_type({mem.report.invariants.chi, mem.report.invariants.c}, true);
        CHECK(h.same_type(fam.homeo));
        CHECK(!mem.sw_multiset.empty()); // nonzero invariant, unlike the
                                          // standard structure's
    }

    // The shortcut invariant equals a full evaluation of the member tree.
    EvalReport full = eval(fam.members[1].expr);
    REQUIRE(full.sw.kind == SWStatusKind::Exact);
    CHECK(*full.sw.exact == *fam.members[1].report.sw.exact);
}

TEST_CASE("certificate JSON shape") {
    Certificate cert = realize_base({17, 8}).cert;
    std::string j = certificate_to_json(cert);
    CHECK(j.find("\"expr\": \"fsum(f,f; H(k=2), E(n=10))\"") != std::string::npos);
    CHECK(j.find("\"ok\": true") != std::string::npos);
    CHECK(j.find("\"chi\": \"17\"") != std::string::npos);
}

TEST_CASE("profiles") {
    Profile desk = builtin_profile("desk");
    CHECK(desk.composite);
    CHECK(desk.composite->report.invariants.chi == 1);
    CHECK(desk.composite->report.invariants.c == 8);
    CHECK(desk.catalog.find_synthetic(1) != nullptr);

    Profile paper = builtin_profile("paper");
    CHECK(paper.composite->ratio_gt_876);

    CHECK(code_of([] { builtin_profile("nope"); }) == Errc::BadParams);
    CHECK(code_of([] { load_profile("missing.json"); }) == Errc::IoError);
}
