#include "geo4/geography.hpp"

#include "geo4/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

namespace geo4 {

using nlohmann::json;

Certificate certify(const LatticePoint& p, const ExprPtr& expr) {
    Certificate c;
    c.point = p;
    c.expr = expr;
    c.expr_text = serialize(expr);
    c.report = eval(expr, {.with_sw = false});
    const EvalReport& r = c.report;
    c.checks.emplace_back("invariants match the lattice point",
                          r.invariants.chi == p.chi && r.invariants.c == p.c);
    c.checks.emplace_back("allowed lattice point", static_cast<bool>(is_allowed(p)));
    c.checks.emplace_back("spin", r.spin);
    c.checks.emplace_back("simply connected", r.simply_connected);
    c.checks.emplace_back("symplectic", r.symplectic);
    c.ok = std::all_of(c.checks.begin(), c.checks.end(), [](const auto& x) { return x.second; });
    return c;
}

std::string certificate_to_json(const Certificate& c) {
    json checks = json::array();
    for (const auto& [name, pass] : c.checks) checks.push_back(json{{"check", name}, {"pass", pass}});
    json j{{"schema_version", 1},
           {"chi", c.point.chi.str()},
           {"c", c.point.c.str()},
           {"expr", c.expr_text},
           {"ok", c.ok},
           {"checks", checks},
           {"sigma", c.report.invariants.sigma.str()},
           {"spin", c.report.spin},
           {"simply_connected", c.report.simply_connected},
           {"symplectic", c.report.symplectic},
           {"provenance", c.report.provenance}};
    return j.dump(2);
}

namespace {

std::string point_str(const LatticePoint& p) {
    return "(" + p.chi.str() + ", " + p.c.str() + ")";
}

ExprPtr h_leaf(const Int& k_prime) {
    return make_leaf(make_block(Family::H, {{"k", 2 * k_prime}}));
}

ExprPtr e_leaf(const Int& n) { return make_leaf(make_block(Family::E, {{"n", 2 * n}})); }

} // namespace

BaseRealization realize_base(const LatticePoint& p) {
    AllowedVerdict av = is_allowed(p);
    if (!av.allowed) {
        std::string why;
        for (const auto& v : av.violations) why += (why.empty() ? "" : "; ") + v;
        fail(Errc::OutOfRegion, point_str(p) + " is not an allowed lattice point (" + why + ")");
    }
    // The reachable set, residue by residue: c = 0 needs chi even >= 4;
    // c == 8 (mod 16) is covered up to the Noether line c = 2chi-6; c == 0
    // (mod 16), c >= 16 is covered up to the parallel line c = 2chi-12.
    BaseRealization out;
    if (p.c == 0) {
        // Allowedness forces chi even here.
        if (p.chi < 4)
            fail(Errc::NoRealization,
                 point_str(p) + ": the elliptic-line family X(2n) needs chi >= 4 (chi = 2 is"
                                " the K3 point itself)");
        out.x2n_form = true;
        out.cert = certify(p, make_leaf(make_block(Family::X2n, {{"n", p.chi / 2}})));
        return out;
    }
    Int residue = mod_floor(p.c, 16);
    if (residue == 8) {
        out.k_prime = (p.c + 8) / 16;
        out.n = (p.chi - (8 * out.k_prime - 1)) / 2;
        if (out.n < 0)
            fail(Errc::OutOfRegion, point_str(p) + ": above the Noether line c = 2chi-6 (n ="
                                        " (chi - 8k' + 1)/2 = " + out.n.str() + " < 0)");
        ExprPtr expr = h_leaf(out.k_prime);
        if (out.n >= 1) expr = make_fiber_sum(expr, e_leaf(out.n), "f", "f");
        out.cert = certify(p, expr);
        return out;
    }
    // residue == 0 with c >= 16 (c == 0 handled above).
    out.has_h7 = true;
    out.k_prime = p.c / 16;
    out.n = (p.chi - 8 * out.k_prime - 6) / 2;
    if (out.n < 0)
        fail(Errc::OutOfRegion, point_str(p) + ": above the line c = 2chi-12 for the residue"
                                    " c == 0 (mod 16) (n = (chi - 8k' - 6)/2 = " + out.n.str() +
                                    " < 0)");
    ExprPtr expr = make_fiber_sum(h_leaf(1), h_leaf(out.k_prime), "f", "f");
    if (out.n >= 1) expr = make_fiber_sum(expr, e_leaf(out.n), "f", "f");
    out.cert = certify(p, expr);
    return out;
}

namespace {

CompositeX finish_composite(ExprPtr expr, std::string label) {
    CompositeX x;
    x.expr = std::move(expr);
    x.label = std::move(label);
    x.report = eval(x.expr);
    if (x.report.invariants.chi == 0) fail(Errc::BadParams, "composite has chi = 0");
    x.ratio = Rat(x.report.invariants.c, x.report.invariants.chi);
    x.sigma_positive = x.report.invariants.sigma > 0;
    x.ratio_gt_876 = x.ratio > Rat(876, 100);
    return x;
}

} // namespace

CompositeX build_composite_X(const Int& x, const Int& g, const Int& k) {
    if (x < 1 || g < 2 || k < 1) fail(Errc::BadParams, "need x >= 1, g >= 2, k >= 1");
    ExprPtr y = make_leaf(make_block(Family::Y, {{"x", x}, {"g", g}}));
    ExprPtr chain = iterate_fiber_sum(y, k.convert_to<std::int64_t>(), "Σ_g");
    ExprPtr z = make_leaf(make_block(Family::Z, {{"g", g}}));
    ExprPtr expr = make_fiber_sum(chain, z, "Σ_g", "Σ");
    return finish_composite(std::move(expr), "X(x=" + x.str() + ",g=" + g.str() + ",k=" + k.str() + ")");
}

CompositeX composite_from_block(const BlockSpec& block) {
    return finish_composite(make_leaf(block), block_label(block));
}

GeneralRealization realize_general(const LatticePoint& p, const CompositeX& X,
                                   bool require_e_factor) {
    AllowedVerdict av = is_allowed(p);
    if (!av.allowed) {
        std::string why;
        for (const auto& v : av.violations) why += (why.empty() ? "" : "; ") + v;
        fail(Errc::OutOfRegion, point_str(p) + " is not an allowed lattice point (" + why + ")");
    }
    if (p.chi < 1) fail(Errc::OutOfRegion, point_str(p) + " is outside the first quadrant");
    RegionLine f = f_line(X.report.invariants);
    if (Rat(p.c) > f.at(p.chi))
        fail(Errc::OutOfRegion, point_str(p) + " lies above the f line of " + X.label +
                                    " (f(chi) = " + rational_string(f.at(p.chi)) + ")");

    const Int& cx = X.report.invariants.chi;
    const Int& cc = X.report.invariants.c;
    if (cx < 1 || cc < 0)
        fail(Errc::BadParams, X.label + " has (chi, c) = (" + cx.str() + ", " + cc.str() +
                                  "); lifting needs chi >= 1 and c >= 0");
    GeneralRealization out;
    for (Int m = 0;; ++m) {
        LatticePoint residual{p.chi - m * cx, p.c - m * cc};
        if (residual.chi < 1 || residual.c < 0) {
            out.trace.push_back("m = " + m.str() + ": residual " + point_str(residual) +
                                " leaves the first quadrant; search exhausted");
            break;
        }
        try {
            BaseRealization base = realize_base(residual);
            if (require_e_factor && base.n < 1) {
                out.trace.push_back("m = " + m.str() + ": residual " + point_str(residual) +
                                    " realizable but without an E factor; skipped");
                continue;
            }
            out.m = m;
            out.base = base;
            ExprPtr expr = base.cert.expr;
            if (m > 0)
                expr = iterate_fiber_sum(X.expr, m.convert_to<std::int64_t>(), "f",
                                         base.cert.expr);
            out.cert = certify(p, expr);
            out.trace.push_back("m = " + m.str() + ": residual " + point_str(residual) +
                                " realized by " + base.cert.expr_text);
            return out;
        } catch (const Error& e) {
            if (e.code() != Errc::OutOfRegion && e.code() != Errc::NoRealization) throw;
            out.trace.push_back("m = " + m.str() + ": " + e.what());
        }
    }
    std::string trace;
    for (const auto& t : out.trace) trace += "\n  " + t;
    fail(Errc::NotCovered, point_str(p) + " is not covered by m copies of " + X.label +
                               " plus a base factor; search trace:" + trace);
}

bool RegionSpec::contains(const LatticePoint& p) const {
    for (const auto& c : constraints) {
        switch (c.kind) {
            case RegionConstraint::Kind::Nonneg:
                if (p.c < 0) return false;
                break;
            case RegionConstraint::Kind::Congruence:
                if (mod_floor(p.c - 8 * p.chi - c.residue, c.modulus) != 0) return false;
                break;
            case RegionConstraint::Kind::LineLE:
                if (Rat(p.c) > c.slope * Rat(p.chi) + c.intercept) return false;
                break;
            case RegionConstraint::Kind::LineGE:
                if (Rat(p.c) < c.slope * Rat(p.chi) + c.intercept) return false;
                break;
        }
    }
    return true;
}

std::optional<Rat> RegionSpec::upper_bound(const Int& chi) const {
    std::optional<Rat> best;
    for (const auto& c : constraints)
        if (c.kind == RegionConstraint::Kind::LineLE) {
            Rat v = c.slope * Rat(chi) + c.intercept;
            if (!best || v < *best) best = v;
        }
    return best;
}

namespace {

Rat rat_from_json(const json& j, const std::string& where) {
    if (j.is_number_integer()) return Rat(j.get<std::int64_t>());
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        auto slash = s.find('/');
        if (slash == std::string::npos) return Rat(Int(s));
        return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
    }
    if (j.is_array() && j.size() == 2)
        return Rat(Int(j[0].get<std::int64_t>()), Int(j[1].get<std::int64_t>()));
    fail(Errc::ParseError, where + ": expected an integer, \"p/q\" string, or [num, den] pair");
}

RegionLine line_by_name(const std::string& s) {
    for (LineName n : {LineName::Elliptic, LineName::Noether, LineName::NoetherParallel12,
                       LineName::SignatureZero, LineName::Ratio876, LineName::BMY})
        if (s == line_name_str(n)) return named_line(n);
    fail(Errc::ParseError, "unknown line name '" + s + "'");
}

} // namespace

RegionSpec region_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(Errc::ParseError, std::string("region JSON: ") + e.what());
    }
    RegionSpec r;
    r.name = j.value("name", std::string("region"));
    if (!j.contains("chi_max")) fail(Errc::ParseError, "region JSON: chi_max is required");
    r.chi_max = Int(j.at("chi_max").get<std::int64_t>());
    if (r.chi_max < 1) fail(Errc::ParseError, "region JSON: chi_max must be >= 1");
    for (const auto& c : j.value("constraints", json::array())) {
        std::string type = c.at("type").get<std::string>();
        RegionConstraint rc;
        if (type == "nonneg") {
            rc.kind = RegionConstraint::Kind::Nonneg;
        } else if (type == "congruence") {
            rc.kind = RegionConstraint::Kind::Congruence;
            if (c.contains("modulus")) rc.modulus = Int(c.at("modulus").get<std::int64_t>());
            if (c.contains("residue")) rc.residue = Int(c.at("residue").get<std::int64_t>());
            if (rc.modulus < 1) fail(Errc::ParseError, "congruence modulus must be positive");
        } else if (type == "line_le" || type == "line_ge") {
            rc.kind = type == "line_le" ? RegionConstraint::Kind::LineLE
                                        : RegionConstraint::Kind::LineGE;
            if (c.contains("line")) {
                RegionLine l = line_by_name(c.at("line").get<std::string>());
                rc.slope = l.slope;
                rc.intercept = l.intercept;
            } else {
                rc.slope = rat_from_json(c.at("slope"), "constraint slope");
                rc.intercept = c.contains("intercept")
                                   ? rat_from_json(c.at("intercept"), "constraint intercept")
                                   : Rat(0);
            }
        } else {
            fail(Errc::ParseError, "unknown constraint type '" + type + "'");
        }
        r.constraints.push_back(rc);
    }
    return r;
}

RegionSpec load_region(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::IoError, "cannot open region file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return region_from_json_text(ss.str());
}

CoverageReport verify_coverage(const RegionSpec& region, const CompositeX* X, unsigned threads) {
    CoverageReport rep;
    rep.region_name = region.name;
    rep.chi_max = region.chi_max;

    // Enumerate the allowed points of the region, chi ascending then c
    // ascending. Allowedness pins c to one residue class mod 16.
    std::vector<LatticePoint> pts;
    for (Int chi = 1; chi <= region.chi_max; ++chi) {
        auto ub = region.upper_bound(chi);
        if (!ub) fail(Errc::BadParams, "region '" + region.name + "' has no upper line; the"
                                       " enumeration would not terminate");
        Int cmax = floor_rat(*ub);
        for (Int c = mod_floor(8 * chi, 16); c <= cmax; c += 16) {
            LatticePoint p{chi, c};
            if (region.contains(p) && is_allowed(p).allowed) pts.push_back(p);
        }
    }

    std::vector<CoveragePoint> results(pts.size());
    auto work = [&](std::size_t i) {
        CoveragePoint out;
        out.p = pts[i];
        try {
            BaseRealization base = realize_base(pts[i]);
            out.realized = base.cert.ok;
            out.expr_text = base.cert.expr_text;
            if (!base.cert.ok) out.reason = "certificate check failed";
        } catch (const Error& e) {
            if (e.code() != Errc::OutOfRegion && e.code() != Errc::NoRealization) throw;
            if (X) {
                try {
                    GeneralRealization gen = realize_general(pts[i], *X);
                    out.realized = gen.cert.ok;
                    out.m = gen.m;
                    out.expr_text = gen.cert.expr_text;
                    if (!gen.cert.ok) out.reason = "certificate check failed";
                } catch (const Error& e2) {
                    out.realized = false;
                    out.reason = e2.what();
                }
            } else {
                out.realized = false;
                out.reason = e.what();
            }
        }
        results[i] = std::move(out);
    };

    if (threads <= 1 || pts.size() < 2) {
        for (std::size_t i = 0; i < pts.size(); ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        auto runner = [&] {
            for (std::size_t i = next.fetch_add(1); i < pts.size(); i = next.fetch_add(1)) work(i);
        };
        std::vector<std::thread> pool;
        unsigned nt = std::min<unsigned>(threads, std::thread::hardware_concurrency());
        if (nt == 0) nt = 2;
        for (unsigned t = 0; t < nt; ++t) pool.emplace_back(runner);
        for (auto& t : pool) t.join();
    }

    rep.points = std::move(results);
    for (const auto& p : rep.points)
        if (p.realized)
            ++rep.realized_count;
        else
            ++rep.unrealized_count;
    rep.fully_covered = rep.unrealized_count == 0;
    return rep;
}

std::string coverage_to_json(const CoverageReport& r) {
    json pts = json::array();
    for (const auto& p : r.points) {
        json e{{"chi", p.p.chi.str()}, {"c", p.p.c.str()}, {"realized", p.realized}};
        if (p.realized) {
            e["expr"] = p.expr_text;
            e["m"] = p.m.str();
        } else {
            e["reason"] = p.reason;
        }
        pts.push_back(std::move(e));
    }
    json j{{"schema_version", 1},
           {"region", r.region_name},
           {"chi_max", r.chi_max.str()},
           {"realized", r.realized_count.str()},
           {"unrealized", r.unrealized_count.str()},
           {"fully_covered", r.fully_covered},
           {"points", pts}};
    return j.dump(2);
}

std::string coverage_table(const CoverageReport& r) {
    std::ostringstream out;
    Int total = r.realized_count + r.unrealized_count;
    out << "region '" << r.region_name << "' up to chi = " << r.chi_max << ": " << r.realized_count
        << "/" << total << " allowed points realized";
    if (total > 0) {
        Rat pct = total == 0 ? Rat(0) : Rat(100 * r.realized_count, total);
        out << " (" << decimal_string(pct, 1) << "%)";
    }
    out << (r.fully_covered ? " - fully covered" : "") << "\n";
    for (const auto& p : r.points) {
        out << "  (" << p.p.chi << ", " << p.p.c << ")  ";
        if (p.realized)
            out << (p.m > 0 ? "[m=" + p.m.str() + "] " : "") << p.expr_text;
        else
            out << "UNREALIZED: " << p.reason;
        out << "\n";
    }
    return out.str();
}

PpxVerdict ppx_admissible(const LatticePoint& p) {
    PpxVerdict v;
    bool in_strip = Rat(p.c) >= Rat(2 * p.chi - 6) && Rat(p.c) < Rat(3 * (p.chi - 5));
    if (!in_strip) {
        v.value = PpxVerdict::Value::NotApplicable;
        v.reasons.push_back(point_str(p) + " is outside the strip 2chi-6 <= c < 3(chi-5)");
        return v;
    }
    bool fam1 = p.c == 2 * (p.chi - 3) && mod_floor(p.c, 8) == 0 && mod_floor(p.c / 8, 2) == 1;
    bool fam2 = 3 * p.c == 8 * (p.chi - 4) && mod_floor(p.chi, 3) == 0;
    if (fam1) v.reasons.push_back("c = 2(chi-3) with c = 8k, k odd");
    if (fam2) v.reasons.push_back("c = (8/3)(chi-4) with chi divisible by 3");
    if (fam1 || fam2) {
        v.value = PpxVerdict::Value::Admissible;
    } else {
        v.value = PpxVerdict::Value::NotAdmissible;
        v.reasons.push_back("inside the strip but on neither exceptional family: no simply"
                            " connected spin complex surface has these invariants");
    }
    return v;
}

Int exotic_threshold(const CompositeX& X) {
    RegionLine f = f_line(X.report.invariants);
    if (f.slope <= 8)
        fail(Errc::RatioTooSmall, X.label + " has ratio " + rational_string(f.slope) +
                                      " <= 8: the f line never reaches c = 8chi");
    // f(chi) >= 8chi  <=>  chi >= -intercept / (slope - 8).
    Rat bound = -f.intercept / (f.slope - 8);
    Int n = ceil_rat(bound);
    return n < 1 ? Int(1) : n;
}

ExoticFamily exotic_family(const Int& n, std::int64_t count, const CompositeX& X) {
    if (count < 1) fail(Errc::BadParams, "count must be >= 1");
    ExoticFamily fam;
    fam.n = n;
    fam.point = {n + 1, 8 * n + 8};
    fam.threshold = exotic_threshold(X);
    if (n + 1 < fam.threshold)
        fail(Errc::BelowThreshold,
             "n = " + n.str() + " puts chi = " + (n + 1).str() + " below the threshold chi = " +
                 fam.threshold.str() + " of " + X.label + " (least chi with f(chi) >= 8chi)");

    GeneralRealization gen = realize_general(fam.point, X, /*require_e_factor=*/true);
    fam.m = gen.m;
    fam.homeo = homeo_type(fam.point, true);
    fam.notes.push_back("signature 0 and spin: every member is homeomorphic to " +
                        (fam.homeo.standard_name ? *fam.homeo.standard_name : std::string("?")));
    fam.notes.push_back("the standard smooth structure on that connected sum has vanishing"
                        " invariant, while every member below has a nonzero one; each member is"
                        " therefore exotic");

    EvalReport base_full = eval(gen.cert.expr);
    if (base_full.sw.kind != SWStatusKind::Exact)
        fail(Errc::PartialSW, "the configured X does not give an exact invariant for W; the"
                              " distinctness witness needs exact expansions");
    // The E factor is the last leaf of W; its fiber torus carries the surgery.
    std::string torus_id, torus_class;
    for (const auto& s : base_full.slots)
        if (s.origin_leaf == base_full.leaf_count && s.base_id == "T" && s.slot.genus == 1) {
            torus_id = s.slot.id;
            torus_class = s.sw_class;
        }
    if (torus_id.empty())
        fail(Errc::MissingSlot, "no fiber torus available on the E factor of W");

    ExoticMember base;
    base.expr = gen.cert.expr;
    base.expr_text = gen.cert.expr_text;
    base.report = base_full;
    base.sw_multiset = abs_coeff_multiset(*base_full.sw.exact);
    fam.members.push_back(std::move(base));

    // A report skeleton without the base expansion, so member copies stay
    // cheap; surgery is invariant-neutral and replaces only the invariant
    // (eval over the full member expression agrees; see the construct tests).
    EvalReport skeleton = base_full;
    skeleton.sw.exact.reset();
    skeleton.sw.canonical.reset();

    fam.members.resize(static_cast<std::size_t>(count));
    std::vector<std::thread> pool;
    std::atomic<std::int64_t> next{1};
    // Bounded pool: the expansions are allocation-heavy, so oversubscription
    // costs more in allocator contention than it buys.
    unsigned nt = std::max(1u, std::min({std::thread::hardware_concurrency(), 4u,
                                         static_cast<unsigned>(count - 1)}));
    auto worker = [&] {
        for (std::int64_t j = next.fetch_add(1); j < count; j = next.fetch_add(1)) {
            TorusKnot knot{2, 2 * j + 1};
            ExoticMember mem;
            mem.expr = make_knot_surgery(gen.cert.expr, torus_id, knot);
            mem.expr_text = serialize(mem.expr);
            mem.knot = knot;
            mem.report = skeleton;
            mem.report.sw.exact =
                sw_knot_surgery(*base_full.sw.exact, torus_class, knot.p, knot.q);
            mem.sw_multiset = abs_coeff_multiset(*mem.report.sw.exact);
            fam.members[static_cast<std::size_t>(j)] = std::move(mem);
        }
    };
    for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    fam.pairwise_distinct = true;
    for (std::size_t a = 0; a < fam.members.size() && fam.pairwise_distinct; ++a)
        for (std::size_t b = a + 1; b < fam.members.size(); ++b)
            if (fam.members[a].sw_multiset == fam.members[b].sw_multiset) {
                fam.pairwise_distinct = false;
                break;
            }
    return fam;
}

} // namespace geo4
