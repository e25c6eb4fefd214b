#include "geo4/errors.hpp"
#include "geo4/geography.hpp"
#include "geo4/plot.hpp"
#include "geo4/profile.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace geo4;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitPredicateFalse = 1;
constexpr int kExitNotCovered = 2;
constexpr int kExitInputError = 3;

int exit_code_for(const Error& e) {
    switch (e.code()) {
        case Errc::NotCovered:
        case Errc::OutOfRegion:
        case Errc::NoRealization:
        case Errc::BelowThreshold:
        case Errc::RatioTooSmall:
            return kExitNotCovered;
        default:
            return kExitInputError;
    }
}

std::string fingerprint(const std::vector<Int>& multiset) {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& v : multiset) {
        for (char ch : v.str()) {
            h ^= static_cast<unsigned char>(ch);
            h *= 1099511628211ull;
        }
        h ^= '|';
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Profile profile_from(const std::string& flag) {
    if (!flag.empty()) return load_profile(flag);
    if (const char* env = std::getenv("GEO4_PROFILE")) return load_profile(env);
    return builtin_profile("desk");
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::IoError, "cannot write '" + path + "'");
    out << text;
}

int cmd_allowed(const Int& chi, const Int& c, bool as_json) {
    AllowedVerdict v = is_allowed({chi, c});
    if (as_json) {
        json j{{"schema_version", 1},
               {"chi", chi.str()},
               {"c", c.str()},
               {"allowed", v.allowed},
               {"violations", v.violations}};
        std::cout << j.dump(2) << "\n";
    } else if (v.allowed) {
        std::cout << "allowed\n";
    } else {
        std::string why;
        for (const auto& s : v.violations) why += (why.empty() ? "" : "; ") + s;
        std::cout << why << "\n";
    }
    return v.allowed ? kExitOk : kExitPredicateFalse;
}

int cmd_realize(const Int& chi, const Int& c, const Profile& prof, bool as_json,
                const std::string& out_path) {
    LatticePoint p{chi, c};
    Certificate cert;
    Int m = 0;
    try {
        BaseRealization base = realize_base(p);
        cert = base.cert;
    } catch (const Error& e) {
        if (e.code() != Errc::OutOfRegion && e.code() != Errc::NoRealization) throw;
        if (!prof.composite) throw;
        GeneralRealization gen = realize_general(p, *prof.composite);
        cert = gen.cert;
        m = gen.m;
    }
    std::cout << cert.expr_text << "\n";
    std::string j = certificate_to_json(cert);
    if (!out_path.empty()) write_text(out_path, j + "\n");
    if (as_json)
        std::cout << j << "\n";
    else {
        std::cout << "certificate: " << (cert.ok ? "all checks pass" : "CHECK FAILURE") << " (spin,"
                  << " simply connected, symplectic, invariants)";
        if (m > 0) std::cout << "; uses " << m << " copies of " << prof.composite->label;
        std::cout << "\n";
    }
    return cert.ok ? kExitOk : kExitNotCovered;
}

int cmd_coverage(const std::string& region_path, const Profile& prof, const Int& chi_max_flag,
                 unsigned threads, bool as_json, const std::string& out_path) {
    RegionSpec region = load_region(region_path);
    if (chi_max_flag > 0) region.chi_max = chi_max_flag;
    const CompositeX* X = prof.composite ? &*prof.composite : nullptr;
    CoverageReport rep = verify_coverage(region, X, threads);
    std::string body = as_json ? coverage_to_json(rep) : coverage_table(rep);
    if (!out_path.empty())
        write_text(out_path, body + "\n");
    else
        std::cout << body << (as_json ? "\n" : "");
    if (!as_json && out_path.empty() && rep.fully_covered) std::cout << "covered 100%\n";
    return rep.fully_covered ? kExitOk : kExitNotCovered;
}

std::string designated_text(const PartialSW& p) {
    // Render one representative per +- orbit.
    std::vector<std::string> items;
    for (const auto& v : p.designated) {
        ExpVec neg = v;
        for (auto& x : neg) x = -x;
        if (v < neg) continue;
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] == 0) continue;
            if (!s.empty() && v[i] > 0) s += '+';
            if (v[i] == -1)
                s += '-';
            else if (v[i] != 1)
                s += std::to_string(v[i]);
            s += p.basis.gen(i).name;
        }
        items.push_back(s.empty() ? "0" : s);
    }
    std::string out;
    for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
    return out;
}

int cmd_sw(const std::string& arg, const Profile& prof, bool as_json) {
    std::string text = arg;
    if (std::ifstream f(arg, std::ios::binary); f) {
        std::ostringstream ss;
        ss << f.rdbuf();
        text = ss.str();
    }
    ExprPtr expr = parse(text, prof.catalog);
    EvalReport rep = eval(expr);
    AdmissibilityVerdict adm = is_complex_admissible(rep);
    std::string adm_str = adm.value == Admissibility::Admissible       ? "complex-admissible"
                          : adm.value == Admissibility::NotAdmissible ? "not complex-admissible"
                                                                      : "unknown";
    std::string adm_why;
    for (const auto& r : adm.reasoning) adm_why += (adm_why.empty() ? "" : "; ") + r;

    if (rep.sw.kind == SWStatusKind::Exact) {
        BasicClassSet bcs = basic_classes(*rep.sw.exact);
        if (as_json) {
            json j{{"schema_version", 1},
                   {"expr", serialize(expr)},
                   {"status", "exact"},
                   {"sw", json::parse(sw_to_json(*rep.sw.exact))},
                   {"text", rep.sw.exact->text()},
                   {"basic_classes", bcs.count.str()},
                   {"basic_classes_up_to_sign", bcs.count_up_to_sign.str()},
                   {"complex_admissible", adm_str},
                   {"reasoning", adm.reasoning},
                   {"formal_warning", rep.sw_formal_warning}};
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << rep.sw.exact->text() << "\n";
            std::cout << bcs.count << " classes, " << bcs.count_up_to_sign << " up to sign\n";
            std::cout << adm_str << " (" << adm_why << ")\n";
            if (rep.sw_formal_warning)
                std::cout << "note: a product formula ran with b2+ <= 1; the value is formal\n";
        }
        return kExitOk;
    }
    if (rep.sw.kind == SWStatusKind::Partial) {
        std::string cls = designated_text(*rep.sw.partial);
        if (as_json) {
            json j{{"schema_version", 1},
                   {"expr", serialize(expr)},
                   {"status", "partial"},
                   {"designated_up_to_sign", cls},
                   {"complex_admissible", adm_str},
                   {"reasoning", adm.reasoning}};
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "partial: designated nonzero classes (up to sign): " << cls << "\n";
            std::cout << adm_str << " (" << adm_why << ")\n";
        }
        return kExitOk;
    }
    if (as_json) {
        json j{{"schema_version", 1},
               {"expr", serialize(expr)},
               {"status", "unknown"},
               {"note", rep.sw.note}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "unknown: " << rep.sw.note << "\n";
    }
    return kExitOk;
}

int cmd_exotic(const Int& n, std::int64_t count, const Profile& prof, bool as_json) {
    if (!prof.composite)
        fail(Errc::BadParams, "profile '" + prof.name + "' has no composite X configured");
    ExoticFamily fam = exotic_family(n, count, *prof.composite);
    if (as_json) {
        json members = json::array();
        for (const auto& mem : fam.members) {
            json e{{"expr", mem.expr_text},
                   {"terms", mem.sw_multiset.size()},
                   {"multiset_fingerprint", fingerprint(mem.sw_multiset)}};
            if (mem.knot)
                e["knot"] = "T(" + std::to_string(mem.knot->p) + "," + std::to_string(mem.knot->q) + ")";
            members.push_back(std::move(e));
        }
        json j{{"schema_version", 1},
               {"n", fam.n.str()},
               {"chi", fam.point.chi.str()},
               {"c", fam.point.c.str()},
               {"homeo", fam.homeo.standard_name ? *fam.homeo.standard_name : ""},
               {"threshold_chi", fam.threshold.str()},
               {"x_copies", fam.m.str()},
               {"pairwise_distinct", fam.pairwise_distinct},
               {"members", members},
               {"notes", fam.notes}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "exotic family at (chi, c) = (" << fam.point.chi << ", " << fam.point.c
                  << "), homeomorphism type "
                  << (fam.homeo.standard_name ? *fam.homeo.standard_name : std::string("?"))
                  << "\n";
        std::cout << "base W: " << fam.members[0].expr_text << "\n";
        std::cout << "member  knot      terms     multiset fingerprint\n";
        for (std::size_t i = 0; i < fam.members.size(); ++i) {
            const auto& mem = fam.members[i];
            std::string knot = mem.knot ? "T(" + std::to_string(mem.knot->p) + "," +
                                              std::to_string(mem.knot->q) + ")"
                                        : "-";
            std::printf("%-7zu %-9s %-9zu %s\n", i, knot.c_str(), mem.sw_multiset.size(),
                        fingerprint(mem.sw_multiset).c_str());
        }
        std::cout << "pairwise distinct invariant multisets: "
                  << (fam.pairwise_distinct ? "yes" : "NO") << "\n";
        for (const auto& note : fam.notes) std::cout << "note: " << note << "\n";
    }
    return fam.pairwise_distinct ? kExitOk : kExitPredicateFalse;
}

int cmd_plot(const std::string& spec_path, const Profile& prof, bool true_aspect_flag) {
    std::optional<RegionLine> fline;
    if (prof.composite) fline = f_line(prof.composite->report.invariants);
    PlotSpec spec = load_plot_spec(spec_path, fline);
    if (true_aspect_flag) spec.true_aspect = true;
    write_plot(spec);
    std::cout << "wrote " << spec.output_path << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"geo4 - exact lattice geography of spin symplectic 4-manifold constructions"};
    app.require_subcommand(1);

    std::string profile_flag;
    app.add_option("--profile", profile_flag,
                   "profile name (desk, desk-threshold, desk-exotic, paper) or JSON path;"
                   " env GEO4_PROFILE is the fallback");

    std::int64_t chi_arg = 0, c_arg = 0;
    bool json_flag = false;

    auto* allowed = app.add_subcommand("allowed", "test whether (chi, c) is an allowed point");
    allowed->add_option("chi", chi_arg)->required();
    allowed->add_option("c", c_arg)->required();
    allowed->add_flag("--json", json_flag);

    std::string out_path;
    auto* realize = app.add_subcommand("realize", "construct a manifold at (chi, c)");
    realize->add_option("chi", chi_arg)->required();
    realize->add_option("c", c_arg)->required();
    realize->add_flag("--json", json_flag);
    realize->add_option("--out", out_path, "write the certificate JSON here");

    std::string region_path;
    std::int64_t chi_max_flag = 0;
    unsigned threads = 1;
    auto* coverage = app.add_subcommand("coverage", "enumerate and realize a region");
    coverage->add_option("region", region_path, "region JSON file")->required();
    coverage->add_flag("--json", json_flag);
    coverage->add_option("--out", out_path);
    coverage->add_option("--chi-max", chi_max_flag, "override the region's chi_max");
    coverage->add_option("--threads", threads, "parallel point evaluation");

    std::string sw_arg;
    auto* sw = app.add_subcommand("sw", "formal invariant of a construction expression");
    sw->add_option("expr", sw_arg, "expression text or a file containing one")->required();
    sw->add_flag("--json", json_flag);

    std::int64_t exotic_n = 0, exotic_count = 1;
    auto* exotic = app.add_subcommand("exotic", "exotic family on (2n+1)(S^2 x S^2)");
    exotic->add_option("n", exotic_n)->required();
    exotic->add_option("--count", exotic_count, "family size including the base");
    exotic->add_flag("--json", json_flag);

    std::string plot_path;
    bool true_aspect = false;
    auto* plot = app.add_subcommand("plot", "render the (chi, c) plane as SVG");
    plot->add_option("spec", plot_path, "plot spec JSON")->required();
    plot->add_flag("--true-aspect", true_aspect, "disable the default 1/8 vertical squeeze");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInputError;
    }

    try {
        if (allowed->parsed()) return cmd_allowed(chi_arg, c_arg, json_flag);
        Profile prof = profile_from(profile_flag);
        if (realize->parsed()) return cmd_realize(chi_arg, c_arg, prof, json_flag, out_path);
        if (coverage->parsed())
            return cmd_coverage(region_path, prof, chi_max_flag, threads, json_flag, out_path);
        if (sw->parsed()) return cmd_sw(sw_arg, prof, json_flag);
        if (exotic->parsed()) return cmd_exotic(exotic_n, exotic_count, prof, json_flag);
        if (plot->parsed()) return cmd_plot(plot_path, prof, true_aspect);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
