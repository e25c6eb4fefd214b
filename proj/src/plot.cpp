#include "geo4/plot.hpp"

#include "geo4/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace geo4 {

using nlohmann::json;

namespace {

constexpr int kMargin = 70;
constexpr int kPlotWidth = 720;

bool valid_color(const std::string& c) {
    if (c.size() != 7 || c[0] != '#') return false;
    for (std::size_t i = 1; i < 7; ++i)
        if (!std::isxdigit(static_cast<unsigned char>(c[i]))) return false;
    return true;
}

std::string line_label(LineName n) {
    switch (n) {
        case LineName::Elliptic: return "c=0";
        case LineName::Noether: return "c=2χ−6";
        case LineName::NoetherParallel12: return "c=2χ−12";
        case LineName::SignatureZero: return "c=8χ";
        case LineName::Ratio876: return "c=8.76χ";
        case LineName::BMY: return "c=9χ";
        case LineName::FLine: return "f(χ)";
    }
    return "?";
}

struct Mapper {
    Rat chi_max;
    Rat c_top;
    Rat x_scale; // px per chi
    Rat y_scale; // px per c unit
    Rat height;  // plot area height in px

    std::string px(const Rat& chi) const {
        return decimal_string(Rat(kMargin) + chi * x_scale, 2);
    }
    std::string py(const Rat& c) const {
        return decimal_string(Rat(kMargin) + (c_top - c) * y_scale, 2);
    }
};

} // namespace

std::string render_svg(const PlotSpec& spec) {
    if (spec.chi_max < 1) fail(Errc::BadParams, "chi_max must be >= 1");
    for (const auto& g : spec.groups)
        if (!valid_color(g.color))
            fail(Errc::BadParams, "invalid color '" + g.color + "' (want #rrggbb)");

    Mapper m;
    m.chi_max = Rat(spec.chi_max);
    m.c_top = Rat(9) * m.chi_max; // the steepest named line
    m.x_scale = Rat(kPlotWidth) / m.chi_max;
    m.y_scale = spec.true_aspect ? m.x_scale : m.x_scale / 8;
    m.height = m.c_top * m.y_scale;

    std::ostringstream svg;
    Rat total_w = Rat(kPlotWidth) + 2 * kMargin + 90; // room for labels
    Rat total_h = m.height + 2 * kMargin;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
        << decimal_string(total_w, 0) << "\" height=\"" << decimal_string(total_h, 0)
        << "\" font-family=\"monospace\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

    // Axes.
    svg << "<line x1=\"" << m.px(0) << "\" y1=\"" << m.py(0) << "\" x2=\"" << m.px(m.chi_max)
        << "\" y2=\"" << m.py(0) << "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    svg << "<line x1=\"" << m.px(0) << "\" y1=\"" << m.py(0) << "\" x2=\"" << m.px(0)
        << "\" y2=\"" << m.py(m.c_top) << "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << m.px(m.chi_max) << "\" y=\""
        << decimal_string(Rat(kMargin) + m.height + 34, 2) << "\" text-anchor=\"end\">χ</text>\n";
    svg << "<text x=\"10\" y=\"" << decimal_string(Rat(kMargin) - 10, 2) << "\">c</text>\n";

    // chi ticks: ten of them, integer spaced.
    Int step = spec.chi_max / 10;
    if (step < 1) step = 1;
    for (Int t = 0; t <= spec.chi_max; t += step) {
        svg << "<line x1=\"" << m.px(Rat(t)) << "\" y1=\"" << m.py(0) << "\" x2=\"" << m.px(Rat(t))
            << "\" y2=\"" << decimal_string(Rat(kMargin) + m.height + 5, 2)
            << "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
        svg << "<text x=\"" << m.px(Rat(t)) << "\" y=\""
            << decimal_string(Rat(kMargin) + m.height + 20, 2) << "\" text-anchor=\"middle\">" << t
            << "</text>\n";
    }
    Int cstep = 8 * step;
    for (Int t = 0; t <= floor_rat(m.c_top); t += cstep) {
        svg << "<line x1=\"" << decimal_string(Rat(kMargin) - 5, 2) << "\" y1=\"" << m.py(Rat(t))
            << "\" x2=\"" << m.px(0) << "\" y2=\"" << m.py(Rat(t))
            << "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
        svg << "<text x=\"" << decimal_string(Rat(kMargin) - 8, 2) << "\" y=\"" << m.py(Rat(t))
            << "\" text-anchor=\"end\" dominant-baseline=\"middle\">" << t << "</text>\n";
    }

    // Requested region lines, clipped to 0 <= c <= c_top, 0 <= chi <= chi_max.
    for (LineName name : spec.show_lines) {
        RegionLine line;
        if (name == LineName::FLine) {
            if (!spec.fline) continue; // no composite configured
            line = *spec.fline;
        } else {
            line = named_line(name);
        }
        Rat chi_lo = 0, chi_hi = m.chi_max;
        if (line.slope > 0) {
            Rat chi_at0 = -line.intercept / line.slope;
            Rat chi_attop = (m.c_top - line.intercept) / line.slope;
            if (chi_at0 > chi_lo) chi_lo = chi_at0;
            if (chi_attop < chi_hi) chi_hi = chi_attop;
        } else if (line.at(Rat(0)) < 0 || line.at(Rat(0)) > m.c_top) {
            continue;
        }
        if (chi_lo > chi_hi) continue;
        Rat c_lo = line.at(chi_lo), c_hi = line.at(chi_hi);
        svg << "<line x1=\"" << m.px(chi_lo) << "\" y1=\"" << m.py(c_lo) << "\" x2=\""
            << m.px(chi_hi) << "\" y2=\"" << m.py(c_hi)
            << "\" stroke=\"#555555\" stroke-width=\"1\" stroke-dasharray=\"6,3\"/>\n";
        svg << "<text x=\"" << decimal_string(Rat(kMargin) + chi_hi * m.x_scale + 6, 2)
            << "\" y=\"" << m.py(c_hi) << "\" dominant-baseline=\"middle\">" << line_label(name)
            << "</text>\n";
    }

    // Point groups.
    for (const auto& g : spec.groups) {
        for (const auto& p : g.filled) {
            if (p.chi < 0 || Rat(p.chi) > m.chi_max || p.c < 0 || Rat(p.c) > m.c_top) continue;
            svg << "<circle cx=\"" << m.px(Rat(p.chi)) << "\" cy=\"" << m.py(Rat(p.c))
                << "\" r=\"3\" fill=\"" << g.color << "\"/>\n";
        }
        for (const auto& p : g.hollow) {
            if (p.chi < 0 || Rat(p.chi) > m.chi_max || p.c < 0 || Rat(p.c) > m.c_top) continue;
            svg << "<circle cx=\"" << m.px(Rat(p.chi)) << "\" cy=\"" << m.py(Rat(p.c))
                << "\" r=\"3\" fill=\"none\" stroke=\"" << g.color << "\" stroke-width=\"1.5\"/>\n";
        }
    }

    // Legend.
    int ly = 20;
    for (const auto& g : spec.groups) {
        svg << "<circle cx=\"" << kMargin + 10 << "\" cy=\"" << ly << "\" r=\"4\" fill=\""
            << g.color << "\"/>\n";
        svg << "<text x=\"" << kMargin + 20 << "\" y=\"" << ly + 4 << "\">" << g.label
            << "</text>\n";
        ly += 16;
    }

    svg << "</svg>\n";
    return svg.str();
}

PlotSpec load_plot_spec(const std::string& path, const std::optional<RegionLine>& fline) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::IoError, "cannot open plot spec '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    json j;
    try {
        j = json::parse(ss.str());
    } catch (const json::exception& e) {
        fail(Errc::ParseError, std::string("plot spec JSON: ") + e.what());
    }

    PlotSpec spec;
    spec.fline = fline;
    if (j.contains("chi_max")) spec.chi_max = Int(j.at("chi_max").get<std::int64_t>());
    spec.true_aspect = j.value("true_aspect", false);
    spec.output_path = j.value("out", std::string("plot.svg"));
    if (j.contains("show_lines")) {
        for (const auto& s : j.at("show_lines")) {
            std::string name = s.get<std::string>();
            bool found = false;
            for (LineName n : {LineName::Elliptic, LineName::Noether, LineName::NoetherParallel12,
                               LineName::SignatureZero, LineName::Ratio876, LineName::BMY,
                               LineName::FLine})
                if (name == line_name_str(n)) {
                    spec.show_lines.push_back(n);
                    found = true;
                }
            if (!found) fail(Errc::ParseError, "unknown line name '" + name + "'");
        }
    } else {
        spec.show_lines = {LineName::Elliptic,     LineName::Noether, LineName::NoetherParallel12,
                           LineName::SignatureZero, LineName::Ratio876, LineName::BMY};
    }

    for (const auto& src : j.value("points", json::array())) {
        PlotPointGroup g;
        g.color = src.at("color").get<std::string>();
        std::string file = src.at("source").get<std::string>();
        g.label = src.value("label", file);
        std::ifstream pin(file, std::ios::binary);
        if (!pin) fail(Errc::IoError, "cannot open point source '" + file + "'");
        std::ostringstream ps;
        ps << pin.rdbuf();
        json pj;
        try {
            pj = json::parse(ps.str());
        } catch (const json::exception& e) {
            fail(Errc::ParseError, "point source '" + file + "': " + e.what());
        }
        auto as_int = [](const json& v) {
            return v.is_string() ? Int(v.get<std::string>()) : Int(v.get<std::int64_t>());
        };
        if (pj.contains("points")) { // coverage report
            for (const auto& p : pj.at("points")) {
                LatticePoint lp{as_int(p.at("chi")), as_int(p.at("c"))};
                if (p.value("realized", true))
                    g.filled.push_back(lp);
                else
                    g.hollow.push_back(lp);
            }
        } else if (pj.contains("chi") && pj.contains("c")) { // single certificate
            g.filled.push_back({as_int(pj.at("chi")), as_int(pj.at("c"))});
        } else {
            fail(Errc::ParseError, "point source '" + file + "' is neither a coverage report"
                                   " nor a certificate");
        }
        spec.groups.push_back(std::move(g));
    }
    return spec;
}

void write_plot(const PlotSpec& spec) {
    std::string svg = render_svg(spec);
    std::ofstream out(spec.output_path, std::ios::binary);
    if (!out) fail(Errc::IoError, "cannot write '" + spec.output_path + "'");
    out << svg;
}

} // namespace geo4
