#ifndef GEO4_PLOT_HPP
#define GEO4_PLOT_HPP

#include "geo4/invariants.hpp"

#include <optional>
#include <string>
#include <vector>

namespace geo4 {

struct PlotPointGroup {
    std::string label;
    std::string color; // "#rrggbb"
    std::vector<LatticePoint> filled;
    std::vector<LatticePoint> hollow; // e.g. unrealized coverage points
};

struct PlotSpec {
    Int chi_max = 50;
    std::vector<LineName> show_lines;
    std::optional<RegionLine> fline; // used when show_lines requests FLine
    std::vector<PlotPointGroup> groups;
    bool true_aspect = false; // default squeezes c by 1/8 so the wedge reads
    std::string output_path;
};

// Standalone deterministic SVG of the (chi, c) plane: byte-identical output
// for identical inputs, no external references.
std::string render_svg(const PlotSpec& spec);

// Reads a plot spec JSON:
// {"chi_max": int, "show_lines": [names...],
//  "points": [{"source": "file.json", "color": "#rrggbb", "label": str?}...],
//  "out": "plot.svg", "true_aspect": bool?}
// Point sources may be coverage reports or single certificates.
PlotSpec load_plot_spec(const std::string& path, const std::optional<RegionLine>& fline);

void write_plot(const PlotSpec& spec);

} // namespace geo4

#endif
