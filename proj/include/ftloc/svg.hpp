#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ftloc/geometry2d.hpp"

namespace ftloc {

struct PlotSpec {
    Point2 low{-1.0, -1.0}, high{1.0, 1.0};  // view box in problem coordinates
    std::vector<double> levels;               // ascending
    int raster = 400;                         // samples per axis
    double stroke = 1.0;
    int precision = 2;                        // decimals in path coordinates
    std::optional<Polygon> overlay;

    void validate() const;
};

// A square view box around the sites with some margin.
PlotSpec default_plot(const Instance& inst);

// Level curves of the objective by marching squares, sites as dots or outlines.
std::string render_svg(const Instance& inst, const PlotSpec& spec);

}  // namespace ftloc
