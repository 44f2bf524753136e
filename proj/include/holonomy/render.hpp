#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "holonomy/action.hpp"
#include "holonomy/treeglue.hpp"

namespace holonomy {

struct BlowupFigureConfig {
    double eastExtent = 10.0;
    double northExtent = 6.0;
    std::vector<double> startValues = {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};
    Vec2 rayBase{0.13, 0.29};
    double pxPerUnit = 60.0;
};

// Developed-plane picture: singularity dots, section polylines with one
// stroke colour per start value, blowup glyphs where sections terminate.
std::string render_blowup_figure(const Scene& scene, const BlowupFigureConfig& cfg);

struct StepmapFigureConfig {
    double eastExtent = 12.0;
    double slope = -0.35;
    std::size_t count = 6;
    Vec2 lineBase{0.13, 0.29};
    double pxPerUnit = 55.0;
};

// Line of negative slope with the transported fiber segments of the step
// decomposition and their interval annotations.
std::string render_stepmap_figure(const Scene& scene, const StepmapFigureConfig& cfg);

std::string render_tree_figure(const treeglue::TreeQuotient& q);

}  // namespace holonomy
