#pragma once

#include "holonomy/sceneio.hpp"
#include "holonomy/surface.hpp"

inline const holonomy::Scene& fig8_scene() {
    static const holonomy::Scene scene = holonomy::build_scene(
        {2, 1, 1, 1}, {{{holonomy::Rat{0, 1}, holonomy::Rat{0, 1}}, 1, 5, 1}});
    return scene;
}

// Same monodromy, fibered slope (q = 0): no magnifying singularities.
inline const holonomy::Scene& fibered_scene() {
    static const holonomy::Scene scene = holonomy::build_scene(
        {2, 1, 1, 1}, {{{holonomy::Rat{0, 1}, holonomy::Rat{0, 1}}, 1, 5, 0}});
    return scene;
}

// Fixed point plus the period-3 orbit of (1/2,1/2) with a second slope.
inline const holonomy::Scene& two_orbit_scene() {
    static const holonomy::Scene scene = holonomy::build_scene(
        {2, 1, 1, 1}, {{{holonomy::Rat{0, 1}, holonomy::Rat{0, 1}}, 1, 5, 1},
                       {{holonomy::Rat{1, 2}, holonomy::Rat{1, 2}}, 0, 7, 2}});
    return scene;
}
