#pragma once

#include <string>

#include "holonomy/surface.hpp"

namespace holonomy {

// Scene file schema:
//   {"matrix": [[a,b],[c,d]],
//    "orbits": [{"point": ["r1/N","r2/N"], "omega": w, "slope": [p,q]}]}
// Rationals are strings "num/den".
Scene load_scene(const std::string& path);
Scene parse_scene(const std::string& jsonText);
std::string scene_to_json(const Scene& scene);

}  // namespace holonomy
