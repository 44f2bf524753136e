#include "holonomy/sceneio.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "holonomy/errors.hpp"

namespace holonomy {

using nlohmann::ordered_json;

Scene parse_scene(const std::string& jsonText) {
    ordered_json j;
    try {
        j = ordered_json::parse(jsonText);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Err::ParseError, e.what());
    }
    try {
        MonodromyMatrix m;
        m.a = j.at("matrix").at(0).at(0).get<long long>();
        m.b = j.at("matrix").at(0).at(1).get<long long>();
        m.c = j.at("matrix").at(1).at(0).get<long long>();
        m.d = j.at("matrix").at(1).at(1).get<long long>();
        std::vector<OrbitInput> orbits;
        for (const auto& o : j.at("orbits")) {
            OrbitInput in;
            in.point.x = parse_rational(o.at("point").at(0).get<std::string>());
            in.point.y = parse_rational(o.at("point").at(1).get<std::string>());
            in.omega = o.value("omega", 0LL);
            in.p = o.at("slope").at(0).get<long long>();
            in.q = o.at("slope").at(1).get<long long>();
            orbits.push_back(in);
        }
        return build_scene(m, orbits);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Err::ParseError, e.what());
    }
}

Scene load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Err::ParseError, "cannot open scene file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scene(ss.str());
}

std::string scene_to_json(const Scene& scene) {
    ordered_json j;
    j["matrix"] = {{scene.matrix.a, scene.matrix.b}, {scene.matrix.c, scene.matrix.d}};
    j["orbits"] = ordered_json::array();
    for (const auto& so : scene.orbits) {
        ordered_json o;
        const auto& p = so.orbit.points.front();
        o["point"] = {std::to_string(p.x.num) + "/" + std::to_string(p.x.den),
                      std::to_string(p.y.num) + "/" + std::to_string(p.y.den)};
        o["omega"] = so.orbit.omega;
        o["slope"] = {scene.reflected ? -so.slope.p : so.slope.p, so.slope.q};
        j["orbits"].push_back(o);
    }
    return j.dump(2) + "\n";
}

}  // namespace holonomy
