#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "holonomy/geom.hpp"
#include "holonomy/rational.hpp"

namespace holonomy {

struct MonodromyMatrix {
    long long a = 0, b = 0, c = 0, d = 0;
    long long trace() const { return a + d; }
    long long det() const { return a * d - b * c; }
};

// Eigen-geometry of the torus map. The developing matrix sends integer
// lattice coordinates to (east, north) coordinates in which the map acts as
// diag(1/lambda, lambda): east is the stable (contracting) direction, north
// the unstable (expanding) one. det(dev) = 1 so the developed singularity
// density equals the orbit count per unit area.
struct EigenStructure {
    double lambda = 1.0;
    Vec2 unstableDir;
    Vec2 stableDir;
    Mat2 dev;
    Mat2 devInv;
};

struct SlopeSpec {
    long long p = 1;
    long long q = 0;
    double alpha = 1.0;  // lambda^{m q / p}, 1 exactly when q == 0
};

struct OrbitSpec {
    std::vector<Vec2Q> points;  // full phi-orbit, points[j+1] = phi(points[j]) mod 1
    long long period = 1;
    long long prongs = 2;  // always 2 for torus punctures
    long long omega = 0;   // rotation class mod prongs, user supplied
};

struct SceneOrbit {
    OrbitSpec orbit;
    SlopeSpec slope;
    bool magnifying = false;
};

struct OrbitInput {
    Vec2Q point;
    long long omega = 0;
    long long p = 1;
    long long q = 0;
};

struct Scene {
    MonodromyMatrix matrix;
    EigenStructure eigen;
    std::vector<SceneOrbit> orbits;
    bool reflected = false;  // true when all input slopes were negative
    double alphaMax = 1.0;
    std::optional<double> alphaMin;  // min over magnifying orbits; empty if none
    double kappa = 0.0;              // magnifying singularities per unit developed area
    double totalDensity = 0.0;       // all singularities per unit developed area

    // Conservative fast-explosion constant derived from a seeded empty-area
    // search at build time; blowup error bounds use it.
    double defaultC = 0.0;

    bool fibered() const { return !alphaMin.has_value(); }
};

Scene build_scene(const MonodromyMatrix& matrix, const std::vector<OrbitInput>& orbits);

struct SlopeValidation {
    bool parityOk = true;           // p == omega q (mod prongs)
    long long degeneracyP = 0;      // degeneracy slope (0; prongs/gcd(omega,prongs))
    long long degeneracyQ = 1;
    bool infinitySlope = false;     // q == 0, the fiber slope
    double alpha = 1.0;
};

SlopeValidation validate_slope(const Scene& scene, std::size_t orbitIndex);

struct SingularityHit {
    Vec2 pos;  // developed (east, north)
    int orbitIndex = 0;
    bool magnifying = false;
};

// Half-open query window [x0,x1) x (y0,y1] in developed coordinates.
struct Window {
    double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
};

inline constexpr std::size_t kDefaultWindowCap = 10'000'000;

std::vector<SingularityHit> singularities_in_window(const Scene& scene, const Window& window,
                                                    double tau = 0.0,
                                                    std::size_t cap = kDefaultWindowCap);

// Developing transform at suspension-flow time tau: diag(l^-tau, l^tau) * dev.
Mat2 flow_scaled_developing(const Scene& scene, double tau);

}  // namespace holonomy
