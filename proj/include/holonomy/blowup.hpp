#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "holonomy/lattice.hpp"
#include "holonomy/rng.hpp"
#include "holonomy/transport.hpp"

namespace holonomy {

// Eastward ray in a fiber surface. `slope` tilts the base line (negative
// slope drifts south while moving east); sections over tilted lines are used
// by the step-map decomposition.
struct RaySpec {
    Vec2 base;
    double tau = 0.0;
    double slope = 0.0;
};

struct SectionEvent {
    double time = 0.0;     // east distance travelled along the ray
    SingularityHit hit;    // developed position of the singularity
    double height = 0.0;   // singularity height relative to the base line at the event
    double before = 0.0;
    double after = 0.0;
    double factor = 1.0;
};

enum class SectionStatus { Alive, BlownUp };

struct SectionTrace {
    double start = 0.0;
    SectionStatus status = SectionStatus::Alive;
    double tMax = 0.0;       // meaningful when BlownUp
    double errorBound = 0.0; // remaining-time bound C / S_big
    int direction = +1;      // +1 blowup toward +inf, -1 toward -inf
    double horizon = 0.0;
    double finalValue = 0.0; // value at the horizon when Alive
    std::vector<SectionEvent> events;
    std::vector<std::pair<double, double>> samples;  // (t, value) on the sample grid
};

struct EngineConfig {
    double sBig = kBlowupThreshold;
    double eventTol = kEventTol;
    double epsTime = 1e-9;        // times within this of t_max map to infinity
    double sampleDt = 0.0;        // 0 disables grid samples
    std::size_t maxEvents = 2'000'000;
};

SectionTrace advance_section(const Scene& scene, const RaySpec& ray, double x, double horizon,
                             const EngineConfig& cfg = {});

// Blowup time of the eastward parallel section through x. Returns +inf for
// x <= 0 (and for fibered scenes), 0 for the point at infinity.
double t_max_east(const Scene& scene, const RaySpec& ray, FiberPoint x,
                  const EngineConfig& cfg = {});

// Westward mirror: negative values magnify at singularities south of the
// ray and blow up toward -inf; positive values stay bounded.
double t_max_west(const Scene& scene, const RaySpec& ray, FiberPoint x,
                  const EngineConfig& cfg = {});

// Completed-connection transport distance t east along the ray: the
// J^partial section until its blowup time, the point at infinity there, and
// the unique negative continuation afterwards (found by bisection against
// t_max_west, tolerance 1e-9 on the value).
FiberPoint full_transport_east(const Scene& scene, const RaySpec& ray, FiberPoint x, double t,
                               const EngineConfig& cfg = {});

// Magnifying singularities in the half-open ragged rectangle swept north
// from an eastward interval. Returns (count, area).
std::pair<std::size_t, double> ragged_count(const Scene& scene, Vec2 base, double length,
                                            double height, std::size_t cap = kDefaultWindowCap);

struct ErgodicConstants {
    double kappa = 0.0;
    double aStar = 0.0;   // empty ragged rectangle area bound (safety-scaled)
    double aKappa = 0.0;  // area above which counts stay below 2 kappa A
    double C = 0.0;       // fast-explosion constant
    double c = 0.0;       // slow-explosion constant
    std::size_t sampleCount = 0;
};

ErgodicConstants estimate_constants(const Scene& scene, std::size_t sampleCount, double epsilon,
                                    std::uint64_t seed = kDefaultSeed);

struct BoundViolation {
    double S = 0.0;
    double x = 0.0;
    double tMax = 0.0;
    double bound = 0.0;
    bool fastSide = true;  // true: t_max < C/S failed; false: t_max >= c/S failed
    Vec2 rayBase;
};

struct BoundsReport {
    std::vector<BoundViolation> violations;
    std::size_t checks = 0;
    ErgodicConstants constants;
};

BoundsReport check_bounds(const Scene& scene, const ErgodicConstants& constants,
                          const std::vector<double>& sGrid, int raysPerS,
                          std::uint64_t seed = kDefaultSeed);

// Ray base drawn uniformly from a fundamental cell, rejecting bases within
// 1e-8 of a singularity's east coordinate.
Vec2 random_ray_base(const Scene& scene, Rng& rng);

// Internal engine shared with the transport runner: sweeps a value along a
// (possibly tilted) base line and applies singularity crossings in east
// order. Exposed for the step-map construction.
struct SweepOutcome {
    bool blewUp = false;
    double stopTime = 0.0;   // east distance travelled when stopping
    double value = 0.0;      // final value (relative to the base line) when alive
};

SweepOutcome sweep_line(const LatticeView& view, const RaySpec& ray, int dir, double x,
                        double limit, const EngineConfig& cfg,
                        std::vector<SectionEvent>* events = nullptr,
                        std::vector<std::pair<double, double>>* samples = nullptr);

namespace detail {

// Blowup time of a sweep heading in `dir` (never returns when alive; callers
// guarantee divergence).
double blow_time(const LatticeView& view, const RaySpec& ray, int dir, double x,
                 const EngineConfig& cfg);

// Value at rayAtEnd of the unique section that blows up exactly `remaining`
// back along direction backDir; sign of the result matches backDir.
double solve_s1(const LatticeView& view, const RaySpec& rayAtEnd, int backDir, double remaining,
                const EngineConfig& cfg);

}  // namespace detail

}  // namespace holonomy
