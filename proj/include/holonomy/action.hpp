#pragma once

#include <string>
#include <vector>

#include "holonomy/blowup.hpp"
#include "holonomy/transport.hpp"

namespace holonomy {

enum class LoopClass { Filling, Wall, Commutator, Free };

struct LoopWord {
    std::string name;
    PathSpec path;
    LoopClass classification = LoopClass::Free;
};

// A monodromy homeomorphism of the completed fiber circle, recorded by
// sampled evaluation. Outputs must respect the circular order of inputs.
struct SampledHomeo {
    std::vector<FiberPoint> in;
    std::vector<FiberPoint> out;
    std::vector<int> wraps;
    double maxDeviationFromIdentity = 0.0;
    bool infFixed = true;
    int netWraps = 0;
};

bool preserves_circular_order(const SampledHomeo& h);

// Meridian loop of the given orbit: suspension arc of m*q flow periods closed
// by a clockwise angle-2*pi*p walk that crosses 2p prongs, with clear
// connectors of length hugRadius/2. Anchored at the orbit's first point.
LoopWord meridian_loop(const Scene& scene, std::size_t orbitIndex, double hugRadius);

struct FillingReport {
    SampledHomeo homeo;
    double algebraicDilation = 1.0;  // lambda^{m q} * alpha^{-p}
    int wraparound = 0;
};

FillingReport filling_monodromy(const Scene& scene, std::size_t orbitIndex, double hugRadius,
                                std::span<const FiberPoint> samples);

struct OrderWitness {
    bool nontrivial = false;
    LoopWord witnessLoop;
    double dilationFactor = 1.0;          // transported value at x = 1
    double algebraicDilation = 1.0;       // lambda^{m q_deg}
    long long degeneracyQ = 1;
};

OrderWitness order_witness(const Scene& scene);

// Built-in relation words that are contractible in the filled manifold:
// the mapping-torus commutators t l t^-1 l'^-1 for the two lattice
// translation loops, plus the filling meridian of each orbit.
std::vector<LoopWord> builtin_relations(const Scene& scene, double hugRadius = 0.05);

struct RelationResidual {
    std::string name;
    double residual = 0.0;  // max |out - in| over finite samples
    bool infFixed = true;
    int netWraps = 0;
};

RelationResidual relation_residual(const Scene& scene, const LoopWord& word,
                                   std::span<const FiberPoint> samples);

// Concatenates words into one loop and measures the composite residual.
RelationResidual relation_residual(const Scene& scene, const std::vector<LoopWord>& words,
                                   std::span<const FiberPoint> samples);

// Step-map data over a line of negative slope. The parallel section through
// the zero point crosses the infinity section at times t_1 < t_2 < ...; the
// fibers over those crossings, cut at infinity and lifted through the zero
// section, pull back to one full turn each of the unrolled basepoint fiber:
// interval j spans cut_j to cut_{j+1} at winding number j. The cuts are
// recomputed independently by backward transport of the infinity point, so
// their residual against the zero section measures how exactly the intervals
// chain up (disjointness and covering).
struct StepInterval {
    double crossTime = 0.0;   // east distance of the fiber along the line
    Vec2 fiberBase;           // developed base point of the fiber segment
    int wrap = 0;             // winding number of the interval's copy
    double cut = 0.0;         // backward-transported infinity cut (expected 0)
};

struct StepDecomposition {
    std::vector<StepInterval> intervals;
    bool disjoint = true;     // cuts chain within tolerance
    double maxCutResidual = 0.0;
};

StepDecomposition step_decomposition(const Scene& scene, const RaySpec& line, std::size_t count,
                                     const EngineConfig& cfg = {});

}  // namespace holonomy
