#pragma once

#include <optional>
#include <span>
#include <vector>

#include "holonomy/lattice.hpp"

namespace holonomy {

enum class Side { Left, Right };
enum class CrossDir { LeftToRight, RightToLeft };

// A point of a fiber: signed north offset from the base point, or the point
// at infinity. The side tag is set exactly when the base lies on an unstable
// prong (its east coordinate matches a singularity's within tolerance).
struct FiberPoint {
    double value = 0.0;
    bool infinite = false;
    std::optional<Side> side;

    static FiberPoint inf() { return {0.0, true, std::nullopt}; }
    static FiberPoint at(double v) { return {v, false, std::nullopt}; }
};

struct Move {
    enum class Kind { East, North, Flow, Cross };
    Kind kind = Kind::East;
    double amount = 0.0;
    CrossDir cross = CrossDir::LeftToRight;

    static Move east(double dx) { return {Kind::East, dx, {}}; }
    static Move north(double dy) { return {Kind::North, dy, {}}; }
    static Move flow(double dt) { return {Kind::Flow, dt, {}}; }
    static Move crossing(CrossDir d) { return {Kind::Cross, 0.0, d}; }
};

struct PathSpec {
    Vec2 base;
    double tau0 = 0.0;
    std::vector<Move> moves;
    // Optional re-centering (orbit, point) for loops anchored at a
    // singularity; see LatticeView.
    std::optional<std::pair<std::size_t, std::size_t>> center;
};

// Pure fiber maps for the three generator types. Legality checks live in the
// path runner; these only implement the value arithmetic.
FiberPoint flow_map(double lambda, double dt, FiberPoint x);
FiberPoint north_map(double dy, FiberPoint x);
// Crossing a prong whose singularity sits at signed height h from the base;
// alpha is the orbit's dilation coefficient.
FiberPoint prong_cross_map(double h, double alpha, CrossDir dir, FiberPoint x);

// Checked single operations against a scene.
FiberPoint transport_flow(const Scene& scene, double dt, FiberPoint x);

// North transport within the generalized unstable leaf: the theta image is
// fixed, the offset shifts. Rejects moves whose span meets the singularity
// on this vertical.
FiberPoint transport_north(const Scene& scene, Vec2 base, double tau, double dy, FiberPoint x);

// East transport across a swept rectangle required to be free of
// singularities strictly between the fibers at heights strictly between 0
// and x. Raises RectangleNotClear otherwise.
FiberPoint transport_east_clear(const Scene& scene, Vec2 base, double tau, double dx,
                                FiberPoint x);

FiberPoint transport_prong_cross(const Scene& scene, Vec2 base, double tau,
                                 std::size_t orbitIndex, double h, CrossDir dir, FiberPoint x);

enum class TransportMode {
    Partial,  // J^partial: blowing up mid-move raises BlowupError
    Full,     // completed connection: values wrap past infinity
};

struct TransportResult {
    FiberPoint out;
    int wraps = 0;  // signed count of passes through the infinity section
};

class PathRunner {
  public:
    PathRunner(const Scene& scene, const PathSpec& path);

    TransportResult run(FiberPoint x, TransportMode mode) const;

    // End state of the base point after all moves (independent of the fiber).
    Vec2 end_base() const { return endBase_; }
    double end_tau() const { return endTau_; }
    bool closes() const;  // end base == start base and end tau == start tau mod 1

    const LatticeView& view() const { return view_; }

  private:
    const Scene* scene_;
    PathSpec path_;
    LatticeView view_;
    Vec2 endBase_;
    double endTau_ = 0.0;
};

FiberPoint transport_path(const Scene& scene, const PathSpec& path, FiberPoint x);

struct LoopReport {
    std::vector<std::pair<FiberPoint, FiberPoint>> io;
    double maxDeviation = 0.0;  // over finite samples
    bool infFixed = true;
    int netWraps = 0;
};

LoopReport loop_monodromy(const Scene& scene, const PathSpec& loop,
                          std::span<const FiberPoint> samples);

}  // namespace holonomy
