#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "holonomy/surface.hpp"

namespace holonomy {

// View of the developed singularity set, optionally re-centered so that a
// chosen orbit point sits at the origin. Centering keeps the set invariant
// under integer multiples of the orbit period of the flow, which is what
// meridian and degeneracy loops need to close up.
class LatticeView {
  public:
    explicit LatticeView(const Scene& scene);
    LatticeView(const Scene& scene, std::size_t orbitIndex, std::size_t pointIndex);

    const Scene& scene() const { return *scene_; }

    // All marked points in the closed box [e0,e1] x [n0,n1] at time tau,
    // sorted by (east, north). Callers apply their own open/closed filters.
    void collect(double tau, double e0, double e1, double n0, double n1,
                 std::vector<SingularityHit>& out, std::size_t cap = kDefaultWindowCap) const;

    std::size_t count(double tau, double e0, double e1, double n0, double n1,
                      std::size_t cap = kDefaultWindowCap) const;

    // The unique marked point whose east coordinate matches `e` within `tol`
    // (developed east coordinates are pairwise distinct), searched in height
    // bands expanding from nCenter. Empty if none within the search budget.
    std::optional<SingularityHit> on_vertical(double tau, double e, double tol,
                                              double nCenter) const;

    // First marked point strictly crossed by a vertical segment swept from
    // east position eFrom toward eLimit (dir = +1 east, -1 west). The segment
    // at east position e spans between baseHeight(e) and theta; a point
    // qualifies when its height lies strictly between the two. Marked points
    // within tol of the base path raise PathThroughSingularity.
    std::optional<SingularityHit> next_crossing(double tau, double eFrom, double eLimit, int dir,
                                                const std::function<double(double)>& baseHeight,
                                                double theta, double tol = kEventTol) const;

  private:
    const Scene* scene_;
    // Orbit points shifted by the chosen center, exact where possible.
    std::vector<std::pair<Vec2, int>> shifted_;  // (torus coords - center, orbit index)
    void init_shifts(const Vec2Q& center);
};

}  // namespace holonomy
