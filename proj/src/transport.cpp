#include "holonomy/transport.hpp"

#include <algorithm>
#include <cmath>

#include "holonomy/blowup.hpp"
#include "holonomy/errors.hpp"

namespace holonomy {

FiberPoint flow_map(double lambda, double dt, FiberPoint x) {
    if (!x.infinite) x.value *= std::pow(lambda, dt);
    return x;
}

FiberPoint north_map(double dy, FiberPoint x) {
    if (!x.infinite) x.value -= dy;  // theta image fixed, base shifted
    return x;
}

FiberPoint prong_cross_map(double h, double alpha, CrossDir dir, FiberPoint x) {
    if (x.side) x.side = *x.side == Side::Left ? Side::Right : Side::Left;
    if (x.infinite) return x;
    if (h > 0) {
        // Type 3a: identity at and below the singularity
        if (dir == CrossDir::LeftToRight) {
            if (x.value > h) x.value = h + alpha * (x.value - h);
        } else {
            if (x.value > h) x.value = h + (x.value - h) / alpha;
        }
    } else {
        // Type 3b: identity at and above the singularity
        if (dir == CrossDir::LeftToRight) {
            if (x.value < h) x.value = h + (x.value - h) / alpha;
        } else {
            if (x.value < h) x.value = h + alpha * (x.value - h);
        }
    }
    return x;
}

FiberPoint transport_flow(const Scene& scene, double dt, FiberPoint x) {
    return flow_map(scene.eigen.lambda, dt, x);
}

FiberPoint transport_north(const Scene& scene, Vec2 base, double tau, double dy, FiberPoint x) {
    LatticeView view(scene);
    const double lo = std::min(base.y, base.y + dy), hi = std::max(base.y, base.y + dy);
    const auto sing = view.on_vertical(tau, base.x, kEventTol, base.y + dy / 2.0);
    if (sing && sing->pos.y >= lo - kEventTol && sing->pos.y <= hi + kEventTol)
        throw Error(Err::PathThroughSingularity, "north move passes a singularity");
    return north_map(dy, x);
}

FiberPoint transport_east_clear(const Scene& scene, Vec2 base, double tau, double dx,
                                FiberPoint x) {
    if (x.infinite)
        throw BlowupError(base.x, base.y, "point at infinity has no clear east transport");
    if (dx == 0.0) return x;
    LatticeView view(scene);
    const auto baseline = [&](double) { return base.y; };
    const auto hit = view.next_crossing(tau, base.x, base.x + dx, dx > 0 ? +1 : -1, baseline,
                                        base.y + x.value);
    if (hit) throw Error(Err::RectangleNotClear, "singularity inside the swept rectangle");
    return x;
}

FiberPoint transport_prong_cross(const Scene& scene, Vec2 base, double tau,
                                 std::size_t orbitIndex, double h, CrossDir dir, FiberPoint x) {
    LatticeView view(scene);
    const auto sing = view.on_vertical(tau, base.x, kEventTol, base.y + h);
    if (!sing || static_cast<std::size_t>(sing->orbitIndex) != orbitIndex ||
        std::abs(sing->pos.y - (base.y + h)) > 1e-6)
        throw Error(Err::NotOnProng, "no matching singularity on this vertical");
    if (std::abs(h) <= kEventTol)
        throw Error(Err::NotOnProng, "base point coincides with the singularity");
    return prong_cross_map(h, scene.orbits[orbitIndex].slope.alpha, dir, x);
}

namespace {

struct RunState {
    Vec2 base;
    double tau;
    std::optional<Side> side;
    FiberPoint value;
    int wraps = 0;
};

class Engine {
  public:
    Engine(const Scene& scene, const LatticeView& view) : scene_(scene), view_(view) {}

    void flow(RunState& st, double dt) const {
        st.value = flow_map(scene_.eigen.lambda, dt, st.value);
        const Mat2 s = flow_scaling(scene_.eigen.lambda, dt);
        st.base = s.apply(st.base);
        st.tau += dt;
    }

    void north(RunState& st, double dy) const {
        const double lo = std::min(st.base.y, st.base.y + dy);
        const double hi = std::max(st.base.y, st.base.y + dy);
        const auto sing = view_.on_vertical(st.tau, st.base.x, kEventTol, st.base.y + dy / 2.0);
        if (sing && sing->pos.y >= lo - kEventTol && sing->pos.y <= hi + kEventTol)
            throw Error(Err::PathThroughSingularity, "north move passes a singularity");
        st.base.y += dy;
        st.value = north_map(dy, st.value);
    }

    void cross(RunState& st, CrossDir dir) const {
        if (!st.side) throw Error(Err::NotOnProng, "base point is not on a prong");
        const Side expected = dir == CrossDir::LeftToRight ? Side::Left : Side::Right;
        if (*st.side != expected)
            throw Error(Err::NotOnProng, "crossing direction does not match the side tag");
        const auto sing = view_.on_vertical(st.tau, st.base.x, kEventTol, st.base.y);
        if (!sing) throw Error(Err::NotOnProng, "no singularity on this vertical");
        const double h = sing->pos.y - st.base.y;
        if (std::abs(h) <= kEventTol)
            throw Error(Err::NotOnProng, "base point coincides with the singularity");
        st.value.side = st.side;
        st.value =
            prong_cross_map(h, scene_.orbits[static_cast<std::size_t>(sing->orbitIndex)].slope.alpha,
                            dir, st.value);
        st.side = st.value.side;
    }

    void east(RunState& st, double dx, TransportMode mode, const EngineConfig& cfg) const {
        if (dx == 0.0) return;
        const int dir = dx > 0 ? +1 : -1;
        if (st.side) {
            const Side needed = dir > 0 ? Side::Right : Side::Left;
            if (*st.side != needed)
                throw Error(Err::PathThroughSingularity,
                            "east move would cross the prong under the base implicitly");
        }
        const double dist = std::abs(dx);
        const Vec2 endBase{st.base.x + dx, st.base.y};

        if (st.value.infinite) {
            if (mode == TransportMode::Partial)
                throw BlowupError(st.base.x, st.base.y,
                                  "transport of infinity along an east arc");
            // stays at infinity symbolically; finite samples carry the wraps
        } else {
            const RaySpec ray{st.base, st.tau, 0.0};
            SweepOutcome out = sweep_line(view_, ray, dir, st.value.value, dist, cfg);
            if (!out.blewUp) {
                st.value.value = out.value;
            } else if (mode == TransportMode::Partial) {
                throw BlowupError(st.base.x + dir * out.stopTime, st.base.y,
                                  "section blew up along an east arc");
            } else {
                st.wraps += dir;
                const double remaining = dist - out.stopTime;
                if (remaining <= cfg.epsTime) {
                    st.value = FiberPoint::inf();
                } else {
                    const RaySpec endRay{endBase, st.tau, 0.0};
                    st.value.value = detail::solve_s1(view_, endRay, -dir, remaining, cfg);
                    st.value.infinite = false;
                }
            }
        }
        st.base = endBase;
        st.side.reset();
        const auto sing = view_.on_vertical(st.tau, st.base.x, kEventTol, st.base.y);
        if (sing) st.side = dir > 0 ? Side::Left : Side::Right;
        st.value.side = st.side;
    }

  private:
    const Scene& scene_;
    const LatticeView& view_;
};

}  // namespace

PathRunner::PathRunner(const Scene& scene, const PathSpec& path)
    : scene_(&scene),
      path_(path),
      view_(path.center ? LatticeView(scene, path.center->first, path.center->second)
                        : LatticeView(scene)) {
    // Base trajectory is fiber-independent.
    Vec2 base = path_.base;
    double tau = path_.tau0;
    for (const auto& mv : path_.moves) {
        switch (mv.kind) {
            case Move::Kind::East: base.x += mv.amount; break;
            case Move::Kind::North: base.y += mv.amount; break;
            case Move::Kind::Flow:
                base = flow_scaling(scene.eigen.lambda, mv.amount).apply(base);
                tau += mv.amount;
                break;
            case Move::Kind::Cross: break;
        }
    }
    endBase_ = base;
    endTau_ = tau;
}

bool PathRunner::closes() const {
    const double scale = 1.0 + std::abs(path_.base.x) + std::abs(path_.base.y);
    if ((endBase_ - path_.base).norm() > 1e-10 * scale) return false;
    const double dtau = endTau_ - path_.tau0;
    const double nearest = std::round(dtau);
    if (std::abs(dtau - nearest) > 1e-10) return false;
    if (path_.center) {
        const long long period = scene_->orbits[path_.center->first].orbit.period;
        const long long k = static_cast<long long>(nearest);
        if (k % period != 0) return false;  // centered lattice is only m-periodic in tau
    }
    return true;
}

TransportResult PathRunner::run(FiberPoint x, TransportMode mode) const {
    EngineConfig cfg;
    Engine engine(*scene_, view_);
    RunState st{path_.base, path_.tau0, std::nullopt, x, 0};

    const auto sing = view_.on_vertical(st.tau, st.base.x, kEventTol, st.base.y);
    if (sing) st.side = x.side ? x.side : std::optional<Side>(Side::Right);

    for (const auto& mv : path_.moves) {
        switch (mv.kind) {
            case Move::Kind::East: engine.east(st, mv.amount, mode, cfg); break;
            case Move::Kind::North: engine.north(st, mv.amount); break;
            case Move::Kind::Flow: engine.flow(st, mv.amount); break;
            case Move::Kind::Cross: engine.cross(st, mv.cross); break;
        }
    }
    st.value.side = st.side;
    return {st.value, st.wraps};
}

FiberPoint transport_path(const Scene& scene, const PathSpec& path, FiberPoint x) {
    return PathRunner(scene, path).run(x, TransportMode::Partial).out;
}

LoopReport loop_monodromy(const Scene& scene, const PathSpec& loop,
                          std::span<const FiberPoint> samples) {
    PathRunner runner(scene, loop);
    if (!runner.closes()) throw Error(Err::NotClosed, "loop does not close up");

    LoopReport report;
    for (const auto& s : samples) {
        const TransportResult res = runner.run(s, TransportMode::Full);
        report.io.push_back({s, res.out});
        if (s.infinite) {
            report.infFixed = report.infFixed && res.out.infinite && res.wraps == 0;
        } else if (res.out.infinite) {
            report.maxDeviation = kInf;
        } else {
            report.maxDeviation = std::max(report.maxDeviation, std::abs(res.out.value - s.value));
        }
        report.netWraps = std::max(report.netWraps, std::abs(res.wraps));
    }
    return report;
}

}  // namespace holonomy
