#include "holonomy/blowup.hpp"

#include <algorithm>
#include <cmath>

#include "holonomy/errors.hpp"
#include "holonomy/rng.hpp"

namespace holonomy {

SweepOutcome sweep_line(const LatticeView& view, const RaySpec& ray, int dir, double x,
                        double limit, const EngineConfig& cfg,
                        std::vector<SectionEvent>* events,
                        std::vector<std::pair<double, double>>* samples) {
    const Scene& scene = view.scene();
    const auto baseline = [&](double e) { return ray.base.y + ray.slope * (e - ray.base.x); };

    double theta = ray.base.y + x;  // absolute developed height of the theta image
    double cursor = ray.base.x;
    double nextSample = 0.0;

    const auto emit_samples_to = [&](double t) {
        if (!samples || cfg.sampleDt <= 0) return;
        while (nextSample <= t + 1e-15) {
            const double e = ray.base.x + dir * nextSample;
            samples->push_back({nextSample, theta - baseline(e)});
            nextSample += cfg.sampleDt;
        }
    };

    const double eLimit = std::isfinite(limit) ? ray.base.x + dir * limit : dir * kInf;

    for (std::size_t n = 0; n < cfg.maxEvents; ++n) {
        const auto hit = view.next_crossing(ray.tau, cursor, eLimit, dir, baseline, theta,
                                            cfg.eventTol);
        if (!hit) {
            emit_samples_to(limit);
            return {false, limit, theta - baseline(ray.base.x + dir * limit)};
        }
        const double eHit = hit->pos.x;
        const double t = (eHit - ray.base.x) * dir;
        emit_samples_to(t);

        const auto& orb = scene.orbits[static_cast<std::size_t>(hit->orbitIndex)];
        const bool north = hit->pos.y > baseline(eHit);
        const double factor = (north == (dir > 0)) ? orb.slope.alpha : 1.0 / orb.slope.alpha;
        const double before = theta - baseline(eHit);
        theta = hit->pos.y + factor * (theta - hit->pos.y);
        const double after = theta - baseline(eHit);
        if (events)
            events->push_back({t, *hit, hit->pos.y - baseline(eHit), before, after, factor});
        cursor = eHit;

        if (std::abs(after) > cfg.sBig) return {true, t, after};
    }
    throw Error(Err::EngineStall, "event cap exceeded");
}

namespace {

void require_base_off_singularities(const LatticeView& view, const RaySpec& ray) {
    std::vector<SingularityHit> hits;
    view.collect(ray.tau, ray.base.x - kEventTol, ray.base.x + kEventTol,
                 ray.base.y - kEventTol, ray.base.y + kEventTol, hits);
    if (!hits.empty()) throw Error(Err::BaseOnSingularity, "ray base on a singularity");
}

double error_bound(const Scene& scene, const EngineConfig& cfg) {
    return scene.defaultC > 0 ? scene.defaultC / cfg.sBig : 0.0;
}

}  // namespace

SectionTrace advance_section(const Scene& scene, const RaySpec& ray, double x, double horizon,
                             const EngineConfig& cfg) {
    LatticeView view(scene);
    require_base_off_singularities(view, ray);

    SectionTrace trace;
    trace.start = x;
    trace.horizon = horizon;
    const SweepOutcome out =
        sweep_line(view, ray, +1, x, horizon, cfg, &trace.events, &trace.samples);
    if (out.blewUp) {
        trace.status = SectionStatus::BlownUp;
        trace.tMax = out.stopTime;
        trace.errorBound = error_bound(scene, cfg);
        trace.direction = out.value > 0 ? +1 : -1;
    } else {
        trace.status = SectionStatus::Alive;
        trace.finalValue = out.value;
    }
    return trace;
}

namespace detail {

double blow_time(const LatticeView& view, const RaySpec& ray, int dir, double x,
                 const EngineConfig& cfg) {
    const SweepOutcome out = sweep_line(view, ray, dir, x, kInf, cfg, nullptr, nullptr);
    return out.stopTime;
}

double solve_s1(const LatticeView& view, const RaySpec& rayAtEnd, int backDir, double remaining,
                const EngineConfig& cfg) {
    // Value of the unique section through rayAtEnd that blows up exactly
    // `remaining` back along the ray. Sign matches backDir: westward checks
    // use negative values, eastward positive.
    const auto classify = [&](double u) {
        // >0: survives past `remaining`; <=0: blew up (value = t - remaining)
        const SweepOutcome out =
            sweep_line(view, rayAtEnd, backDir, backDir * u, remaining, cfg, nullptr, nullptr);
        return out.blewUp ? out.stopTime - remaining : kInf;
    };

    double lo = 1.0, hi = 1.0;  // u = |value|
    if (classify(1.0) <= 0.0) {
        // blows too fast: shrink
        while (classify(lo) <= 0.0) {
            lo /= 4.0;
            if (lo < 1e-15)
                throw Error(Err::BisectionFailure,
                            "s1 bracket [" + std::to_string(lo) + ", 1] collapsed, target " +
                                std::to_string(remaining));
        }
        hi = lo * 4.0;
    } else {
        while (classify(hi) > 0.0) {
            hi *= 4.0;
            if (hi > 1e15)
                throw Error(Err::BisectionFailure,
                            "s1 bracket [1, " + std::to_string(hi) + "] collapsed, target " +
                                std::to_string(remaining));
        }
        lo = hi / 4.0;
    }
    for (int i = 0; i < 200 && hi - lo > std::max(1e-9, lo * 1e-13); ++i) {
        const double mid = 0.5 * (lo + hi);
        (classify(mid) > 0.0 ? lo : hi) = mid;
    }
    return backDir * 0.5 * (lo + hi);
}

}  // namespace detail

double t_max_east(const Scene& scene, const RaySpec& ray, FiberPoint x, const EngineConfig& cfg) {
    if (x.infinite) return 0.0;
    if (x.value <= 0.0 || scene.fibered()) return kInf;
    LatticeView view(scene);
    require_base_off_singularities(view, ray);
    return detail::blow_time(view, ray, +1, x.value, cfg);
}

double t_max_west(const Scene& scene, const RaySpec& ray, FiberPoint x, const EngineConfig& cfg) {
    if (x.infinite) return 0.0;
    if (x.value >= 0.0 || scene.fibered()) return kInf;
    LatticeView view(scene);
    require_base_off_singularities(view, ray);
    return detail::blow_time(view, ray, -1, x.value, cfg);
}

FiberPoint full_transport_east(const Scene& scene, const RaySpec& ray, FiberPoint x, double t,
                               const EngineConfig& cfg) {
    LatticeView view(scene);
    require_base_off_singularities(view, ray);
    if (t == 0.0) return x;
    if (scene.fibered() && x.infinite) return x;  // no blowup, no continuation

    const double tMax = x.infinite ? 0.0
                        : (x.value <= 0.0 || scene.fibered())
                            ? kInf
                            : detail::blow_time(view, ray, +1, x.value, cfg);
    if (std::isfinite(tMax) && std::abs(t - tMax) <= cfg.epsTime) return FiberPoint::inf();
    if (t < tMax) {
        const SweepOutcome out = sweep_line(view, ray, +1, x.value, t, cfg, nullptr, nullptr);
        return FiberPoint::at(out.value);
    }
    // Past blowup: the unique continuation diverging to -inf as time falls
    // back to tMax, located by bisection on westward blowup times.
    const RaySpec endRay{{ray.base.x + t, ray.base.y + ray.slope * t}, ray.tau, ray.slope};
    return FiberPoint::at(detail::solve_s1(view, endRay, -1, t - tMax, cfg));
}

std::pair<std::size_t, double> ragged_count(const Scene& scene, Vec2 base, double length,
                                            double height, std::size_t cap) {
    if (height < 0) throw Error(Err::ParseError, "ragged rectangle height must be >= 0");
    const double area = length * height;
    if (height == 0.0 || length == 0.0) return {0, area};
    LatticeView view(scene);
    std::vector<SingularityHit> hits;
    view.collect(0.0, base.x, base.x + length, base.y, base.y + height, hits, cap);
    std::size_t count = 0;
    for (const auto& h : hits)
        if (h.magnifying && h.pos.x >= base.x && h.pos.x < base.x + length &&
            h.pos.y > base.y && h.pos.y <= base.y + height)
            ++count;
    return {count, area};
}

Vec2 random_ray_base(const Scene& scene, Rng& rng) {
    LatticeView view(scene);
    for (int attempt = 0; attempt < 4096; ++attempt) {
        const Vec2 u{rng.uniform(), rng.uniform()};
        const Vec2 base = scene.eigen.dev.apply(u);
        // keep clear of prongs within the height band transported values see
        bool nearProng = false;
        std::vector<SingularityHit> hits;
        view.collect(0.0, base.x - 1e-8, base.x + 1e-8, base.y - 1024.0, base.y + 1024.0, hits);
        for (const auto& h : hits)
            if (std::abs(h.pos.x - base.x) <= 1e-8) nearProng = true;
        if (!nearProng) return base;
    }
    throw Error(Err::EngineStall, "could not draw a ray base clear of prongs");
}

ErgodicConstants estimate_constants(const Scene& scene, std::size_t sampleCount, double epsilon,
                                    std::uint64_t seed) {
    if (scene.fibered()) throw Error(Err::NoMagnifyingOrbit, "all slopes are fibered (q = 0)");
    LatticeView view(scene);
    Rng rng(seed);

    ErgodicConstants ec;
    ec.kappa = scene.kappa;
    ec.sampleCount = sampleCount;

    // A*: largest empty ragged rectangle found over width-normalized samples.
    double bestEmpty = 0.0;
    std::vector<SingularityHit> hits;
    for (std::size_t i = 0; i < sampleCount; ++i) {
        const Vec2 u{rng.uniform(), rng.uniform()};
        const Vec2 base = scene.eigen.dev.apply(u);
        const double w = rng.uniform(1.0, scene.eigen.lambda);
        double h = 1.0;
        double first = -1.0;
        for (int grow = 0; grow < 40; ++grow) {
            hits.clear();
            view.collect(0.0, base.x, base.x + w, base.y, base.y + h, hits);
            double lowest = kInf;
            for (const auto& hit : hits) {
                if (!hit.magnifying) continue;
                if (hit.pos.x < base.x || hit.pos.x >= base.x + w) continue;
                if (hit.pos.y <= base.y || hit.pos.y > base.y + h) continue;
                lowest = std::min(lowest, hit.pos.y - base.y);
            }
            if (lowest < kInf) { first = lowest; break; }
            h *= 2.0;
        }
        if (first > 0) bestEmpty = std::max(bestEmpty, w * first);
    }
    ec.aStar = bestEmpty * 1.5;

    // A_kappa: largest sampled area still violating the 2-kappa-A count
    // bound, scaled by the same safety factor. epsilon tightens the test.
    double worstViolation = 0.5;
    for (std::size_t i = 0; i < sampleCount; ++i) {
        const double area = std::exp(rng.uniform(std::log(0.2), std::log(50.0)));
        const Vec2 u{rng.uniform(), rng.uniform()};
        const Vec2 base = scene.eigen.dev.apply(u);
        const double w = rng.uniform(1.0, scene.eigen.lambda);
        const double h = area / w;
        const auto [count, a] = ragged_count(scene, base, w, h);
        if (static_cast<double>(count) >= 2.0 * (1.0 - epsilon) * ec.kappa * area)
            worstViolation = std::max(worstViolation, area);
    }
    ec.aKappa = worstViolation * 1.5;

    ec.C = 2.0 * ec.aStar / (1.0 - 2.0 / (1.0 + *scene.alphaMin));
    const double exponent = 2.0 * ec.kappa * ec.aKappa;
    ec.c = std::max(ec.aKappa / std::pow(scene.alphaMax, exponent), 1e-300);
    return ec;
}

BoundsReport check_bounds(const Scene& scene, const ErgodicConstants& constants,
                          const std::vector<double>& sGrid, int raysPerS, std::uint64_t seed) {
    BoundsReport report;
    report.constants = constants;
    Rng rng(seed);
    EngineConfig cfg;
    for (const double S : sGrid) {
        for (int r = 0; r < raysPerS; ++r) {
            const RaySpec ray{random_ray_base(scene, rng), 0.0, 0.0};
            for (const double x : {2.0 * S, 8.0 * S}) {
                const double t = t_max_east(scene, ray, FiberPoint::at(x), cfg);
                ++report.checks;
                if (!(t < constants.C / S))
                    report.violations.push_back({S, x, t, constants.C / S, true, ray.base});
            }
            for (const double x : {0.0, S / 3.0, 2.0 * S / 3.0, 0.999 * S}) {
                const double t = t_max_east(scene, ray, FiberPoint::at(x), cfg);
                ++report.checks;
                if (!(t >= constants.c / S))
                    report.violations.push_back({S, x, t, constants.c / S, false, ray.base});
            }
        }
    }
    return report;
}

}  // namespace holonomy
