#include "holonomy/action.hpp"

#include <algorithm>
#include <cmath>

#include "holonomy/errors.hpp"

namespace holonomy {

namespace {

SampledHomeo sample_homeo(const Scene& scene, const PathSpec& loop,
                          std::span<const FiberPoint> samples) {
    PathRunner runner(scene, loop);
    if (!runner.closes()) throw Error(Err::NotClosed, "loop does not close up");
    SampledHomeo h;
    for (const auto& s : samples) {
        const TransportResult res = runner.run(s, TransportMode::Full);
        h.in.push_back(s);
        h.out.push_back(res.out);
        h.wraps.push_back(res.wraps);
        if (s.infinite) {
            h.infFixed = h.infFixed && res.out.infinite && res.wraps == 0;
        } else if (res.out.infinite) {
            h.maxDeviationFromIdentity = kInf;
        } else {
            h.maxDeviationFromIdentity =
                std::max(h.maxDeviationFromIdentity, std::abs(res.out.value - s.value));
        }
        h.netWraps = std::max(h.netWraps, std::abs(res.wraps));
    }
    return h;
}

double circle_angle(const FiberPoint& p) {
    if (p.infinite) return std::atan(kInf);
    return std::atan(p.value);
}

}  // namespace

bool preserves_circular_order(const SampledHomeo& h) {
    const std::size_t n = h.out.size();
    if (n < 3) return true;
    std::size_t descents = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = circle_angle(h.out[i]);
        const double b = circle_angle(h.out[(i + 1) % n]);
        if (b < a) ++descents;
    }
    return descents <= 1;
}

LoopWord meridian_loop(const Scene& scene, std::size_t orbitIndex, double hugRadius) {
    const auto& so = scene.orbits.at(orbitIndex);
    const double lambda = scene.eigen.lambda;
    const double flowTime = static_cast<double>(so.orbit.period * so.slope.q);
    const long long p = so.slope.p;
    const double r = hugRadius;
    const double rp = r * std::pow(lambda, -flowTime);  // radius after the suspension arc

    LoopWord word;
    word.name = "meridian-" + std::to_string(orbitIndex);
    word.classification = LoopClass::Filling;
    word.path.center = {{orbitIndex, 0}};
    word.path.base = {r / 2.0, 0.0};
    word.path.tau0 = 0.0;

    auto& mv = word.path.moves;
    if (flowTime != 0.0) mv.push_back(Move::flow(flowTime));
    mv.push_back(Move::north(-rp));
    for (long long turn = 0; turn < p; ++turn) {
        mv.push_back(Move::east(-rp / 2.0));
        mv.push_back(Move::crossing(CrossDir::RightToLeft));
        mv.push_back(Move::east(-rp / 2.0));
        mv.push_back(Move::north(2.0 * rp));
        mv.push_back(Move::east(rp / 2.0));
        mv.push_back(Move::crossing(CrossDir::LeftToRight));
        mv.push_back(Move::east(rp / 2.0));
        mv.push_back(Move::north(-2.0 * rp));
    }
    mv.push_back(Move::north(rp));
    if (r != rp) mv.push_back(Move::east((r - rp) / 2.0));
    return word;
}

FillingReport filling_monodromy(const Scene& scene, std::size_t orbitIndex, double hugRadius,
                                std::span<const FiberPoint> samples) {
    const auto& so = scene.orbits.at(orbitIndex);
    const LoopWord word = meridian_loop(scene, orbitIndex, hugRadius);
    FillingReport report;
    try {
        report.homeo = sample_homeo(scene, word.path, samples);
    } catch (const Error& e) {
        if (e.code() == Err::PathThroughSingularity)
            throw Error(Err::RadiusTooLarge, "meridian walk hits another singularity");
        throw;
    }
    const double mq = static_cast<double>(so.orbit.period * so.slope.q);
    report.algebraicDilation = std::pow(scene.eigen.lambda, mq) *
                               std::pow(so.slope.alpha, -static_cast<double>(so.slope.p));
    report.wraparound = report.homeo.netWraps;
    return report;
}

OrderWitness order_witness(const Scene& scene) {
    std::size_t idx = scene.orbits.size();
    for (std::size_t i = 0; i < scene.orbits.size(); ++i)
        if (scene.orbits[i].slope.q > 0) { idx = i; break; }
    if (idx == scene.orbits.size())
        throw Error(Err::NoMagnifyingOrbit, "no orbit with q > 0; witness degenerates");

    const auto& so = scene.orbits[idx];
    const SlopeValidation v = validate_slope(scene, idx);
    const double flowTime = static_cast<double>(so.orbit.period * v.degeneracyQ);
    const double lambda = scene.eigen.lambda;

    OrderWitness w;
    w.degeneracyQ = v.degeneracyQ;
    w.algebraicDilation = std::pow(lambda, flowTime);

    const FiberPoint samples[] = {FiberPoint::at(0.0), FiberPoint::at(1.0), FiberPoint::inf()};
    double r = 0.01;
    for (int attempt = 0; attempt < 8; ++attempt, r /= 2.0) {
        LoopWord loop;
        loop.name = "degeneracy-" + std::to_string(idx);
        loop.classification = LoopClass::Wall;
        loop.path.center = {{idx, 0}};
        loop.path.base = {r, 0.0};
        loop.path.moves = {Move::flow(flowTime),
                           Move::east(r * (1.0 - std::pow(lambda, -flowTime)))};
        try {
            SampledHomeo h = sample_homeo(scene, loop.path, samples);
            w.witnessLoop = loop;
            w.dilationFactor = h.out[1].infinite ? kInf : h.out[1].value;
            w.nontrivial = std::abs(w.dilationFactor - 1.0) > 1e-9;
            return w;
        } catch (const Error& e) {
            if (e.code() != Err::PathThroughSingularity) throw;
        }
    }
    throw Error(Err::RadiusTooLarge, "degeneracy loop could not avoid singularities");
}

std::vector<LoopWord> builtin_relations(const Scene& scene, double hugRadius) {
    std::vector<LoopWord> words;
    const Vec2 base = scene.eigen.dev.apply({0.37, 0.23});
    const double lambda = scene.eigen.lambda;

    {
        LoopWord rect;
        rect.name = "commutator-rect";
        rect.classification = LoopClass::Commutator;
        rect.path.base = base;
        rect.path.moves = {Move::east(0.031), Move::north(0.043), Move::east(-0.031),
                           Move::north(-0.043)};
        words.push_back(rect);
    }

    // Mapping-torus commutators t l t^-1 l^-1: the flow conjugate of a
    // lattice translation loop against the translation itself.
    const char* names[2] = {"bundle-e1", "bundle-e2"};
    const Vec2 units[2] = {scene.eigen.dev.apply({1.0, 0.0}), scene.eigen.dev.apply({0.0, 1.0})};
    for (int i = 0; i < 2; ++i) {
        LoopWord w;
        w.name = names[i];
        w.classification = LoopClass::Commutator;
        w.path.base = base;
        const Vec2 v = units[i];
        w.path.moves = {Move::flow(1.0),
                        Move::east(v.x / lambda),
                        Move::north(v.y * lambda),
                        Move::flow(-1.0),
                        Move::north(-v.y),
                        Move::east(-v.x)};
        words.push_back(w);
    }

    for (std::size_t i = 0; i < scene.orbits.size(); ++i)
        words.push_back(meridian_loop(scene, i, hugRadius));
    return words;
}

RelationResidual relation_residual(const Scene& scene, const LoopWord& word,
                                   std::span<const FiberPoint> samples) {
    RelationResidual rr;
    rr.name = word.name;
    const SampledHomeo h = sample_homeo(scene, word.path, samples);
    rr.residual = h.maxDeviationFromIdentity;
    rr.infFixed = h.infFixed;
    rr.netWraps = h.netWraps;
    return rr;
}

RelationResidual relation_residual(const Scene& scene, const std::vector<LoopWord>& words,
                                   std::span<const FiberPoint> samples) {
    if (words.empty()) return {"empty", 0.0, true, 0};
    PathSpec composite = words.front().path;
    std::string name = words.front().name;
    for (std::size_t i = 1; i < words.size(); ++i) {
        const auto& w = words[i];
        if ((w.path.base - PathRunner(scene, composite).end_base()).norm() > 1e-9)
            throw Error(Err::NotClosed, "relation words do not concatenate");
        composite.moves.insert(composite.moves.end(), w.path.moves.begin(), w.path.moves.end());
        name += "*" + w.name;
    }
    LoopWord all{name, composite, LoopClass::Commutator};
    return relation_residual(scene, all, samples);
}

StepDecomposition step_decomposition(const Scene& scene, const RaySpec& line, std::size_t count,
                                     const EngineConfig& cfg) {
    StepDecomposition sd;
    if (count == 0) return sd;
    if (line.slope >= 0.0)
        throw Error(Err::ParseError, "step decomposition requires a line of negative slope");
    LatticeView view(scene);

    const auto lineAt = [&](double t) {
        return RaySpec{{line.base.x + t, line.base.y + line.slope * t}, line.tau, line.slope};
    };

    // Crossing times of the zero-point section; each continuation restarts
    // from the deeply negative germ.
    std::vector<double> crossTimes{0.0};  // t_0 = 0: the basepoint's own fiber
    double t = detail::blow_time(view, lineAt(0.0), +1, 0.0, cfg);
    for (std::size_t j = 1; j < count; ++j) {
        crossTimes.push_back(t);
        t += detail::blow_time(view, lineAt(t), +1, -0.99 * cfg.sBig, cfg);
    }

    for (std::size_t j = 0; j < count; ++j) {
        StepInterval iv;
        iv.crossTime = crossTimes[j];
        iv.fiberBase = lineAt(iv.crossTime).base;
        iv.wrap = static_cast<int>(j);
        if (j == 0) {
            iv.cut = 0.0;  // the basepoint fiber is cut at its own zero orbit
        } else {
            // Backward transport of the infinity cut. Westward the germ is
            // the unique section blowing to +inf at the crossing; it crosses
            // the infinity section once per earlier wrap on the way back.
            double pos = iv.crossTime;
            double value = 0.99 * cfg.sBig;
            while (true) {
                const SweepOutcome back = sweep_line(view, lineAt(pos), -1, value, pos, cfg);
                if (!back.blewUp) {
                    iv.cut = back.value;
                    break;
                }
                pos -= back.stopTime;
                value = 0.99 * cfg.sBig;
                if (pos <= 0.0)
                    throw Error(Err::BisectionFailure, "backward cut transport stalled");
            }
            sd.maxCutResidual = std::max(sd.maxCutResidual, std::abs(iv.cut));
        }
        sd.intervals.push_back(iv);
    }
    sd.disjoint = sd.maxCutResidual < 1e-6;
    return sd;
}

}  // namespace holonomy
