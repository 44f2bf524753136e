#include "holonomy/surface.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "holonomy/errors.hpp"
#include "holonomy/lattice.hpp"
#include "holonomy/rng.hpp"

namespace holonomy {

namespace {

EigenStructure eigen_structure(const MonodromyMatrix& m) {
    const double trace = static_cast<double>(m.trace());
    EigenStructure es;
    es.lambda = (trace + std::sqrt(trace * trace - 4.0)) / 2.0;

    // Right eigenvectors (b, lambda - a) and (b, 1/lambda - a); b != 0 for
    // every hyperbolic SL(2,Z) matrix. North is the expanding direction, so
    // flip the unstable vector into the upper half plane.
    const double a = static_cast<double>(m.a);
    const double b = static_cast<double>(m.b);
    Vec2 u{b, es.lambda - a};
    if (u.y < 0) u = -u;
    u = u * (1.0 / u.norm());

    Vec2 s{b, 1.0 / es.lambda - a};
    s = s * (1.0 / s.norm());
    const double cross = s.x * u.y - s.y * u.x;
    // Columns of dev^-1 are (stable * rho, unstable) with rho making det = 1.
    const double rho = 1.0 / cross;
    Mat2 devInv{s.x * rho, u.x, s.y * rho, u.y};
    es.devInv = devInv;
    es.dev = devInv.inverse();
    es.unstableDir = u;
    es.stableDir = rho > 0 ? s : -s;
    return es;
}

std::vector<Vec2Q> expand_orbit(const MonodromyMatrix& m, const Vec2Q& start) {
    std::vector<Vec2Q> orbit;
    Vec2Q p = Vec2Q{start.x.mod1(), start.y.mod1()};
    const long long cap = p.x.den * p.y.den + 1;
    Vec2Q cur = p;
    for (long long i = 0; i < cap + 1; ++i) {
        orbit.push_back(cur);
        cur = apply_mod1(m.a, m.b, m.c, m.d, cur);
        if (cur == p) return orbit;
    }
    throw Error(Err::NotPeriodic, "point has no finite orbit (non-rational input?)");
}

// Quick seeded search for the largest empty ragged rectangle, feeding the
// default fast-explosion constant used in blowup error bounds.
double quick_a_star(const Scene& scene) {
    LatticeView view(scene);
    Rng rng(kDefaultSeed);
    double best = 0.0;
    std::vector<SingularityHit> hits;
    for (int i = 0; i < 512; ++i) {
        Vec2 u{rng.uniform(), rng.uniform()};
        Vec2 base = scene.eigen.dev.apply(u);
        const double w = rng.uniform(1.0, scene.eigen.lambda);
        double h = 1.0;
        double firstHeight = -1.0;
        for (int grow = 0; grow < 48; ++grow) {
            hits.clear();
            view.collect(0.0, base.x, base.x + w, base.y, base.y + h, hits);
            double lowest = kInf;
            for (const auto& hit : hits) {
                if (!hit.magnifying) continue;
                if (hit.pos.x < base.x || hit.pos.x >= base.x + w) continue;
                if (hit.pos.y <= base.y || hit.pos.y > base.y + h) continue;
                lowest = std::min(lowest, hit.pos.y - base.y);
            }
            if (lowest < kInf) { firstHeight = lowest; break; }
            h *= 2.0;
        }
        if (firstHeight > 0) best = std::max(best, w * firstHeight);
    }
    return best * 2.0;
}

}  // namespace

Scene build_scene(const MonodromyMatrix& matrix, const std::vector<OrbitInput>& orbits) {
    if (matrix.det() != 1)
        throw Error(Err::NonHyperbolic, "determinant must be 1");
    if (matrix.trace() < 3)
        throw Error(Err::NonHyperbolic, "trace must be >= 3");

    Scene scene;
    scene.matrix = matrix;
    scene.eigen = eigen_structure(matrix);

    bool sawPositive = false, sawNegative = false;
    for (const auto& in : orbits) {
        if (in.p == 0) throw Error(Err::ZeroSlope, "slope p must be nonzero");
        if (in.q < 0) throw Error(Err::ParseError, "slope q must be nonnegative");
        (in.p > 0 ? sawPositive : sawNegative) = true;
    }
    if (sawPositive && sawNegative)
        throw Error(Err::MixedSigns, "slopes of both signs");
    scene.reflected = sawNegative;

    std::set<std::array<long long, 4>> seen;  // reduced (xnum,xden,ynum,yden)
    for (const auto& in : orbits) {
        SceneOrbit so;
        so.orbit.points = expand_orbit(matrix, in.point);
        so.orbit.period = static_cast<long long>(so.orbit.points.size());
        so.orbit.prongs = 2;
        so.orbit.omega = in.omega;
        so.slope.p = scene.reflected ? -in.p : in.p;
        so.slope.q = in.q;
        const double mq = static_cast<double>(so.orbit.period * so.slope.q);
        so.slope.alpha =
            so.slope.q == 0 ? 1.0
                            : std::pow(scene.eigen.lambda, mq / static_cast<double>(so.slope.p));
        so.magnifying = so.slope.alpha > 1.0;
        for (const auto& pt : so.orbit.points)
            if (!seen.insert({pt.x.num, pt.x.den, pt.y.num, pt.y.den}).second)
                throw Error(Err::DuplicateOrbit, "orbits overlap");
        scene.orbits.push_back(std::move(so));
    }

    scene.alphaMax = 1.0;
    scene.kappa = 0.0;
    scene.totalDensity = 0.0;
    for (const auto& so : scene.orbits) {
        scene.alphaMax = std::max(scene.alphaMax, so.slope.alpha);
        scene.totalDensity += static_cast<double>(so.orbit.period);
        if (so.magnifying) {
            scene.kappa += static_cast<double>(so.orbit.period);
            scene.alphaMin = scene.alphaMin ? std::min(*scene.alphaMin, so.slope.alpha)
                                            : so.slope.alpha;
        }
    }

    if (scene.alphaMin) {
        const double aStar = quick_a_star(scene);
        scene.defaultC = 2.0 * aStar / (1.0 - 2.0 / (1.0 + *scene.alphaMin));
    }
    return scene;
}

SlopeValidation validate_slope(const Scene& scene, std::size_t orbitIndex) {
    const auto& so = scene.orbits.at(orbitIndex);
    SlopeValidation v;
    const long long k = so.orbit.prongs;
    const long long w = so.orbit.omega;
    long long residue = (so.slope.p - w * so.slope.q) % k;
    if (residue < 0) residue += k;
    v.parityOk = residue == 0;
    long long g = std::gcd(w < 0 ? -w : w, k);
    if (g == 0) g = k;
    v.degeneracyP = 0;
    v.degeneracyQ = k / g;
    v.infinitySlope = so.slope.q == 0;
    v.alpha = so.slope.alpha;
    return v;
}

std::vector<SingularityHit> singularities_in_window(const Scene& scene, const Window& window,
                                                    double tau, std::size_t cap) {
    std::vector<SingularityHit> out;
    if (window.x0 >= window.x1 || window.y0 >= window.y1) return out;
    LatticeView view(scene);
    view.collect(tau, window.x0, window.x1, window.y0, window.y1, out, cap);
    std::erase_if(out, [&](const SingularityHit& h) {
        return !(h.pos.x >= window.x0 && h.pos.x < window.x1 && h.pos.y > window.y0 &&
                 h.pos.y <= window.y1);
    });
    return out;
}

Mat2 flow_scaled_developing(const Scene& scene, double tau) {
    return flow_scaling(scene.eigen.lambda, tau).mul(scene.eigen.dev);
}

}  // namespace holonomy
