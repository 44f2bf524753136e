#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "holonomy/blowup.hpp"
#include "holonomy/errors.hpp"
#include "holonomy/rng.hpp"
#include "oracle.hpp"

using namespace holonomy;

namespace {
const RaySpec kRay{{0.13, 0.29}, 0.0, 0.0};
}

TEST_CASE("zero section stays flat") {
    const SectionTrace t = advance_section(fig8_scene(), kRay, 0.0, 50.0);
    CHECK(t.status == SectionStatus::Alive);
    CHECK(t.finalValue == 0.0);
    CHECK(t.events.empty());
}

TEST_CASE("negative sections survive with non-increasing magnitude") {
    const SectionTrace t = advance_section(fig8_scene(), kRay, -0.5, 50.0);
    CHECK(t.status == SectionStatus::Alive);
    CHECK(std::abs(t.finalValue) <= 0.5);
    for (const auto& e : t.events) CHECK(std::abs(e.after) <= std::abs(e.before));
}

TEST_CASE("positive sections blow up and the event log refolds") {
    const SectionTrace t = advance_section(fig8_scene(), kRay, 1.0, 1e9);
    REQUIRE(t.status == SectionStatus::BlownUp);
    CHECK(t.direction == +1);
    CHECK(t.errorBound < 1e-9);
    CHECK(t.errorBound > 0.0);

    // events strictly increase the value; recomputing each recorded affine
    // map from the log reproduces the engine, and consecutive events chain
    // exactly (a full unresynced refold is exponentially ill conditioned:
    // the composite map amplifies start perturbations by prod(factors))
    double prevT = 0.0;
    double chain = 1.0;
    for (const auto& e : t.events) {
        CHECK(e.time >= prevT);
        CHECK(e.height > 0.0);
        CHECK(e.height < e.before);
        CHECK(e.before == doctest::Approx(chain).epsilon(1e-12));
        const double recomputed = e.height + e.factor * (e.before - e.height);
        CHECK(e.after == doctest::Approx(recomputed).epsilon(1e-9));
        CHECK(e.after > e.before);
        chain = e.after;
        prevT = e.time;
    }
    CHECK(chain > kBlowupThreshold);
}

TEST_CASE("base on a singularity is rejected") {
    CHECK_THROWS_WITH_AS(advance_section(fig8_scene(), {{0.0, 0.0}, 0.0, 0.0}, 1.0, 10.0),
                         doctest::Contains("BaseOnSingularity"), Error);
}

TEST_CASE("t_max special values") {
    const Scene& s = fig8_scene();
    CHECK(t_max_east(s, kRay, FiberPoint::at(-2.0)) == kInf);
    CHECK(t_max_east(s, kRay, FiberPoint::inf()) == 0.0);
    const double t1 = t_max_east(s, kRay, FiberPoint::at(1.0));
    const double t2 = t_max_east(s, kRay, FiberPoint::at(2.0));
    CHECK(t2 < t1);
    CHECK(t1 > 0.0);

    // fibered scenes never blow up
    CHECK(t_max_east(fibered_scene(), kRay, FiberPoint::at(5.0)) == kInf);
}

TEST_CASE("t_max_west mirrors") {
    const Scene& s = fig8_scene();
    CHECK(t_max_west(s, kRay, FiberPoint::at(2.0)) == kInf);
    CHECK(t_max_west(s, kRay, FiberPoint::inf()) == 0.0);
    const double t1 = t_max_west(s, kRay, FiberPoint::at(-1.0));
    const double t2 = t_max_west(s, kRay, FiberPoint::at(-2.0));
    CHECK(std::isfinite(t1));
    CHECK(t2 < t1);

    // the developed set is symmetric under negation, so westward transport
    // from b is eastward transport from -b; cross-check the fine-step oracle
    const auto dv = oracle::make_dev(2, 1, 1, 1);
    const double fine = oracle::t_max_fine(dv, {{0.0, 0.0}}, s.orbits[0].slope.alpha,
                                           -kRay.base.x, -kRay.base.y, 1.0);
    CHECK(std::abs(t1 - fine) <= 1e-3 * t1);
}

TEST_CASE("strict monotonicity of t_max on sampled pairs") {
    const Scene& s = fig8_scene();
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        const RaySpec ray{random_ray_base(s, rng), 0.0, 0.0};
        const double x = rng.uniform(0.05, 2.0);
        const double y = x + rng.uniform(0.05, 2.0);
        const double tx = t_max_east(s, ray, FiberPoint::at(x));
        const double ty = t_max_east(s, ray, FiberPoint::at(y));
        CHECK(ty < tx);
    }
}

TEST_CASE("density of the blowup-time image") {
    const Scene& s = fig8_scene();
    for (const double target : {0.5, 1.0, 2.0, 4.0}) {
        double lo = 1e-3, hi = 1e3;
        // t_max is decreasing in x; bisect on x
        for (int i = 0; i < 80; ++i) {
            const double mid = std::sqrt(lo * hi);
            (t_max_east(s, kRay, FiberPoint::at(mid)) > target ? lo : hi) = mid;
        }
        const double tAt = t_max_east(s, kRay, FiberPoint::at(0.5 * (lo + hi)));
        CHECK(std::abs(tAt - target) < 0.05);
    }
}

TEST_CASE("event-driven t_max agrees with the fine-step oracle") {
    const Scene& s = fig8_scene();
    const auto dv = oracle::make_dev(2, 1, 1, 1);
    const std::vector<std::pair<double, double>> orbitPts = {{0.0, 0.0}};
    const double alpha = s.orbits[0].slope.alpha;

    Rng rng(99);
    for (int i = 0; i < 10; ++i) {
        const Vec2 base = random_ray_base(s, rng);
        const double x = rng.uniform(0.3, 2.5);
        const double engine = t_max_east(s, {base, 0.0, 0.0}, FiberPoint::at(x));
        const double fine = oracle::t_max_fine(dv, orbitPts, alpha, base.x, base.y, x);
        REQUIRE(fine > 0.0);
        CHECK(std::abs(engine - fine) <= 1e-3 * std::max(engine, 0.2));
    }
}

TEST_CASE("full transport east: identity, wraparound, continuation") {
    const Scene& s = fig8_scene();
    CHECK(full_transport_east(s, kRay, FiberPoint::at(0.7), 0.0).value == 0.7);

    const double tMax = t_max_east(s, kRay, FiberPoint::at(1.0));
    CHECK(full_transport_east(s, kRay, FiberPoint::at(1.0), tMax).infinite);

    // slightly past blowup: a large negative value diverging as t falls back
    const FiberPoint just = full_transport_east(s, kRay, FiberPoint::at(1.0), tMax + 1e-4);
    const FiberPoint later = full_transport_east(s, kRay, FiberPoint::at(1.0), tMax + 1e-2);
    REQUIRE_FALSE(just.infinite);
    REQUIRE_FALSE(later.infinite);
    CHECK(just.value < -100.0);
    CHECK(just.value < later.value);
    CHECK(later.value < 0.0);

    // the infinity point leaves immediately through the negative branch
    const FiberPoint offInf = full_transport_east(s, kRay, FiberPoint::inf(), 0.5);
    REQUIRE_FALSE(offInf.infinite);
    CHECK(offInf.value < 0.0);
}

TEST_CASE("full transport preserves circular order") {
    const Scene& s = fig8_scene();
    const double t = 1.3;
    // x1 < x2 < x3 must land in circular order on R union inf
    const double xs[] = {0.4, 0.9, 1.6};
    double out[3];
    for (int i = 0; i < 3; ++i)
        out[i] = full_transport_east(s, kRay, FiberPoint::at(xs[i]), t).value;
    // count cyclic descents of the image triple
    int descents = 0;
    for (int i = 0; i < 3; ++i)
        if (out[(i + 1) % 3] < out[i]) ++descents;
    CHECK(descents <= 1);
}

TEST_CASE("ragged rectangle counting") {
    const Scene& s = fig8_scene();
    const auto [count, area] = ragged_count(s, {0.37, 0.11}, 40.0, 25.0);
    CHECK(area == 1000.0);
    CHECK(static_cast<double>(count) / area >= 0.9);
    CHECK(static_cast<double>(count) / area <= 1.1);

    CHECK(ragged_count(s, {0.37, 0.11}, 5.0, 0.0).first == 0);

    // additivity of disjoint stacked rectangles
    const auto whole = ragged_count(s, {0.37, 0.11}, 8.0, 10.0);
    const auto lowerHalf = ragged_count(s, {0.37, 0.11}, 8.0, 5.0);
    const auto upperHalf = ragged_count(s, {0.37, 5.11}, 8.0, 5.0);
    CHECK(whole.first == lowerHalf.first + upperHalf.first);
}

TEST_CASE("multi-orbit scenes mix both magnification factors") {
    const Scene& s = two_orbit_scene();
    const SectionTrace t = advance_section(s, kRay, 1.0, 1e9);
    REQUIRE(t.status == SectionStatus::BlownUp);
    bool saw0 = false, saw1 = false;
    for (const auto& e : t.events) {
        if (e.hit.orbitIndex == 0) saw0 = true;
        if (e.hit.orbitIndex == 1) saw1 = true;
        CHECK(e.factor ==
              doctest::Approx(s.orbits[static_cast<std::size_t>(e.hit.orbitIndex)].slope.alpha));
    }
    CHECK(saw0);
    CHECK(saw1);

    // negative sections still contract under both factors
    const SectionTrace neg = advance_section(s, kRay, -1.0, 50.0);
    CHECK(neg.status == SectionStatus::Alive);
    CHECK(std::abs(neg.finalValue) <= 1.0);
}

TEST_CASE("fibered full transport keeps infinity fixed") {
    const Scene& s = fibered_scene();
    CHECK(full_transport_east(s, kRay, FiberPoint::inf(), 2.0).infinite);
    CHECK(full_transport_east(s, kRay, FiberPoint::at(3.0), 2.0).value == 3.0);
}

TEST_CASE("empty S-grid yields an empty bounds report") {
    const Scene& s = fig8_scene();
    const ErgodicConstants ec = estimate_constants(s, 200, 0.1, 61320);
    const BoundsReport br = check_bounds(s, ec, {}, 5, 61320);
    CHECK(br.checks == 0);
    CHECK(br.violations.empty());
}

TEST_CASE("ergodic constants are deterministic and consistent") {
    const Scene& s = fig8_scene();
    const ErgodicConstants a = estimate_constants(s, 2000, 0.1, 61320);
    const ErgodicConstants b = estimate_constants(s, 2000, 0.1, 61320);
    CHECK(a.aStar == b.aStar);
    CHECK(a.aKappa == b.aKappa);
    CHECK(a.kappa == 1.0);
    CHECK(a.aStar > 0.0);
    CHECK(a.C == doctest::Approx(2.0 * a.aStar / (1.0 - 2.0 / (1.0 + *s.alphaMin))));
    CHECK(a.c == doctest::Approx(a.aKappa / std::pow(s.alphaMax, 2.0 * a.kappa * a.aKappa)));

    CHECK_THROWS_WITH_AS(estimate_constants(fibered_scene(), 100, 0.1),
                         doctest::Contains("NoMagnifyingOrbit"), Error);
}

TEST_CASE("bound checks hold on a small grid") {
    const Scene& s = fig8_scene();
    const ErgodicConstants ec = estimate_constants(s, 4000, 0.1, 61320);
    const BoundsReport br = check_bounds(s, ec, {1.0, 10.0}, 5, 61320);
    CHECK(br.checks == 2 * 5 * 6);
    CHECK(br.violations.empty());
}
