#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "holonomy/action.hpp"
#include "holonomy/errors.hpp"
#include "holonomy/rng.hpp"

using namespace holonomy;

namespace {

std::vector<FiberPoint> window_samples(int count, double half, bool withInf = true) {
    std::vector<FiberPoint> out;
    for (int i = 0; i < count; ++i)
        out.push_back(FiberPoint::at(-half + 2.0 * half * i / (count - 1)));
    if (withInf) out.push_back(FiberPoint::inf());
    return out;
}

}  // namespace

TEST_CASE("filling monodromy is the identity near the orbit") {
    const Scene& s = fig8_scene();
    const auto samples = window_samples(11, 10.0);
    const FillingReport fr = filling_monodromy(s, 0, 0.05, samples);
    CHECK(std::abs(fr.algebraicDilation - 1.0) < 1e-12);
    CHECK(fr.homeo.maxDeviationFromIdentity < 1e-6);
    CHECK(fr.wraparound == 0);
    CHECK(fr.homeo.infFixed);
    CHECK(preserves_circular_order(fr.homeo));
}

TEST_CASE("filling monodromy deviation shrinks with the radius") {
    const Scene& s = fig8_scene();
    const auto samples = window_samples(11, 10.0);
    double prev = kInf;
    for (const double r : {0.1, 0.05, 0.025}) {
        const FillingReport fr = filling_monodromy(s, 0, r, samples);
        CHECK(fr.homeo.maxDeviationFromIdentity <= prev + 1e-12);
        prev = fr.homeo.maxDeviationFromIdentity;
    }
    CHECK(prev < 1e-6);
}

TEST_CASE("filling monodromy anchored away from the origin") {
    // second orbit of a two-orbit scene: the meridian loop re-centers the
    // lattice at (1/2,1/2) and flows m*q = 6 periods
    const Scene& s = two_orbit_scene();
    const auto samples = window_samples(9, 2.0);
    const FillingReport fr = filling_monodromy(s, 1, 0.02, samples);
    CHECK(std::abs(fr.algebraicDilation - 1.0) < 1e-12);
    CHECK(fr.homeo.maxDeviationFromIdentity < 1e-6);
    CHECK(fr.wraparound == 0);
    CHECK(fr.homeo.infFixed);
}

TEST_CASE("order witness: degeneracy loop dilation") {
    const Scene& s = fig8_scene();
    const OrderWitness w = order_witness(s);
    CHECK(w.nontrivial);
    CHECK(w.degeneracyQ == 2);
    CHECK(w.algebraicDilation == doctest::Approx(6.854101966).epsilon(1e-9));
    CHECK(std::abs(w.dilationFactor - w.algebraicDilation) < 1e-9);

    // zero is fixed by the dilation
    PathRunner runner(s, w.witnessLoop.path);
    const TransportResult zero = runner.run(FiberPoint::at(0.0), TransportMode::Full);
    CHECK(zero.out.value == 0.0);

    CHECK_THROWS_WITH_AS(order_witness(fibered_scene()),
                         doctest::Contains("NoMagnifyingOrbit"), Error);
}

TEST_CASE("built-in relation words act trivially") {
    const Scene& s = fig8_scene();
    const auto samples = window_samples(21, 10.0);
    for (const auto& word : builtin_relations(s, 0.05)) {
        const RelationResidual rr = relation_residual(s, word, samples);
        INFO(rr.name);
        CHECK(rr.residual < 1e-6);
        CHECK(rr.netWraps == 0);
        CHECK(rr.infFixed);
    }
}

TEST_CASE("empty relation has zero residual") {
    const RelationResidual rr =
        relation_residual(fig8_scene(), std::vector<LoopWord>{}, window_samples(5, 2.0));
    CHECK(rr.residual == 0.0);
}

TEST_CASE("non-closing words are rejected") {
    const Scene& s = fig8_scene();
    LoopWord open;
    open.name = "open";
    open.path.base = {0.13, 0.29};
    open.path.moves = {Move::east(0.2)};
    CHECK_THROWS_WITH_AS(relation_residual(s, open, window_samples(3, 1.0)),
                         doctest::Contains("NotClosed"), Error);
}

TEST_CASE("group law: composite words equal composed monodromies") {
    const Scene& s = fig8_scene();
    Rng rng(31);
    int done = 0;
    for (int trial = 0; trial < 60 && done < 20; ++trial) {
        const Vec2 base{rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)};
        const auto rect = [&](double de, double dn) {
            PathSpec p;
            p.base = base;
            p.moves = {Move::east(de), Move::north(dn), Move::east(-de), Move::north(-dn)};
            return p;
        };
        const PathSpec w1 = rect(rng.uniform(0.01, 0.3), rng.uniform(0.01, 0.3));
        const PathSpec w2 = rect(rng.uniform(0.01, 0.3), rng.uniform(0.01, 0.3));
        PathSpec both = w1;
        both.moves.insert(both.moves.end(), w2.moves.begin(), w2.moves.end());
        try {
            PathRunner r1(s, w1), r2(s, w2), rb(s, both);
            for (const double x : {-3.0, -0.4, 0.2, 1.1}) {
                const FiberPoint mid = r1.run(FiberPoint::at(x), TransportMode::Full).out;
                const FiberPoint seq = r2.run(mid, TransportMode::Full).out;
                const FiberPoint one = rb.run(FiberPoint::at(x), TransportMode::Full).out;
                REQUIRE_FALSE(seq.infinite);
                REQUIRE_FALSE(one.infinite);
                CHECK(std::abs(seq.value - one.value) < 1e-8);
            }
            ++done;
        } catch (const Error&) {
            // unlucky base: skip
        }
    }
    CHECK(done == 20);
}

TEST_CASE("step decomposition: cuts chain through the zero section") {
    const Scene& s = fig8_scene();
    const RaySpec line{{0.13, 0.29}, 0.0, -0.4};

    CHECK(step_decomposition(s, line, 0).intervals.empty());

    const StepDecomposition one = step_decomposition(s, line, 1);
    REQUIRE(one.intervals.size() == 1);
    CHECK(one.intervals[0].crossTime == 0.0);
    CHECK(one.intervals[0].wrap == 0);
    CHECK(one.intervals[0].cut == 0.0);

    const StepDecomposition sd = step_decomposition(s, line, 5);
    REQUIRE(sd.intervals.size() == 5);
    // crossing times strictly increase along the line, one wrap per interval
    for (std::size_t i = 0; i + 1 < sd.intervals.size(); ++i) {
        CHECK(sd.intervals[i].crossTime < sd.intervals[i + 1].crossTime);
        CHECK(sd.intervals[i].wrap + 1 == sd.intervals[i + 1].wrap);
    }
    // backward-transported infinity cuts land on the zero section, so the
    // full-turn intervals tile the unrolled basepoint fiber
    CHECK(sd.disjoint);
    CHECK(sd.maxCutResidual < 1e-6);

    CHECK_THROWS_AS(step_decomposition(s, {{0.13, 0.29}, 0.0, 0.4}, 2), Error);
}
