#include <doctest.h>

#include "holonomy/errors.hpp"
#include "holonomy/rng.hpp"
#include "holonomy/treeglue.hpp"

using namespace holonomy;
using namespace holonomy::treeglue;

TEST_CASE("gluing A collapses to a chain") {
    const TreeQuotient q = build_quotient(Gluing::A, 8, 3);
    CHECK(q.antisymmetric);
    CHECK(q.totalOrder);
    CHECK(q.members.size() == 8u * 8u + 1u);  // d * 2^g + 1

    // depth-preserving shift v -> Lv maps classes to classes
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        const TreePoint& p = q.points[rng.index(q.points.size())];
        TreePoint shifted{"L" + p.word, p.tailNum, p.tailDen};
        const int ci = q.class_of(shifted);
        if (ci < 0) continue;  // beyond truncation
        // every member of p's class shifts into the same class
        for (const int m : q.members[static_cast<std::size_t>(q.class_of(p))]) {
            const TreePoint& mp = q.points[static_cast<std::size_t>(m)];
            const int cm = q.class_of({"L" + mp.word, mp.tailNum, mp.tailDen});
            if (cm >= 0) CHECK(cm == ci);
        }
    }
}

TEST_CASE("gluing B identifies the ladder points v0 R^n L") {
    const TreeQuotient q = build_quotient(Gluing::B, 8, 3);
    CHECK(q.antisymmetric);
    CHECK_FALSE(q.totalOrder);
    const int base = q.class_of({"L", 0, 1});
    REQUIRE(base >= 0);
    std::string w;
    for (int n = 0; n <= 5; ++n) {
        w.assign(static_cast<std::size_t>(n), 'R');
        w += 'L';
        CHECK(q.class_of({w, 0, 1}) == base);
    }
}

TEST_CASE("gluing B leaves v0LL and v0RLL incomparable") {
    const TreeQuotient q = build_quotient(Gluing::B, 8, 3);
    const int a = q.class_of({"LL", 0, 1});
    const int b = q.class_of({"RLL", 0, 1});
    REQUIRE(a >= 0);
    REQUIRE(b >= 0);
    CHECK(a != b);
    CHECK_FALSE(q.reaches(a, b));
    CHECK_FALSE(q.reaches(b, a));
}

TEST_CASE("canonical representatives") {
    const TreeQuotient q = build_quotient(Gluing::B, 8, 3);

    CHECK(canonical_rep(q, {"RLL", 0, 1}) == TreePoint{"RLL", 0, 1});
    CHECK(canonical_rep(q, {"", 0, 1}) == TreePoint{"", 0, 1});

    // v0L and v0RL share a class whose canonical member is v0L (v0 L R^0)
    CHECK(canonical_rep(q, {"RL", 0, 1}) == TreePoint{"L", 0, 1});

    // v0LRRR is already of the form v0 L R^s; its class also holds v0RLRRR
    const TreePoint c = canonical_rep(q, {"LRRR", 0, 1});
    CHECK(c == TreePoint{"LRRR", 0, 1});
    CHECK(q.class_of({"RLRRR", 0, 1}) == q.class_of({"LRRR", 0, 1}));
}

TEST_CASE("claim-(2) ancestor predicate agrees with brute force") {
    const TreeQuotient q = build_quotient(Gluing::B, 8, 3);

    // v0 L R^s is an ancestor of the Fig-4 classes v0LL, v0RLL, v0RRLL
    const TreePoint lr{"L", 0, 1};
    for (const char* w : {"LL", "RLL", "RRLL"}) {
        const AncestorCheck c = check_ancestor_claim(q, lr, {w, 0, 1});
        CHECK(c.bruteForce);
        CHECK(c.agree);
    }

    // reflexive
    const AncestorCheck self = check_ancestor_claim(q, {"LL", 0, 1}, {"LL", 0, 1});
    CHECK(self.predicate);
    CHECK(self.bruteForce);

    // random canonical pairs away from the truncation boundary
    Rng rng(17);
    int done = 0;
    while (done < 200) {
        const TreePoint& p = q.points[rng.index(q.points.size())];
        const TreePoint& r = q.points[rng.index(q.points.size())];
        if (p.depth() > 5.0 || r.depth() > 5.0) continue;
        TreePoint a, b;
        try {
            a = canonical_rep(q, p);
            b = canonical_rep(q, r);
        } catch (const Error&) {
            continue;  // boundary classes excluded
        }
        const AncestorCheck c = check_ancestor_claim(q, a, b);
        INFO(a.word << "+" << a.tailNum << "/" << a.tailDen << " vs " << b.word << "+"
                    << b.tailNum << "/" << b.tailDen);
        CHECK(c.agree);
        ++done;
    }
}

TEST_CASE("resolution and depth guards") {
    CHECK_THROWS_WITH_AS(build_quotient(Gluing::B, 8, 0),
                         doctest::Contains("ResolutionMismatch"), Error);
    CHECK_THROWS_AS(build_quotient(Gluing::A, 13, 3), Error);
    CHECK_THROWS_AS(build_quotient(Gluing::A, 8, 7), Error);
}

TEST_CASE("DOT dump matches the golden chain") {
    const TreeQuotient q = build_quotient(Gluing::A, 2, 1);
    const char* golden =
        "digraph quotient {\n"
        "  rankdir=TB;\n"
        "  c0 [label=\"v0 (1)\"];\n"
        "  c1 [label=\"L (2)\"];\n"
        "  c2 [label=\"L+1/2 (2)\"];\n"
        "  c3 [label=\"LL (4)\"];\n"
        "  c4 [label=\"LL+1/2 (4)\"];\n"
        "  c0 -> c2;\n"
        "  c1 -> c4;\n"
        "  c2 -> c1;\n"
        "  c4 -> c3;\n"
        "}\n";
    CHECK(to_dot(q) == golden);
}
