#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace holonomy::treeglue {

enum class Gluing { A, B };

// Point of the rooted binary tree: the vertex `word` (letters 'L'/'R'), or
// for tailNum > 0 the interior point of the edge into `word` at fraction
// tailNum / 2^g from the parent. Tails use the dyadic grid of the quotient.
struct TreePoint {
    std::string word;
    long long tailNum = 0;
    long long tailDen = 1;

    bool operator==(const TreePoint& o) const {
        return word == o.word && tailNum * o.tailDen == o.tailNum * tailDen;
    }
    bool operator<(const TreePoint& o) const {
        if (word != o.word) return word < o.word;
        return tailNum * o.tailDen < o.tailNum * tailDen;
    }
    bool isVertex() const { return tailNum == 0; }
    // depth as a rational: |word| - 1 + tail for edge points, |word| for vertices
    double depth() const {
        if (isVertex()) return static_cast<double>(word.size());
        return static_cast<double>(word.size()) - 1.0 +
               static_cast<double>(tailNum) / static_cast<double>(tailDen);
    }
};

struct TreeQuotient {
    Gluing gluing = Gluing::A;
    int depth = 0;
    int resolution = 0;  // tails on the 2^resolution grid
    std::vector<TreePoint> points;
    std::vector<int> classOf;              // point index -> class id
    std::vector<std::vector<int>> members; // class id -> point indices
    std::vector<std::vector<int>> order;   // class DAG adjacency (covers)
    bool antisymmetric = true;
    bool totalOrder = false;

    int index_of(const TreePoint& p) const;             // -1 if not a grid point
    int class_of(const TreePoint& p) const;             // -1 if not a grid point
    bool reaches(int fromClass, int toClass) const;     // reflexive-transitive
};

// Builds the discretized quotient. Gluing A collapses [v,vLLL...) onto
// [v,vRRR...) depth-preservingly; gluing B glues [v,vLRRR...) onto
// [v,vRLRRR...) with a factor-two dilation on the first edge. Requires
// depth <= 12, resolution <= 6; gluing B requires resolution >= 1.
TreeQuotient build_quotient(Gluing gluing, int depth, int resolution);

// Ancestor relation in the tree itself (a above or equal to b).
bool tree_ancestor(const TreePoint& a, const TreePoint& b);

// Canonical representative of the class of `point` under gluing B: the
// unique member of the form v0{L,R}^k LLR^s, v0 L R^s, or v0 R^s. Raises
// TruncationBoundary when the class touches the depth cutoff without a
// matching member.
TreePoint canonical_rep(const TreeQuotient& q, const TreePoint& point);

bool matches_canonical_form(const TreePoint& p);

struct AncestorCheck {
    bool predicate = false;   // claim-(2) disjunction evaluated on canonical reps
    bool bruteForce = false;  // quotient DAG reachability
    bool agree = false;
};

AncestorCheck check_ancestor_claim(const TreeQuotient& q, const TreePoint& a, const TreePoint& b);

// DOT dump of the class DAG for inspection.
std::string to_dot(const TreeQuotient& q);

}  // namespace holonomy::treeglue
