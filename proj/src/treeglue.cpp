#include "holonomy/treeglue.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "holonomy/errors.hpp"

namespace holonomy::treeglue {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[b] = a;
    }
};

// Point at distance num/den below vertex v along the ray whose edge labels
// are step(0), step(1), ...; nullopt beyond the truncation depth.
std::optional<TreePoint> point_on_ray(const std::string& v, long long num, long long den,
                                      int maxDepth, const std::function<char(int)>& step) {
    const long long whole = num / den;
    const long long frac = num % den;
    std::string word = v;
    for (long long i = 0; i < whole; ++i) word += step(static_cast<int>(i));
    if (frac == 0) {
        if (static_cast<int>(word.size()) > maxDepth) return std::nullopt;
        return TreePoint{word, 0, 1};
    }
    word += step(static_cast<int>(whole));
    if (static_cast<int>(word.size()) > maxDepth) return std::nullopt;
    return TreePoint{word, frac, den};
}

char all_l(int) { return 'L'; }
char all_r(int) { return 'R'; }
char rl_tail(int i) { return i == 0 ? 'R' : (i == 1 ? 'L' : 'R'); }  // R L R R ...

// Canonical-claim decomposition a = v0 W R^s with s maximal. Only canonical
// points (integer part plus an R-edge tail) decompose nontrivially.
struct Decomp {
    std::string w;
    long long sWhole = 0;
    bool sFrac = false;
};

Decomp decompose(const TreePoint& a) {
    Decomp d;
    d.w = a.word;
    if (!a.isVertex()) {
        if (d.w.back() != 'R') return d;  // fractional L tail: no R part
        d.w.pop_back();
        d.sFrac = true;
    }
    while (!d.w.empty() && d.w.back() == 'R') {
        d.w.pop_back();
        ++d.sWhole;
    }
    return d;
}

}  // namespace

int TreeQuotient::index_of(const TreePoint& p) const {
    const auto it = std::lower_bound(points.begin(), points.end(), p);
    if (it == points.end() || !(*it == p)) return -1;
    return static_cast<int>(it - points.begin());
}

int TreeQuotient::class_of(const TreePoint& p) const {
    const int i = index_of(p);
    return i < 0 ? -1 : classOf[static_cast<std::size_t>(i)];
}

bool TreeQuotient::reaches(int fromClass, int toClass) const {
    if (fromClass < 0 || toClass < 0) return false;
    if (fromClass == toClass) return true;
    std::vector<char> seen(members.size(), 0);
    std::vector<int> stack{fromClass};
    seen[static_cast<std::size_t>(fromClass)] = 1;
    while (!stack.empty()) {
        const int c = stack.back();
        stack.pop_back();
        for (const int nxt : order[static_cast<std::size_t>(c)]) {
            if (nxt == toClass) return true;
            if (!seen[static_cast<std::size_t>(nxt)]) {
                seen[static_cast<std::size_t>(nxt)] = 1;
                stack.push_back(nxt);
            }
        }
    }
    return false;
}

TreeQuotient build_quotient(Gluing gluing, int depth, int resolution) {
    if (depth < 1 || depth > 12 || resolution < 0 || resolution > 6)
        throw Error(Err::ResolutionMismatch, "depth <= 12 and resolution <= 6 required");
    if (gluing == Gluing::B && resolution < 1)
        throw Error(Err::ResolutionMismatch,
                    "gluing B needs at least one tail bit for the factor-two dilation");

    TreeQuotient q;
    q.gluing = gluing;
    q.depth = depth;
    q.resolution = resolution;
    const long long den = 1LL << resolution;

    std::vector<std::string> vertices{""};
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (static_cast<int>(vertices[i].size()) >= depth) continue;
        vertices.push_back(vertices[i] + 'L');
        vertices.push_back(vertices[i] + 'R');
    }
    for (const auto& w : vertices) {
        q.points.push_back({w, 0, 1});
        if (!w.empty())
            for (long long k = 1; k < den; ++k) q.points.push_back({w, k, den});
    }
    std::sort(q.points.begin(), q.points.end());

    UnionFind uf(q.points.size());
    const auto unite_points = [&](const std::optional<TreePoint>& a,
                                  const std::optional<TreePoint>& b) {
        if (!a || !b) return;
        const int ia = q.index_of(*a), ib = q.index_of(*b);
        if (ia >= 0 && ib >= 0) uf.unite(ia, ib);
    };

    for (const auto& v : vertices) {
        const long long room = depth - static_cast<long long>(v.size());
        if (room < 1) continue;
        if (gluing == Gluing::A) {
            // depth-preserving collapse of the two extreme rays below v
            for (long long num = 1; num <= room * den; ++num)
                unite_points(point_on_ray(v, num, den, depth, all_l),
                             point_on_ray(v, num, den, depth, all_r));
        } else {
            // factor-two dilation of [v,vL] onto [v,vR]+[vR,vRL], exact on
            // the dyadic grid, then an isometry between the R tails
            for (long long num = 1; num <= den; ++num)
                unite_points(point_on_ray(v, num, den, depth, all_l),
                             point_on_ray(v, 2 * num, den, depth, rl_tail));
            for (long long num = 1; num <= room * den; ++num)
                unite_points(point_on_ray(v + "L", num, den, depth, all_r),
                             point_on_ray(v + "RL", num, den, depth, all_r));
        }
    }

    std::vector<int> root(q.points.size());
    std::vector<int> classId(q.points.size(), -1);
    int nClasses = 0;
    for (std::size_t i = 0; i < q.points.size(); ++i) root[i] = uf.find(static_cast<int>(i));
    for (std::size_t i = 0; i < q.points.size(); ++i) {
        const auto r = static_cast<std::size_t>(root[i]);
        if (classId[r] < 0) classId[r] = nClasses++;
    }
    q.classOf.resize(q.points.size());
    q.members.assign(static_cast<std::size_t>(nClasses), {});
    for (std::size_t i = 0; i < q.points.size(); ++i) {
        q.classOf[i] = classId[static_cast<std::size_t>(root[i])];
        q.members[static_cast<std::size_t>(q.classOf[i])].push_back(static_cast<int>(i));
    }

    // Cover edges: every grid point to its grid successor one step down.
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(nClasses));
    const auto add_edge = [&](const TreePoint& a, const TreePoint& b) {
        const int ca = q.class_of(a), cb = q.class_of(b);
        if (ca >= 0 && cb >= 0 && ca != cb) adj[static_cast<std::size_t>(ca)].push_back(cb);
    };
    for (const auto& p : q.points) {
        if (p.isVertex()) {
            if (static_cast<int>(p.word.size()) >= depth) continue;
            for (const char c : {'L', 'R'}) {
                const std::string child = p.word + c;
                add_edge(p, den == 1 ? TreePoint{child, 0, 1} : TreePoint{child, 1, den});
            }
        } else {
            if (p.tailNum + 1 == den)
                add_edge(p, TreePoint{p.word, 0, 1});
            else
                add_edge(p, TreePoint{p.word, p.tailNum + 1, den});
        }
    }
    for (auto& v : adj) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    q.order = std::move(adj);

    // Antisymmetry: no directed cycles among classes.
    {
        const std::size_t n = q.order.size();
        std::vector<int> color(n, 0);  // 0 new, 1 active, 2 done
        bool cyclic = false;
        struct Frame { std::size_t v; std::size_t child; };
        for (std::size_t s = 0; s < n && !cyclic; ++s) {
            if (color[s]) continue;
            std::vector<Frame> frames{{s, 0}};
            color[s] = 1;
            while (!frames.empty() && !cyclic) {
                auto& f = frames.back();
                if (f.child < q.order[f.v].size()) {
                    const auto w = static_cast<std::size_t>(q.order[f.v][f.child++]);
                    if (color[w] == 1) { cyclic = true; break; }
                    if (color[w] == 0) {
                        color[w] = 1;
                        frames.push_back({w, 0});
                    }
                } else {
                    color[f.v] = 2;
                    frames.pop_back();
                }
            }
        }
        q.antisymmetric = !cyclic;
    }

    // Total order: sorted by minimal depth the classes must chain up.
    {
        std::vector<std::pair<double, int>> byDepth;
        for (std::size_t c = 0; c < q.members.size(); ++c) {
            double d = 1e300;
            for (const int i : q.members[c])
                d = std::min(d, q.points[static_cast<std::size_t>(i)].depth());
            byDepth.push_back({d, static_cast<int>(c)});
        }
        std::sort(byDepth.begin(), byDepth.end());
        bool chain = q.antisymmetric;
        for (std::size_t i = 0; i + 1 < byDepth.size() && chain; ++i)
            chain = q.reaches(byDepth[i].second, byDepth[i + 1].second);
        q.totalOrder = chain;
    }
    return q;
}

bool tree_ancestor(const TreePoint& a, const TreePoint& b) {
    if (a.word.empty()) return true;  // the root precedes everything
    if (a.word.size() > b.word.size()) return false;
    if (a.word == b.word) {
        // a vertex sits at the far end of its edge (tail 1), interior points
        // at their fraction
        const double ta = a.isVertex() ? 1.0
                                       : static_cast<double>(a.tailNum) /
                                             static_cast<double>(a.tailDen);
        const double tb = b.isVertex() ? 1.0
                                       : static_cast<double>(b.tailNum) /
                                             static_cast<double>(b.tailDen);
        return ta <= tb;
    }
    if (b.word.compare(0, a.word.size(), a.word) != 0) return false;
    return true;  // a lies on the root path strictly above b's subtree
}

bool matches_canonical_form(const TreePoint& p) {
    std::string w = p.word;
    if (!p.isVertex()) {
        if (w.back() != 'R') return false;  // fractional tails must sit on an R edge
        w.pop_back();
    }
    while (!w.empty() && w.back() == 'R') w.pop_back();
    if (w.empty()) return true;           // v0 R^s
    if (w == "L") return true;            // v0 L R^s
    return w.size() >= 2 && w.back() == 'L' && w[w.size() - 2] == 'L';  // v0 {L,R}^k LL R^s
}

TreePoint canonical_rep(const TreeQuotient& q, const TreePoint& point) {
    if (q.gluing != Gluing::B)
        throw Error(Err::ParseError, "canonical representatives are a gluing-B notion");
    const int cls = q.class_of(point);
    if (cls < 0) throw Error(Err::ParseError, "not a grid point of this quotient");
    std::vector<TreePoint> matches;
    bool boundary = false;
    for (const int i : q.members[static_cast<std::size_t>(cls)]) {
        const TreePoint& m = q.points[static_cast<std::size_t>(i)];
        if (m.depth() >= static_cast<double>(q.depth) - 1.0 + 1e-12) boundary = true;
        if (matches_canonical_form(m)) matches.push_back(m);
    }
    if (matches.size() == 1) return matches.front();
    if (boundary) throw Error(Err::TruncationBoundary, "class touches the truncation depth");
    if (matches.empty())
        throw Error(Err::TruncationBoundary, "no canonical member inside the truncation");
    throw Error(Err::ParseError, "canonical representative not unique");
}

namespace {

// Claim-(2) disjunction, with the descent conditions of cases b and c read
// in the quotient order, i.e. applied recursively to the canonical words
// they name. The word set is finite within the truncation.
bool claim_predicate(const TreeQuotient& q, const TreePoint& a, const TreePoint& b,
                     std::set<std::string>& seen) {
    if (tree_ancestor(a, b)) return true;
    const Decomp d = decompose(a);
    const auto recurse = [&](std::string word) {
        if (static_cast<int>(word.size()) > q.depth) return false;
        if (!seen.insert(word).second) return false;
        return claim_predicate(q, TreePoint{std::move(word), 0, 1}, b, seen);
    };
    if (d.w.empty()) {
        for (long long n = 0; n <= d.sWhole; ++n) {
            std::string cand(static_cast<std::size_t>(n), 'R');
            cand += 'L';
            if (recurse(std::move(cand))) return true;
        }
    } else if (d.w.back() == 'L') {
        const std::string wPrime = d.w.substr(0, d.w.size() - 1);
        for (long long k = 0;
             static_cast<long long>(wPrime.size()) + k + 2 <= q.depth; ++k) {
            std::string cand = wPrime;
            cand.append(static_cast<std::size_t>(k), 'R');
            cand += "LL";
            if (recurse(std::move(cand))) return true;
        }
    }
    return false;
}

}  // namespace

AncestorCheck check_ancestor_claim(const TreeQuotient& q, const TreePoint& a,
                                   const TreePoint& b) {
    AncestorCheck res;
    std::set<std::string> seen;
    res.predicate = claim_predicate(q, a, b, seen);
    res.bruteForce = q.reaches(q.class_of(a), q.class_of(b));
    res.agree = res.predicate == res.bruteForce;
    return res;
}

std::string to_dot(const TreeQuotient& q) {
    std::ostringstream out;
    out << "digraph quotient {\n  rankdir=TB;\n";
    for (std::size_t c = 0; c < q.members.size(); ++c) {
        const TreePoint& rep = q.points[static_cast<std::size_t>(q.members[c].front())];
        out << "  c" << c << " [label=\"" << (rep.word.empty() ? "v0" : rep.word);
        if (!rep.isVertex()) out << "+" << rep.tailNum << "/" << rep.tailDen;
        out << " (" << q.members[c].size() << ")\"];\n";
    }
    for (std::size_t c = 0; c < q.order.size(); ++c)
        for (const int d : q.order[c]) out << "  c" << c << " -> c" << d << ";\n";
    out << "}\n";
    return out.str();
}

}  // namespace holonomy::treeglue
