#include "holonomy/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "holonomy/errors.hpp"

namespace holonomy {

namespace {

// Convex quadrilateral scanline: integer column range at a given row,
// widened by one cell so rounding can never drop a candidate.
struct Quad {
    Vec2 v[4];

    void bounds(double& ymin, double& ymax) const {
        ymin = kInf;
        ymax = -kInf;
        for (const auto& p : v) {
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
    }

    bool row_range(double row, long long& lo, long long& hi) const {
        double xmin = kInf, xmax = -kInf;
        for (int i = 0; i < 4; ++i) {
            Vec2 p = v[i], q = v[(i + 1) % 4];
            if (p.y > q.y) std::swap(p, q);
            if (row < p.y - 1.0 || row > q.y + 1.0) continue;
            if (q.y - p.y < 1e-300) {
                xmin = std::min({xmin, p.x, q.x});
                xmax = std::max({xmax, p.x, q.x});
            } else {
                const double tt = std::clamp((row - p.y) / (q.y - p.y), 0.0, 1.0);
                const double x = p.x + tt * (q.x - p.x);
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
            }
        }
        if (xmin > xmax) return false;
        lo = static_cast<long long>(std::floor(xmin)) - 1;
        hi = static_cast<long long>(std::ceil(xmax)) + 1;
        return true;
    }
};

struct IMat2 {
    long long a = 1, b = 0, c = 0, d = 1;  // columns (a,c), (b,d)
};

// Compensated a*x + b*y: the raw products cancel catastrophically when the
// integer factors are large (far lattice translates), so recover the exact
// products with FMA and sum the residuals.
inline double lincomb2(double a, double x, double b, double y) {
    const double p1 = a * x;
    const double e1 = std::fma(a, x, -p1);
    const double p2 = b * y;
    const double e2 = std::fma(b, y, -p2);
    const double s = p1 + p2;
    const double t = s - p1;
    const double errS = (p1 - (s - t)) + (p2 - t);
    return s + (errS + e1 + e2);
}

// Gauss reduction of the columns of diag(1/w,1/h) * dev, tracking the
// unimodular change of basis. Columns are re-evaluated exactly from the
// integer coefficients every iteration: iterating on rounded vectors breaks
// down long before the ~log_phi(aspect) steps extreme boxes need.
IMat2 gauss_reduce(const Mat2& dev, double wEff, double hEff) {
    IMat2 u;
    const auto column = [&](long long m, long long n) -> Vec2 {
        const double md = static_cast<double>(m), nd = static_cast<double>(n);
        return {lincomb2(dev.a, md, dev.b, nd) / wEff, lincomb2(dev.c, md, dev.d, nd) / hEff};
    };
    for (int iter = 0; iter < 512; ++iter) {
        Vec2 c1 = column(u.a, u.c), c2 = column(u.b, u.d);
        if (c1.dot(c1) > c2.dot(c2)) {
            std::swap(u.a, u.b);
            std::swap(u.c, u.d);
            std::swap(c1, c2);
        }
        const double denom = c1.dot(c1);
        if (denom <= 0) break;
        const double mu = std::round(c2.dot(c1) / denom);
        if (mu == 0 || std::abs(mu) > 1e15) break;
        u.b -= static_cast<long long>(mu) * u.a;
        u.d -= static_cast<long long>(mu) * u.c;
    }
    return u;
}

}  // namespace

LatticeView::LatticeView(const Scene& scene) : scene_(&scene) {
    init_shifts({Rat{0, 1}, Rat{0, 1}});
}

LatticeView::LatticeView(const Scene& scene, std::size_t orbitIndex, std::size_t pointIndex)
    : scene_(&scene) {
    init_shifts(scene.orbits.at(orbitIndex).orbit.points.at(pointIndex));
}

void LatticeView::init_shifts(const Vec2Q& center) {
    shifted_.clear();
    for (std::size_t i = 0; i < scene_->orbits.size(); ++i) {
        for (const auto& pt : scene_->orbits[i].orbit.points) {
            const double dx = static_cast<double>(pt.x.num * center.x.den -
                                                  center.x.num * pt.x.den) /
                              static_cast<double>(pt.x.den * center.x.den);
            const double dy = static_cast<double>(pt.y.num * center.y.den -
                                                  center.y.num * pt.y.den) /
                              static_cast<double>(pt.y.den * center.y.den);
            shifted_.push_back({{dx, dy}, static_cast<int>(i)});
        }
    }
}

void LatticeView::collect(double tau, double e0, double e1, double n0, double n1,
                          std::vector<SingularityHit>& out, std::size_t cap) const {
    if (e1 < e0 || n1 < n0) return;
    const Mat2 dev = flow_scaling(scene_->eigen.lambda, tau).mul(scene_->eigen.dev);

    const double wEff = std::max(e1 - e0, 1e-14);
    const double hEff = std::max(n1 - n0, 1e-14);
    const auto predicted =
        static_cast<std::size_t>(std::min(1e18, wEff * hEff * scene_->totalDensity));
    if (predicted > cap) throw Error(Err::WindowTooLarge, "window enumeration exceeds cap");

    // Basis adapted to the box aspect. All quad geometry is computed relative
    // to the box center with an exact integer anchor in the reduced basis;
    // the anchor product runs in 128-bit integers because entries of u times
    // anchor coordinates overflow the exact double range at extreme aspects.
    const IMat2 u = gauss_reduce(dev, wEff, hEff);
    const Mat2 uD{static_cast<double>(u.a), static_cast<double>(u.b),
                  static_cast<double>(u.c), static_cast<double>(u.d)};
    const __int128 uDet = static_cast<__int128>(u.a) * u.d - static_cast<__int128>(u.b) * u.c;
    const double s = uDet > 0 ? 1.0 : -1.0;  // |det u| = 1
    const Mat2 uInv{uD.d * s, -uD.b * s, -uD.c * s, uD.a * s};

    // R = norm * u, compensated: the reduced columns are tiny combinations of
    // huge entries and die in plain double products.
    const Mat2 R{lincomb2(dev.a, uD.a, dev.b, uD.c) / wEff,
                 lincomb2(dev.a, uD.b, dev.b, uD.d) / wEff,
                 lincomb2(dev.c, uD.a, dev.d, uD.c) / hEff,
                 lincomb2(dev.c, uD.b, dev.d, uD.d) / hEff};
    const Mat2 rInv = R.inverse();  // well conditioned after reduction

    // quad of the centered unit box in reduced coordinates
    Quad rel;
    const Vec2 unitCorners[4] = {{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}};
    for (int i = 0; i < 4; ++i) rel.v[i] = rInv.apply(unitCorners[i]);

    const Vec2 m{(e0 + e1) / 2.0 / wEff, (n0 + n1) / 2.0 / hEff};
    const Vec2 rm = rInv.apply(m);

    std::size_t visited = 0;
    for (const auto& [p, orbitIdx] : shifted_) {
        const Vec2 devP = dev.apply(p);
        const Vec2 g{rm.x - lincomb2(uInv.a, p.x, uInv.b, p.y),
                     rm.y - lincomb2(uInv.c, p.x, uInv.d, p.y)};
        const double k0x = std::round(g.x), k0y = std::round(g.y);
        if (std::abs(k0x) > 9e15 || std::abs(k0y) > 9e15)
            throw Error(Err::WindowTooLarge, "query too far from the origin");
        const Vec2 frac{g.x - k0x, g.y - k0y};

        Quad quad;
        for (int i = 0; i < 4; ++i) quad.v[i] = rel.v[i] + frac;
        double ymin, ymax;
        quad.bounds(ymin, ymax);
        // exact anchor image in lattice coordinates
        const __int128 ax = static_cast<__int128>(u.a) * static_cast<long long>(k0x) +
                            static_cast<__int128>(u.b) * static_cast<long long>(k0y);
        const __int128 ay = static_cast<__int128>(u.c) * static_cast<long long>(k0x) +
                            static_cast<__int128>(u.d) * static_cast<long long>(k0y);
        const bool magnifying = scene_->orbits[static_cast<std::size_t>(orbitIdx)].magnifying;
        for (long long row = static_cast<long long>(std::floor(ymin)) - 1;
             row <= static_cast<long long>(std::ceil(ymax)) + 1; ++row) {
            long long lo, hi;
            if (!quad.row_range(static_cast<double>(row), lo, hi)) continue;
            if (visited + static_cast<std::size_t>(hi - lo + 1) > cap)
                throw Error(Err::WindowTooLarge, "window enumeration exceeds cap");
            visited += static_cast<std::size_t>(hi - lo + 1);
            const double se = 1e-14 * (1.0 + std::abs(e0) + std::abs(e1));
            const double sn = 1e-14 * (1.0 + std::abs(n0) + std::abs(n1));
            for (long long col = lo; col <= hi; ++col) {
                const __int128 nx = ax + u.a * col + u.b * row;
                const __int128 ny = ay + u.c * col + u.d * row;
                if (nx > (1LL << 53) || nx < -(1LL << 53) || ny > (1LL << 53) ||
                    ny < -(1LL << 53))
                    continue;
                const double nxd = static_cast<double>(static_cast<long long>(nx));
                const double nyd = static_cast<double>(static_cast<long long>(ny));
                const Vec2 pos{lincomb2(dev.a, nxd, dev.b, nyd) + devP.x,
                               lincomb2(dev.c, nxd, dev.d, nyd) + devP.y};
                if (pos.x >= e0 - se && pos.x <= e1 + se && pos.y >= n0 - sn &&
                    pos.y <= n1 + sn)
                    out.push_back({pos, orbitIdx, magnifying});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const SingularityHit& a, const SingularityHit& b) {
        if (a.pos.x != b.pos.x) return a.pos.x < b.pos.x;
        return a.pos.y < b.pos.y;
    });
}

std::size_t LatticeView::count(double tau, double e0, double e1, double n0, double n1,
                               std::size_t cap) const {
    std::vector<SingularityHit> hits;
    collect(tau, e0, e1, n0, n1, hits, cap);
    return hits.size();
}

std::optional<SingularityHit> LatticeView::on_vertical(double tau, double e, double tol,
                                                       double nCenter) const {
    std::vector<SingularityHit> hits;
    for (int k = 0; k <= 22; ++k) {
        const double band = std::ldexp(1.0, k);
        hits.clear();
        collect(tau, e - tol, e + tol, nCenter - band, nCenter + band, hits);
        for (const auto& h : hits)
            if (std::abs(h.pos.x - e) <= tol) return h;
    }
    return std::nullopt;
}

std::optional<SingularityHit> LatticeView::next_crossing(
    double tau, double eFrom, double eLimit, int dir,
    const std::function<double(double)>& baseHeight, double theta, double tol) const {
    const double span = std::abs(eLimit - eFrom);
    if (span <= 0) return std::nullopt;

    // Expected east gap to the next qualifying point is ~ 1/(density * gap).
    const double gap0 = std::abs(theta - baseHeight(eFrom));
    double w = std::clamp(4.0 / std::max(1e-3, gap0 * scene_->totalDensity), 1e-13, 1.0);

    std::vector<SingularityHit> hits;
    double cursor = eFrom;
    while ((eLimit - cursor) * dir > 0) {
        double stop = cursor + dir * w;
        if ((stop - eLimit) * dir > 0) stop = eLimit;
        const double eLo = std::min(cursor, stop), eHi = std::max(cursor, stop);
        const double b0 = baseHeight(eLo), b1 = baseHeight(eHi);
        const double nLo = std::min({b0, b1, theta}) - tol;
        const double nHi = std::max({b0, b1, theta}) + tol;
        hits.clear();
        collect(tau, eLo, eHi, nLo, nHi, hits);

        const SingularityHit* best = nullptr;
        for (const auto& h : hits) {
            if ((h.pos.x - cursor) * dir <= 0) continue;  // strictly ahead
            if ((h.pos.x - stop) * dir > 0) continue;
            if ((h.pos.x - eLimit) * dir >= 0) continue;  // the move end is not crossed
            const double base = baseHeight(h.pos.x);
            if (std::abs(h.pos.y - base) <= tol)
                throw Error(Err::PathThroughSingularity,
                            "base path passes through a singularity");
            if ((h.pos.y - base) * (theta - h.pos.y) <= 0.0) continue;  // not strictly between
            if (!best || (h.pos.x - best->pos.x) * dir < 0) best = &h;
        }
        if (best) return *best;
        if (stop == eLimit) break;
        cursor = stop;
        w = std::min(w * 2.0, 1.0);
    }
    return std::nullopt;
}

}  // namespace holonomy
