#include "holonomy/render.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "holonomy/svg.hpp"

namespace holonomy {

namespace {

const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#e377c2"};

}  // namespace

std::string render_blowup_figure(const Scene& scene, const BlowupFigureConfig& cfg) {
    const double margin = 30.0;
    const double width = cfg.eastExtent * cfg.pxPerUnit + 2 * margin;
    const double height = 2 * cfg.northExtent * cfg.pxPerUnit + 2 * margin;
    svg::Document doc(width, height);

    const auto px = [&](double e, double n) -> Vec2 {
        return {margin + e * cfg.pxPerUnit,
                margin + (cfg.northExtent - n) * cfg.pxPerUnit};
    };

    // axes through the ray base height
    const Vec2 axl = px(0, 0), axr = px(cfg.eastExtent, 0);
    doc.line(axl.x, axl.y, axr.x, axr.y, "#bbbbbb", 0.8, "4,3");

    const Window win{cfg.rayBase.x, cfg.rayBase.x + cfg.eastExtent,
                     cfg.rayBase.y - cfg.northExtent, cfg.rayBase.y + cfg.northExtent};
    for (const auto& hit : singularities_in_window(scene, win)) {
        const Vec2 q = px(hit.pos.x - cfg.rayBase.x, hit.pos.y - cfg.rayBase.y);
        doc.circle(q.x, q.y, 2.2, hit.magnifying ? "#222222" : "#888888");
    }

    EngineConfig ecfg;
    ecfg.sampleDt = 0.02;
    int color = 0;
    for (const double x0 : cfg.startValues) {
        const RaySpec ray{cfg.rayBase, 0.0, 0.0};
        const SectionTrace trace = advance_section(scene, ray, x0, cfg.eastExtent, ecfg);
        std::vector<Vec2> pts;
        for (const auto& [t, v] : trace.samples) {
            if (std::abs(v) > cfg.northExtent) break;
            pts.push_back(px(t, v));
        }
        const std::string stroke = kPalette[color % 8];
        ++color;
        doc.polyline(pts, stroke, 1.5);
        if (trace.status == SectionStatus::BlownUp && !pts.empty()) {
            const Vec2 end = pts.back();
            doc.cross_glyph(end.x, end.y, 4.0, stroke);
        }
        if (!pts.empty()) doc.text(pts.front().x + 2, pts.front().y - 4, svg::fmt(x0), 9, stroke);
    }
    return doc.str();
}

std::string render_stepmap_figure(const Scene& scene, const StepmapFigureConfig& cfg) {
    const double margin = 30.0;
    const double northSpan = std::abs(cfg.slope) * cfg.eastExtent + 4.0;
    const double width = cfg.eastExtent * cfg.pxPerUnit + 2 * margin;
    const double height = 2 * northSpan * cfg.pxPerUnit / 2 + 2 * margin;
    svg::Document doc(width, height);

    const auto px = [&](double e, double n) -> Vec2 {
        return {margin + e * cfg.pxPerUnit,
                margin + (2.0 - n) * cfg.pxPerUnit};
    };

    const Window win{cfg.lineBase.x, cfg.lineBase.x + cfg.eastExtent,
                     cfg.lineBase.y - northSpan, cfg.lineBase.y + 2.0};
    for (const auto& hit : singularities_in_window(scene, win)) {
        const Vec2 q = px(hit.pos.x - cfg.lineBase.x, hit.pos.y - cfg.lineBase.y);
        if (q.y < 0 || q.y > height) continue;
        doc.circle(q.x, q.y, 2.0, "#222222");
    }

    const Vec2 l0 = px(0, 0);
    const Vec2 l1 = px(cfg.eastExtent, cfg.slope * cfg.eastExtent);
    doc.line(l0.x, l0.y, l1.x, l1.y, "#555555", 1.2);

    const RaySpec line{cfg.lineBase, 0.0, cfg.slope};
    const StepDecomposition sd = step_decomposition(scene, line, cfg.count);
    int color = 0;
    for (const auto& iv : sd.intervals) {
        const double baseN = cfg.slope * iv.crossTime;
        const Vec2 a = px(iv.crossTime, std::max(baseN - 1.6, -northSpan + 0.2));
        const Vec2 b = px(iv.crossTime, 1.8);
        const std::string stroke = kPalette[color % 8];
        ++color;
        doc.line(a.x, a.y, b.x, b.y, stroke, 1.6);
        // tick at the zero-section orbit the interval is cut along
        const Vec2 z = px(iv.crossTime, baseN + iv.cut);
        doc.circle(z.x, z.y, 2.4, stroke);
        doc.text(a.x + 2, b.y + 10, "wrap " + std::to_string(iv.wrap), 8, stroke);
    }
    return doc.str();
}

std::string render_tree_figure(const treeglue::TreeQuotient& q) {
    const double unit = 40.0;
    const double width = (1 << std::min(q.depth, 6)) * 14.0 + 80.0;
    const double height = q.depth * unit + 80.0;
    svg::Document doc(width, height);

    std::map<std::string, double> xpos;
    const std::size_t leafDepth = static_cast<std::size_t>(std::min(q.depth, 6));
    double cursor = 40.0;
    // in-order leaf layout, parents centered over children
    std::vector<std::string> stack{""};
    const std::function<double(const std::string&)> place = [&](const std::string& w) -> double {
        if (w.size() == leafDepth) {
            xpos[w] = cursor;
            cursor += 14.0;
            return xpos[w];
        }
        const double l = place(w + "L");
        const double r = place(w + "R");
        xpos[w] = (l + r) / 2.0;
        return xpos[w];
    };
    place("");

    for (const auto& [w, x] : xpos) {
        const double y = 40.0 + w.size() * unit;
        if (!w.empty()) {
            const std::string parent = w.substr(0, w.size() - 1);
            doc.line(xpos[parent], 40.0 + parent.size() * unit, x, y, "#999999", 0.8);
        }
        const int cls = q.class_of({w, 0, 1});
        doc.circle(x, y, 3.0, cls >= 0 ? kPalette[cls % 8] : "#cccccc");
    }
    doc.text(10, height - 10,
             q.gluing == treeglue::Gluing::A ? "gluing A" : "gluing B", 10, "#333333");
    return doc.str();
}

}  // namespace holonomy
