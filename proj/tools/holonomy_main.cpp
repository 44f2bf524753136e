// Command-line front end: scene checks, section traces, blowup times,
// monodromy and relation reports, ergodic constants, bound checks, the
// binary-tree gluing model, and SVG figures.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "holonomy/action.hpp"
#include "holonomy/blowup.hpp"
#include "holonomy/errors.hpp"
#include "holonomy/render.hpp"
#include "holonomy/rng.hpp"
#include "holonomy/sceneio.hpp"
#include "holonomy/treeglue.hpp"

using nlohmann::ordered_json;
using namespace holonomy;

namespace {

void write_output(const std::string& outPath, const std::string& content) {
    if (outPath.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(outPath, std::ios::binary);
    if (!out) throw Error(Err::ParseError, "cannot open output file " + outPath);
    out << content;
}

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

ordered_json fiber_json(const FiberPoint& p) {
    if (p.infinite) return "inf";
    return p.value;
}

std::vector<FiberPoint> sample_window(double window, int count, bool withInf) {
    std::vector<FiberPoint> samples;
    for (int i = 0; i < count; ++i)
        samples.push_back(FiberPoint::at(-window + 2.0 * window * i / (count - 1)));
    if (withInf) samples.push_back(FiberPoint::inf());
    return samples;
}

int cmd_check(const Scene& scene, const std::string& outPath) {
    ordered_json report;
    report["lambda"] = scene.eigen.lambda;
    report["alphaMax"] = scene.alphaMax;
    report["kappa"] = scene.kappa;
    report["reflected"] = scene.reflected;
    report["orbits"] = ordered_json::array();
    bool warned = false;
    for (std::size_t i = 0; i < scene.orbits.size(); ++i) {
        const auto& so = scene.orbits[i];
        const SlopeValidation v = validate_slope(scene, i);
        ordered_json o;
        o["index"] = i;
        o["period"] = so.orbit.period;
        o["prongs"] = so.orbit.prongs;
        o["omega"] = so.orbit.omega;
        o["slope"] = {so.slope.p, so.slope.q};
        o["alpha"] = so.slope.alpha;
        o["magnifying"] = so.magnifying;
        o["parityOk"] = v.parityOk;
        o["degeneracySlope"] = {v.degeneracyP, v.degeneracyQ};
        o["infinitySlope"] = v.infinitySlope;
        if (!v.parityOk) warned = true;
        report["orbits"].push_back(o);
    }
    report["status"] = warned ? "warnings" : "ok";
    write_output(outPath, report.dump(2) + "\n");
    return warned ? 2 : 0;
}

int cmd_trace(const Scene& scene, const std::vector<double>& xs, double horizon, double dt,
              Vec2 base, double eventTol, const std::string& outPath) {
    EngineConfig cfg;
    cfg.sampleDt = dt;
    cfg.eventTol = eventTol;
    std::string csv = "t,value,event_flag,orbit_index,factor\n";
    for (const double x : xs) {
        const SectionTrace trace = advance_section(scene, {base, 0.0, 0.0}, x, horizon, cfg);
        std::size_t ei = 0, si = 0;
        while (ei < trace.events.size() || si < trace.samples.size()) {
            const bool takeEvent =
                ei < trace.events.size() &&
                (si >= trace.samples.size() || trace.events[ei].time <= trace.samples[si].first);
            if (takeEvent) {
                const auto& e = trace.events[ei++];
                csv += csv_num(e.time) + "," + csv_num(e.after) + ",1," +
                       std::to_string(e.hit.orbitIndex) + "," + csv_num(e.factor) + "\n";
            } else {
                const auto& s = trace.samples[si++];
                csv += csv_num(s.first) + "," + csv_num(s.second) + ",0,-1,1\n";
            }
        }
        if (trace.status == SectionStatus::BlownUp)
            csv += csv_num(trace.tMax) + ",inf,2,-1,1\n";
    }
    write_output(outPath, csv);
    return 0;
}

int cmd_tmax(const Scene& scene, const std::vector<double>& xs, int rays, std::uint64_t seed,
             double eventTol, const std::string& outPath) {
    Rng rng(seed);
    EngineConfig cfg;
    cfg.eventTol = eventTol;
    std::string csv = "ray,base_e,base_n,x,t_max\n";
    bool monotone = true;
    for (int r = 0; r < rays; ++r) {
        const Vec2 base = random_ray_base(scene, rng);
        double prev = kInf;
        std::vector<double> sorted = xs;
        std::sort(sorted.begin(), sorted.end());
        for (const double x : sorted) {
            const double t = t_max_east(scene, {base, 0.0, 0.0}, FiberPoint::at(x), cfg);
            csv += std::to_string(r) + "," + csv_num(base.x) + "," + csv_num(base.y) + "," +
                   csv_num(x) + "," + csv_num(t) + "\n";
            if (x > 0 && !(t < prev)) monotone = false;
            if (x > 0) prev = t;
        }
    }
    write_output(outPath, csv);
    return monotone ? 0 : 1;
}

int cmd_monodromy(const Scene& scene, std::size_t orbit, double radius, double window,
                  int sampleCount, double monodromyTol, const std::string& outPath) {
    const auto samples = sample_window(window, sampleCount, true);
    const FillingReport fr = filling_monodromy(scene, orbit, radius, samples);
    ordered_json report;
    report["loop"] = "meridian-" + std::to_string(orbit);
    report["radius"] = radius;
    report["algebraicDilation"] = fr.algebraicDilation;
    report["maxDeviation"] = fr.homeo.maxDeviationFromIdentity;
    report["wraparound"] = fr.wraparound;
    report["infFixed"] = fr.homeo.infFixed;
    report["circularOrderPreserved"] = preserves_circular_order(fr.homeo);
    report["samples"] = ordered_json::array();
    for (std::size_t i = 0; i < fr.homeo.in.size(); ++i)
        report["samples"].push_back({fiber_json(fr.homeo.in[i]), fiber_json(fr.homeo.out[i])});
    write_output(outPath, report.dump(2) + "\n");
    return fr.homeo.maxDeviationFromIdentity < monodromyTol ? 0 : 1;
}

int cmd_relations(const Scene& scene, double radius, double monodromyTol,
                  const std::string& outPath) {
    const auto samples = sample_window(10.0, 21, true);
    ordered_json report = ordered_json::array();
    bool ok = true;
    for (const auto& word : builtin_relations(scene, radius)) {
        const RelationResidual rr = relation_residual(scene, word, samples);
        ordered_json o;
        o["name"] = rr.name;
        o["residual"] = rr.residual;
        o["infFixed"] = rr.infFixed;
        o["netWraps"] = rr.netWraps;
        report.push_back(o);
        if (!(rr.residual < monodromyTol) || rr.netWraps != 0) ok = false;
    }
    write_output(outPath, report.dump(2) + "\n");
    return ok ? 0 : 1;
}

int cmd_ergodic(const Scene& scene, std::size_t samples, double epsilon, std::uint64_t seed,
                const std::string& outPath) {
    const ErgodicConstants ec = estimate_constants(scene, samples, epsilon, seed);
    ordered_json report;
    report["kappa"] = ec.kappa;
    report["aStar"] = ec.aStar;
    report["aKappa"] = ec.aKappa;
    report["C"] = ec.C;
    report["c"] = ec.c;
    report["sampleCount"] = ec.sampleCount;

    Rng rng(seed + 1);
    report["convergence"] = ordered_json::array();
    for (const double area : {10.0, 100.0, 1000.0}) {
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const Vec2 u{rng.uniform(), rng.uniform()};
            const Vec2 base = scene.eigen.dev.apply(u);
            const double w = rng.uniform(1.0, scene.eigen.lambda) * std::sqrt(area);
            const auto [count, a] = ragged_count(scene, base, w, area / w);
            worst = std::max(worst, std::abs(static_cast<double>(count) / area - ec.kappa));
        }
        report["convergence"].push_back({{"area", area}, {"worstDeviation", worst}});
    }
    write_output(outPath, report.dump(2) + "\n");
    return 0;
}

int cmd_bounds(const Scene& scene, std::size_t samples, double epsilon,
               std::vector<double> sGrid, int rays, std::uint64_t seed,
               const std::string& outPath) {
    ErgodicConstants ec = estimate_constants(scene, samples, epsilon, seed);
    BoundsReport br = check_bounds(scene, ec, sGrid, rays, seed);
    int retries = 0;
    while (!br.violations.empty() && retries < 3) {
        // violations signal underestimated constants: re-estimate harder
        ++retries;
        samples *= 2;
        ec = estimate_constants(scene, samples, epsilon, seed + retries);
        ec.aStar *= 1.5;
        ec.aKappa *= 1.5;
        ec.C = 2.0 * ec.aStar / (1.0 - 2.0 / (1.0 + *scene.alphaMin));
        ec.c = std::max(ec.aKappa / std::pow(scene.alphaMax, 2.0 * ec.kappa * ec.aKappa), 1e-300);
        br = check_bounds(scene, ec, sGrid, rays, seed);
    }
    ordered_json report;
    report["C"] = br.constants.C;
    report["c"] = br.constants.c;
    report["checks"] = br.checks;
    report["retries"] = retries;
    report["violations"] = ordered_json::array();
    for (const auto& v : br.violations)
        report["violations"].push_back({{"S", v.S},
                                        {"x", v.x},
                                        {"tMax", v.tMax},
                                        {"bound", v.bound},
                                        {"side", v.fastSide ? "fast" : "slow"}});
    write_output(outPath, report.dump(2) + "\n");
    return br.violations.empty() ? 0 : 1;
}

int cmd_tree(const std::string& gluing, int depth, int resolution, const std::string& dotPath,
             const std::string& outPath) {
    const auto q = treeglue::build_quotient(
        gluing == "A" ? treeglue::Gluing::A : treeglue::Gluing::B, depth, resolution);
    ordered_json report;
    report["gluing"] = gluing;
    report["depth"] = depth;
    report["resolution"] = resolution;
    report["points"] = q.points.size();
    report["classes"] = q.members.size();
    report["antisymmetric"] = q.antisymmetric;
    report["totalOrder"] = q.totalOrder;
    if (!dotPath.empty()) write_output(dotPath, treeglue::to_dot(q));
    write_output(outPath, report.dump(2) + "\n");
    return q.antisymmetric ? 0 : 1;
}

int cmd_render(const Scene* scene, const std::string& figure, const std::string& gluing,
               int depth, int resolution, const std::string& outPath) {
    std::string svg;
    if (figure == "blowup") {
        if (!scene) throw Error(Err::ParseError, "render blowup needs --scene");
        svg = render_blowup_figure(*scene, {});
    } else if (figure == "stepmap") {
        if (!scene) throw Error(Err::ParseError, "render stepmap needs --scene");
        svg = render_stepmap_figure(*scene, {});
    } else if (figure == "tree") {
        const auto q = treeglue::build_quotient(
            gluing == "A" ? treeglue::Gluing::A : treeglue::Gluing::B, depth, resolution);
        svg = render_tree_figure(q);
    } else {
        throw Error(Err::ParseError, "unknown figure " + figure);
    }
    write_output(outPath, svg);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flat-connection holonomy toolkit for punctured torus bundles"};
    app.require_subcommand(1);
    app.fallthrough();  // --scene/--out/--seed may follow the subcommand

    std::string scenePath, outPath, dotPath;
    std::uint64_t seed = kDefaultSeed;
    double eventTol = kEventTol, monodromyTol = kMonodromyTol;
    app.add_option("--scene", scenePath, "scene JSON file");
    app.add_option("--out", outPath, "output file (stdout when omitted)");
    app.add_option("--seed", seed, "random seed (HOLONOMY_SEED overrides)");
    app.add_option("--event-tol", eventTol, "event comparison tolerance");
    app.add_option("--monodromy-tol", monodromyTol, "monodromy pass/fail tolerance");

    auto* check = app.add_subcommand("check", "validate a scene file");

    auto* trace = app.add_subcommand("trace", "eastward section trace as CSV");
    std::vector<double> traceXs{1.0};
    double horizon = 50.0, traceDt = 0.05, baseE = 0.13, baseN = 0.29;
    trace->add_option("--x", traceXs, "start values");
    trace->add_option("--horizon", horizon, "east horizon");
    trace->add_option("--dt", traceDt, "sample step");
    trace->add_option("--base-e", baseE, "ray base east");
    trace->add_option("--base-n", baseN, "ray base north");

    auto* tmax = app.add_subcommand("tmax", "blowup times over random rays");
    std::vector<double> tmaxXs{0.5, 1.0, 2.0};
    int rays = 20;
    tmax->add_option("--x", tmaxXs, "start values (sorted per ray)");
    tmax->add_option("--rays", rays, "number of random rays");

    auto* monodromy = app.add_subcommand("monodromy", "filling-curve monodromy report");
    std::size_t orbit = 0;
    double radius = 0.05, window = 10.0;
    int sampleCount = 21;
    monodromy->add_option("--orbit", orbit, "orbit index");
    monodromy->add_option("--radius", radius, "hug radius");
    monodromy->add_option("--window", window, "sample window half-width");
    monodromy->add_option("--samples", sampleCount, "finite sample count");

    auto* relations = app.add_subcommand("relations", "built-in relation residuals");
    double relRadius = 0.05;
    relations->add_option("--radius", relRadius, "meridian hug radius");

    auto* ergodic = app.add_subcommand("ergodic", "ergodic constants and convergence");
    std::size_t ergSamples = 10000;
    double epsilon = 0.1;
    ergodic->add_option("--samples", ergSamples, "sample count");
    ergodic->add_option("--epsilon", epsilon, "count tolerance");

    auto* bounds = app.add_subcommand("bounds", "fast/slow explosion bound checks");
    std::vector<double> sGrid{1.0, 10.0, 100.0};
    int boundRays = 20;
    std::size_t boundSamples = 10000;
    bounds->add_option("--s-grid", sGrid, "S values");
    bounds->add_option("--rays", boundRays, "rays per S");
    bounds->add_option("--samples", boundSamples, "estimator samples");
    double boundEps = 0.1;
    bounds->add_option("--epsilon", boundEps, "estimator tolerance");

    auto* tree = app.add_subcommand("tree", "binary-tree gluing quotient");
    std::string gluing = "A";
    int depth = 8, resolution = 3;
    tree->add_option("--gluing", gluing, "A or B")->check(CLI::IsMember({"A", "B"}));
    tree->add_option("--depth", depth, "truncation depth");
    tree->add_option("--resolution", resolution, "tail bits");
    tree->add_option("--dot", dotPath, "DOT dump path");

    auto* render = app.add_subcommand("render", "SVG figures");
    std::string figure = "blowup";
    render->add_option("--figure", figure, "blowup | stepmap | tree")
        ->check(CLI::IsMember({"blowup", "stepmap", "tree"}));
    render->add_option("--gluing", gluing, "A or B (tree figure)");
    render->add_option("--depth", depth, "truncation depth (tree figure)");
    render->add_option("--resolution", resolution, "tail bits (tree figure)");

    CLI11_PARSE(app, argc, argv);
    if (const char* env = std::getenv("HOLONOMY_SEED")) seed = std::strtoull(env, nullptr, 10);

    try {
        std::optional<Scene> scene;
        if (!scenePath.empty()) scene = load_scene(scenePath);
        const auto need_scene = [&]() -> const Scene& {
            if (!scene) throw Error(Err::ParseError, "--scene is required for this command");
            return *scene;
        };

        if (check->parsed()) return cmd_check(need_scene(), outPath);
        if (trace->parsed())
            return cmd_trace(need_scene(), traceXs, horizon, traceDt, {baseE, baseN}, eventTol,
                             outPath);
        if (tmax->parsed()) return cmd_tmax(need_scene(), tmaxXs, rays, seed, eventTol, outPath);
        if (monodromy->parsed())
            return cmd_monodromy(need_scene(), orbit, radius, window, sampleCount, monodromyTol,
                                 outPath);
        if (relations->parsed())
            return cmd_relations(need_scene(), relRadius, monodromyTol, outPath);
        if (ergodic->parsed())
            return cmd_ergodic(need_scene(), ergSamples, epsilon, seed, outPath);
        if (bounds->parsed())
            return cmd_bounds(need_scene(), boundSamples, boundEps, sGrid, boundRays, seed,
                              outPath);
        if (tree->parsed()) return cmd_tree(gluing, depth, resolution, dotPath, outPath);
        if (render->parsed())
            return cmd_render(scene ? &*scene : nullptr, figure, gluing, depth, resolution,
                              outPath);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
