#include "gdifs/app/commands.hpp"

#include <filesystem>
#include <ostream>

namespace gdifs::app {

namespace {

Json point_json(const Point& p, Base base) {
    if (base == Base::Euclid1D) return p.x;
    return Json::array({p.x, p.y});
}

std::string path_in(const RunConfig& cfg, const std::string& suffix) {
    return (std::filesystem::path(cfg.output.dir) / (cfg.output.stem + suffix)).string();
}

void ensure_dir(const RunConfig& cfg) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.output.dir, ec);
    if (ec) throw Error("cannot create output directory " + cfg.output.dir + ": " + ec.message());
}

const char* kind_name(ValidationIssue::Kind k) {
    switch (k) {
        case ValidationIssue::Kind::VertexWithoutOutgoingEdge: return "vertex_without_outgoing_edge";
        case ValidationIssue::Kind::NotSelfMap: return "not_self_map";
        case ValidationIssue::Kind::ContractionViolation: return "contraction_violation";
        case ValidationIssue::Kind::Malformed: return "malformed";
    }
    return "?";
}

const char* kind_name(CompatibilityViolation::Kind k) {
    switch (k) {
        case CompatibilityViolation::Kind::Anchor: return "anchor";
        case CompatibilityViolation::Kind::Monotonicity: return "monotonicity";
        case CompatibilityViolation::Kind::Contraction: return "contraction";
        case CompatibilityViolation::Kind::Evaluation: return "evaluation";
    }
    return "?";
}

Json metric_json(const SemiMetricSpec& spec) {
    Json m;
    m["base"] = spec.base == Base::Euclid1D ? "euclid1d" : "euclid2d";
    m["transformer"] = spec.transformer ? Json(spec.transformer->describe()) : Json(nullptr);
    return m;
}

Json certificate_json(const ContractionCertificate& c, Base base) {
    Json j;
    j["pass"] = c.pass;
    j["pairs"] = c.n_pairs;
    j["seed"] = c.seed;
    j["worst_ratio"] = c.worst_ratio;
    j["worst_excess"] = c.worst_excess;
    j["witness"] = Json::array({point_json(c.witness_x, base), point_json(c.witness_y, base)});
    if (!c.message.empty()) j["message"] = c.message;
    return j;
}

Json edges_json(const RunConfig& cfg, const ValidationReport& v, const std::vector<bool>& inferred) {
    const GraphIFS& g = cfg.system;
    Json edges = Json::array();
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
        const Edge& e = g.edges[k];
        Json j;
        j["from"] = e.from + 1;
        j["to"] = e.to + 1;
        j["map"] = e.map.describe();
        j["comparison"] = e.comparison.describe();
        if (k < inferred.size() && inferred[k]) j["inferred"] = true;
        if (k < v.certificates.size() && v.certificates[k].n_pairs > 0)
            j["certificate"] = certificate_json(v.certificates[k], g.spec.base);
        else j["certificate"] = nullptr;
        edges.push_back(std::move(j));
    }
    return edges;
}

Json issues_json(const ValidationReport& v) {
    Json out = Json::array();
    for (const auto& i : v.issues) {
        Json j;
        j["kind"] = kind_name(i.kind);
        j["vertex"] = i.vertex >= 0 ? Json(i.vertex + 1) : Json(nullptr);
        j["edge"] = i.edge >= 0 ? Json(i.edge + 1) : Json(nullptr);
        j["message"] = i.message;
        out.push_back(std::move(j));
    }
    return out;
}

ValidationOptions validation_options(const RunConfig& cfg) {
    return ValidationOptions{cfg.certify.self_map_samples, cfg.certify.pairs, cfg.certify.seed};
}

PointSet unit_grid(std::size_t n) {
    PointSet g;
    for (std::size_t k = 0; k < n; ++k) g.push_back(Point{k + 1 == n ? 1.0 : double(k) / double(n - 1), 0.0});
    return g;
}

double grid_x(std::size_t k, std::size_t n) { return k + 1 == n ? 1.0 : double(k) / double(n - 1); }

RunConfig prepare(const std::string& path, const Overrides& o, std::ostream& err) {
    std::string note;
    RunConfig cfg = load_config(path, &note);
    if (!note.empty()) err << "gdifs: " << note << "\n";
    apply_overrides(cfg, o);
    return cfg;
}

// Shared exception-to-exit-code mapping.
template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "gdifs: config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ValidationFailed& e) {
        err << "gdifs: " << e.what() << "\n";
        for (const auto& d : e.details()) err << "  " << d << "\n";
        return kExitValidation;
    } catch (const ConvergenceError& e) {
        err << "gdifs: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const PointCapExceeded& e) {
        err << "gdifs: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const DepthOverflow& e) {
        err << "gdifs: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const Error& e) {
        err << "gdifs: " << e.what() << "\n";
        return kExitConfig;
    }
}

}  // namespace

void apply_overrides(RunConfig& cfg, const Overrides& o) {
    if (o.depth) {
        cfg.iteration.max_depth = *o.depth;
        cfg.derham_opts.cross_depth = *o.depth;
    }
    if (o.tol) {
        if (*o.tol < 0) throw ConfigError("--tol must be >= 0");
        cfg.iteration.residual_tol = *o.tol;
        if (cfg.kind == RunConfig::Kind::DeRham) {
            if (!(*o.tol > 0)) throw ConfigError("--tol must be > 0 for de Rham evaluation");
            cfg.derham_opts.tol = *o.tol;
        }
    }
    if (o.dedup) {
        if (*o.dedup < 0) throw ConfigError("--dedup must be >= 0");
        cfg.iteration.dedup = *o.dedup;
        cfg.derham_opts.cross_dedup = *o.dedup;
    }
    if (o.out) cfg.output.dir = *o.out;
    if (o.formats) {
        for (const auto& f : *o.formats)
            if (f != "csv" && f != "json" && f != "svg") throw ConfigError("unknown output format '" + f + "'");
        cfg.output.formats = *o.formats;
    }
    if (o.seed) cfg.certify.seed = *o.seed;
    if (o.workers) cfg.iteration.workers = std::max(1u, *o.workers);
}

AttractorRun run_attractor(const RunConfig& cfg) {
    const GraphIFS& g = cfg.system;
    AttractorRun run;
    run.validation = validate(g, validation_options(cfg));
    std::vector<std::string> failures;
    for (const auto& i : run.validation.issues) {
        if (i.kind == ValidationIssue::Kind::ContractionViolation && !cfg.certify.gate)
            run.warnings.push_back(i.message);
        else failures.push_back(i.message);
    }
    if (!failures.empty()) throw ValidationFailed("validation failed", failures);

    run.seed = seed_fixed_point(g, cfg.iteration.seed_tol, cfg.iteration.seed_max_iter);
    IterationOptions opts;
    opts.dedup_delta = cfg.iteration.dedup;
    opts.point_cap = cfg.iteration.point_cap;
    opts.workers = cfg.iteration.workers;
    run.result = iterate_attractor(g, run.seed.h0, StopRule{cfg.iteration.max_depth, cfg.iteration.residual_tol}, opts);

    const auto& r = run.result;
    Json rep;
    rep["name"] = cfg.name;
    rep["metric"] = metric_json(g.spec);
    rep["q"] = g.q;
    rep["edges"] = edges_json(cfg, run.validation, cfg.auto_comparison);

    Json seed;
    seed["J"] = Json::array();
    seed["edges"] = Json::array();
    seed["z"] = Json::array();
    for (std::size_t i = 0; i < std::size_t(g.q); ++i) {
        seed["J"].push_back(run.seed.seed_map[i] + 1);
        seed["edges"].push_back(run.seed.edge_of[i] + 1);
        seed["z"].push_back(point_json(run.seed.z[i], g.spec.base));
    }
    seed["iterations"] = run.seed.iterations;
    rep["seed"] = std::move(seed);

    rep["iteration"] = {{"max_depth", cfg.iteration.max_depth},
                        {"residual_tol", cfg.iteration.residual_tol},
                        {"dedup", cfg.iteration.dedup},
                        {"point_cap", cfg.iteration.point_cap}};
    rep["depth"] = r.depth;
    rep["residual"] = r.residual;
    rep["converged"] = r.residual <= cfg.iteration.residual_tol;
    rep["stop"] = r.residual <= cfg.iteration.residual_tol ? "residual_tol" : "max_depth";
    rep["history"] = r.history;
    Json counts = Json::array();
    for (const auto& c : r.cloud) counts.push_back(c.size());
    rep["point_counts"] = std::move(counts);
    rep["total_points"] = total_points(r.cloud);

    const auto c = g.max_comparison().linear_ratio();
    if (c && !g.spec.transformer) rep["distance_bound"] = r.residual / (1.0 - *c);

    if (cfg.output.grid_distance > 0 && g.spec.base == Base::Euclid1D) {
        const PointSet grid = unit_grid(cfg.output.grid_distance);
        Json per = Json::array();
        for (const auto& comp : r.cloud) per.push_back(hp_distance(comp, grid, g.spec).value);
        rep["grid_distance"] = {{"grid", cfg.output.grid_distance}, {"per_vertex", std::move(per)}};
    }
    rep["warnings"] = run.warnings;
    run.report = std::move(rep);
    return run;
}

PointSet sampled_graph(const DeRhamSystem& sys, int i, std::size_t n, double tol) {
    PointSet out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double x = grid_x(k, n);
        out.push_back(Point{x, eval_phi(sys, i, x, tol).value});
    }
    return out;
}

DeRhamRun run_derham(const RunConfig& cfg, bool cross_check) {
    const DeRhamSystem& sys = *cfg.derham;
    const auto& o = cfg.derham_opts;
    DeRhamRun run;

    const auto violations = verify(sys, cfg.certify.pairs, cfg.certify.seed);
    std::vector<std::string> failures;
    Json vj = Json::array();
    for (const auto& v : violations) {
        vj.push_back({{"kind", kind_name(v.kind)}, {"condition", v.condition}, {"message", v.message}});
        if (v.kind == CompatibilityViolation::Kind::Contraction && !cfg.certify.gate) run.warnings.push_back(v.message);
        else failures.push_back(v.message);
    }
    if (!failures.empty()) throw ValidationFailed("de Rham system is not compatible", failures);

    for (int i = 0; i < 2; ++i)
        for (std::size_t k = 0; k < o.grid; ++k) {
            const double x = grid_x(k, o.grid);
            const auto v = eval_phi(sys, i, x, o.tol);
            run.samples.push_back(PhiSample{i + 1, x, v.value, v.error_bound});
        }
    run.functional_equation = verify_functional_equation(sys, o.grid, o.tol);

    Json rep;
    rep["name"] = cfg.name;
    rep["comparison"] = sys.phi.describe();
    Json fam;
    for (const auto* f : {&sys.f, &sys.g}) {
        Json maps;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const std::string key = "h" + std::to_string(i + 1) + std::to_string(j + 1);
                maps[key] = {{"map", f->h[std::size_t(i)][std::size_t(j)].source()},
                             {"comparison", f->phi[std::size_t(i)][std::size_t(j)].describe()}};
            }
        fam[f == &sys.f ? "f" : "g"] = std::move(maps);
    }
    rep["families"] = std::move(fam);
    rep["grid"] = o.grid;
    rep["tol"] = o.tol;

    Json probes = Json::array();
    for (int i = 0; i < 2; ++i)
        for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const auto v = eval_phi(sys, i, x, o.tol);
            probes.push_back({{"i", i + 1}, {"x", x}, {"phi", v.value}, {"err_bound", v.error_bound}, {"depth", v.depth}});
        }
    rep["probes"] = std::move(probes);

    const auto& fe = run.functional_equation;
    rep["functional_equation"] = {{"max_residual", fe.max_residual},
                                  {"worst", {{"i", fe.worst_i + 1}, {"j", fe.worst_j + 1}, {"x", fe.worst_x}}},
                                  {"residual_bound", fe.residual_bound},
                                  {"within_bound", fe.max_residual <= fe.residual_bound},
                                  {"evaluations", fe.evaluations}};

    constexpr std::size_t kDiamDepth = 12;
    rep["interval_diameter"] = {{"n", kDiamDepth},
                                {"f", {interval_diameter(sys.f, 0, kDiamDepth), interval_diameter(sys.f, 1, kDiamDepth)}},
                                {"g", {interval_diameter(sys.g, 0, kDiamDepth), interval_diameter(sys.g, 1, kDiamDepth)}}};

    if (cross_check) {
        CrossCheck cc;
        cc.depth = o.cross_depth;
        const auto att = graph_attractor(sys, o.cross_depth, o.cross_dedup);
        const SemiMetricSpec plane{Base::Euclid2DMax, std::nullopt};
        for (int i = 0; i < 2; ++i) {
            const auto graph = sampled_graph(sys, i, o.cross_grid, o.tol);
            cc.hp[std::size_t(i)] = hp_distance(att.cloud[std::size_t(i)], graph, plane).value;
            cc.points[std::size_t(i)] = att.cloud[std::size_t(i)].size();
        }
        rep["cross_check"] = {{"depth", cc.depth},
                              {"dedup", o.cross_dedup},
                              {"grid", o.cross_grid},
                              {"points", cc.points},
                              {"hp_distance", cc.hp}};
        run.cross = cc;
    }
    rep["warnings"] = run.warnings;
    run.report = std::move(rep);
    return run;
}

int cmd_attractor(const std::string& config, const Overrides& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        RunConfig cfg = prepare(config, o, err);
        if (cfg.kind != RunConfig::Kind::Graph)
            throw ConfigError(config + ": a [derham] config; use 'gdifs derham'");
        resolve_auto_comparisons(cfg);
        const AttractorRun run = run_attractor(cfg);
        for (const auto& w : run.warnings) err << "gdifs: warning: " << w << "\n";

        ensure_dir(cfg);
        const Base base = cfg.system.spec.base;
        if (cfg.output.wants("csv")) write_file(path_in(cfg, "_points.csv"), points_csv(run.result.cloud, base));
        if (cfg.output.wants("json")) write_file(path_in(cfg, "_report.json"), run.report.dump(2) + "\n");
        if (cfg.output.wants("svg"))
            write_file(path_in(cfg, ".svg"),
                       base == Base::Euclid1D ? svg_intervals(run.result.cloud) : svg_scatter(run.result.cloud));

        char line[200];
        std::snprintf(line, sizeof line, "%s: depth %zu, residual %.6g, %zu points\n", cfg.name.c_str(),
                      run.result.depth, run.result.residual, total_points(run.result.cloud));
        out << line;
        return int(kExitOk);
    });
}

int cmd_derham(const std::string& config, const Overrides& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        RunConfig cfg = prepare(config, o, err);
        if (cfg.kind != RunConfig::Kind::DeRham)
            throw ConfigError(config + ": not a [derham] config; use 'gdifs attractor'");
        const DeRhamRun run = run_derham(cfg, o.cross_check);
        for (const auto& w : run.warnings) err << "gdifs: warning: " << w << "\n";

        ensure_dir(cfg);
        if (cfg.output.wants("csv")) write_file(path_in(cfg, "_phi.csv"), phi_csv(run.samples));
        if (cfg.output.wants("json")) write_file(path_in(cfg, "_report.json"), run.report.dump(2) + "\n");
        if (cfg.output.wants("svg")) {
            for (int i = 1; i <= 2; ++i) {
                std::vector<PhiSample> rows;
                for (const auto& s : run.samples)
                    if (s.vertex == i) rows.push_back(s);
                write_file(path_in(cfg, "_phi" + std::to_string(i) + ".svg"),
                           svg_graph(rows, cfg.name + ": phi_" + std::to_string(i)));
            }
        }
        char line[200];
        std::snprintf(line, sizeof line, "%s: functional-equation residual %.3g on %zu points (tol %.3g)\n",
                      cfg.name.c_str(), run.functional_equation.max_residual, cfg.derham_opts.grid,
                      cfg.derham_opts.tol);
        out << line;
        if (run.cross) {
            std::snprintf(line, sizeof line, "cross-check at depth %zu: d_HP = %.6g, %.6g\n", run.cross->depth,
                          run.cross->hp[0], run.cross->hp[1]);
            out << line;
        }
        return int(kExitOk);
    });
}

int cmd_check(const std::string& config, const Overrides& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        RunConfig cfg = prepare(config, o, err);
        Json rep;
        rep["name"] = cfg.name;
        std::vector<std::string> failures;

        if (cfg.kind == RunConfig::Kind::DeRham) {
            const auto violations = verify(*cfg.derham, cfg.certify.pairs, cfg.certify.seed);
            Json vj = Json::array();
            for (const auto& v : violations) {
                vj.push_back({{"kind", kind_name(v.kind)}, {"condition", v.condition}, {"message", v.message}});
                failures.push_back(v.message);
            }
            rep["ok"] = violations.empty();
            rep["violations"] = std::move(vj);
        } else {
            const auto inferred = cfg.auto_comparison;
            resolve_auto_comparisons(cfg);
            const auto v = validate(cfg.system, validation_options(cfg));
            rep["ok"] = v.ok();
            rep["metric"] = metric_json(cfg.system.spec);
            rep["edges"] = edges_json(cfg, v, inferred);
            rep["issues"] = issues_json(v);
            for (const auto& i : v.issues) failures.push_back(i.message);
        }
        out << rep.dump(2) << "\n";
        if (!failures.empty()) throw ValidationFailed("check failed", failures);
        return int(kExitOk);
    });
}

int cmd_demo(const std::string& name, const std::optional<std::string>& out_dir, std::ostream& out,
             std::ostream& err) {
    return guarded(err, [&] {
        if (name.empty()) {
            for (const auto& b : bundled_configs()) out << b.name << "\n";
            return int(kExitOk);
        }
        const auto* b = find_bundled(name);
        if (!b) throw ConfigError("no bundled config named '" + name + "'");
        if (!out_dir) {
            out << b->text;
            return int(kExitOk);
        }
        std::filesystem::create_directories(*out_dir);
        const auto path = (std::filesystem::path(*out_dir) / (name + ".toml")).string();
        write_file(path, b->text);
        out << path << "\n";
        return int(kExitOk);
    });
}

}  // namespace gdifs::app
