#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "gdifs/app/config.hpp"

namespace gdifs::app {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) { throw ConfigError(where + ": " + what); }

void allow_keys(const Json& t, const std::string& where, std::initializer_list<std::string_view> keys) {
    if (!t.is_object()) bad(where, "expected a table");
    for (const auto& [k, v] : t.items())
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) bad(where, "unknown key '" + k + "'");
}

std::string sub(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

double get_real(const Json& j, const std::string& where) {
    if (!j.is_number()) bad(where, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) bad(where, "expected a finite number");
    return v;
}

double get_positive(const Json& j, const std::string& where) {
    const double v = get_real(j, where);
    if (!(v > 0.0)) bad(where, "must be > 0");
    return v;
}

double get_nonneg(const Json& j, const std::string& where) {
    const double v = get_real(j, where);
    if (v < 0.0) bad(where, "must be >= 0");
    return v;
}

std::int64_t get_int(const Json& j, const std::string& where) {
    if (!j.is_number_integer()) bad(where, "expected an integer");
    return j.get<std::int64_t>();
}

std::size_t get_count(const Json& j, const std::string& where, std::int64_t min = 0) {
    const auto v = get_int(j, where);
    if (v < min) bad(where, "must be >= " + std::to_string(min));
    return std::size_t(v);
}

std::string get_string(const Json& j, const std::string& where) {
    if (!j.is_string()) bad(where, "expected a string");
    return j.get<std::string>();
}

Expr get_expr(const Json& j, const std::string& where) {
    const std::string src = get_string(j, where);
    try {
        return Expr::parse(src);
    } catch (const ParseError& e) {
        std::string msg = "cannot parse '" + src + "' at position " + std::to_string(e.offset() + 1) + ": " + e.what();
        bad(where, msg);
    }
}

SemiMetricSpec parse_metric(const Json& m) {
    SemiMetricSpec spec;
    allow_keys(m, "metric", {"base", "transformer"});
    if (m.contains("base")) {
        const auto b = get_string(m["base"], "metric.base");
        if (b == "euclid1d") spec.base = Base::Euclid1D;
        else if (b == "euclid2d") spec.base = Base::Euclid2DMax;
        else bad("metric.base", "unknown base '" + b + "' (expected euclid1d or euclid2d)");
    }
    if (m.contains("transformer")) {
        const Json& t = m["transformer"];
        allow_keys(t, "metric.transformer", {"kind", "alpha"});
        if (!t.contains("kind")) bad("metric.transformer", "missing 'kind'");
        const auto kind = get_string(t["kind"], "metric.transformer.kind");
        auto alpha = [&] {
            if (!t.contains("alpha")) bad("metric.transformer", "missing 'alpha'");
            return get_positive(t["alpha"], "metric.transformer.alpha");
        };
        try {
            if (kind == "power") spec.transformer = Transformer::power(alpha());
            else if (kind == "bounded_power") spec.transformer = Transformer::bounded_power(alpha());
            else if (kind == "ratio") spec.transformer = Transformer::ratio(alpha());
            else if (kind == "cantor") spec.transformer = Transformer::cantor();
            else bad("metric.transformer.kind", "unknown transformer '" + kind + "'");
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            bad("metric.transformer", e.what());
        }
    }
    return spec;
}

Point get_point(const Json& j, Base base, const std::string& where) {
    if (base == Base::Euclid1D) return Point{get_real(j, where), 0.0};
    if (!j.is_array() || j.size() != 2) bad(where, "expected [x, y]");
    return Point{get_real(j[0], where + "[0]"), get_real(j[1], where + "[1]")};
}

void parse_graph(const Json& doc, RunConfig& cfg) {
    GraphIFS& g = cfg.system;
    g.spec = doc.contains("metric") ? parse_metric(doc["metric"]) : SemiMetricSpec{};

    if (!doc.contains("system")) bad("config", "missing [system] table");
    const Json& s = doc["system"];
    allow_keys(s, "system", {"q", "seed_map", "seed_start"});
    if (!s.contains("q")) bad("system", "missing 'q'");
    g.q = int(get_count(s["q"], "system.q", 1));

    if (s.contains("seed_map")) {
        const Json& j = s["seed_map"];
        if (!j.is_array() || j.size() != std::size_t(g.q)) bad("system.seed_map", "expected q vertex numbers");
        std::vector<int> map;
        for (std::size_t k = 0; k < j.size(); ++k) {
            const auto v = get_int(j[k], "system.seed_map");
            if (v < 1 || v > g.q) bad("system.seed_map", "vertex " + std::to_string(v) + " outside 1..q");
            map.push_back(int(v - 1));
        }
        g.seed_map = std::move(map);
    }
    if (s.contains("seed_start")) {
        const Json& j = s["seed_start"];
        if (!j.is_array() || j.size() != std::size_t(g.q)) bad("system.seed_start", "expected q points");
        std::vector<Point> start;
        for (std::size_t k = 0; k < j.size(); ++k) {
            const Point p = get_point(j[k], g.spec.base, "system.seed_start");
            if (!in_domain(p, g.spec.base)) bad("system.seed_start", "point outside the domain");
            start.push_back(p);
        }
        g.seed_start = std::move(start);
    }

    if (!doc.contains("edges") || !doc["edges"].is_array() || doc["edges"].empty())
        bad("config", "missing [[edges]] entries");
    const bool two_d = g.spec.base == Base::Euclid2DMax;
    std::size_t k = 0;
    for (const Json& e : doc["edges"]) {
        const std::string where = "edges[" + std::to_string(++k) + "]";
        allow_keys(e, where, {"from", "to", "map", "map_y", "comparison"});
        for (const char* req : {"from", "to", "map"})
            if (!e.contains(req)) bad(where, std::string("missing '") + req + "'");
        const auto from = get_int(e["from"], where + ".from"), to = get_int(e["to"], where + ".to");
        if (from < 1 || from > g.q) bad(where + ".from", "vertex outside 1..q");
        if (to < 1 || to > g.q) bad(where + ".to", "vertex outside 1..q");

        EdgeMap map{get_expr(e["map"], where + ".map"), std::nullopt};
        if (e.contains("map_y")) {
            if (!two_d) bad(where + ".map_y", "only allowed with metric.base = \"euclid2d\"");
            map.fy = get_expr(e["map_y"], where + ".map_y");
        } else if (two_d) {
            bad(where, "missing 'map_y' (2D base)");
        }

        bool is_auto = false;
        ComparisonFn phi = ComparisonFn::ratio();
        if (!e.contains("comparison")) bad(where, "missing 'comparison'");
        if (e["comparison"].is_string() && e["comparison"].get<std::string>() == "auto") is_auto = true;
        else phi = parse_comparison(e["comparison"], where + ".comparison");

        g.edges.push_back(Edge{int(from - 1), int(to - 1), std::move(map), std::move(phi)});
        cfg.auto_comparison.push_back(is_auto);
    }
}

CompatibleFamily parse_family(const Json& d, const char* name, const std::optional<ComparisonFn>& common) {
    const std::string where = std::string("derham.") + name;
    if (!d.contains(name)) bad("derham", std::string("missing '") + name + "'");
    const Json& t = d[name];
    allow_keys(t, where, {"h11", "h12", "h21", "h22"});

    const std::string ckey = std::string(name) + "_comparison";
    const Json* over = d.contains(ckey) ? &d[ckey] : nullptr;
    if (over) allow_keys(*over, "derham." + ckey, {"h11", "h12", "h21", "h22"});

    std::array<std::array<std::optional<Expr>, 2>, 2> h;
    std::array<std::array<std::optional<ComparisonFn>, 2>, 2> phi;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const std::string key = "h" + std::to_string(i + 1) + std::to_string(j + 1);
            if (!t.contains(key)) bad(where, "missing '" + key + "'");
            h[i][j] = get_expr(t[key], sub(where, key));
            if (over && over->contains(key)) phi[i][j] = parse_comparison((*over)[key], "derham." + ckey + "." + key);
            else if (common) phi[i][j] = *common;
            else bad("derham", "no comparison for " + std::string(name) + "." + key +
                                   " (set 'comparison' or '" + ckey + "')");
        }
    return CompatibleFamily{{{{*h[0][0], *h[0][1]}, {*h[1][0], *h[1][1]}}},
                            {{{*phi[0][0], *phi[0][1]}, {*phi[1][0], *phi[1][1]}}}};
}

void parse_derham(const Json& doc, RunConfig& cfg) {
    const Json& d = doc["derham"];
    allow_keys(d, "derham", {"f", "g", "comparison", "f_comparison", "g_comparison", "grid", "tol", "cross_depth",
                             "cross_dedup", "cross_grid"});
    std::optional<ComparisonFn> common;
    if (d.contains("comparison")) common = parse_comparison(d["comparison"], "derham.comparison");
    auto f = parse_family(d, "f", common);
    auto g = parse_family(d, "g", common);
    cfg.derham = DeRhamSystem::make(std::move(f), std::move(g));

    auto& o = cfg.derham_opts;
    if (d.contains("grid")) o.grid = get_count(d["grid"], "derham.grid", 2);
    if (d.contains("tol")) o.tol = get_positive(d["tol"], "derham.tol");
    if (d.contains("cross_depth")) o.cross_depth = get_count(d["cross_depth"], "derham.cross_depth");
    if (d.contains("cross_dedup")) o.cross_dedup = get_nonneg(d["cross_dedup"], "derham.cross_dedup");
    if (d.contains("cross_grid")) o.cross_grid = get_count(d["cross_grid"], "derham.cross_grid", 2);
}

void parse_common(const Json& doc, RunConfig& cfg) {
    if (doc.contains("iteration")) {
        const Json& t = doc["iteration"];
        allow_keys(t, "iteration",
                   {"max_depth", "residual_tol", "dedup", "point_cap", "seed_tol", "seed_max_iter", "workers"});
        auto& it = cfg.iteration;
        if (t.contains("max_depth")) it.max_depth = get_count(t["max_depth"], "iteration.max_depth");
        if (t.contains("residual_tol")) it.residual_tol = get_nonneg(t["residual_tol"], "iteration.residual_tol");
        if (t.contains("dedup")) it.dedup = get_nonneg(t["dedup"], "iteration.dedup");
        if (t.contains("point_cap")) it.point_cap = get_count(t["point_cap"], "iteration.point_cap", 1);
        if (t.contains("seed_tol")) it.seed_tol = get_positive(t["seed_tol"], "iteration.seed_tol");
        if (t.contains("seed_max_iter")) it.seed_max_iter = get_count(t["seed_max_iter"], "iteration.seed_max_iter", 1);
        if (t.contains("workers")) it.workers = unsigned(get_count(t["workers"], "iteration.workers", 1));
    }
    if (doc.contains("certify")) {
        const Json& t = doc["certify"];
        allow_keys(t, "certify", {"pairs", "seed", "mode", "self_map_samples"});
        auto& c = cfg.certify;
        if (t.contains("pairs")) c.pairs = get_count(t["pairs"], "certify.pairs", 1);
        if (t.contains("seed")) c.seed = std::uint64_t(get_count(t["seed"], "certify.seed"));
        if (t.contains("self_map_samples"))
            c.self_map_samples = get_count(t["self_map_samples"], "certify.self_map_samples", 2);
        if (t.contains("mode")) {
            const auto m = get_string(t["mode"], "certify.mode");
            if (m == "gate") c.gate = true;
            else if (m == "warn") c.gate = false;
            else bad("certify.mode", "expected \"gate\" or \"warn\"");
        }
    }
    if (doc.contains("output")) {
        const Json& t = doc["output"];
        allow_keys(t, "output", {"dir", "formats", "stem", "grid_distance"});
        auto& o = cfg.output;
        if (t.contains("dir")) o.dir = get_string(t["dir"], "output.dir");
        if (t.contains("stem")) o.stem = get_string(t["stem"], "output.stem");
        if (t.contains("grid_distance")) o.grid_distance = get_count(t["grid_distance"], "output.grid_distance", 2);
        if (t.contains("formats")) {
            if (!t["formats"].is_array()) bad("output.formats", "expected an array of strings");
            o.formats.clear();
            for (const Json& f : t["formats"]) {
                const auto s = get_string(f, "output.formats");
                if (s != "csv" && s != "json" && s != "svg") bad("output.formats", "unknown format '" + s + "'");
                o.formats.push_back(s);
            }
        }
    }
}

}  // namespace

bool OutputConfig::wants(std::string_view fmt) const {
    return std::find(formats.begin(), formats.end(), fmt) != formats.end();
}

ComparisonFn parse_comparison(const Json& j, const std::string& where) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "ratio") return ComparisonFn::ratio();
        if (s == "auto") bad(where, "\"auto\" is only allowed on edges");
        bad(where, "unknown comparison '" + s + "'");
    }
    if (!j.is_object() || !j.contains("kind")) bad(where, "expected a table with 'kind'");
    const auto kind = get_string(j["kind"], where + ".kind");
    try {
        if (kind == "linear") {
            allow_keys(j, where, {"kind", "c"});
            if (!j.contains("c")) bad(where, "missing 'c'");
            return ComparisonFn::linear(get_real(j["c"], where + ".c"));
        }
        if (kind == "ratio") {
            allow_keys(j, where, {"kind"});
            return ComparisonFn::ratio();
        }
        if (kind == "power_linear") {
            allow_keys(j, where, {"kind", "c", "alpha"});
            if (!j.contains("c") || !j.contains("alpha")) bad(where, "needs 'c' and 'alpha'");
            return ComparisonFn::power_linear(get_real(j["c"], where + ".c"), get_real(j["alpha"], where + ".alpha"));
        }
        if (kind == "max") {
            allow_keys(j, where, {"kind", "of"});
            if (!j.contains("of") || !j["of"].is_array() || j["of"].empty()) bad(where, "'of' must be a non-empty array");
            std::vector<ComparisonFn> parts;
            for (std::size_t k = 0; k < j["of"].size(); ++k)
                parts.push_back(parse_comparison(j["of"][k], where + ".of[" + std::to_string(k + 1) + "]"));
            return ComparisonFn::max_of(std::move(parts));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        bad(where, e.what());
    }
    bad(where + ".kind", "unknown comparison kind '" + kind + "'");
}

RunConfig load_config_text(std::string_view text, const std::string& origin) {
    Json doc;
    try {
        doc = parse_toml(text);
    } catch (const ConfigError& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    try {
        allow_keys(doc, "config",
                   {"name", "metric", "system", "edges", "derham", "iteration", "certify", "output"});
        RunConfig cfg;
        cfg.name = doc.contains("name") ? get_string(doc["name"], "name") : "run";
        if (doc.contains("derham")) {
            if (doc.contains("system") || doc.contains("edges") || doc.contains("metric"))
                bad("config", "[derham] cannot be combined with [system], [[edges]] or [metric]");
            cfg.kind = RunConfig::Kind::DeRham;
            parse_derham(doc, cfg);
        } else {
            parse_graph(doc, cfg);
        }
        parse_common(doc, cfg);
        if (cfg.output.stem.empty()) cfg.output.stem = cfg.name;
        return cfg;
    } catch (const ConfigError& e) {
        throw ConfigError(origin + ": " + e.what());
    }
}

RunConfig load_config(const std::string& path, std::string* note) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        const auto stem = std::filesystem::path(path).stem().string();
        if (const auto* b = find_bundled(stem); b && !std::filesystem::exists(path)) {
            if (note) *note = path + " not found; using bundled config '" + b->name + "'";
            return load_config_text(b->text, b->name);
        }
        throw ConfigError(path + ": cannot open file");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_config_text(ss.str(), path);
}

void resolve_auto_comparisons(RunConfig& cfg) {
    for (std::size_t k = 0; k < cfg.system.edges.size(); ++k) {
        if (k >= cfg.auto_comparison.size() || !cfg.auto_comparison[k]) continue;
        Edge& e = cfg.system.edges[k];
        e.comparison = estimate_linear_comparison(e.map, cfg.system.spec, cfg.certify.pairs, cfg.certify.seed + k);
        cfg.auto_comparison[k] = false;
    }
}

}  // namespace gdifs::app
