#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gdifs/app/commands.hpp"

using namespace gdifs;
using namespace gdifs::app;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("gdifs_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name, const std::string& body) const {
        const auto p = (path / name).string();
        std::ofstream(p) << body;
        return p;
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kTiny = R"(name = "tiny"
[system]
q = 1
[[edges]]
from = 1
to = 1
map = "x/2"
comparison = { kind = "linear", c = 0.5 }
[[edges]]
from = 1
to = 1
map = "(x+1)/2"
comparison = { kind = "linear", c = 0.5 }
[iteration]
max_depth = 4
residual_tol = 0
)";

}  // namespace

TEST_SUITE("toml") {
    TEST_CASE("scalars, tables, arrays") {
        const auto j = parse_toml(R"(
# comment
name = "a # not a comment"
n = 3
x = -1.5e-3
big = 1_000
t = true
f = false
lit = 'C:\path'
esc = "q\"t\\n"
arr = [1, 2,
       3, ]  # trailing comma
[tab]
k = { a = 1, b = [ {c = "d"} ], e.f = 2 }
[tab.sub]
z = 0
[[list]]
v = 1
[[list]]
v = 2
[list.inner]
w = 3
)");
        CHECK(j["name"] == "a # not a comment");
        CHECK(j["n"] == 3);
        CHECK(j["n"].is_number_integer());
        CHECK(j["x"] == -1.5e-3);
        CHECK(j["big"] == 1000);
        CHECK(j["t"] == true);
        CHECK(j["f"] == false);
        CHECK(j["lit"] == "C:\\path");
        CHECK(j["esc"] == "q\"t\\n");
        CHECK(j["arr"].size() == 3);
        CHECK(j["tab"]["k"]["b"][0]["c"] == "d");
        CHECK(j["tab"]["k"]["e"]["f"] == 2);
        CHECK(j["tab"]["sub"]["z"] == 0);
        CHECK(j["list"].size() == 2);
        CHECK(j["list"][1]["inner"]["w"] == 3);
    }

    TEST_CASE("errors carry line and column") {
        for (const char* bad : {"a = ", "a = 1\na = 2", "a = \"open", "[t\nx=1", "a = 1 2", "a = [1 2]", "= 3",
                                "a = 1.2.3", "a = {b = 1", "x = 1\n[x]"}) {
            CAPTURE(bad);
            try {
                parse_toml(bad);
                FAIL("expected an error");
            } catch (const ConfigError& e) {
                CHECK(std::string(e.what()).find("line ") == 0);
            }
        }
    }
}

TEST_SUITE("config") {
    TEST_CASE("bundled configs load") {
        CHECK(bundled_configs().size() == 5);
        for (const auto& b : bundled_configs()) {
            CAPTURE(b.name);
            const auto cfg = load_config_text(b.text, b.name);
            CHECK(cfg.name == b.name);
            CHECK(cfg.output.stem == b.name);
            if (cfg.kind == RunConfig::Kind::Graph) CHECK(cfg.system.edges.size() == 4);
            else CHECK(cfg.derham.has_value());
        }
        const auto e1 = load_config_text(find_bundled("exa1")->text);
        CHECK(e1.system.seed_map == std::vector<int>{0, 1});
        CHECK(*e1.system.edges[0].comparison.linear_ratio() == 1.0 / 7.0);
        CHECK(e1.iteration.max_depth == 8);
        const auto e3 = load_config_text(find_bundled("exa3")->text);
        CHECK(e3.iteration.dedup == 1e-4);
        CHECK(e3.system.seed_start->at(1).x == 1.0);
    }

    TEST_CASE("missing examples/NAME.toml falls back to the bundled copy") {
        std::string note;
        const auto cfg = load_config("examples/does/not/exist/exa2.toml", &note);
        CHECK(cfg.name == "exa2");
        CHECK(note.find("bundled") != std::string::npos);
        CHECK_THROWS_AS(load_config("no_such_config.toml"), ConfigError);
    }

    TEST_CASE("comparison specs") {
        CHECK(parse_comparison("ratio", "c").kind() == ComparisonFn::Kind::Ratio);
        CHECK(parse_comparison(Json::parse(R"({"kind":"linear","c":0.25})"), "c")(1.0) == 0.25);
        CHECK(parse_comparison(Json::parse(R"({"kind":"power_linear","c":0.5,"alpha":2})"), "c")(0.5) == 0.125);
        const auto m = parse_comparison(Json::parse(R"({"kind":"max","of":[{"kind":"linear","c":0.5},"ratio"]})"), "c");
        CHECK(m(2.0) == 1.0);
        CHECK_THROWS_AS(parse_comparison(Json::parse(R"({"kind":"linear","c":1.5})"), "c"), ConfigError);
        CHECK_THROWS_AS(parse_comparison(Json::parse(R"({"kind":"nope"})"), "c"), ConfigError);
        CHECK_THROWS_AS(parse_comparison("auto", "c"), ConfigError);
    }

    TEST_CASE("config errors name the field") {
        struct Case {
            std::string text, needle;
        };
        const std::string head = "[system]\nq = 1\n[[edges]]\nfrom = 1\nto = 1\n";
        for (const auto& c : {Case{head + "map = \"x/\"\ncomparison = \"ratio\"\n", "edges[1].map"},
                              Case{head + "map = \"x/2\"\ncomparison = \"ratio\"\n", ""},
                              Case{head + "map = \"x/2\"\n", "missing 'comparison'"},
                              Case{head + "map = \"x/2\"\ncomparison = \"ratio\"\ncolour = 1\n", "unknown key 'colour'"},
                              Case{"[system]\nq = 0\n", "system.q"},
                              Case{head + "map = \"x/2\"\ncomparison = \"ratio\"\n[iteration]\ndedup = -1\n", "iteration.dedup"},
                              Case{head + "map = \"2*y\"\ncomparison = \"ratio\"\n", "position 3"},
                              Case{"[metric]\nbase = \"euclid3d\"\n", "metric.base"}}) {
            CAPTURE(c.text);
            if (c.needle.empty()) {
                CHECK_NOTHROW(load_config_text(c.text));
                continue;
            }
            try {
                load_config_text(c.text);
                FAIL("expected an error");
            } catch (const ConfigError& e) {
                CHECK(std::string(e.what()).find(c.needle) != std::string::npos);
            }
        }
    }

    TEST_CASE("auto comparisons") {
        std::string text = find_bundled("exa1")->text;
        std::string::size_type pos;
        while ((pos = text.find("{ kind = \"linear\", c = 0.14285714285714285 }")) != std::string::npos)
            text.replace(pos, 44, "\"auto\"");
        auto cfg = load_config_text(text);
        CHECK(cfg.auto_comparison == std::vector<bool>(4, true));
        resolve_auto_comparisons(cfg);
        for (const auto& e : cfg.system.edges) CHECK(*e.comparison.linear_ratio() == doctest::Approx(1.05 / 7).epsilon(1e-6));
    }
}

TEST_SUITE("cli") {
    TEST_CASE("attractor writes sorted CSV, JSON and SVG") {
        TempDir dir;
        const auto cfg = dir.file("tiny.toml", kTiny);
        std::ostringstream out, err;
        Overrides o;
        o.out = dir.path.string();
        o.formats = std::vector<std::string>{"csv", "json", "svg"};
        REQUIRE(cmd_attractor(cfg, o, out, err) == kExitOk);
        const auto csv = slurp(dir.path / "tiny_points.csv");
        CHECK(csv.rfind("vertex,x\n1,0\n", 0) == 0);
        const auto cloud = read_points_csv(csv, 1);
        CHECK(cloud[0].size() == 16);  // k/16, k < 16: 1 needs infinitely many digits
        CHECK(std::is_sorted(cloud[0].begin(), cloud[0].end()));
        const auto rep = Json::parse(slurp(dir.path / "tiny_report.json"));
        CHECK(rep["depth"] == 4);
        CHECK(rep["seed"]["J"][0] == 1);
        CHECK(rep["point_counts"][0] == 16);
        CHECK(rep["edges"][1]["certificate"]["pass"] == true);
        CHECK(rep.contains("distance_bound"));
        CHECK(slurp(dir.path / "tiny.svg").find("<svg") == 0);
    }

    TEST_CASE("outputs are deterministic across runs and worker counts") {
        TempDir a, b;
        std::ostringstream out, err;
        Overrides o;
        o.out = a.path.string();
        o.workers = 1;
        REQUIRE(cmd_attractor("exa2", o, out, err) == kExitOk);
        o.out = b.path.string();
        o.workers = 4;
        REQUIRE(cmd_attractor("exa2", o, out, err) == kExitOk);
        for (const char* f : {"exa2_points.csv", "exa2_report.json", "exa2.svg"})
            CHECK(slurp(a.path / f) == slurp(b.path / f));
    }

    TEST_CASE("exit codes") {
        TempDir dir;
        std::ostringstream out, err;
        Overrides o;
        o.out = dir.path.string();

        const auto bad_expr = dir.file("bad.toml", std::string(kTiny).replace(std::string(kTiny).find("x/2"), 3, "x/*2"));
        CHECK(cmd_attractor(bad_expr, o, out, err) == kExitConfig);
        CHECK(err.str().find("position 3") != std::string::npos);

        const auto not_contraction = dir.file("nc.toml", std::string(kTiny).replace(std::string(kTiny).find("x/2"), 3, "x"));
        err.str("");
        CHECK(cmd_attractor(not_contraction, o, out, err) == kExitValidation);
        CHECK(err.str().find("violates") != std::string::npos);

        // warn mode iterates anyway
        const auto warn = dir.file("warn.toml", slurp(not_contraction) + "[certify]\nmode = \"warn\"\n");
        err.str("");
        CHECK(cmd_attractor(warn, o, out, err) == kExitOk);
        CHECK(err.str().find("warning") != std::string::npos);

        Overrides capped = o;
        const auto cap = dir.file("cap.toml", std::string(kTiny) + "point_cap = 10\n");
        CHECK(cmd_attractor(cap, capped, out, err) == kExitNoConvergence);

        std::string slow_text = kTiny;
        slow_text.replace(slow_text.find("x/2"), 3, "x/(x+1)");
        slow_text.replace(slow_text.find("{ kind = \"linear\", c = 0.5 }"), 28, "\"ratio\"");
        const auto slow = dir.file("slow.toml", slow_text + "seed_max_iter = 100\n");
        CHECK(cmd_attractor(slow, o, out, err) == kExitNoConvergence);

        CHECK(cmd_attractor("missing.toml", o, out, err) == kExitConfig);
        CHECK(cmd_derham(dir.file("t.toml", kTiny), o, out, err) == kExitConfig);
        CHECK(cmd_attractor("derham_affine", o, out, err) == kExitConfig);
    }

    TEST_CASE("derham command") {
        TempDir dir;
        std::ostringstream out, err;
        Overrides o;
        o.out = dir.path.string();
        o.formats = std::vector<std::string>{"csv", "json", "svg"};
        REQUIRE(cmd_derham("derham_affine", o, out, err) == kExitOk);
        const auto rep = Json::parse(slurp(dir.path / "derham_affine_report.json"));
        bool found = false;
        for (const auto& p : rep["probes"])
            if (p["i"] == 1 && p["x"] == 0.5) {
                CHECK(p["phi"].get<double>() == doctest::Approx(1.0 / 3).epsilon(1e-12));
                found = true;
            }
        CHECK(found);
        CHECK(rep["functional_equation"]["max_residual"].get<double>() <= 1e-8);
        const auto csv = slurp(dir.path / "derham_affine_phi.csv");
        CHECK(csv.rfind("i,x,phi,err_bound\n1,0,0,0\n", 0) == 0);
        CHECK(fs::exists(dir.path / "derham_affine_phi1.svg"));
        CHECK(fs::exists(dir.path / "derham_affine_phi2.svg"));

        const std::string incompatible = R"(name = "bad"
[derham]
f = { h11 = "x/2", h12 = "(x+1)/3", h21 = "x/2", h22 = "(x+1)/2" }
g = { h11 = "x/3", h12 = "(2*x+1)/3", h21 = "x/4", h22 = "(3*x+1)/4" }
comparison = { kind = "linear", c = 0.75 }
)";
        TempDir d2;
        err.str("");
        CHECK(cmd_derham(d2.file("bad.toml", incompatible), o, out, err) == kExitValidation);
        CHECK(err.str().find("f_{1,1}(1) = f_{1,2}(0)") != std::string::npos);
    }

    TEST_CASE("check command") {
        for (const auto& b : bundled_configs()) {
            CAPTURE(b.name);
            std::ostringstream out, err;
            CHECK(cmd_check(b.name, {}, out, err) == kExitOk);
            const auto j = Json::parse(out.str());
            CHECK(j["ok"] == true);
        }
        TempDir dir;
        std::ostringstream out, err;
        const auto nc = dir.file("nc.toml", std::string(kTiny).replace(std::string(kTiny).find("x/2"), 3, "x") +
                                                "[certify]\nseed = 5\n");
        CHECK(cmd_check(nc, {}, out, err) == kExitValidation);
        const auto j = Json::parse(out.str());
        CHECK(j["ok"] == false);
        CHECK(j["edges"][0]["certificate"]["pass"] == false);
        CHECK(j["edges"][0]["certificate"]["witness"].size() == 2);
        CHECK(j["edges"][0]["certificate"]["seed"] == 5);
    }

    TEST_CASE("demo command") {
        std::ostringstream out, err;
        CHECK(cmd_demo("", std::nullopt, out, err) == kExitOk);
        CHECK(out.str() == "exa1\nexa2\nexa3\nderham_affine\nderham_minkowski\n");
        out.str("");
        CHECK(cmd_demo("exa3", std::nullopt, out, err) == kExitOk);
        CHECK(out.str() == find_bundled("exa3")->text);
        TempDir dir;
        CHECK(cmd_demo("exa1", dir.path.string(), out, err) == kExitOk);
        CHECK(slurp(dir.path / "exa1.toml") == find_bundled("exa1")->text);
        CHECK(cmd_demo("nope", std::nullopt, out, err) == kExitConfig);
    }
}
