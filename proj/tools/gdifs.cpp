#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gdifs/app/commands.hpp"

using namespace gdifs::app;

namespace {

struct Flags {
    std::string config;
    std::size_t depth = 0;
    double tol = 0, dedup = 0;
    std::string out, format;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    bool cross_check = false;
};

void add_run_flags(CLI::App* sub, Flags& f) {
    sub->add_option("config,--config", f.config, "config file (a missing examples/NAME.toml falls back to the bundled NAME)");
    sub->add_option("--depth", f.depth, "maximum depth");
    sub->add_option("--tol", f.tol, "residual tolerance (attractor) or evaluation tolerance (derham)");
    sub->add_option("--dedup", f.dedup, "dedup grid spacing, 0 = exact");
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--format", f.format, "comma-separated list of csv,svg,json");
    sub->add_option("--seed", f.seed, "certificate sampling seed");
    sub->add_option("--workers", f.workers, "worker threads for the set operator")->check(CLI::PositiveNumber);
}

Overrides overrides(const CLI::App* sub, const Flags& f) {
    Overrides o;
    if (sub->count("--depth")) o.depth = f.depth;
    if (sub->count("--tol")) o.tol = f.tol;
    if (sub->count("--dedup")) o.dedup = f.dedup;
    if (sub->count("--out")) o.out = f.out;
    if (sub->count("--seed")) o.seed = f.seed;
    if (sub->count("--workers")) o.workers = f.workers;
    if (sub->count("--format")) {
        std::vector<std::string> list;
        std::stringstream ss(f.format);
        for (std::string item; std::getline(ss, item, ',');)
            if (!item.empty()) list.push_back(item);
        o.formats = std::move(list);
    }
    o.cross_check = f.cross_check;
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gdifs: attractors of graph-directed weak-contraction systems and de Rham functions"};
    app.require_subcommand(1);

    Flags fa, fd, fc;
    auto* attractor = app.add_subcommand("attractor", "iterate a graph-directed system to its attractor");
    add_run_flags(attractor, fa);
    auto* derham = app.add_subcommand("derham", "evaluate a de Rham system and check its functional equations");
    add_run_flags(derham, fd);
    derham->add_flag("--cross-check", fd.cross_check, "compare with the product-system attractor");
    auto* check = app.add_subcommand("check", "validate a config and print contraction certificates");
    add_run_flags(check, fc);

    std::string demo_name, demo_out;
    auto* demo = app.add_subcommand("demo", "list bundled configs, or print/copy one");
    demo->add_option("name", demo_name, "bundled config name");
    demo->add_option("--out", demo_out, "directory to copy the config into");

    CLI11_PARSE(app, argc, argv);

    auto need_config = [](const Flags& f) {
        if (f.config.empty()) {
            std::cerr << "gdifs: a config path is required\n";
            return false;
        }
        return true;
    };
    try {
        if (attractor->parsed()) {
            if (!need_config(fa)) return kExitConfig;
            return cmd_attractor(fa.config, overrides(attractor, fa), std::cout, std::cerr);
        }
        if (derham->parsed()) {
            if (!need_config(fd)) return kExitConfig;
            return cmd_derham(fd.config, overrides(derham, fd), std::cout, std::cerr);
        }
        if (check->parsed()) {
            if (!need_config(fc)) return kExitConfig;
            return cmd_check(fc.config, overrides(check, fc), std::cout, std::cerr);
        }
        if (demo->parsed())
            return cmd_demo(demo_name, demo->count("--out") ? std::optional<std::string>(demo_out) : std::nullopt,
                            std::cout, std::cerr);
    } catch (const ConfigError& e) {
        std::cerr << "gdifs: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
