#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gdifs/app/config.hpp"
#include "gdifs/app/outputs.hpp"

namespace gdifs::app {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,
    kExitValidation = 2,
    kExitNoConvergence = 3,
};

struct Overrides {
    std::optional<std::size_t> depth;
    std::optional<double> tol;
    std::optional<double> dedup;
    std::optional<std::string> out;
    std::optional<std::vector<std::string>> formats;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    bool cross_check = false;
};

void apply_overrides(RunConfig& cfg, const Overrides& o);

/// Validation (or compatibility) failure; `details` holds one line per problem.
class ValidationFailed : public Error {
public:
    ValidationFailed(std::string msg, std::vector<std::string> details)
        : Error(std::move(msg)), details_(std::move(details)) {}
    const std::vector<std::string>& details() const noexcept { return details_; }

private:
    std::vector<std::string> details_;
};

struct AttractorRun {
    ValidationReport validation;
    std::vector<std::string> warnings;
    Seed seed;
    AttractorResult result;
    Json report;
};

/// Validate, seed and iterate a graph config (auto comparisons must be resolved).
AttractorRun run_attractor(const RunConfig& cfg);

struct CrossCheck {
    std::size_t depth = 0;
    std::array<double, 2> hp{};
    std::array<std::size_t, 2> points{};
};

struct DeRhamRun {
    std::vector<std::string> warnings;
    std::vector<PhiSample> samples;  // grid values, vertex 1 then vertex 2
    FunctionalEquationReport functional_equation;
    std::optional<CrossCheck> cross;
    Json report;
};

DeRhamRun run_derham(const RunConfig& cfg, bool cross_check);

/// Sampled graph {(x, phi_i(x))} on an equispaced grid of n points.
PointSet sampled_graph(const DeRhamSystem& sys, int i, std::size_t n, double tol);

int cmd_attractor(const std::string& config, const Overrides& o, std::ostream& out, std::ostream& err);
int cmd_derham(const std::string& config, const Overrides& o, std::ostream& out, std::ostream& err);
int cmd_check(const std::string& config, const Overrides& o, std::ostream& out, std::ostream& err);
/// Empty name lists the bundled configs; otherwise prints it, or writes
/// NAME.toml into out_dir when given.
int cmd_demo(const std::string& name, const std::optional<std::string>& out_dir, std::ostream& out,
             std::ostream& err);

}  // namespace gdifs::app
