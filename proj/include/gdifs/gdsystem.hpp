#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gdifs/contraction.hpp"
#include "gdifs/hausdorff.hpp"
#include "gdifs/semimetric.hpp"

namespace gdifs {

/// Directed edge i -> j carrying f_e and phi_e. Vertices are 0-based.
struct Edge {
    int from = 0;
    int to = 0;
    EdgeMap map;
    ComparisonFn comparison = ComparisonFn::ratio();
};

/// Graph-directed system of weak contractions on [0,1] or [0,1]^2.
struct GraphIFS {
    int q = 1;
    std::vector<Edge> edges;
    SemiMetricSpec spec;
    /// vertex i -> J(i) used for the singleton seed; default picks the smallest target.
    std::optional<std::vector<int>> seed_map;
    /// Start vector of the seed iteration; the domain midpoint when empty.
    std::optional<std::vector<Point>> seed_start;

    /// Maximum of all edge comparison functions.
    ComparisonFn max_comparison() const;
};

struct ValidationIssue {
    enum class Kind { VertexWithoutOutgoingEdge, NotSelfMap, ContractionViolation, Malformed };
    Kind kind;
    int vertex = -1;
    int edge = -1;
    std::string message;
};

struct ValidationOptions {
    std::size_t self_map_samples = 1001;
    std::size_t certificate_pairs = 2000;
    std::uint64_t seed = 42;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    std::vector<ContractionCertificate> certificates;  // one per edge, in edge order

    bool ok() const noexcept { return issues.empty(); }
    /// Issues other than contraction violations (those may be downgraded to warnings).
    bool structurally_ok() const noexcept;
};

ValidationReport validate(const GraphIFS& g, const ValidationOptions& opts = {});

class ConvergenceError : public Error {
public:
    using Error::Error;
};

class PointCapExceeded : public Error {
public:
    using Error::Error;
};

struct Seed {
    std::vector<Point> z;              // fixed point of the singleton map
    std::vector<int> seed_map;         // J, 0-based
    std::vector<std::size_t> edge_of;  // edge index e_i chosen for vertex i
    PointCloudVector h0;               // ({z_1}, ..., {z_q})
    std::size_t iterations = 0;
};

/// Fixed point of F(x)_i = f_{e_i}(x_{J(i)}) from the domain midpoint; throws
/// ConvergenceError after max_iter steps or if ({z_i}) is not subinvariant.
Seed seed_fixed_point(const GraphIFS& g, double tol = 1e-14, std::size_t max_iter = 100000);

/// Canonical form: snap to a delta-grid (delta = 0: none), clamp to the domain, sort, unique.
void canonicalize(PointSet& s, double dedup_delta, Base base);

/// T(H)_i = union over edges e: i -> j of f_e(H_j), canonicalised.
PointCloudVector apply_T(const GraphIFS& g, const PointCloudVector& h, double dedup_delta = 0.0,
                         unsigned workers = 1);

struct StopRule {
    std::size_t max_depth = 10;
    double residual_tol = 0.0;
};

struct IterationOptions {
    double dedup_delta = 0.0;
    std::size_t point_cap = 10'000'000;
    unsigned workers = 1;
    bool keep_iterates = false;
};

struct AttractorResult {
    PointCloudVector cloud;
    double residual = 0.0;
    std::size_t depth = 0;
    std::vector<double> history;              // residual of U_0, U_1, ...
    std::vector<PointCloudVector> iterates;   // U_0, U_1, ... when requested
};

/// Runs U_{n+1} = U_n ∪ T(U_n) from a subinvariant seed until the residual
/// d_HP^inf(T(U_n), U_n) <= residual_tol or n = max_depth.
AttractorResult iterate_attractor(const GraphIFS& g, const PointCloudVector& seed, const StopRule& stop,
                                  const IterationOptions& opts = {});

/// d_HP^inf(T(H), H) with no deduplication.
double residual(const GraphIFS& g, const PointCloudVector& h);

std::size_t total_points(const PointCloudVector& h) noexcept;

/// Componentwise inclusion A ⊆ B as exact point sets (both canonical).
bool is_subset(const PointCloudVector& a, const PointCloudVector& b);

}  // namespace gdifs
