#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gdifs/contraction.hpp"
#include "gdifs/gdsystem.hpp"

namespace gdifs {

// Vertices and address digits are 0-based here (0 and 1 stand for the
// indices 1 and 2 of a two-vertex family); reports print them 1-based.

/// Four increasing contractions h[i][j] of [0,1] with
/// 0 = h[i][0](0) < h[i][0](1) = h[i][1](0) < h[i][1](1) = 1.
struct CompatibleFamily {
    std::array<std::array<Expr, 2>, 2> h;
    std::array<std::array<ComparisonFn, 2>, 2> phi;

    /// h[i][w_1] ∘ h[w_1][w_2] ∘ ... ∘ h[w_{n-1}][w_n] applied to t.
    double compose(int i, std::span<const int> word, double t) const;

    ComparisonFn max_comparison() const;
};

struct CompatibilityViolation {
    enum class Kind { Anchor, Monotonicity, Contraction, Evaluation };
    Kind kind;
    int row = 0;
    int col = -1;
    std::string condition;  // e.g. "f_{1,1}(1) = f_{1,2}(0)"
    double lhs = 0.0, rhs = 0.0;
    std::string message;
};

struct CompatibilityOptions {
    std::size_t monotone_grid = 1000;
    double anchor_tol = 1e-12;
};

/// Anchor conditions and strict monotonicity on a grid; `name` labels the
/// family in messages ("f" or "g").
std::vector<CompatibilityViolation> check_compatibility(const CompatibleFamily& family, const std::string& name = "h",
                                                        const CompatibilityOptions& opts = {});

struct DeRhamSystem {
    CompatibleFamily f;
    CompatibleFamily g;
    ComparisonFn phi;  // common comparison: max of all eight

    static DeRhamSystem make(CompatibleFamily f, CompatibleFamily g);
};

/// Compatibility of both families plus a certificate of each of the eight
/// maps against its own comparison function.
std::vector<CompatibilityViolation> verify(const DeRhamSystem& sys, std::size_t certificate_pairs = 2000,
                                           std::uint64_t seed = 42);

enum class TieRule { Left, Right };

class DepthOverflow : public Error {
public:
    using Error::Error;
};

struct Address {
    int vertex = 0;
    std::vector<int> digits;
    double lo = 0.0, hi = 1.0;  // the f-interval I_i(digits)
};

/// Itinerary of x under `family` from vertex i, n digits deep.
Address address(const CompatibleFamily& family, int i, double x, std::size_t n, TieRule tie = TieRule::Left);

struct PhiValue {
    double value = 0.0;
    double error_bound = 0.0;
    std::size_t depth = 0;
};

/// phi_i(x): follow the f-address of x until the matching g-interval is no
/// longer than tol; returns its midpoint. Exact endpoint hits return the
/// g-endpoint with error bound 0.
PhiValue eval_phi(const DeRhamSystem& sys, int i, double x, double tol, TieRule tie = TieRule::Left);

struct FunctionalEquationReport {
    double max_residual = 0.0;
    int worst_i = 0, worst_j = 0;
    double worst_x = 0.0;
    double residual_bound = 0.0;  // from the eval_phi error bounds and the local modulus of g
    std::size_t evaluations = 0;
};

/// max |g_{i,j}(phi_j(x)) - phi_i(f_{i,j}(x))| over an equispaced grid.
FunctionalEquationReport verify_functional_equation(const DeRhamSystem& sys, std::size_t grid, double tol);

/// q = 2 system on [0,1]^2 with maps (x, y) -> (f_{i,j}(x), g_{i,j}(y)).
GraphIFS product_system(const DeRhamSystem& sys);

/// Iterates the product system from ({(0,0)}, {(1,1)}) for `depth` steps.
AttractorResult graph_attractor(const DeRhamSystem& sys, std::size_t depth, double dedup_delta = 0.0);

/// Max length of the depth-n intervals from vertex i: exact for n <= 16,
/// the bound phi^n(1) beyond.
double interval_diameter(const CompatibleFamily& family, int i, std::size_t n);

}  // namespace gdifs
