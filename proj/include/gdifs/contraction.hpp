#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gdifs/expr.hpp"
#include "gdifs/semimetric.hpp"

namespace gdifs {

/// Comparison function phi: increasing, phi(0) = 0, phi^n(t) -> 0.
class ComparisonFn {
public:
    enum class Kind { Linear, Ratio, PowerLinear, MaxOf };

    static ComparisonFn linear(double c);
    static ComparisonFn ratio();
    /// c * t^alpha on [0,1] and c * t above 1; requires c in (0,1), alpha >= 1.
    static ComparisonFn power_linear(double c, double alpha);
    static ComparisonFn max_of(std::vector<ComparisonFn> parts);

    Kind kind() const noexcept { return kind_; }
    double c() const noexcept { return c_; }
    double alpha() const noexcept { return alpha_; }
    const std::vector<ComparisonFn>& parts() const noexcept { return parts_; }

    double operator()(double t) const;

    /// The contraction ratio when this is (a max of) Linear functions only.
    std::optional<double> linear_ratio() const;

    std::string describe() const;

private:
    ComparisonFn(Kind k, double c, double alpha, std::vector<ComparisonFn> parts)
        : kind_(k), c_(c), alpha_(alpha), parts_(std::move(parts)) {}

    Kind kind_;
    double c_;
    double alpha_;
    std::vector<ComparisonFn> parts_;
};

/// n-fold composition phi^n(t).
double iterate_phi(const ComparisonFn& phi, double t, std::size_t n);

/// Pointwise maximum of a non-empty list.
ComparisonFn max_comparison(std::vector<ComparisonFn> list);

/// A self-map of [0,1] (one Expr) or of [0,1]^2 (one Expr per coordinate,
/// each written in the variable x).
struct EdgeMap {
    Expr fx;
    std::optional<Expr> fy;

    Point operator()(const Point& p) const { return fy ? Point{fx(p.x), (*fy)(p.y)} : Point{fx(p.x), 0.0}; }
    std::string describe() const;
};

struct ContractionCertificate {
    bool pass = false;
    std::size_t n_pairs = 0;
    std::uint64_t seed = 0;
    double worst_excess = 0.0;  // max of d(fx,fy) - phi(d(x,y))
    double worst_ratio = 0.0;   // max of d(fx,fy) / d(x,y)
    Point witness_x, witness_y;
    std::string message;        // evaluation failure, if any
};

/// Deterministic stratified sample of pairs in the domain of `base`:
/// all pairs of a grid, seeded uniform pairs, and near-diagonal pairs with
/// base distance 1e-3 and 1e-6.
std::vector<std::pair<Point, Point>> sample_pairs(Base base, std::size_t n_pairs, std::uint64_t seed);

/// Sampled check of d(f x, f y) <= phi(d(x, y)) + 1e-12.
ContractionCertificate certify_contraction(const EdgeMap& f, const SemiMetricSpec& spec,
                                           const ComparisonFn& phi, std::size_t n_pairs,
                                           std::uint64_t rng_seed);

inline ContractionCertificate certify_contraction(const Expr& f, const SemiMetricSpec& spec,
                                                  const ComparisonFn& phi, std::size_t n_pairs,
                                                  std::uint64_t rng_seed) {
    return certify_contraction(EdgeMap{f, std::nullopt}, spec, phi, n_pairs, rng_seed);
}

/// Least Linear(c) fitting the sampled ratios, inflated by 5% and capped below 1.
ComparisonFn estimate_linear_comparison(const EdgeMap& f, const SemiMetricSpec& spec,
                                        std::size_t n_pairs, std::uint64_t rng_seed);

}  // namespace gdifs
