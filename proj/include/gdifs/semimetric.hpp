#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>

namespace gdifs {

/// A point of [0,1] (y unused, always 0) or of [0,1]^2.
struct Point {
    double x = 0.0;
    double y = 0.0;

    friend auto operator<=>(const Point&, const Point&) = default;
};

enum class Base {
    Euclid1D,     // |x - y| on [0,1]
    Euclid2DMax,  // max(|dx|, |dy|) on [0,1]^2
};

int dimension(Base b) noexcept;

/// Semi-metric transformer Psi applied to a base distance.
class Transformer {
public:
    enum class Kind { Power, BoundedPower, Ratio, Cantor };

    static Transformer power(double alpha);
    static Transformer bounded_power(double alpha);
    static Transformer ratio(double alpha);
    static Transformer cantor();

    Kind kind() const noexcept { return kind_; }
    double alpha() const noexcept { return alpha_; }

    double operator()(double t) const;

    /// inf{t >= 0 : Psi(t) > u}; +infinity when the set is empty.
    double generalized_inverse(double u) const;

    std::string describe() const;

private:
    Transformer(Kind k, double alpha) : kind_(k), alpha_(alpha) {}

    Kind kind_;
    double alpha_;
};

/// Cantor function on [0,1] from 40 ternary digits; 1 beyond 1, 0 below 0.
double cantor_function(double t);

struct SemiMetricSpec {
    Base base = Base::Euclid1D;
    std::optional<Transformer> transformer;

    double base_distance(const Point& a, const Point& b) const noexcept {
        if (base == Base::Euclid1D) return a.x > b.x ? a.x - b.x : b.x - a.x;
        const double dx = a.x > b.x ? a.x - b.x : b.x - a.x;
        const double dy = a.y > b.y ? a.y - b.y : b.y - a.y;
        return dx > dy ? dx : dy;
    }

    /// Psi applied to an already computed base distance (identity if no transformer).
    double transform(double base_dist) const { return transformer ? (*transformer)(base_dist) : base_dist; }

    double operator()(const Point& a, const Point& b) const { return transform(base_distance(a, b)); }
};

double distance(const SemiMetricSpec& spec, const Point& a, const Point& b);

/// Closed-form basic triangle function for the catalogue: u+v for the bare
/// metric, Psi(Psi^(-1)(u) + Psi^(-1)(v)) when transformed (an upper bound).
double triangle_bound(const SemiMetricSpec& spec, double u, double v);

/// Maximum pairwise distance, O(n^2).
double diam(std::span<const Point> points, const SemiMetricSpec& spec);

bool in_domain(const Point& p, Base base, double slack = 0.0) noexcept;

}  // namespace gdifs
