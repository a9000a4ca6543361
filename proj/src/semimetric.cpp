#include "gdifs/semimetric.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "gdifs/expr.hpp"

namespace gdifs {

int dimension(Base b) noexcept { return b == Base::Euclid1D ? 1 : 2; }

namespace {

void require_alpha(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error("transformer exponent must be > 0");
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

Transformer Transformer::power(double alpha) {
    require_alpha(alpha);
    return {Kind::Power, alpha};
}

Transformer Transformer::bounded_power(double alpha) {
    require_alpha(alpha);
    return {Kind::BoundedPower, alpha};
}

Transformer Transformer::ratio(double alpha) {
    require_alpha(alpha);
    return {Kind::Ratio, alpha};
}

Transformer Transformer::cantor() { return {Kind::Cantor, 1.0}; }

double cantor_function(double t) {
    if (!(t > 0.0)) return 0.0;
    if (t >= 1.0) return 1.0;
    double value = 0.0;
    double weight = 0.5;
    // Leading zero digits do not count towards precision, so tiny t still
    // maps to a positive value.
    for (int k = 0; k < 1100 && t > 0.0; ++k) {
        if (value > 0.0 && weight < value * 1e-17) break;
        t *= 3.0;
        const int digit = t >= 2.0 ? 2 : (t >= 1.0 ? 1 : 0);
        if (digit == 1) return value + weight;
        if (digit == 2) value += weight;
        t -= digit;
        weight *= 0.5;
    }
    return value;
}

double Transformer::operator()(double t) const {
    switch (kind_) {
        case Kind::Power: return std::pow(t, alpha_);
        case Kind::BoundedPower: return std::min(std::pow(t, alpha_), 1.0);
        case Kind::Ratio: return std::isinf(t) ? 1.0 : std::pow(t / (1.0 + t), alpha_);
        case Kind::Cantor: return cantor_function(t);
    }
    return t;
}

double Transformer::generalized_inverse(double u) const {
    if (u < 0.0) throw Error("generalized_inverse: u must be >= 0");
    switch (kind_) {
        case Kind::Power:
            return std::pow(u, 1.0 / alpha_);
        case Kind::BoundedPower:
            return u >= 1.0 ? kInf : std::pow(u, 1.0 / alpha_);
        case Kind::Ratio: {
            if (u >= 1.0) return kInf;
            const double s = std::pow(u, 1.0 / alpha_);
            return s / (1.0 - s);
        }
        case Kind::Cantor: {
            if (u >= 1.0) return kInf;
            if (u == 0.0) return 0.0;
            // Psi(hi) > u holds throughout; shrink to the left edge of {Psi > u}.
            double lo = 0.0, hi = 1.0;
            for (;;) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                if (cantor_function(mid) > u) hi = mid;
                else lo = mid;
            }
            return hi;
        }
    }
    return u;
}

std::string Transformer::describe() const {
    char buf[64];
    switch (kind_) {
        case Kind::Power: std::snprintf(buf, sizeof buf, "power(%g)", alpha_); break;
        case Kind::BoundedPower: std::snprintf(buf, sizeof buf, "bounded_power(%g)", alpha_); break;
        case Kind::Ratio: std::snprintf(buf, sizeof buf, "ratio(%g)", alpha_); break;
        case Kind::Cantor: std::snprintf(buf, sizeof buf, "cantor"); break;
    }
    return buf;
}

double distance(const SemiMetricSpec& spec, const Point& a, const Point& b) { return spec(a, b); }

double triangle_bound(const SemiMetricSpec& spec, double u, double v) {
    if (u < 0.0 || v < 0.0) throw Error("triangle_bound: arguments must be >= 0");
    if (!spec.transformer) return u + v;
    const Transformer& psi = *spec.transformer;
    const double a = psi.generalized_inverse(u);
    const double b = psi.generalized_inverse(v);
    if (std::isinf(a) || std::isinf(b)) return kInf;
    return psi(a + b);
}

double diam(std::span<const Point> points, const SemiMetricSpec& spec) {
    if (points.empty()) throw Error("diam: empty point set");
    double best = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            best = std::max(best, spec.base_distance(points[i], points[j]));
    return spec.transform(best);
}

bool in_domain(const Point& p, Base base, double slack) noexcept {
    auto ok = [slack](double v) { return v >= -slack && v <= 1.0 + slack; };
    if (base == Base::Euclid1D) return ok(p.x) && p.y == 0.0;
    return ok(p.x) && ok(p.y);
}

}  // namespace gdifs
