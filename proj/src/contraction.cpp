#include "gdifs/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace gdifs {

ComparisonFn ComparisonFn::linear(double c) {
    if (!(c > 0.0 && c < 1.0)) throw Error("linear comparison requires c in (0,1)");
    return {Kind::Linear, c, 1.0, {}};
}

ComparisonFn ComparisonFn::ratio() { return {Kind::Ratio, 1.0, 1.0, {}}; }

ComparisonFn ComparisonFn::power_linear(double c, double alpha) {
    if (!(c > 0.0 && c < 1.0)) throw Error("power_linear comparison requires c in (0,1)");
    if (!(alpha >= 1.0) || !std::isfinite(alpha))
        throw Error("power_linear comparison requires alpha >= 1 (otherwise c*t^alpha >= t near 0)");
    return {Kind::PowerLinear, c, alpha, {}};
}

ComparisonFn ComparisonFn::max_of(std::vector<ComparisonFn> parts) {
    if (parts.empty()) throw Error("max comparison needs at least one member");
    if (parts.size() == 1) return std::move(parts.front());
    return {Kind::MaxOf, 0.0, 1.0, std::move(parts)};
}

double ComparisonFn::operator()(double t) const {
    switch (kind_) {
        case Kind::Linear: return c_ * t;
        case Kind::Ratio: return std::isinf(t) ? t : t / (1.0 + t);
        case Kind::PowerLinear: return t <= 1.0 ? c_ * std::pow(t, alpha_) : c_ * t;
        case Kind::MaxOf: {
            double best = 0.0;
            for (const auto& p : parts_) best = std::max(best, p(t));
            return best;
        }
    }
    return t;
}

std::optional<double> ComparisonFn::linear_ratio() const {
    if (kind_ == Kind::Linear) return c_;
    if (kind_ != Kind::MaxOf) return std::nullopt;
    double c = 0.0;
    for (const auto& p : parts_) {
        auto pc = p.linear_ratio();
        if (!pc) return std::nullopt;
        c = std::max(c, *pc);
    }
    return c;
}

std::string ComparisonFn::describe() const {
    char buf[64];
    switch (kind_) {
        case Kind::Linear: std::snprintf(buf, sizeof buf, "linear(%.17g)", c_); return buf;
        case Kind::Ratio: return "ratio";
        case Kind::PowerLinear: std::snprintf(buf, sizeof buf, "power_linear(%.17g, %.17g)", c_, alpha_); return buf;
        case Kind::MaxOf: {
            std::string s = "max(";
            for (std::size_t i = 0; i < parts_.size(); ++i) s += (i ? ", " : "") + parts_[i].describe();
            return s + ")";
        }
    }
    return {};
}

double iterate_phi(const ComparisonFn& phi, double t, std::size_t n) {
    if (t < 0.0) throw Error("iterate_phi: t must be >= 0");
    for (std::size_t k = 0; k < n && t > 0.0; ++k) t = phi(t);
    return t;
}

ComparisonFn max_comparison(std::vector<ComparisonFn> list) {
    // Flatten nested maxima so describe() stays readable.
    std::vector<ComparisonFn> flat;
    for (auto& f : list) {
        if (f.kind() == ComparisonFn::Kind::MaxOf) flat.insert(flat.end(), f.parts().begin(), f.parts().end());
        else flat.push_back(std::move(f));
    }
    return ComparisonFn::max_of(std::move(flat));
}

std::string EdgeMap::describe() const {
    return fy ? "(" + fx.source() + ", " + fy->source() + ")" : fx.source();
}

namespace {

double unit(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

Point random_point(std::mt19937_64& rng, Base base) {
    const double x = unit(rng);
    return base == Base::Euclid1D ? Point{x, 0.0} : Point{x, unit(rng)};
}

Point offset_point(const Point& p, double h, Base base, std::mt19937_64& rng) {
    auto shift = [h](double v) { return v + h <= 1.0 ? v + h : v - h; };
    if (base == Base::Euclid1D) return {shift(p.x), 0.0};
    // Move one coordinate by exactly h, the other by at most h.
    const double other = (unit(rng) * 2.0 - 1.0) * h;
    auto clamp = [](double v) { return std::clamp(v, 0.0, 1.0); };
    if (rng() & 1u) return {shift(p.x), clamp(p.y + other)};
    return {clamp(p.x + other), shift(p.y)};
}

}  // namespace

std::vector<std::pair<Point, Point>> sample_pairs(Base base, std::size_t n_pairs, std::uint64_t seed) {
    std::vector<std::pair<Point, Point>> pairs;
    pairs.reserve(n_pairs + 16);
    std::mt19937_64 rng(seed);

    // Grid pairs: about a third of the budget.
    const std::size_t grid_budget = std::max<std::size_t>(n_pairs / 3, 1);
    std::size_t m = 2;
    while ((m + 1) * m / 2 <= grid_budget) ++m;
    std::vector<Point> grid;
    if (base == Base::Euclid1D) {
        for (std::size_t k = 0; k < m; ++k) grid.push_back({double(k) / double(m - 1), 0.0});
    } else {
        const std::size_t side = std::max<std::size_t>(2, std::size_t(std::sqrt(double(m))));
        for (std::size_t a = 0; a < side; ++a)
            for (std::size_t b = 0; b < side; ++b)
                grid.push_back({double(a) / double(side - 1), double(b) / double(side - 1)});
    }
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = i + 1; j < grid.size(); ++j) pairs.emplace_back(grid[i], grid[j]);

    const std::size_t random_budget = std::max<std::size_t>(n_pairs / 3, 1);
    for (std::size_t k = 0; k < random_budget; ++k) {
        const Point a = random_point(rng, base);
        pairs.emplace_back(a, random_point(rng, base));
    }

    const std::size_t near_budget = std::max<std::size_t>(n_pairs - std::min(n_pairs, pairs.size()), 2);
    for (std::size_t k = 0; k < near_budget; ++k) {
        const double h = (k % 2 == 0) ? 1e-3 : 1e-6;
        const Point a = random_point(rng, base);
        pairs.emplace_back(a, offset_point(a, h, base, rng));
    }
    return pairs;
}

ContractionCertificate certify_contraction(const EdgeMap& f, const SemiMetricSpec& spec,
                                           const ComparisonFn& phi, std::size_t n_pairs,
                                           std::uint64_t rng_seed) {
    // Rounding in f(a) - f(b) is relative to the (small) distance, and a
    // transformer amplifies it, so the allowance scales with phi(d).
    constexpr double abs_slack = 1e-12, rel_slack = 1e-9;
    ContractionCertificate cert;
    bool within = true;
    cert.seed = rng_seed;
    cert.worst_excess = -INFINITY;
    const auto pairs = sample_pairs(spec.base, n_pairs, rng_seed);
    cert.n_pairs = pairs.size();
    for (const auto& [a, b] : pairs) {
        Point fa, fb;
        try {
            fa = f(a);
            fb = f(b);
        } catch (const DomainError& err) {
            cert.pass = false;
            cert.witness_x = a;
            cert.witness_y = b;
            cert.worst_excess = INFINITY;
            cert.message = err.what();
            return cert;
        }
        const double d = spec(a, b);
        const double dimg = spec(fa, fb);
        const double bound = phi(d);
        const double excess = dimg - bound;
        if (excess > abs_slack + rel_slack * bound) within = false;
        if (excess > cert.worst_excess) {
            cert.worst_excess = excess;
            cert.witness_x = a;
            cert.witness_y = b;
        }
        if (d > 0.0) cert.worst_ratio = std::max(cert.worst_ratio, dimg / d);
    }
    cert.pass = within;
    return cert;
}

ComparisonFn estimate_linear_comparison(const EdgeMap& f, const SemiMetricSpec& spec,
                                        std::size_t n_pairs, std::uint64_t rng_seed) {
    double worst = 0.0;
    for (const auto& [a, b] : sample_pairs(spec.base, n_pairs, rng_seed)) {
        const double d = spec(a, b);
        if (d > 0.0) worst = std::max(worst, spec(f(a), f(b)) / d);
    }
    const double c = std::clamp(1.05 * worst, 1e-12, 1.0 - 1e-9);
    return ComparisonFn::linear(c);
}

}  // namespace gdifs
