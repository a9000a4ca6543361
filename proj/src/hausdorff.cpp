#include "gdifs/hausdorff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gdifs/expr.hpp"

namespace gdifs {

namespace {

constexpr std::size_t kBruteForceLimit = std::size_t(1) << 22;  // |A| * |B|

// Base-metric version; Psi is non-decreasing, so it is applied once at the end.
std::pair<double, std::size_t> directed_base_brute(std::span<const Point> a, std::span<const Point> b,
                                                   const SemiMetricSpec& spec) {
    double cmax = -1.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double cmin = std::numeric_limits<double>::infinity();
        for (const Point& q : b) {
            const double d = spec.base_distance(a[i], q);
            if (d < cmin) {
                cmin = d;
                if (cmin <= cmax) break;  // a[i] cannot raise the maximum
            }
        }
        if (cmin > cmax) {
            cmax = cmin;
            arg = i;
        }
    }
    return {cmax, arg};
}

// Sweep over B sorted by x; both bases dominate |dx|.
std::pair<double, std::size_t> directed_base_sweep(std::span<const Point> a, std::span<const Point> b,
                                                   const SemiMetricSpec& spec) {
    std::vector<Point> sorted(b.begin(), b.end());
    std::sort(sorted.begin(), sorted.end());
    double cmax = -1.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Point& p = a[i];
        const auto mid = std::lower_bound(sorted.begin(), sorted.end(), Point{p.x, -INFINITY});
        double best = std::numeric_limits<double>::infinity();
        for (auto it = mid; it != sorted.end() && it->x - p.x < best; ++it)
            best = std::min(best, spec.base_distance(p, *it));
        for (auto it = mid; it != sorted.begin();) {
            --it;
            if (p.x - it->x >= best) break;
            best = std::min(best, spec.base_distance(p, *it));
        }
        if (best > cmax) {
            cmax = best;
            arg = i;
        }
    }
    return {cmax, arg};
}

}  // namespace

std::pair<double, Point> directed_distance(std::span<const Point> a, std::span<const Point> b,
                                           const SemiMetricSpec& spec) {
    if (a.empty() || b.empty()) throw Error("directed_distance: empty point set");
    const auto [d, arg] = a.size() * b.size() <= kBruteForceLimit ? directed_base_brute(a, b, spec)
                                                                  : directed_base_sweep(a, b, spec);
    return {spec.transform(d), a[arg]};
}

DistanceReport hp_distance(std::span<const Point> a, std::span<const Point> b, const SemiMetricSpec& spec) {
    const auto [ab, wa] = directed_distance(a, b, spec);
    const auto [ba, wb] = directed_distance(b, a, spec);
    return {std::max(ab, ba), wa, wb};
}

double hp_inf(const PointCloudVector& h, const PointCloudVector& k, const SemiMetricSpec& spec) {
    if (h.size() != k.size()) throw Error("hp_inf: vertex count mismatch");
    double best = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) best = std::max(best, hp_distance(h[i], k[i], spec).value);
    return best;
}

double d_inf(std::span<const Point> x, std::span<const Point> y, const SemiMetricSpec& spec) {
    if (x.size() != y.size()) throw Error("d_inf: vertex count mismatch");
    double best = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) best = std::max(best, spec.base_distance(x[i], y[i]));
    return spec.transform(best);
}

CoveringResult covering_radius(std::span<const Point> h, std::size_t k, const SemiMetricSpec& spec) {
    if (h.empty()) throw Error("covering_radius: empty point set");
    if (k == 0) throw Error("covering_radius: k must be >= 1");

    const auto first = std::min_element(h.begin(), h.end());
    CoveringResult out;
    out.centers.push_back(*first);
    std::vector<double> nearest(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) nearest[i] = spec.base_distance(h[i], *first);

    while (true) {
        const auto far = std::max_element(nearest.begin(), nearest.end());
        out.radius = *far;
        if (out.centers.size() >= k || *far == 0.0) break;
        const Point c = h[std::size_t(far - nearest.begin())];
        out.centers.push_back(c);
        for (std::size_t i = 0; i < h.size(); ++i) nearest[i] = std::min(nearest[i], spec.base_distance(h[i], c));
    }
    out.radius = spec.transform(out.radius);
    return out;
}

}  // namespace gdifs
