#pragma once

#include <span>
#include <vector>

#include "gdifs/semimetric.hpp"

namespace gdifs {

using PointSet = std::vector<Point>;
/// One finite point set per vertex, approximating (H_1, ..., H_q).
using PointCloudVector = std::vector<PointSet>;

struct DistanceReport {
    double value = 0.0;
    Point witness_a;  // point of A farthest from B
    Point witness_b;  // point of B farthest from A
};

/// max_{a in A} min_{b in B} d(a, b) together with the maximising a.
std::pair<double, Point> directed_distance(std::span<const Point> a, std::span<const Point> b,
                                           const SemiMetricSpec& spec);

/// Hausdorff-Pompeiu distance of two non-empty finite sets.
DistanceReport hp_distance(std::span<const Point> a, std::span<const Point> b, const SemiMetricSpec& spec);

/// Componentwise maximum of hp_distance.
double hp_inf(const PointCloudVector& h, const PointCloudVector& k, const SemiMetricSpec& spec);

/// Componentwise maximum distance of two point vectors.
double d_inf(std::span<const Point> x, std::span<const Point> y, const SemiMetricSpec& spec);

struct CoveringResult {
    double radius = 0.0;
    std::vector<Point> centers;
};

/// Greedy farthest-point k-center, starting from the lexicographically
/// smallest point. An upper bound (within 2x for metrics) on the optimum.
CoveringResult covering_radius(std::span<const Point> h, std::size_t k, const SemiMetricSpec& spec);

}  // namespace gdifs
