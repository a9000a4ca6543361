#pragma once

#include <string>
#include <vector>

#include "gdifs/hausdorff.hpp"

namespace gdifs::app {

/// `vertex,x` (1D) or `vertex,x,y` (2D) rows, vertex 1-based, clouds in
/// canonical order, numbers with 17 significant digits.
std::string points_csv(const PointCloudVector& cloud, Base base);

/// Parses points_csv output back; used by tests and the acceptance suite.
PointCloudVector read_points_csv(const std::string& text, std::size_t q);

struct PhiSample {
    int vertex = 1;  // 1-based
    double x = 0.0;
    double phi = 0.0;
    double err_bound = 0.0;
};

std::string phi_csv(const std::vector<PhiSample>& rows);

/// One horizontal band per vertex with a tick at every point.
std::string svg_intervals(const PointCloudVector& cloud);

/// Scatter plot of 2D clouds, one panel per vertex.
std::string svg_scatter(const PointCloudVector& cloud);

/// Polyline of (x, phi(x)) for one vertex.
std::string svg_graph(const std::vector<PhiSample>& rows, const std::string& title);

std::string fmt17(double v);

void write_file(const std::string& path, const std::string& body);

}  // namespace gdifs::app
