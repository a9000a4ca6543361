#include "gdifs/app/outputs.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gdifs/expr.hpp"

namespace gdifs::app {

namespace {

constexpr double kPanel = 600.0;
constexpr double kMargin = 30.0;

std::string fmt4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string svg_open(double w, double h) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt4(w) + "\" height=\"" + fmt4(h) +
           "\" viewBox=\"0 0 " + fmt4(w) + " " + fmt4(h) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string text(double x, double y, const std::string& s) {
    return "<text x=\"" + fmt4(x) + "\" y=\"" + fmt4(y) + "\" font-family=\"sans-serif\" font-size=\"12\">" + s +
           "</text>\n";
}

std::string frame(double x, double y, double w, double h) {
    return "<rect x=\"" + fmt4(x) + "\" y=\"" + fmt4(y) + "\" width=\"" + fmt4(w) + "\" height=\"" + fmt4(h) +
           "\" fill=\"none\" stroke=\"#999\"/>\n";
}

}  // namespace

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string points_csv(const PointCloudVector& cloud, Base base) {
    const bool two_d = base == Base::Euclid2DMax;
    std::string out = two_d ? "vertex,x,y\n" : "vertex,x\n";
    for (std::size_t i = 0; i < cloud.size(); ++i)
        for (const Point& p : cloud[i]) {
            out += std::to_string(i + 1);
            out += ',';
            out += fmt17(p.x);
            if (two_d) {
                out += ',';
                out += fmt17(p.y);
            }
            out += '\n';
        }
    return out;
}

PointCloudVector read_points_csv(const std::string& text, std::size_t q) {
    PointCloudVector out(q);
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t v = 0;
        double x = 0, y = 0;
        const int n = std::sscanf(line.c_str(), "%zu,%lf,%lf", &v, &x, &y);
        if (n < 2 || v < 1 || v > q) throw Error("bad points CSV row: " + line);
        out[v - 1].push_back(Point{x, n == 3 ? y : 0.0});
    }
    return out;
}

std::string phi_csv(const std::vector<PhiSample>& rows) {
    std::string out = "i,x,phi,err_bound\n";
    for (const auto& r : rows)
        out += std::to_string(r.vertex) + "," + fmt17(r.x) + "," + fmt17(r.phi) + "," + fmt17(r.err_bound) + "\n";
    return out;
}

std::string svg_intervals(const PointCloudVector& cloud) {
    const double band = 40.0;
    const double w = kPanel + 2 * kMargin, h = kMargin + double(cloud.size()) * (band + 20.0);
    std::string out = svg_open(w, h);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const double top = kMargin + double(i) * (band + 20.0);
        out += text(4, top + band / 2 + 4, "K" + std::to_string(i + 1));
        out += frame(kMargin, top, kPanel, band);
        // one path per vertex keeps large clouds manageable
        std::string d;
        double last = -1.0;
        for (const Point& p : cloud[i]) {
            const double px = kMargin + p.x * kPanel;
            if (px - last < 0.05) continue;  // sub-pixel duplicates
            last = px;
            d += "M" + fmt4(px) + " " + fmt4(top) + "v" + fmt4(band);
        }
        out += "<path d=\"" + d + "\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

std::string svg_scatter(const PointCloudVector& cloud) {
    const double w = double(cloud.size()) * (kPanel + kMargin) + kMargin, h = kPanel + 2 * kMargin;
    std::string out = svg_open(w, h);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const double left = kMargin + double(i) * (kPanel + kMargin);
        out += frame(left, kMargin, kPanel, kPanel);
        out += text(left, kMargin - 8, "K" + std::to_string(i + 1));
        out += "<g fill=\"black\">\n";
        for (const Point& p : cloud[i])
            out += "<circle cx=\"" + fmt4(left + p.x * kPanel) + "\" cy=\"" + fmt4(kMargin + (1.0 - p.y) * kPanel) +
                   "\" r=\"0.8\"/>\n";
        out += "</g>\n";
    }
    out += "</svg>\n";
    return out;
}

std::string svg_graph(const std::vector<PhiSample>& rows, const std::string& title) {
    const double w = kPanel + 2 * kMargin, h = kPanel + 2 * kMargin;
    std::string out = svg_open(w, h);
    out += frame(kMargin, kMargin, kPanel, kPanel);
    out += text(kMargin, kMargin - 8, title);
    std::string pts;
    for (const auto& r : rows)
        pts += fmt4(kMargin + r.x * kPanel) + "," + fmt4(kMargin + (1.0 - r.phi) * kPanel) + " ";
    out += "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"" + pts + "\"/>\n";
    out += "</svg>\n";
    return out;
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << body;
    if (!out) throw Error("write failed: " + path);
}

}  // namespace gdifs::app
