#include "gdifs/gdsystem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

namespace gdifs {

ComparisonFn GraphIFS::max_comparison() const {
    std::vector<ComparisonFn> all;
    for (const auto& e : edges) all.push_back(e.comparison);
    return gdifs::max_comparison(std::move(all));
}

bool ValidationReport::structurally_ok() const noexcept {
    return std::all_of(issues.begin(), issues.end(),
                       [](const ValidationIssue& i) { return i.kind == ValidationIssue::Kind::ContractionViolation; });
}

namespace {

std::string fmt_point(const Point& p, Base base) {
    char buf[96];
    if (base == Base::Euclid1D) std::snprintf(buf, sizeof buf, "%.17g", p.x);
    else std::snprintf(buf, sizeof buf, "(%.17g, %.17g)", p.x, p.y);
    return buf;
}

Point midpoint(Base base) { return base == Base::Euclid1D ? Point{0.5, 0.0} : Point{0.5, 0.5}; }

}  // namespace

ValidationReport validate(const GraphIFS& g, const ValidationOptions& opts) {
    using Kind = ValidationIssue::Kind;
    ValidationReport rep;
    if (g.q < 1) {
        rep.issues.push_back({Kind::Malformed, -1, -1, "vertex count must be >= 1"});
        return rep;
    }
    std::vector<bool> has_out(std::size_t(g.q), false);
    const bool two_d = g.spec.base == Base::Euclid2DMax;

    for (std::size_t k = 0; k < g.edges.size(); ++k) {
        const Edge& e = g.edges[k];
        const int ek = int(k);
        if (e.from < 0 || e.from >= g.q || e.to < 0 || e.to >= g.q) {
            rep.issues.push_back({Kind::Malformed, -1, ek, "edge endpoint outside 1..q"});
            rep.certificates.emplace_back();
            continue;
        }
        has_out[std::size_t(e.from)] = true;
        if (two_d != e.map.fy.has_value()) {
            rep.issues.push_back({Kind::Malformed, e.from, ek,
                                  two_d ? "2D base needs a map per coordinate" : "1D base takes a single map"});
            rep.certificates.emplace_back();
            continue;
        }

        bool self_map = true;
        auto check = [&](const Expr& f, const char* coord) {
            const auto r = check_self_map(f, 0.0, 1.0, opts.self_map_samples);
            if (!r.pass) {
                self_map = false;
                rep.issues.push_back({Kind::NotSelfMap, e.from, ek,
                                      std::string("edge ") + std::to_string(e.from + 1) + "->" +
                                          std::to_string(e.to + 1) + " " + coord + "map '" + f.source() +
                                          "' is not a self-map of [0,1]: " + r.message});
            }
        };
        check(e.map.fx, two_d ? "x-" : "");
        if (e.map.fy) check(*e.map.fy, "y-");
        if (!self_map) {
            rep.certificates.emplace_back();
            continue;
        }

        auto cert = certify_contraction(e.map, g.spec, e.comparison, opts.certificate_pairs, opts.seed + k);
        if (!cert.pass) {
            char buf[256];
            std::snprintf(buf, sizeof buf, "edge %d->%d map '%s' violates %s: excess %.3g at (%s, %s)%s%s",
                          e.from + 1, e.to + 1, e.map.describe().c_str(), e.comparison.describe().c_str(),
                          cert.worst_excess, fmt_point(cert.witness_x, g.spec.base).c_str(),
                          fmt_point(cert.witness_y, g.spec.base).c_str(), cert.message.empty() ? "" : ": ",
                          cert.message.c_str());
            rep.issues.push_back({Kind::ContractionViolation, e.from, ek, buf});
        }
        rep.certificates.push_back(std::move(cert));
    }

    for (int i = 0; i < g.q; ++i)
        if (!has_out[std::size_t(i)])
            rep.issues.push_back({Kind::VertexWithoutOutgoingEdge, i, -1,
                                  "vertex " + std::to_string(i + 1) + " has no outgoing edge"});
    return rep;
}

Seed seed_fixed_point(const GraphIFS& g, double tol, std::size_t max_iter) {
    const auto q = std::size_t(g.q);
    Seed s;
    s.seed_map.resize(q, -1);
    s.edge_of.resize(q, 0);
    for (std::size_t i = 0; i < q; ++i) {
        int target = -1;
        if (g.seed_map) {
            if (g.seed_map->size() != q) throw Error("seed map must list one target per vertex");
            target = (*g.seed_map)[i];
        }
        std::optional<std::size_t> chosen;
        for (std::size_t k = 0; k < g.edges.size(); ++k) {
            const Edge& e = g.edges[k];
            if (e.from != int(i)) continue;
            if (target >= 0) {
                if (e.to == target) {
                    chosen = k;
                    break;
                }
            } else if (!chosen || e.to < g.edges[*chosen].to) {
                chosen = k;
            }
        }
        if (!chosen)
            throw Error("no edge " + std::to_string(i + 1) + "->" +
                        (target >= 0 ? std::to_string(target + 1) : std::string("*")) + " for the seed map");
        s.edge_of[i] = *chosen;
        s.seed_map[i] = g.edges[*chosen].to;
    }

    std::vector<Point> x(q, midpoint(g.spec.base));
    if (g.seed_start) {
        if (g.seed_start->size() != q) throw Error("seed start must list one point per vertex");
        x = *g.seed_start;
    }
    auto step = [&](const std::vector<Point>& cur) {
        std::vector<Point> next(q);
        for (std::size_t i = 0; i < q; ++i)
            next[i] = g.edges[s.edge_of[i]].map(cur[std::size_t(s.seed_map[i])]);
        return next;
    };

    std::size_t n = 0;
    for (;; ++n) {
        if (n >= max_iter)
            throw ConvergenceError("seed iteration did not converge within " + std::to_string(max_iter) +
                                   " steps (a map with slope 1 at its fixed point converges slowly; try seed_start)");
        auto next = step(x);
        const double d = d_inf(next, x, g.spec);
        x = std::move(next);
        if (d < tol || d == 0.0) break;
    }
    // Polish towards an exact floating-point fixed point where one exists.
    for (std::size_t extra = 0; extra < 10000; ++extra) {
        auto next = step(x);
        if (next == x) break;
        x = std::move(next);
        ++n;
    }
    s.iterations = n;
    s.z = x;
    s.h0.resize(q);
    for (std::size_t i = 0; i < q; ++i) s.h0[i] = {x[i]};

    const auto t = apply_T(g, s.h0);
    const double bound = std::max(tol, 1e-12);
    for (std::size_t i = 0; i < q; ++i) {
        const auto [d, w] = directed_distance(s.h0[i], t[i], SemiMetricSpec{g.spec.base, std::nullopt});
        if (d > bound)
            throw ConvergenceError("seed singleton of vertex " + std::to_string(i + 1) +
                                   " is not subinvariant (gap " + std::to_string(d) + ")");
    }
    return s;
}

void canonicalize(PointSet& s, double dedup_delta, Base base) {
    if (dedup_delta > 0.0) {
        auto snap = [dedup_delta](double v) { return std::clamp(std::round(v / dedup_delta) * dedup_delta, 0.0, 1.0) + 0.0; };
        for (Point& p : s) {
            p.x = snap(p.x);
            if (base == Base::Euclid2DMax) p.y = snap(p.y);
        }
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
}

namespace {

void apply_edges(const GraphIFS& g, const PointCloudVector& h, std::size_t first, std::size_t last,
                 PointCloudVector& out) {
    for (std::size_t k = first; k < last; ++k) {
        const Edge& e = g.edges[k];
        auto& dst = out[std::size_t(e.from)];
        for (const Point& p : h[std::size_t(e.to)]) {
            try {
                dst.push_back(e.map(p));
            } catch (const DomainError& err) {
                throw Error("edge " + std::to_string(e.from + 1) + "->" + std::to_string(e.to + 1) + " at point " +
                            fmt_point(p, g.spec.base) + ": " + err.what());
            }
        }
    }
}

}  // namespace

PointCloudVector apply_T(const GraphIFS& g, const PointCloudVector& h, double dedup_delta, unsigned workers) {
    const auto q = std::size_t(g.q);
    if (h.size() != q) throw Error("apply_T: point vector has wrong number of components");
    for (const auto& c : h)
        if (c.empty()) throw Error("apply_T: empty component");

    PointCloudVector out(q);
    const std::size_t n_edges = g.edges.size();
    workers = std::max(1u, std::min<unsigned>(workers, unsigned(n_edges)));
    if (workers == 1) {
        apply_edges(g, h, 0, n_edges, out);
    } else {
        std::vector<PointCloudVector> partial(workers, PointCloudVector(q));
        std::vector<std::exception_ptr> errors(workers);
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        apply_edges(g, h, n_edges * w / workers, n_edges * (w + 1) / workers, partial[w]);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            }
        }
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
        for (auto& part : partial)
            for (std::size_t i = 0; i < q; ++i) out[i].insert(out[i].end(), part[i].begin(), part[i].end());
    }
    for (auto& c : out) canonicalize(c, dedup_delta, g.spec.base);
    return out;
}

std::size_t total_points(const PointCloudVector& h) noexcept {
    std::size_t n = 0;
    for (const auto& c : h) n += c.size();
    return n;
}

bool is_subset(const PointCloudVector& a, const PointCloudVector& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!std::includes(b[i].begin(), b[i].end(), a[i].begin(), a[i].end())) return false;
    return true;
}

double residual(const GraphIFS& g, const PointCloudVector& h) { return hp_inf(apply_T(g, h, 0.0), h, g.spec); }

AttractorResult iterate_attractor(const GraphIFS& g, const PointCloudVector& seed, const StopRule& stop,
                                  const IterationOptions& opts) {
    const auto q = std::size_t(g.q);
    if (seed.size() != q) throw Error("seed has wrong number of components");

    PointCloudVector u = seed;
    for (auto& c : u) canonicalize(c, opts.dedup_delta, g.spec.base);

    {
        const auto t = apply_T(g, u, 0.0, opts.workers);
        const SemiMetricSpec base_only{g.spec.base, std::nullopt};
        for (std::size_t i = 0; i < q; ++i) {
            const auto [d, w] = directed_distance(u[i], t[i], base_only);
            if (d > opts.dedup_delta + 1e-9)
                throw Error("seed is not subinvariant at vertex " + std::to_string(i + 1) + " (point " +
                            fmt_point(w, g.spec.base) + " is " + std::to_string(d) + " away from T(seed))");
        }
    }

    AttractorResult res;
    for (std::size_t depth = 0;; ++depth) {
        std::size_t projected = 0;
        for (const Edge& e : g.edges) projected += u[std::size_t(e.to)].size();
        if (projected + total_points(u) > opts.point_cap)
            throw PointCapExceeded("point cap of " + std::to_string(opts.point_cap) + " exceeded at depth " +
                                   std::to_string(depth));

        auto tu = apply_T(g, u, 0.0, opts.workers);
        const double r = hp_inf(tu, u, g.spec);
        res.history.push_back(r);
        if (opts.keep_iterates) res.iterates.push_back(u);
        if (r <= stop.residual_tol || depth >= stop.max_depth) {
            res.cloud = std::move(u);
            res.residual = r;
            res.depth = depth;
            return res;
        }
        for (std::size_t i = 0; i < q; ++i) {
            tu[i].insert(tu[i].end(), u[i].begin(), u[i].end());
            canonicalize(tu[i], opts.dedup_delta, g.spec.base);
        }
        u = std::move(tu);
    }
}

}  // namespace gdifs
