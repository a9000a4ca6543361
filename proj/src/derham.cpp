#include "gdifs/derham.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace gdifs {

namespace {

constexpr std::size_t kMaxLevels = 2048;
constexpr std::size_t kDegenerateLevel = 64;
constexpr double kDegenerateWidth = 1e-15;

std::string label(const std::string& name, int i, int j) {
    return name + "_{" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "}";
}

}  // namespace

double CompatibleFamily::compose(int i, std::span<const int> word, double t) const {
    for (std::size_t k = word.size(); k-- > 0;) {
        const int from = k == 0 ? i : word[k - 1];
        t = h[std::size_t(from)][std::size_t(word[k])](t);
    }
    return t;
}

ComparisonFn CompatibleFamily::max_comparison() const {
    return gdifs::max_comparison({phi[0][0], phi[0][1], phi[1][0], phi[1][1]});
}

std::vector<CompatibilityViolation> check_compatibility(const CompatibleFamily& family, const std::string& name,
                                                        const CompatibilityOptions& opts) {
    using Kind = CompatibilityViolation::Kind;
    std::vector<CompatibilityViolation> out;

    for (int i = 0; i < 2; ++i) {
        double v[2][2];
        bool ok = true;
        for (int j = 0; j < 2; ++j)
            for (int t = 0; t < 2; ++t) {
                try {
                    v[j][t] = family.h[std::size_t(i)][std::size_t(j)](double(t));
                } catch (const DomainError& e) {
                    out.push_back({Kind::Evaluation, i, j, label(name, i, j) + "(" + std::to_string(t) + ")", 0, 0,
                                   e.what()});
                    ok = false;
                }
            }
        if (!ok) continue;

        auto equal = [&](double a, double b, std::string cond) {
            if (std::abs(a - b) > opts.anchor_tol) {
                char buf[128];
                std::snprintf(buf, sizeof buf, "%s violated: %.17g != %.17g", cond.c_str(), a, b);
                out.push_back({Kind::Anchor, i, -1, cond, a, b, buf});
            }
        };
        auto less = [&](double a, double b, std::string cond) {
            if (!(a < b)) {
                char buf[128];
                std::snprintf(buf, sizeof buf, "%s violated: %.17g >= %.17g", cond.c_str(), a, b);
                out.push_back({Kind::Anchor, i, -1, cond, a, b, buf});
            }
        };
        const std::string a = label(name, i, 0), b = label(name, i, 1);
        equal(v[0][0], 0.0, "0 = " + a + "(0)");
        less(v[0][0], v[0][1], a + "(0) < " + a + "(1)");
        equal(v[0][1], v[1][0], a + "(1) = " + b + "(0)");
        less(v[1][0], v[1][1], b + "(0) < " + b + "(1)");
        equal(v[1][1], 1.0, b + "(1) = 1");
    }

    const std::size_t n = std::max<std::size_t>(opts.monotone_grid, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const Expr& h = family.h[std::size_t(i)][std::size_t(j)];
            try {
                double prev_x = 0.0, prev = h(0.0);
                for (std::size_t k = 1; k < n; ++k) {
                    const double x = k + 1 == n ? 1.0 : double(k) / double(n - 1);
                    const double y = h(x);
                    if (!(y > prev)) {
                        char buf[160];
                        std::snprintf(buf, sizeof buf, "%s not strictly increasing: value %.17g at %.17g, %.17g at %.17g",
                                      label(name, i, j).c_str(), prev, prev_x, y, x);
                        out.push_back({Kind::Monotonicity, i, j, label(name, i, j) + " increasing", prev_x, x, buf});
                        break;
                    }
                    prev_x = x;
                    prev = y;
                }
            } catch (const DomainError& e) {
                out.push_back({Kind::Evaluation, i, j, label(name, i, j), e.x(), 0, e.what()});
            }
        }
    return out;
}

DeRhamSystem DeRhamSystem::make(CompatibleFamily f, CompatibleFamily g) {
    ComparisonFn phi = max_comparison({f.max_comparison(), g.max_comparison()});
    return DeRhamSystem{std::move(f), std::move(g), std::move(phi)};
}

std::vector<CompatibilityViolation> verify(const DeRhamSystem& sys, std::size_t certificate_pairs, std::uint64_t seed) {
    auto out = check_compatibility(sys.f, "f");
    auto gv = check_compatibility(sys.g, "g");
    out.insert(out.end(), gv.begin(), gv.end());

    const SemiMetricSpec euclid{Base::Euclid1D, std::nullopt};
    std::uint64_t s = seed;
    for (const auto* fam : {&sys.f, &sys.g}) {
        const std::string name = fam == &sys.f ? "f" : "g";
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const auto& h = fam->h[std::size_t(i)][std::size_t(j)];
                const auto& phi = fam->phi[std::size_t(i)][std::size_t(j)];
                const auto cert = certify_contraction(h, euclid, phi, certificate_pairs, s++);
                if (!cert.pass) {
                    char buf[200];
                    std::snprintf(buf, sizeof buf, "%s is not a %s-contraction: excess %.3g at (%.17g, %.17g)",
                                  label(name, i, j).c_str(), phi.describe().c_str(), cert.worst_excess,
                                  cert.witness_x.x, cert.witness_y.x);
                    out.push_back({CompatibilityViolation::Kind::Contraction, i, j, label(name, i, j), 0, 0, buf});
                }
            }
    }
    return out;
}

Address address(const CompatibleFamily& family, int i, double x, std::size_t n, TieRule tie) {
    if (!(x >= 0.0 && x <= 1.0)) throw Error("address: x must lie in [0,1]");
    Address a;
    a.vertex = i;
    a.digits.reserve(n);
    for (std::size_t level = 0; level < n; ++level) {
        a.digits.push_back(0);
        const double b = family.compose(i, a.digits, 1.0);
        const int d = x < b ? 0 : (x > b ? 1 : (tie == TieRule::Left ? 0 : 1));
        a.digits.back() = d;
        if (d == 0) a.hi = b;
        else a.lo = b;
        if (a.digits.size() == kDegenerateLevel && n > kDegenerateLevel && a.hi - a.lo > kDegenerateWidth)
            throw DepthOverflow("address: interval still wider than 1e-15 after 64 digits");
    }
    if (x < a.lo - 1e-12 || x > a.hi + 1e-12) throw Error("address: x escaped its interval (family not compatible?)");
    return a;
}

PhiValue eval_phi(const DeRhamSystem& sys, int i, double x, double tol, TieRule tie) {
    if (!(x >= 0.0 && x <= 1.0)) throw Error("eval_phi: x must lie in [0,1]");
    if (!(tol > 0.0)) throw Error("eval_phi: tol must be > 0");

    // Intervals split at breakpoints h_w1(1) = h_w2(0), so each child shares
    // one endpoint with its parent and only the breakpoint is new.
    std::vector<int> word;
    double flo = 0.0, fhi = 1.0, glo = 0.0, ghi = 1.0;
    for (std::size_t level = 0;; ++level) {
        if (x == flo) return {glo, 0.0, level};
        if (x == fhi) return {ghi, 0.0, level};
        if (ghi - glo <= tol) return {0.5 * (glo + ghi), 0.5 * (ghi - glo), level};
        if (level >= kMaxLevels) throw DepthOverflow("eval_phi: g-interval did not shrink below tol");
        if (level > kDegenerateLevel && fhi - flo > kDegenerateWidth)
            throw DepthOverflow("eval_phi: f-interval still wider than 1e-15 after 64 digits");

        word.push_back(0);
        const double fb = sys.f.compose(i, word, 1.0);
        const double gb = sys.g.compose(i, word, 1.0);
        const int d = x < fb ? 0 : (x > fb ? 1 : (tie == TieRule::Left ? 0 : 1));
        word.back() = d;
        if (d == 0) {
            fhi = fb;
            ghi = gb;
        } else {
            flo = fb;
            glo = gb;
        }
    }
}

FunctionalEquationReport verify_functional_equation(const DeRhamSystem& sys, std::size_t grid, double tol) {
    if (grid < 2) throw Error("verify_functional_equation: grid must have >= 2 points");
    FunctionalEquationReport rep;
    rep.max_residual = -1.0;

    std::array<std::vector<PhiValue>, 2> phi_at;
    for (int j = 0; j < 2; ++j) {
        phi_at[std::size_t(j)].reserve(grid);
        for (std::size_t k = 0; k < grid; ++k) {
            const double x = k + 1 == grid ? 1.0 : double(k) / double(grid - 1);
            phi_at[std::size_t(j)].push_back(eval_phi(sys, j, x, tol));
            ++rep.evaluations;
        }
    }

    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const Expr& fij = sys.f.h[std::size_t(i)][std::size_t(j)];
            const Expr& gij = sys.g.h[std::size_t(i)][std::size_t(j)];
            for (std::size_t k = 0; k < grid; ++k) {
                const double x = k + 1 == grid ? 1.0 : double(k) / double(grid - 1);
                const PhiValue pj = phi_at[std::size_t(j)][k];
                const PhiValue pi = eval_phi(sys, i, std::clamp(fij(x), 0.0, 1.0), tol);
                ++rep.evaluations;
                const double lhs = gij(pj.value);
                const double res = std::abs(lhs - pi.value);

                const double up = gij(std::min(1.0, pj.value + pj.error_bound));
                const double dn = gij(std::max(0.0, pj.value - pj.error_bound));
                const double bound = std::max(std::abs(up - lhs), std::abs(lhs - dn)) + pi.error_bound;
                rep.residual_bound = std::max(rep.residual_bound, bound);
                if (res > rep.max_residual) {
                    rep.max_residual = res;
                    rep.worst_i = i;
                    rep.worst_j = j;
                    rep.worst_x = x;
                }
            }
        }
    return rep;
}

GraphIFS product_system(const DeRhamSystem& sys) {
    GraphIFS g;
    g.q = 2;
    g.spec = SemiMetricSpec{Base::Euclid2DMax, std::nullopt};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            g.edges.push_back(Edge{i, j,
                                   EdgeMap{sys.f.h[std::size_t(i)][std::size_t(j)],
                                           sys.g.h[std::size_t(i)][std::size_t(j)]},
                                   sys.phi});
    return g;
}

AttractorResult graph_attractor(const DeRhamSystem& sys, std::size_t depth, double dedup_delta) {
    const GraphIFS g = product_system(sys);
    const PointCloudVector seed{{Point{0.0, 0.0}}, {Point{1.0, 1.0}}};
    IterationOptions opts;
    opts.dedup_delta = dedup_delta;
    return iterate_attractor(g, seed, StopRule{depth, 0.0}, opts);
}

double interval_diameter(const CompatibleFamily& family, int i, std::size_t n) {
    if (n == 0) return 1.0;
    if (n > 16) return iterate_phi(family.max_comparison(), 1.0, n);
    double best = 0.0;
    std::vector<int> word(n);
    for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
        for (std::size_t k = 0; k < n; ++k) word[k] = int((bits >> (n - 1 - k)) & 1u);
        best = std::max(best, family.compose(i, word, 1.0) - family.compose(i, word, 0.0));
    }
    return best;
}

}  // namespace gdifs
