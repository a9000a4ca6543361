#include <doctest.h>

#include <cmath>
#include <random>

#include "gdifs/contraction.hpp"

using namespace gdifs;

namespace {

const SemiMetricSpec kLine{Base::Euclid1D, std::nullopt};

std::vector<ComparisonFn> catalogue() {
    return {ComparisonFn::linear(1.0 / 7.0), ComparisonFn::linear(0.9), ComparisonFn::ratio(),
            ComparisonFn::power_linear(0.5, 2.0), ComparisonFn::power_linear(0.9, 1.0),
            ComparisonFn::max_of({ComparisonFn::linear(0.5), ComparisonFn::ratio()})};
}

}  // namespace

TEST_SUITE("contraction") {
    TEST_CASE("iterate_phi examples") {
        CHECK(iterate_phi(ComparisonFn::linear(1.0 / 7.0), 1.0, 3) == doctest::Approx(std::pow(7.0, -3)));
        CHECK(iterate_phi(ComparisonFn::ratio(), 1.0, 3) == doctest::Approx(0.25).epsilon(1e-15));
        for (const auto& phi : catalogue()) CHECK(iterate_phi(phi, 0.0, 5) == 0.0);
    }

    TEST_CASE("linear iterates are geometric") {
        for (double c : {0.1, 0.5, 0.75, 0.99}) {
            const auto phi = ComparisonFn::linear(c);
            for (std::size_t n = 0; n < 60; ++n)
                CHECK(iterate_phi(phi, 2.0, n) == doctest::Approx(std::pow(c, double(n)) * 2.0).epsilon(1e-13));
        }
    }

    TEST_CASE("comparison function invariants") {
        for (const auto& phi : catalogue()) {
            CAPTURE(phi.describe());
            CHECK(phi(0.0) == 0.0);
            double prev = 0.0;
            for (int k = 1; k <= 4000; ++k) {
                const double t = k / 1000.0;
                CHECK(phi(t) < t);
                CHECK(phi(t) >= prev);
                prev = phi(t);
            }
            // iterate-to-zero within 1e6 steps
            double t = 1.0;
            std::size_t n = 0;
            while (t >= 1e-6 && n < 1'000'000) {
                t = phi(t);
                ++n;
            }
            CHECK(t < 1e-6);
            // non-increasing iterates
            double a = 1.0;
            for (int k = 0; k < 100; ++k) {
                const double b = phi(a);
                CHECK(b <= a);
                a = b;
            }
        }
    }

    TEST_CASE("max_comparison") {
        const auto m = max_comparison({ComparisonFn::linear(0.5), ComparisonFn::linear(1.0 / 3.0)});
        CHECK(m(1.0) == 0.5);
        CHECK(m.linear_ratio() == doctest::Approx(0.5));
        CHECK(max_comparison({ComparisonFn::linear(0.5), ComparisonFn::ratio()})(2.0) == 1.0);
        const auto single = max_comparison({ComparisonFn::ratio()});
        for (int k = 0; k <= 100; ++k) CHECK(single(k / 10.0) == ComparisonFn::ratio()(k / 10.0));
        CHECK_FALSE(max_comparison({ComparisonFn::linear(0.5), ComparisonFn::ratio()}).linear_ratio());
        CHECK_THROWS(max_comparison({}));
    }

    TEST_CASE("parameter checks") {
        CHECK_THROWS(ComparisonFn::linear(1.0));
        CHECK_THROWS(ComparisonFn::linear(0.0));
        CHECK_THROWS(ComparisonFn::power_linear(0.5, 0.5));
    }

    TEST_CASE("certify_contraction examples") {
        auto c = certify_contraction(Expr::parse("x/7"), kLine, ComparisonFn::linear(1.0 / 7.0), 2000, 1);
        CHECK(c.pass);
        CHECK(c.worst_ratio == doctest::Approx(1.0 / 7.0));
        c = certify_contraction(Expr::parse("x"), kLine, ComparisonFn::linear(0.5), 2000, 1);
        CHECK_FALSE(c.pass);
        CHECK(c.witness_x.x != c.witness_y.x);
        CHECK(std::fabs(c.witness_x.x - c.witness_y.x) / 2 == doctest::Approx(c.worst_excess));
        c = certify_contraction(Expr::parse("x/(x+1)"), kLine, ComparisonFn::ratio(), 2000, 1);
        CHECK(c.pass);
        c = certify_contraction(Expr::parse("1/(1-x)"), kLine, ComparisonFn::ratio(), 200, 1);
        CHECK_FALSE(c.pass);
        CHECK_FALSE(c.message.empty());
    }

    TEST_CASE("x/(x+1) against ratio: brute force on a 2000x2000 grid") {
        // |f x - f y| = |x - y| / ((1+x)(1+y)) <= t / (1+t)
        const int n = 2000;
        double worst = -1.0;
        for (int i = 0; i < n; ++i) {
            const double x = double(i) / (n - 1), fx = x / (x + 1);
            for (int j = i + 1; j < n; ++j) {
                const double y = double(j) / (n - 1), t = y - x;
                worst = std::max(worst, (y / (y + 1) - fx) - t / (1 + t));
            }
        }
        CHECK(worst <= 1e-15);
    }

    TEST_CASE("sample_pairs: determinism, size, near-diagonal strata") {
        for (Base b : {Base::Euclid1D, Base::Euclid2DMax}) {
            const auto p1 = sample_pairs(b, 2000, 9);
            const auto p2 = sample_pairs(b, 2000, 9);
            CHECK(p1 == p2);
            CHECK(p1.size() >= 2000);
            bool near3 = false, near6 = false;
            const SemiMetricSpec s{b, std::nullopt};
            for (const auto& [x, y] : p1) {
                CHECK(in_domain(x, b));
                CHECK(in_domain(y, b));
                const double d = s(x, y);
                near3 = near3 || std::fabs(d - 1e-3) < 1e-12;
                near6 = near6 || std::fabs(d - 1e-6) < 1e-12;
            }
            CHECK(near3);
            CHECK(near6);
        }
    }

    TEST_CASE("certification is monotone in phi") {
        const char* maps[] = {"x/7", "x^2/2", "x/(x+1)", "(x+1)/2", "0.9*x"};
        const std::vector<ComparisonFn> chain{ComparisonFn::linear(0.2), ComparisonFn::linear(0.5),
                                              ComparisonFn::linear(0.95)};
        for (const char* m : maps) {
            CAPTURE(m);
            bool passed = false;
            for (const auto& phi : chain) {
                const bool p = certify_contraction(Expr::parse(m), kLine, phi, 1000, 5).pass;
                if (passed) CHECK(p);
                passed = passed || p;
            }
        }
    }

    TEST_CASE("certified against each member implies certified against the max") {
        const auto e = Expr::parse("x/2");
        const auto a = ComparisonFn::ratio();
        const auto b = ComparisonFn::linear(0.5);
        REQUIRE(certify_contraction(e, kLine, a, 1500, 3).pass);
        REQUIRE(certify_contraction(e, kLine, b, 1500, 3).pass);
        CHECK(certify_contraction(e, kLine, max_comparison({a, b}), 1500, 3).pass);
    }

    TEST_CASE("transformed metric with matching comparison") {
        const SemiMetricSpec s{Base::Euclid1D, Transformer::power(0.5)};
        CHECK(certify_contraction(Expr::parse("(x+2)/7"), s, ComparisonFn::linear(std::sqrt(1.0 / 7.0)), 2000, 4).pass);
        CHECK_FALSE(certify_contraction(Expr::parse("(x+2)/7"), s, ComparisonFn::linear(1.0 / 7.0), 2000, 4).pass);
    }

    TEST_CASE("2D maps") {
        const SemiMetricSpec plane{Base::Euclid2DMax, std::nullopt};
        EdgeMap f{Expr::parse("x/2"), Expr::parse("x/3")};
        CHECK(certify_contraction(f, plane, ComparisonFn::linear(0.5), 2000, 2).pass);
        CHECK_FALSE(certify_contraction(f, plane, ComparisonFn::linear(0.4), 2000, 2).pass);
    }

    TEST_CASE("auto estimate for an affine 1/7 map") {
        const auto phi = estimate_linear_comparison(EdgeMap{Expr::parse("(x+4)/7"), std::nullopt}, kLine, 2000, 42);
        REQUIRE(phi.linear_ratio());
        CHECK(*phi.linear_ratio() == doctest::Approx(1.05 / 7.0).epsilon(1e-6));
        const auto capped = estimate_linear_comparison(EdgeMap{Expr::parse("x"), std::nullopt}, kLine, 200, 1);
        CHECK(*capped.linear_ratio() < 1.0);
    }
}
