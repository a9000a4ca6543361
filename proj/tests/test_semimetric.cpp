#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gdifs/semimetric.hpp"
#include "oracles.hpp"

using namespace gdifs;

namespace {

std::vector<Transformer> catalogue() {
    return {Transformer::power(0.5),         Transformer::power(2.0), Transformer::bounded_power(1.0),
            Transformer::bounded_power(0.3), Transformer::ratio(4.0), Transformer::ratio(0.5),
            Transformer::cantor()};
}

SemiMetricSpec spec1(std::optional<Transformer> t = std::nullopt) { return {Base::Euclid1D, t}; }

}  // namespace

TEST_SUITE("semimetric") {
    TEST_CASE("distance examples") {
        CHECK(distance(spec1(Transformer::power(0.5)), {0.0}, {0.25}) == 0.5);
        for (const auto& t : catalogue()) CHECK(distance(spec1(t), {0.3}, {0.3}) == 0.0);
        CHECK(distance(spec1(Transformer::ratio(4)), {0.0}, {1.0}) == doctest::Approx(0.0625).epsilon(1e-15));
        const SemiMetricSpec plane{Base::Euclid2DMax, std::nullopt};
        CHECK(distance(plane, {0.1, 0.2}, {0.4, 0.9}) == doctest::Approx(0.7));
    }

    TEST_CASE("generalized inverse examples") {
        CHECK(Transformer::power(2).generalized_inverse(4) == 2.0);
        CHECK(std::isinf(Transformer::bounded_power(1).generalized_inverse(1)));
        CHECK(std::isinf(Transformer::ratio(1).generalized_inverse(1)));
        CHECK(std::isinf(Transformer::cantor().generalized_inverse(1)));
        // Cantor function is 1/2 on [1/3, 2/3]: the inverse is the right end
        CHECK(Transformer::cantor().generalized_inverse(0.5) == doctest::Approx(2.0 / 3.0).epsilon(1e-11));
        CHECK(Transformer::cantor().generalized_inverse(0.25) == doctest::Approx(2.0 / 9.0).epsilon(1e-11));
    }

    TEST_CASE("Cantor function matches the self-similar oracle") {
        for (int k = 0; k <= 3000; ++k) {
            const double t = k / 3000.0;
            CAPTURE(t);
            CHECK(cantor_function(t) == doctest::Approx(oracle::cantor(t)).epsilon(1e-11));
        }
        CHECK(cantor_function(-1) == 0.0);
        CHECK(cantor_function(2) == 1.0);
    }

    TEST_CASE("Cantor inverse agrees with a fine-grid oracle") {
        // inf{t : C(t) > u} from the left edge on a 3^-9 grid of the oracle
        const int n = 19683;
        for (double u : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            int k = 0;
            while (k <= n && !(oracle::cantor(double(k) / n) > u)) ++k;
            CHECK(Transformer::cantor().generalized_inverse(u) == doctest::Approx(double(k) / n).epsilon(2.0 / n));
        }
    }

    TEST_CASE("transformer invariants") {
        for (const auto& psi : catalogue()) {
            CAPTURE(psi.describe());
            CHECK(psi(0.0) == 0.0);
            double prev = 0.0;
            for (int k = 1; k <= 2000; ++k) {
                const double t = k / 1000.0;
                CHECK(psi(t) > 0.0);
                CHECK(psi(t) >= prev);
                prev = psi(t);
            }
            for (int k = 10; k <= 40; k += 5) CHECK(psi(std::ldexp(1.0, -k)) < std::pow(0.8, k / 5.0));
        }
    }

    TEST_CASE("inverse of Psi(u) is at least u") {
        for (const auto& psi : catalogue()) {
            CAPTURE(psi.describe());
            for (int k = 0; k <= 400; ++k) {
                const double u = k / 200.0;
                CAPTURE(u);
                CHECK(psi.generalized_inverse(psi(u)) >= u * (1.0 - 1e-14));
            }
        }
    }

    TEST_CASE("generalized inverse tends to 0") {
        for (const auto& psi : catalogue()) {
            CAPTURE(psi.describe());
            double prev = psi.generalized_inverse(0.5);
            for (int k = 2; k <= 40; ++k) {
                const double v = psi.generalized_inverse(std::ldexp(1.0, -k));
                CHECK(v <= prev);
                prev = v;
            }
            CHECK(psi.generalized_inverse(1e-100) < 1e-5);
        }
    }

    TEST_CASE("triangle bound") {
        CHECK(triangle_bound(spec1(), 0.2, 0.3) == doctest::Approx(0.5));
        CHECK(triangle_bound(spec1(Transformer::power(0.5)), 0.5, 0.5) == doctest::Approx(std::sqrt(0.5)));
        CHECK(std::isinf(triangle_bound(spec1(Transformer::bounded_power(1)), 1.0, 0.1)));
        for (const auto& psi : catalogue()) {
            CAPTURE(psi.describe());
            CHECK(triangle_bound(spec1(psi), 0.0, 0.0) == 0.0);
            double prev = INFINITY;
            for (int k = 2; k <= 40; ++k) {
                const double u = std::ldexp(1.0, -k);
                const double b = triangle_bound(spec1(psi), u, u);
                CHECK(b <= prev);
                prev = b;
            }
            CHECK(prev < 1e-4);
        }
    }

    TEST_CASE("triangle bound dominates sampled triangles") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> U(0, 1);
        for (const auto& psi : catalogue()) {
            const auto s = spec1(psi);
            for (int n = 0; n < 2000; ++n) {
                const Point x{U(rng)}, y{U(rng)}, z{U(rng)};
                CHECK(s(x, y) <= triangle_bound(s, s(x, z), s(z, y)) * (1 + 1e-12) + 1e-15);
            }
        }
    }

    TEST_CASE("symmetry and identity of indiscernibles on samples") {
        std::mt19937_64 rng(11);
        for (const auto& psi : catalogue())
            for (Base b : {Base::Euclid1D, Base::Euclid2DMax}) {
                const SemiMetricSpec s{b, psi};
                const auto pts = oracle::random_points(rng, 200, b == Base::Euclid2DMax);
                for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
                    CHECK(s(pts[i], pts[i + 1]) == s(pts[i + 1], pts[i]));
                    CHECK(s(pts[i], pts[i + 1]) > 0.0);
                }
            }
    }

    TEST_CASE("diam") {
        CHECK(diam(std::vector<Point>{{0.5}}, spec1()) == 0.0);
        CHECK(diam(std::vector<Point>{{0.0}, {1.0}}, spec1()) == 1.0);
        CHECK(diam(std::vector<Point>{{0.0}, {0.5}, {1.0}}, spec1(Transformer::power(0.5))) == 1.0);
        CHECK_THROWS(diam(std::vector<Point>{}, spec1()));
    }

    TEST_CASE("parameter checks") {
        CHECK_THROWS(Transformer::power(0));
        CHECK_THROWS(Transformer::ratio(-1));
        CHECK_THROWS(Transformer::power(2).generalized_inverse(-1));
    }
}
