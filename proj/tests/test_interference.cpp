#include "doctest.h"

#include "hsrchan/interference.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

using namespace hsrchan;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("sir basics")
{
    CHECK(sir(-60.0, -90.0) == doctest::Approx(30.0));
    CHECK(sir(-75.5, -75.5) == 0.0);
    CHECK(sir(-60.0, -kInf) == kInf);  // nothing interferes
    CHECK(sir(-kInf, -60.0) == -kInf); // no signal at all

    std::mt19937 rng(42);
    std::uniform_real_distribution<double> p(-150.0, -40.0);
    for (int i = 0; i < 200; ++i) {
        double a = p(rng), b = p(rng), c = p(rng);
        CHECK(sir(a, b) == -sir(b, a));
        CHECK(sir(a + c, b + c) == doctest::Approx(sir(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("sir series")
{
    SirSeries same = sir_series({-60.0, -70.0}, {-60.0, -70.0});
    CHECK(same.values_db == std::vector<double>{0.0, 0.0});

    SirSeries shifted = sir_series({-60.0, -70.0, -80.0}, {-70.0, -80.0, -90.0});
    for (double v : shifted.values_db)
        CHECK(v == doctest::Approx(10.0));

    CHECK_THROWS_AS(sir_series({1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("coverage probability")
{
    SirSeries s;
    s.values_db = {10.0, 50.0, 70.0};
    CHECK(coverage_probability(s, 40.0) == doctest::Approx(2.0 / 3.0));
    CHECK(coverage_probability(s, 5.0) == 1.0);
    CHECK(coverage_probability(s, 80.0) == 0.0);
    CHECK(coverage_probability(s, 10.0) == doctest::Approx(2.0 / 3.0)); // strictly greater

    // thresholds ordered -> non-increasing coverage
    for (double lo : {-20.0, 0.0, 20.0, 60.0})
        CHECK(coverage_probability(s, lo) >= coverage_probability(s, lo + 10.0));

    SirSeries with_inf;
    with_inf.values_db = {10.0, kInf, 50.0, -kInf};
    std::size_t excluded = 0;
    CHECK(coverage_probability(with_inf, 40.0, &excluded) == doctest::Approx(0.5));
    CHECK(excluded == 2);

    CHECK_THROWS_AS(coverage_probability(SirSeries{}, 0.0), std::invalid_argument);
}

TEST_CASE("weather delta")
{
    SirSeries rainy, sunny;
    rainy.values_db = {24.6727, 24.6727, 24.6727};
    sunny.values_db = {2.88545, 2.88545, 2.88545};
    std::vector<double> delta = weather_delta(rainy, sunny);
    for (double d : delta)
        CHECK(d == doctest::Approx(21.78725).epsilon(1e-6));

    std::vector<double> zero = weather_delta(rainy, rainy);
    for (double d : zero)
        CHECK(d == 0.0);

    sunny.values_db.pop_back();
    CHECK_THROWS_AS(weather_delta(rainy, sunny), std::invalid_argument);
}
