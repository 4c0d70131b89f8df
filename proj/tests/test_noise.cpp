#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <set>

#include "hent/noise.hpp"

using namespace hent;

TEST_CASE("time grid") {
    const TimeGrid g(8.0, 801);
    CHECK(g.size() == 801);
    CHECK(g.at(0) == 0.0);
    CHECK(g.at(800) == 8.0);
    CHECK(g.step() == doctest::Approx(0.01));
    CHECK(g.index_of(4.0) == 400);
    CHECK(g.index_of(0.25) == 25);
    CHECK(g.index_of(0.255) == -1);
    CHECK(g.index_of(9.0) == -1);
    CHECK_THROWS_AS(TimeGrid(8.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid(-1.0, 10), std::invalid_argument);
}

TEST_CASE("noise model validation") {
    CHECK_NOTHROW(NoiseModel::static_gaussian(1.0).validate());
    CHECK_THROWS_AS(NoiseModel::static_gaussian(0.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(NoiseModel::ornstein_uhlenbeck(1.0, 0.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(NoiseModel::ornstein_uhlenbeck(-1.0, 1.0).validate(), std::invalid_argument);
}

TEST_CASE("counter rng streams are deterministic and distinct") {
    CounterRng a(stream_key(7, 0)), b(stream_key(7, 0)), c(stream_key(7, 1)), d(stream_key(8, 0));
    std::set<std::uint64_t> firsts;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        firsts.insert(x);
    }
    CHECK(firsts.size() == 100);
    CHECK(CounterRng(stream_key(7, 0)).next_u64() != c.next_u64());
    CHECK(CounterRng(stream_key(7, 0)).next_u64() != d.next_u64());
    for (int i = 0; i < 10000; ++i) {
        const double u = a.uniform();
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
    }
}

TEST_CASE("static sampling") {
    const NoiseModel m = NoiseModel::static_gaussian(2.0);
    const TimeGrid g(8.0, 81);
    const NoiseTrajectory a = sample_static(m, 42, g);
    const NoiseTrajectory b = sample_static(m, 42, g);
    REQUIRE(a.values.size() == 81);
    CHECK(a.values == b.values);
    for (double v : a.values) CHECK(v == a.values[0]);
    CHECK(sample_static(m, 43, g).values[0] != a.values[0]);
    CHECK_THROWS_AS(sample_static(NoiseModel::ornstein_uhlenbeck(1, 1), 1, g), std::invalid_argument);

    const NoiseTrajectory tiny = sample_static(NoiseModel::static_gaussian(1e-12), 5, g);
    for (double v : tiny.values) CHECK(std::abs(v) < 1e-10);
}

TEST_CASE("static sampling moments") {
    const double sigma = 1.5;
    const NoiseModel m = NoiseModel::static_gaussian(sigma);
    const TimeGrid g(1.0, 2);
    const int n = 100000;
    double s1 = 0, s2 = 0;
    for (int k = 0; k < n; ++k) {
        const double e = sample_static(m, stream_key(99, k), g).values[0];
        s1 += e;
        s2 += e * e;
    }
    const double mean = s1 / n;
    const double var = s2 / n - mean * mean;
    CHECK(std::abs(mean) <= 4 * sigma / std::sqrt(n));
    CHECK(std::abs(var - sigma * sigma) <= 0.05 * sigma * sigma);
}

TEST_CASE("OU sampling determinism and kind check") {
    const NoiseModel m = NoiseModel::ornstein_uhlenbeck(1.0, 3.0);
    const TimeGrid g(8.0, 801);
    CHECK(sample_ou(m, 5, g).values == sample_ou(m, 5, g).values);
    CHECK(sample_ou(m, 5, g).values != sample_ou(m, 6, g).values);
    CHECK_THROWS_AS(sample_ou(NoiseModel::static_gaussian(1), 5, g), std::invalid_argument);

    std::vector<double> into;
    sample_into(m, 5, g, into);
    CHECK(into == sample(m, 5, g).values);
}

TEST_CASE("OU with huge correlation time behaves as static") {
    const TimeGrid g(8.0, 801);
    const NoiseModel m = NoiseModel::ornstein_uhlenbeck(1.0, 1e6 * g.step());
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto v = sample_ou(m, seed, g).values;
        double inc2 = 0.0;
        for (std::size_t i = 1; i < v.size(); ++i) inc2 += (v[i] - v[i - 1]) * (v[i] - v[i - 1]);
        CHECK(inc2 / static_cast<double>(v.size() - 1) < 0.01);
        CHECK(std::abs(v.back() - v.front()) < 0.2);
    }
}

TEST_CASE("OU stationarity and autocorrelation") {
    const double sigma = 1.0, tau = 0.5;
    const NoiseModel m = NoiseModel::ornstein_uhlenbeck(sigma, tau);
    const TimeGrid g(2.0, 41);  // dt = 0.05, lag tau = 10 steps
    const int n = 10000;
    std::vector<double> var(g.size(), 0.0);
    double lag_sum = 0.0;
    for (int k = 0; k < n; ++k) {
        const auto v = sample_ou(m, stream_key(3, k), g).values;
        for (std::size_t i = 0; i < v.size(); ++i) var[i] += v[i] * v[i];
        lag_sum += v[5] * v[15];
    }
    for (double s : var) CHECK(std::abs(s / n - sigma * sigma) <= 0.05 * sigma * sigma);
    CHECK(lag_sum / n == doctest::Approx(sigma * sigma * std::exp(-1.0)).epsilon(0.05));
}

TEST_CASE("power spectrum") {
    const NoiseModel m = NoiseModel::ornstein_uhlenbeck(1.3, 2.0);
    CHECK(power_spectrum(m, 0.0) == doctest::Approx(2 * 1.69 * 2.0));
    CHECK(power_spectrum(m, 0.5) == doctest::Approx(1.69 * 2.0));
    CHECK(power_spectrum(m, -0.7) == power_spectrum(m, 0.7));
    CHECK_THROWS_AS(power_spectrum(NoiseModel::static_gaussian(1), 0.0), std::invalid_argument);

    // Total power over +-200/tau by the trapezoid rule.
    const int n = 400000;
    const double w = 200.0 / m.tau, h = 2 * w / n;
    double total = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double wt = (i == 0 || i == n) ? 0.5 : 1.0;
        total += wt * power_spectrum(m, -w + i * h);
    }
    total *= h / (2 * M_PI);
    CHECK(total == doctest::Approx(1.69).epsilon(0.01));
}
