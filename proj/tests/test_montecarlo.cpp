#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>

#include "hslpp/montecarlo.hpp"
#include "hslpp/rng.hpp"

using namespace hslpp;

TEST_CASE("summary statistics on a hand-checked sample") {
    SummaryStats s = summarize({1.0, 2.0, 3.0, 4.0});
    CHECK(s.count == 4);
    CHECK(s.mean == doctest::Approx(2.5));
    CHECK(s.variance == doctest::Approx(5.0 / 3.0));
    CHECK(s.skewness == doctest::Approx(0.0));
}

TEST_CASE("ks statistic against a known cdf on a tiny sample") {
    // Sample {0.5} vs U(0,1): F_n jumps 0 -> 1 at 0.5, so D = 0.5.
    double d = ks_statistic({0.5}, [](double x) { return std::min(1.0, std::max(0.0, x)); });
    CHECK(d == doctest::Approx(0.5));
    // Perfectly placed quantiles of U(0,1) at n=4: D = 1/8.
    double d4 = ks_statistic({0.125, 0.375, 0.625, 0.875},
                             [](double x) { return std::min(1.0, std::max(0.0, x)); });
    CHECK(d4 == doctest::Approx(0.125));
}

TEST_CASE("two-sample ks distance on disjoint and identical samples") {
    CHECK(ks_two_sample({1.0, 2.0}, {5.0, 6.0}) == doctest::Approx(1.0));
    CHECK(ks_two_sample({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) <= doctest::Approx(1.0 / 3.0));
}

TEST_CASE("normal cdf endpoints and symmetry") {
    CHECK(normal_cdf(0.0, 0.0, 1.0) == doctest::Approx(0.5));
    CHECK(normal_cdf(1.0, 0.0, 1.0) + normal_cdf(-1.0, 0.0, 1.0) == doctest::Approx(1.0));
    CHECK(normal_cdf(3.0, 1.0, 4.0) == doctest::Approx(normal_cdf(1.0, 0.0, 1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(normal_cdf(0.0, 0.0, 0.0), std::domain_error);
}

TEST_CASE("ks distance of a Gaussian sample against its own law is small") {
    CounterRng rng(3);
    std::vector<double> xs(4000);
    for (auto& x : xs) {
        // Box-Muller from the counter rng.
        double u1 = rng.next_unit(), u2 = rng.next_unit();
        x = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
    double d = ks_statistic(xs, [](double x) { return normal_cdf(x, 0.0, 1.0); });
    CHECK(d < 0.03);
}

TEST_CASE("parallel_for covers each index exactly once") {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(1000, 4, [&](long long i) { hits[i]++; });
    for (const auto& h : hits) CHECK(h.load() == 1);
}

TEST_CASE("experiments are reproducible for a fixed seed and thread count") {
    ExperimentConfig cfg;
    cfg.params = {0.5, 1.4};
    cfg.N = 60;
    cfg.replicas = 16;
    cfg.seed = 91;
    cfg.times = {0.5};
    auto a = run_top_experiment(cfg);
    cfg.threads = 3;
    auto b = run_top_experiment(cfg);
    REQUIRE(a[0].size() == b[0].size());
    for (std::size_t r = 0; r < a[0].size(); ++r) CHECK(a[0][r] == b[0][r]);
}

TEST_CASE("top experiment statistics are in the right regime at modest size") {
    ExperimentConfig cfg;
    cfg.params = {0.5, 1.4};
    cfg.N = 120;
    cfg.replicas = 400;
    cfg.seed = 5;
    cfg.times = {0.6};
    auto samples = run_top_experiment(cfg);
    SummaryStats s = summarize(samples[0]);
    EdgeScaling es = edge_params(0.5, 1.4);
    CHECK(std::abs(s.mean) < 0.2);
    CHECK(s.variance == doctest::Approx(0.6 - es.kappa0).epsilon(0.35));
}

TEST_CASE("bottom experiment keeps the first two curves ordered") {
    ExperimentConfig cfg;
    cfg.params = {0.5, 1.4};
    cfg.N = 80;
    cfg.replicas = 60;
    cfg.seed = 13;
    cfg.times = {0.0};
    cfg.kappa = 0.36;
    auto s = run_bottom_experiment(cfg);
    REQUIRE(s.size() == 2);
    for (long long r = 0; r < cfg.replicas; ++r) CHECK(s[0][0][r] >= s[1][0][r]);
}

TEST_CASE("profile run returns consistent curves and rescalings") {
    ProfileResult pr = run_profile({0.5, 1.4}, 50, 0.36, 77, 3);
    REQUIRE(pr.curves.size() == 3);
    REQUIRE(pr.curves[0].size() == 51);
    // Curves are ordered and nondecreasing in m.
    for (int m = 0; m <= 50; ++m) {
        CHECK(pr.curves[0][m] >= pr.curves[1][m]);
        CHECK(pr.curves[1][m] >= pr.curves[2][m]);
        if (m > 0) CHECK(pr.curves[0][m] >= pr.curves[0][m - 1]);
    }
    CHECK_FALSE(pr.top_scaled.t.empty());
    CHECK_FALSE(pr.bottom_scaled.t.empty());
}

TEST_CASE("thread resolution prefers the explicit request") {
    CHECK(resolve_threads(7) == 7);
    CHECK(resolve_threads(0) >= 1);
}
