#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hslpp/lpp.hpp"
#include "hslpp/rng.hpp"

using namespace hslpp;

namespace {

WeightArray random_array(CounterRng& rng, int n, long long max_entry) {
    WeightArray w(n);
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j)
            w.set(i, j, static_cast<long long>(rng.next_u64() % (max_entry + 1)));
    return w;
}

}  // namespace

TEST_CASE("weight array stores a symmetric matrix with 1-based access") {
    WeightArray w(3);
    w.set(1, 2, 7);
    w.set(3, 3, 4);
    CHECK(w(2, 1) == 7);
    CHECK(w(1, 2) == 7);
    CHECK(w(3, 3) == 4);
    CHECK(w.is_symmetric());
    CHECK_THROWS_AS(w(0, 1), std::out_of_range);
    CHECK_THROWS_AS(w(1, 4), std::out_of_range);
}

TEST_CASE("rectangle_sum matches a direct double loop") {
    CounterRng rng(11);
    WeightArray w = random_array(rng, 5, 9);
    for (int m = 1; m <= 5; ++m)
        for (int n = 1; n <= 5; ++n) {
            long long direct = 0;
            for (int i = 1; i <= m; ++i)
                for (int j = 1; j <= n; ++j) direct += w(i, j);
            CHECK(w.rectangle_sum(m, n) == direct);
        }
}

TEST_CASE("sample_weights is symmetric, deterministic, and seed-sensitive") {
    GeomParams params{0.5, 1.4};
    WeightArray a = sample_weights(params, 20, 42);
    WeightArray b = sample_weights(params, 20, 42);
    WeightArray c = sample_weights(params, 20, 43);
    CHECK(a.is_symmetric());
    bool same = true, differ = false;
    for (int i = 1; i <= 20; ++i)
        for (int j = 1; j <= 20; ++j) {
            same = same && a(i, j) == b(i, j);
            differ = differ || a(i, j) != c(i, j);
        }
    CHECK(same);
    CHECK(differ);
}

TEST_CASE("sampled weight means track the geometric parameters") {
    GeomParams params{0.5, 1.4};
    // Geom(alpha) on {0,1,...} has mean alpha/(1-alpha).
    double mean_off = 0, mean_diag = 0;
    int n = 120;
    WeightArray w = sample_weights(params, n, 7);
    for (int i = 1; i <= n; ++i) {
        mean_diag += static_cast<double>(w(i, i)) / n;
        for (int j = i + 1; j <= n; ++j)
            mean_off += static_cast<double>(w(i, j)) / (0.5 * n * (n - 1));
    }
    double q2 = params.q * params.q, cq = params.c * params.q;
    CHECK(std::abs(mean_off - q2 / (1 - q2)) < 0.05);
    CHECK(std::abs(mean_diag - cq / (1 - cq)) < 0.8);
}

TEST_CASE("last_passage_g1 equals the first Greene part") {
    CounterRng rng(5);
    for (int rep = 0; rep < 40; ++rep) {
        int n = 1 + static_cast<int>(rng.next_u64() % 5);
        WeightArray w = random_array(rng, n, 4);
        for (int m = 1; m <= n; ++m) {
            Partition lam = greene_shape(w, m, n);
            CHECK(last_passage_g1(w, m, n) == lam.part(1));
        }
    }
}

TEST_CASE("greene_shape cumulative sums equal the disjoint-path maxima") {
    CounterRng rng(7);
    for (int rep = 0; rep < 60; ++rep) {
        int m = 1 + static_cast<int>(rng.next_u64() % 4);
        int n = 1 + static_cast<int>(rng.next_u64() % 4);
        WeightArray w = random_array(rng, std::max(m, n), 3);
        Partition lam = greene_shape(w, m, n);
        long long cum = 0;
        for (int k = 1; k <= std::min(m, n); ++k) {
            cum += lam.part(k);
            CHECK(cum == brute_force_gk(w, m, n, k));
        }
    }
}

TEST_CASE("greene_shape truncation reproduces the leading rows exactly") {
    CounterRng rng(9);
    for (int rep = 0; rep < 20; ++rep) {
        WeightArray w = random_array(rng, 6, 3);
        Partition full = greene_shape(w, 6, 6);
        for (std::size_t k = 1; k <= 3; ++k) {
            Partition trunc = greene_shape(w, 6, 6, k);
            REQUIRE(trunc.length() <= k);
            for (std::size_t i = 1; i <= k; ++i) CHECK(trunc.part(i) == full.part(i));
        }
    }
}

TEST_CASE("lambda_family interlaces and matches per-level shapes") {
    GeomParams params{0.5, 1.4};
    WeightArray w = sample_weights(params, 12, 3);
    LineEnsembleDiscrete fam = lambda_family(w);
    REQUIRE(fam.N == 12);
    REQUIRE(fam.by_m.size() == 13);
    CHECK(fam.interlaced());
    for (int m = 0; m <= 12; ++m) {
        Partition direct = (m == 0) ? Partition{} : greene_shape(w, m, 12);
        CHECK(fam.by_m[m] == direct);
    }
}

TEST_CASE("interlacing check rejects a broken chain") {
    LineEnsembleDiscrete fam;
    fam.N = 2;
    fam.by_m = {Partition{}, Partition{{3}}, Partition{{2}}};
    CHECK_FALSE(fam.interlaced());
}

TEST_CASE("parameter validation rejects out-of-range q and c") {
    CHECK_THROWS_AS((GeomParams{1.2, 0.5}).validate(), std::domain_error);
    CHECK_THROWS_AS((GeomParams{0.5, 2.5}).validate(), std::domain_error);
    CHECK_NOTHROW((GeomParams{0.5, 1.4}).validate());
}
