#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "hslpp/pfaffian.hpp"
#include "hslpp/rng.hpp"
#include "hslpp/schur.hpp"

using namespace hslpp;

namespace {

SkewMatrix random_skew(CounterRng& rng, int n) {
    SkewMatrix a(n, std::vector<cplx>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            a[i][j] = cplx(2.0 * rng.next_unit() - 1.0, 2.0 * rng.next_unit() - 1.0);
            a[j][i] = -a[i][j];
        }
    return a;
}

// Determinant by Gaussian elimination with partial pivoting; the reference
// for the Pf^2 = det identity.
cplx determinant(SkewMatrix a) {
    int n = static_cast<int>(a.size());
    cplx det = 1.0;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
        if (std::abs(a[piv][k]) == 0.0) return 0.0;
        if (piv != k) {
            std::swap(a[piv], a[k]);
            det = -det;
        }
        det *= a[k][k];
        for (int i = k + 1; i < n; ++i) {
            cplx f = a[i][k] / a[k][k];
            for (int j = k; j < n; ++j) a[i][j] -= f * a[k][j];
        }
    }
    return det;
}

}  // namespace

TEST_CASE("pfaffian closed forms in dimensions 0, 2, and 4") {
    CHECK(pfaffian({}) == cplx(1.0, 0.0));

    SkewMatrix a2(2, std::vector<cplx>(2, 0.0));
    a2[0][1] = cplx(3.5, -1.0);
    a2[1][0] = -a2[0][1];
    CHECK(std::abs(pfaffian(a2) - cplx(3.5, -1.0)) < 1e-14);

    CounterRng rng(17);
    SkewMatrix a4 = random_skew(rng, 4);
    cplx expect = a4[0][1] * a4[2][3] - a4[0][2] * a4[1][3] + a4[0][3] * a4[1][2];
    CHECK(std::abs(pfaffian(a4) - expect) < 1e-13);
}

TEST_CASE("odd dimensions have vanishing pfaffian") {
    CounterRng rng(23);
    for (int n : {1, 3, 5}) {
        SkewMatrix a = random_skew(rng, n);
        CHECK(std::abs(pfaffian(a)) < 1e-14);
    }
}

TEST_CASE("pfaffian squared equals the determinant") {
    CounterRng rng(31);
    for (int n : {2, 4, 6, 8, 10}) {
        SkewMatrix a = random_skew(rng, n);
        cplx pf = pfaffian(a);
        CHECK(std::abs(pf * pf - determinant(a)) < 1e-10);
    }
}

TEST_CASE("pfaffian reads only the strict upper triangle") {
    CounterRng rng(37);
    SkewMatrix a = random_skew(rng, 6);
    SkewMatrix garbled = a;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j <= i; ++j) garbled[i][j] = cplx(99.0, -99.0);
    CHECK(std::abs(pfaffian(a) - pfaffian(garbled)) < 1e-12);
}

TEST_CASE("two-point correlations of the exact kernel match enumeration at N=2") {
    GeomParams params{0.5, 1.4};
    double tail = 0;
    auto cfgs = enumerate_exact(params, 2, 60, &tail);
    REQUIRE(tail < 1e-7);
    // Particles at level m=2 sit at lambda_i(2,2) - i for i = 1, 2.
    std::map<std::pair<long long, long long>, double> rho2;
    for (const auto& [seq, p] : cfgs) {
        const Partition& lam = seq.lam[0];
        rho2[{lam.part(2) - 2, lam.part(1) - 1}] += p;
    }
    int checked = 0;
    for (const auto& [key, prob] : rho2) {
        if (prob < 0.05 || checked >= 3) continue;
        ++checked;
        auto [x1, x2] = key;
        auto kernel = [&](int i, int j) {
            long long xs[2] = {x1, x2};
            return kernel_geo(params, 2, 2, 2, xs[i], xs[j], 1e-10);
        };
        CorrelationResult r = correlation_fn(2, kernel);
        CHECK(r.value == doctest::Approx(prob).epsilon(1e-5));
        CHECK(r.imag_residual < 1e-9);
    }
    CHECK(checked == 3);
}

TEST_CASE("one-point correlation reduces to the k12 entry") {
    GeomParams params{0.5, 1.4};
    Kernel2x2 K = kernel_geo(params, 2, 2, 2, 0, 0, 1e-10);
    CorrelationResult r = correlation_fn(1, [&](int, int) { return K; });
    CHECK(r.value == doctest::Approx(K.k12.real()).epsilon(1e-12));
}

TEST_CASE("tail sums of a geometric intensity match the closed form") {
    // density(x) = (1-alpha) alpha^k on the lattice x = k >= 0; the tail from
    // k0 is alpha^{k0}.
    double alpha = 0.6;
    LatticeSpec lattice{1.0, 0.0};
    auto density = [&](double x) {
        long long k = static_cast<long long>(std::llround(x));
        return k >= 0 ? (1.0 - alpha) * std::pow(alpha, static_cast<double>(k)) : 0.0;
    };
    for (long long k0 : {0LL, 3LL, 10LL}) {
        TailSumResult r = first_intensity_tail(density, lattice, static_cast<double>(k0));
        CHECK(r.converged);
        CHECK(r.value == doctest::Approx(std::pow(alpha, static_cast<double>(k0))).epsilon(1e-10));
    }
    TailSumResult shifted =
        first_intensity_tail(density, lattice, 2.0, 0.25);
    CHECK(shifted.value == doctest::Approx(0.25 + std::pow(alpha, 2.0)).epsilon(1e-10));
}

TEST_CASE("Brownian determinantal structure holds in Monte Carlo (smoke)") {
    BmCheckResult r = bm_determinantal_check(20000, 11, 0.5, 1.0, 2.0, 99);
    CHECK(r.paths == 20000);
    CHECK(r.max_abs_err_1pt < 0.05);
    CHECK(r.max_abs_err_2pt < 0.05);
}
