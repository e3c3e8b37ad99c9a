#include "hslpp/pfaffian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hslpp/rng.hpp"

namespace hslpp {

namespace {

// Cofactor expansion along the first row; used for small matrices where the
// O(n!!) cost is irrelevant and exactness of the recursion is convenient.
cplx pfaffian_cofactor(const SkewMatrix& a) {
    std::size_t n = a.size();
    if (n == 0) return {1.0, 0.0};
    if (n % 2 == 1) return {0.0, 0.0};
    if (n == 2) return a[0][1];
    cplx res(0.0, 0.0);
    for (std::size_t j = 1; j < n; ++j) {
        double sign = (j % 2 == 1) ? 1.0 : -1.0;
        SkewMatrix minor;
        minor.reserve(n - 2);
        for (std::size_t r = 1; r < n; ++r) {
            if (r == j) continue;
            std::vector<cplx> row;
            row.reserve(n - 2);
            for (std::size_t c = 1; c < n; ++c)
                if (c != j) row.push_back(a[r][c]);
            minor.push_back(std::move(row));
        }
        res += sign * a[0][j] * pfaffian_cofactor(minor);
    }
    return res;
}

// Parlett-Reid tridiagonalization with row/column pivoting.
cplx pfaffian_parlett_reid(SkewMatrix a) {
    std::size_t n = a.size();
    cplx pf(1.0, 0.0);
    for (std::size_t k = 0; k + 1 < n; k += 2) {
        std::size_t p = k + 1;
        for (std::size_t i = k + 2; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
        if (p != k + 1) {
            std::swap(a[p], a[k + 1]);
            for (auto& row : a) std::swap(row[p], row[k + 1]);
            pf = -pf;
        }
        cplx piv = a[k + 1][k];
        if (piv == cplx(0.0, 0.0)) return {0.0, 0.0};
        pf *= a[k][k + 1];
        for (std::size_t i = k + 2; i < n; ++i) {
            cplx tau = a[k][i] / a[k][k + 1];
            for (std::size_t j = k + 2; j < n; ++j)
                a[i][j] += tau * a[j][k + 1] - a[i][k + 1] * (a[k][j] / a[k][k + 1]);
        }
    }
    return pf;
}

}  // namespace

cplx pfaffian(const SkewMatrix& a) {
    std::size_t n = a.size();
    if (n % 2 == 1) return {0.0, 0.0};
    SkewMatrix s(n, std::vector<cplx>(n, cplx(0.0, 0.0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            s[i][j] = a[i][j];
            s[j][i] = -a[i][j];
        }
    if (n < 10) return pfaffian_cofactor(s);
    return pfaffian_parlett_reid(std::move(s));
}

CorrelationResult correlation_fn(int npts, const std::function<Kernel2x2(int, int)>& kernel) {
    if (npts < 1) throw std::domain_error("correlation_fn: need at least one point");
    std::size_t n = 2 * static_cast<std::size_t>(npts);
    SkewMatrix m(n, std::vector<cplx>(n, cplx(0.0, 0.0)));
    for (int i = 0; i < npts; ++i) {
        for (int j = i; j < npts; ++j) {
            Kernel2x2 k = kernel(i, j);
            std::size_t r = 2 * static_cast<std::size_t>(i);
            std::size_t c = 2 * static_cast<std::size_t>(j);
            if (i == j) {
                // K11 and K22 vanish on the diagonal by skew-symmetry of the
                // kernel; force exact zeros so the Pfaffian sees a clean block.
                m[r][c + 1] = k.k12;
            } else {
                m[r][c] = k.k11;
                m[r][c + 1] = k.k12;
                m[r + 1][c] = k.k21;
                m[r + 1][c + 1] = k.k22;
            }
        }
    }
    cplx pf = pfaffian(m);
    return {pf.real(), std::abs(pf.imag())};
}

TailSumResult first_intensity_tail(const std::function<double(double)>& density_at,
                                   const LatticeSpec& lattice, double a, double extra) {
    constexpr long long kMaxTerms = 1000000;
    constexpr int kQuietRun = 20;
    constexpr double kRelCut = 1e-14;

    TailSumResult res;
    res.value = extra;
    long long k = lattice.first_index_at_or_above(a);
    int quiet = 0;
    while (res.terms < kMaxTerms) {
        double term = density_at(lattice.point(k));
        res.value += term;
        ++res.terms;
        ++k;
        double scale = std::max(std::abs(res.value), 1e-300);
        if (std::abs(term) < kRelCut * scale) {
            if (++quiet >= kQuietRun) {
                res.converged = true;
                break;
            }
        } else {
            quiet = 0;
        }
    }
    return res;
}

BmCheckResult bm_determinantal_check(long long n_paths, int n_bins, double s, double t,
                                     double range, unsigned long long seed) {
    if (!(0.0 < s && s < t)) throw std::domain_error("bm_determinantal_check: need 0 < s < t");
    if (n_bins < 2 || n_paths < 1 || range <= 0.0)
        throw std::domain_error("bm_determinantal_check: bad histogram parameters");

    CounterRng rng(seed);
    auto gauss = [&rng]() {
        double u1 = rng.next_unit(), u2 = rng.next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    };

    double width = 2.0 * range / n_bins;
    std::vector<double> h1(n_bins, 0.0);
    std::vector<double> h2(static_cast<std::size_t>(n_bins) * n_bins, 0.0);
    auto bin_of = [&](double x) {
        int b = static_cast<int>(std::floor((x + range) / width));
        return (b >= 0 && b < n_bins) ? b : -1;
    };

    for (long long p = 0; p < n_paths; ++p) {
        double bs = std::sqrt(s) * gauss();
        double bt = bs + std::sqrt(t - s) * gauss();
        int i = bin_of(bs), j = bin_of(bt);
        if (i >= 0) h1[i] += 1.0;
        if (i >= 0 && j >= 0) h2[static_cast<std::size_t>(i) * n_bins + j] += 1.0;
    }

    BmCheckResult res;
    res.paths = n_paths;
    double np = static_cast<double>(n_paths);
    for (int i = 0; i < n_bins; ++i) {
        double x = -range + (i + 0.5) * width;
        double emp = h1[i] / (np * width);
        res.max_abs_err_1pt = std::max(res.max_abs_err_1pt, std::abs(emp - kbm(s, x, s, x)));
        for (int j = 0; j < n_bins; ++j) {
            double y = -range + (j + 0.5) * width;
            double emp2 = h2[static_cast<std::size_t>(i) * n_bins + j] / (np * width * width);
            double det = kbm(s, x, s, x) * kbm(t, y, t, y) - kbm(s, x, t, y) * kbm(t, y, s, x);
            res.max_abs_err_2pt = std::max(res.max_abs_err_2pt, std::abs(emp2 - det));
        }
    }
    return res;
}

}  // namespace hslpp
