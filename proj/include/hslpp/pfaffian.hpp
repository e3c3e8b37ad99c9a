// Pfaffian evaluation and Pfaffian point-process correlation functions.
//
// Correlation functions of the half-space ensembles are Pfaffians of 2k x 2k
// skew-symmetric block matrices built from a 2 x 2 matrix kernel.  This module
// evaluates Pfaffians (cofactor expansion for small matrices, Parlett-Reid
// tridiagonalization with pivoting otherwise), assembles correlation matrices
// from a kernel callback, sums kernel diagonals into expected counting tails,
// and provides a Monte Carlo check of the determinantal structure of the
// Brownian motion kernel.

#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "hslpp/contour.hpp"
#include "hslpp/kernels.hpp"
#include "hslpp/scaling.hpp"

namespace hslpp {

using SkewMatrix = std::vector<std::vector<cplx>>;

/// Pfaffian of a skew-symmetric matrix.  Returns 0 for odd dimension.  The
/// input is not required to be exactly skew; only the strictly upper triangle
/// is read and the lower triangle is rebuilt as its negation.
cplx pfaffian(const SkewMatrix& a);

struct CorrelationResult {
    double value = 0;          ///< real part of the Pfaffian
    double imag_residual = 0;  ///< |imaginary part|, should be at noise level
};

/// k-point correlation function rho(p_1, ..., p_k) = Pf(M) where M is the
/// 2k x 2k skew matrix with blocks [[K11, K12], [K21, K22]] = kernel(i, j).
/// Only pairs i <= j are requested; the lower triangle follows by
/// skew-symmetry and the diagonal K11/K22 entries are forced to zero.
CorrelationResult correlation_fn(int npts, const std::function<Kernel2x2(int, int)>& kernel);

struct TailSumResult {
    double value = 0;
    long long terms = 0;
    bool converged = false;
};

/// Expected number of particles at or above level `a`:
///   value = extra + sum_{x in lattice, x >= a} density_at(x).
/// `density_at` receives the rescaled lattice point and must return the
/// (already normalized) one-point intensity there.  Summation stops once 20
/// consecutive terms fall below 1e-14 of the running total, with a hard cap
/// of 1e6 terms.
TailSumResult first_intensity_tail(const std::function<double(double)>& density_at,
                                   const LatticeSpec& lattice, double a, double extra = 0.0);

struct BmCheckResult {
    double max_abs_err_1pt = 0;  ///< histogram vs K^BM(s,x;s,x)
    double max_abs_err_2pt = 0;  ///< 2d histogram vs det of the K^BM block
    long long paths = 0;
};

/// Monte Carlo verification that a single Brownian path, observed at times
/// s < t, forms a determinantal process with kernel kbm: the one-point
/// intensity equals K^BM(s,x;s,x) and the two-point intensity equals the
/// 2 x 2 determinant.  Densities are estimated by histograms over
/// [-range, range] and compared pointwise.
BmCheckResult bm_determinantal_check(long long n_paths, int n_bins, double s, double t,
                                     double range, unsigned long long seed);

}  // namespace hslpp
