// Correlation kernels of the half-space geometric LPP point processes: the
// exact finite-N kernel K^geo, the rescaled prelimit kernels in the bulk
// (N^{1/3}) and edge (N^{1/2}) frames, and the limiting extended-Airy and
// Brownian kernels, together with steepest-descent certification utilities.

#pragma once

#include <complex>

#include "hslpp/contour.hpp"
#include "hslpp/lpp.hpp"
#include "hslpp/phase.hpp"
#include "hslpp/scaling.hpp"

namespace hslpp {

struct Kernel2x2 {
    cplx k11{0, 0}, k12{0, 0}, k21{0, 0}, k22{0, 0};
    double err_estimate = 0;
};

/// Exact correlation kernel of the Pfaffian Schur process at observation
/// levels M_u, M_v and integer positions x, y: three double contour integrals
/// with integer powers only (k21 filled via antisymmetry).  The entries span
/// wildly different scales, so a positive tol is read as a per-entry relative
/// accuracy floor; tol = 0 refines every entry to the quadrature noise floor.
Kernel2x2 kernel_geo(const GeomParams& params, int N, int M_u, int M_v, long long x, long long y,
                     double tol = 0.0);

/// One-point intensity rho_1(M, x) = K_12(M, x; M, x): the probability of a
/// particle at integer position x on level M.  Computes only the single
/// K_12 entry, which is roughly four times cheaper than kernel_geo.
double first_intensity_geo(const GeomParams& params, int N, int M, long long x, double tol = 0.0);

/// Contours of the bulk prelimit kernel.
struct BulkContours {
    Contour Gamma;        // C(z_c, theta, R, sec(theta) N^{-1/3})
    Contour gamma;        // C(z_c, 2pi/3, sqrt(z_c^2 + N^{-1/6} - z_c N^{-1/12}), 0)
    Contour gamma_tilde;  // C(z_c, pi/2, sqrt(z_c^2 + N^{-1/6}), 0)
};

/// Contours of the edge prelimit kernel at a fixed time kappa.
struct EdgeContours {
    Contour Gamma;        // C(c, theta, R, sec(theta) N^{-1/2})
    Contour gamma;        // circle of radius z_c(kappa)
    Contour gamma_tilde;  // C(c, pi/2, sqrt(c^2 + N^{-1/6}), 0)
};

/// Build and admissibility-check the contour families; throws with the
/// failing nesting inequality when N is too small.
BulkContours build_prelimit_contours(const BulkScaling& s, int N, double theta0, double R0);
EdgeContours build_prelimit_contours(const EdgeScaling& s, double kappa, int N, double theta0,
                                     double R0);

/// Prelimit kernel K^N = I^N + R^N in the bulk frame at scaled coordinates
/// (s,x), (t,y).  theta0/R0 <= 0 selects the cached descent parameters.
Kernel2x2 kernel_bulk_N(const BulkScaling& scaling, int N, double s, double t, double x, double y,
                        double theta0 = 0, double R0 = 0, double tol = 1e-9);

/// Prelimit kernel in the edge frame; s, t are times in (kappa0, 1).
Kernel2x2 kernel_edge_N(const EdgeScaling& scaling, int N, double s, double t, double x, double y,
                        double theta0 = 0, double R0 = 0, double tol = 1e-9);

/// Extended Airy kernel (heat-kernel subtraction plus double contour
/// integral over rays at angles pi/3 and 2pi/3).
double airy_kernel_ext(double t1, double x1, double t2, double x2, double tol = 1e-9);

/// Brownian-motion kernel K^BM.
double kbm(double s, double x, double t, double y);

/// Bulk limit of K^N_12: conjugated extended Airy kernel.
double limit_bulk_k12(double s, double x, double t, double y, double f1, double tol = 1e-8);

/// The same limit through its direct representation (heat term plus a
/// z-w double contour integral); used for cross-validation.
double limit_bulk_k12_direct(double s, double x, double t, double y, double f1, double tol = 1e-8);

/// Numerical certification of the steepest-descent inequalities.
struct DescentReport {
    int points = 0;
    // Sign violations of Re[S-bar] <= 0 along the descent contour (away
    // from the critical point).
    int descent_violations = 0;
    double max_res_bar = 0;  // max of Re[S-bar] at sampled points with r > r_min
    // Monotonicity of Re S / Re G on origin-centered circles of radius <= z_c.
    int circle_s_violations = 0;
    int circle_g_violations = 0;
    // Pointwise inequalities between the two critical values.
    double s1_diff = 0;  // S_1(z_c) - S_1(c), expected < 0
    double s2_diff = 0;  // S_2(z_c) - S_2(c), expected > 0
    bool clean() const { return descent_violations == 0; }
};

/// Sample Re[S-bar] along the contour at `grid` points and check the descent
/// sign conditions; also runs the circle-monotonicity and critical-value
/// spot checks for the (q, kappa, c) triple baked into the spec.
DescentReport descent_report(const PhaseSpec& spec, const Contour& contour, int grid,
                             double c_for_diff = 0);

/// Search (theta0, R0) with a clean descent report for the given anchor,
/// scanning theta0 downward from 0.45*pi and R0 upward from 1/q + 0.5.
/// Results are cached per (q, kappa, p_c).
std::pair<double, double> find_descent_parameters(const PhaseSpec& spec);

}  // namespace hslpp
