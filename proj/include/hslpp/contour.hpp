// Oriented integration contours (segments and circular arcs) and adaptive
// composite Gauss-Legendre quadrature along them.

#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace hslpp {

using cplx = std::complex<double>;

struct Segment {
    cplx z0, z1;
};

/// Arc of a circle, traversed from angle a0 to a1 (counterclockwise when
/// a1 > a0).
struct Arc {
    cplx center;
    double radius = 0;
    double a0 = 0, a1 = 0;
};

/// Origin-centred loop whose radius interpolates between r_front at angle 0
/// and r_back at angle pi: r(a) = r_back + (r_front - r_back) (1 + cos a) / 2.
struct Loop {
    double r_front = 0, r_back = 0;
    double a0 = 0, a1 = 0;
};

struct ContourPiece {
    enum class Kind { Segment, Arc, Loop } kind;
    Segment seg{};
    Arc arc{};
    Loop loop{};

    static ContourPiece segment(cplx z0, cplx z1) { return {Kind::Segment, {z0, z1}, {}}; }
    static ContourPiece arc_piece(cplx center, double radius, double a0, double a1) {
        return {Kind::Arc, {}, {center, radius, a0, a1}};
    }
    static ContourPiece loop_piece(double r_front, double r_back, double a0, double a1) {
        return {Kind::Loop, {}, {}, {r_front, r_back, a0, a1}};
    }

    cplx start() const;
    cplx end() const;
    /// Point and derivative dz/du of the parameterization on u in [0,1].
    void at(double u, cplx& z, cplx& dz) const;
};

struct Contour {
    std::vector<ContourPiece> pieces;
    bool closed = false;

    /// Verify end-to-start continuity within tol.
    bool is_connected(double tol = 1e-12) const;
};

/// The wedge-plus-arc contour C(x, theta, R, r): rays from the circle
/// |z - x| = r out to |z| = R at angles +-theta, the connecting vertical
/// chord, and the counterclockwise closing arc on |z| = R.  Arcs crossing
/// the negative real axis are split there so that quadrature panels never
/// straddle the principal-branch cut.
Contour build_contour_C(double x, double theta, double R, double r);

/// Positively oriented circle of radius r about the origin, split at the
/// negative real axis.
Contour circle_contour(double r);

/// Positively oriented origin-centred loop with radius r_front at angle 0
/// shrinking smoothly to r_back at angle pi, split at the negative real axis.
/// Useful for factors whose modulus on a circle would peak spuriously at the
/// back of the contour.
Contour loop_contour(double r_front, double r_back);

struct QuadResult {
    cplx value{0.0, 0.0};
    double err = 0.0;
};

/// Adaptive composite 16-point Gauss-Legendre quadrature of f along the
/// contour, with dyadic panel refinement to the absolute tolerance.
// rel_floor bounds the achievable relative accuracy of the integrand itself:
// subdivision stops once the coarse/fine disagreement on a panel falls below
// rel_floor times the panel's L1 mass. The default matches double rounding;
// raise it when f is itself computed by quadrature with a larger error.
QuadResult quad_contour(const std::function<cplx(cplx)>& f, const Contour& contour, double tol,
                        double rel_floor = 1e-14);

}  // namespace hslpp
