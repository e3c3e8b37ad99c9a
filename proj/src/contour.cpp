#include "hslpp/contour.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hslpp {

namespace {

constexpr double kPi = std::numbers::pi;

// 16-point Gauss-Legendre nodes/weights on [-1,1].
constexpr double kNodes[16] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
    -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
    0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
constexpr double kWeights[16] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
    0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

}  // namespace

namespace {

double loop_radius(const Loop& lp, double a) {
    return lp.r_back + (lp.r_front - lp.r_back) * 0.5 * (1.0 + std::cos(a));
}

}  // namespace

cplx ContourPiece::start() const {
    if (kind == Kind::Segment) return seg.z0;
    if (kind == Kind::Loop) return loop_radius(loop, loop.a0) * std::polar(1.0, loop.a0);
    return arc.center + arc.radius * std::polar(1.0, arc.a0);
}

cplx ContourPiece::end() const {
    if (kind == Kind::Segment) return seg.z1;
    if (kind == Kind::Loop) return loop_radius(loop, loop.a1) * std::polar(1.0, loop.a1);
    return arc.center + arc.radius * std::polar(1.0, arc.a1);
}

void ContourPiece::at(double u, cplx& z, cplx& dz) const {
    if (kind == Kind::Segment) {
        z = seg.z0 + u * (seg.z1 - seg.z0);
        dz = seg.z1 - seg.z0;
    } else if (kind == Kind::Loop) {
        double span = loop.a1 - loop.a0;
        double a = loop.a0 + u * span;
        cplx e = std::polar(1.0, a);
        double r = loop_radius(loop, a);
        double dr = -(loop.r_front - loop.r_back) * 0.5 * std::sin(a);
        z = r * e;
        dz = (dr + cplx(0.0, 1.0) * r) * e * span;
    } else {
        double a = arc.a0 + u * (arc.a1 - arc.a0);
        cplx e = std::polar(1.0, a);
        z = arc.center + arc.radius * e;
        dz = cplx(0.0, 1.0) * arc.radius * e * (arc.a1 - arc.a0);
    }
}

bool Contour::is_connected(double tol) const {
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i)
        if (std::abs(pieces[i].end() - pieces[i + 1].start()) > tol) return false;
    if (closed && !pieces.empty() &&
        std::abs(pieces.back().end() - pieces.front().start()) > tol)
        return false;
    return true;
}

namespace {

// Append the counterclockwise arc about `center` from angle a0 to a1
// (a1 > a0), splitting at odd multiples of pi.
void append_ccw_arc(Contour& ct, cplx center, double radius, double a0, double a1) {
    double cut = std::ceil((a0 - kPi) / (2.0 * kPi)) * 2.0 * kPi + kPi;  // first cut > a0
    double lo = a0;
    while (cut < a1 - 1e-14) {
        ct.pieces.push_back(ContourPiece::arc_piece(center, radius, lo, cut));
        lo = cut;
        cut += 2.0 * kPi;
    }
    ct.pieces.push_back(ContourPiece::arc_piece(center, radius, lo, a1));
}

}  // namespace

Contour build_contour_C(double x, double theta, double R, double r) {
    if (!(x > 0.0)) throw std::domain_error("build_contour_C: x must be positive");
    if (!(theta > 0.0 && theta < kPi)) throw std::domain_error("build_contour_C: theta must lie in (0,pi)");
    if (r < 0.0) throw std::domain_error("build_contour_C: r must be nonnegative");

    // First intersection of the rays x + t e^{+-i theta} with |z| = R: the
    // smallest positive root of t^2 + 2 x cos(theta) t + x^2 - R^2 = 0.  For
    // R > x there is one positive root; for R < x (obtuse wedges closed by a
    // smaller circle) both roots are positive and the near one is meant.
    double ct = std::cos(theta);
    double st = std::sin(theta);
    double disc = R * R - x * x * st * st;
    if (disc <= 0.0) throw std::domain_error("build_contour_C: rays do not reach |z| = R");
    double t_far = -x * ct + std::sqrt(disc);
    double t_near = -x * ct - std::sqrt(disc);
    double t_out = (t_near > 0.0) ? t_near : t_far;
    if (t_out <= r) throw std::domain_error("build_contour_C: r-circle lies outside |z| = R");

    cplx e_plus = std::polar(1.0, theta);
    cplx e_minus = std::conj(e_plus);
    cplx z_plus = x + r * e_plus;
    cplx z_minus = x + r * e_minus;
    cplx zeta_plus = x + t_out * e_plus;
    cplx zeta_minus = x + t_out * e_minus;
    double phi = std::arg(zeta_plus);  // in (0, pi)

    Contour ct_out;
    ct_out.closed = true;
    ct_out.pieces.push_back(ContourPiece::segment(zeta_minus, z_minus));
    if (r > 0.0) ct_out.pieces.push_back(ContourPiece::segment(z_minus, z_plus));
    ct_out.pieces.push_back(ContourPiece::segment(z_plus, zeta_plus));
    append_ccw_arc(ct_out, cplx(0.0, 0.0), R, phi, 2.0 * kPi - phi);
    return ct_out;
}

Contour circle_contour(double r) {
    if (!(r > 0.0)) throw std::domain_error("circle_contour: radius must be positive");
    Contour ct;
    ct.closed = true;
    ct.pieces.push_back(ContourPiece::arc_piece(cplx(0.0, 0.0), r, -kPi, 0.0));
    ct.pieces.push_back(ContourPiece::arc_piece(cplx(0.0, 0.0), r, 0.0, kPi));
    return ct;
}

Contour loop_contour(double r_front, double r_back) {
    if (!(r_back > 0.0 && r_front >= r_back))
        throw std::domain_error("loop_contour: need r_front >= r_back > 0");
    Contour ct;
    ct.closed = true;
    ct.pieces.push_back(ContourPiece::loop_piece(r_front, r_back, -kPi, -0.5 * kPi));
    ct.pieces.push_back(ContourPiece::loop_piece(r_front, r_back, -0.5 * kPi, 0.0));
    ct.pieces.push_back(ContourPiece::loop_piece(r_front, r_back, 0.0, 0.5 * kPi));
    ct.pieces.push_back(ContourPiece::loop_piece(r_front, r_back, 0.5 * kPi, kPi));
    return ct;
}

namespace {

cplx gl16(const std::function<cplx(cplx)>& f, const ContourPiece& piece, double a, double b,
          double& l1) {
    cplx acc(0.0, 0.0);
    double mid = 0.5 * (a + b);
    double half = 0.5 * (b - a);
    for (int k = 0; k < 16; ++k) {
        cplx z, dz;
        piece.at(mid + half * kNodes[k], z, dz);
        cplx fv = f(z) * dz;
        acc += kWeights[k] * fv;
        l1 += kWeights[k] * std::abs(fv);
    }
    l1 *= half;
    return acc * half;
}

void adapt(const std::function<cplx(cplx)>& f, const ContourPiece& piece, double a, double b,
           cplx coarse, double tol, double rel_floor, int depth, cplx& value, double& err) {
    double mid = 0.5 * (a + b);
    double l1l = 0.0, l1r = 0.0;
    cplx left = gl16(f, piece, a, mid, l1l);
    cplx right = gl16(f, piece, mid, b, l1r);
    double diff = std::abs(coarse - left - right);
    // Stop refining once the disagreement is at the noise floor relative to
    // the local mass of the integrand; further splitting cannot improve it.
    double floor_tol = rel_floor * (l1l + l1r);
    if (diff <= tol || diff <= floor_tol || depth >= 24) {
        value += left + right;
        err += diff;
        return;
    }
    adapt(f, piece, a, mid, left, 0.5 * tol, rel_floor, depth + 1, value, err);
    adapt(f, piece, mid, b, right, 0.5 * tol, rel_floor, depth + 1, value, err);
}

}  // namespace

QuadResult quad_contour(const std::function<cplx(cplx)>& f, const Contour& contour, double tol,
                        double rel_floor) {
    if (contour.pieces.empty()) return {};
    QuadResult res;
    double piece_tol = tol / static_cast<double>(contour.pieces.size());
    for (const auto& piece : contour.pieces) {
        double l1 = 0.0;
        cplx coarse = gl16(f, piece, 0.0, 1.0, l1);
        adapt(f, piece, 0.0, 1.0, coarse, piece_tol, rel_floor, 0, res.value, res.err);
    }
    return res;
}

}  // namespace hslpp
