#include "hslpp/kernels.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace hslpp {

namespace {

constexpr double kPi = std::numbers::pi;

cplx ipow(cplx z, double n) { return std::pow(z, n); }

// exp of e_qinv*Log(1-q/z) + e_qz*Log(1-qz) + e_z*Log(z) + cst.  The prelimit
// integrands are assembled so that every genuinely multi-valued combination
// carries an integer total exponent at lattice-aligned arguments; summing the
// exponents before the single exp keeps the evaluation branch-safe and avoids
// overflow of the individually huge factors.
struct ExpFactor {
    double q = 0;
    double e_qinv = 0, e_qz = 0, e_z = 0, cst = 0;

    cplx operator()(cplx z) const {
        cplx ex = e_qinv * std::log(1.0 - q / z) + e_qz * std::log(1.0 - q * z) +
                  e_z * std::log(z) + cst;
        return std::exp(ex);
    }
};

// Nested adaptive double contour integral of f(z,w), z outer.  A tolerance of
// zero requests refinement all the way to the quadrature noise floors, which
// is the only meaningful target when the value of the integral is orders of
// magnitude below the modulus of the integrand.
cplx double_integral(const std::function<cplx(cplx, cplx)>& f, const Contour& cz,
                     const Contour& cw, double tol, double& err, double rel_floor = 1e-14) {
    double inner_err = 0;
    auto outer = [&](cplx z) {
        QuadResult in = quad_contour([&](cplx w) { return f(z, w); }, cw, 0.1 * tol, rel_floor);
        inner_err = std::max(inner_err, in.err);
        return in.value;
    };
    // The outer integrand carries the inner quadrature's error, which for
    // large-amplitude integrands sits well above double rounding; refining the
    // outer panels below that noise level only burns evaluations.  Measure the
    // noise at a few outer points and set the outer stopping floor from it.
    double pilot_val = 0, pilot_err = 0;
    for (const auto& piece : cz.pieces)
        for (double u : {0.0, 0.5, 1.0}) {
            cplx z, dz;
            piece.at(u, z, dz);
            QuadResult in = quad_contour([&](cplx w) { return f(z, w); }, cw, 0.1 * tol, rel_floor);
            pilot_val = std::max(pilot_val, std::abs(in.value));
            pilot_err = std::max(pilot_err, in.err);
        }
    double rel_noise = (pilot_val > 0) ? pilot_err / pilot_val : 0.0;
    QuadResult out = quad_contour(outer, cz, tol, std::max({1e-10, rel_floor, 3.0 * rel_noise}));
    err += out.err + inner_err;
    return out.value;
}

// 1/(2 pi i) and its square.
const cplx kInv2PiI = cplx(0.0, -1.0) / (2.0 * kPi);
const cplx kInv2PiISq = kInv2PiI * kInv2PiI;

double sample_min_abs(const Contour& ct, int per_piece = 200) {
    double mn = std::numeric_limits<double>::infinity();
    for (const auto& p : ct.pieces)
        for (int k = 0; k <= per_piece; ++k) {
            cplx z, dz;
            p.at(static_cast<double>(k) / per_piece, z, dz);
            mn = std::min(mn, std::abs(z));
        }
    return mn;
}

double sample_max_abs(const Contour& ct, int per_piece = 200) {
    double mx = 0;
    for (const auto& p : ct.pieces)
        for (int k = 0; k <= per_piece; ++k) {
            cplx z, dz;
            p.at(static_cast<double>(k) / per_piece, z, dz);
            mx = std::max(mx, std::abs(z));
        }
    return mx;
}

}  // namespace

// ---------------------------------------------------------------------------
// Exact finite-N kernel.
// ---------------------------------------------------------------------------

namespace {

// Real saddle radius of the phase N Log(1-q/r) - M Log(1-qr) - x Log r on
// (lo, hi); placing the circle contours near it keeps the integrand amplitude
// moderate instead of exponentially large in N.
double geo_saddle_radius(double q, int N, int M, long long x, double lo, double hi) {
    auto dphi = [&](double r) {
        return N * q / (r * (r - q)) + M * q / (1.0 - q * r) - static_cast<double>(x) / r;
    };
    double a = lo + 1e-9 * (hi - lo), b = hi - 1e-9 * (hi - lo);
    double fa = dphi(a), fb = dphi(b);
    double r = 0.5 * (lo + hi);
    if (fa * fb < 0.0) {
        for (int it = 0; it < 200; ++it) {
            double m = 0.5 * (a + b);
            double fm = dphi(m);
            if (fa * fm <= 0.0) {
                b = m;
            } else {
                a = m;
                fa = fm;
            }
        }
        r = 0.5 * (a + b);
    }
    // The bisection bracket may straddle the 1/q pole of the phase derivative;
    // never place a contour within 3% of it.
    if (std::abs(r - 1.0 / q) < 0.03 / q) r = (hi > 1.1 / q) ? 1.06 / q : 0.96 / q;
    return r;
}

// Radial amplitude a_x log r + a_qinv log|1 - q/rho| + a_qz log|1 - q rho| at
// rho = r (front of a contour) or rho = -r (back).
double radial_amp(double q, double a_x, double a_qinv, double a_qz, double r, bool back) {
    double s = back ? -1.0 : 1.0;
    return a_x * std::log(r) + a_qinv * std::log(std::abs(1.0 - s * q / r)) +
           a_qz * std::log(std::abs(1.0 - s * q * r));
}

// Grid minimizer of the radial amplitude over [lo, hi]; used to place the
// front and back radii of loop contours so that factors carrying negative
// powers of N stay as small as the pole constraints allow.
double argmin_radial(double q, double a_x, double a_qinv, double a_qz, double lo, double hi,
                     bool back) {
    double best_r = lo;
    double best = std::numeric_limits<double>::infinity();
    const int n = 240;
    for (int k = 0; k <= n; ++k) {
        double r = lo + (hi - lo) * k / n;
        double v = radial_amp(q, a_x, a_qinv, a_qz, r, back);
        if (v < best) {
            best = v;
            best_r = r;
        }
    }
    return best_r;
}

cplx kernel_geo_12(const GeomParams& params, int N, int M_u, int M_v, long long x, long long y,
                   double tol, double& err, double rel_floor) {
    double q = params.q, c = params.c;
    double hi = 1.0 / q;
    double base = std::max({c, q, 1.0});
    double margin = 0.02 * (hi - base);
    // w carries negative powers of N, so on a plain circle its modulus peaks
    // spuriously at the back of the contour and the integral hides enormous
    // cancellation.  A loop whose front crosses the axis at the w saddle and
    // whose back shrinks to the radial amplitude minimizer keeps the modulus
    // at the scale the saddle dictates.  The loop still winds once around the
    // poles at w = q and w = c, which sit on the axis inside its front radius.
    double sw = geo_saddle_radius(q, N, M_v, y, 1.0, hi);
    double rfw = std::min(std::max(sw, base + margin), hi - 2.0 * margin);
    double rbw = argmin_radial(q, static_cast<double>(y), -N, M_v, q + 0.3 * (1.0 - q), rfw, true);
    // z stays a circle near its saddle, strictly outside the w loop.
    double sz = geo_saddle_radius(q, N, M_u, x, 1.0, hi);
    double rz = std::min(std::max(sz, rfw + margin), hi - margin);
    Contour cz = circle_contour(rz);
    Contour cw = loop_contour(rfw, rbw);
    auto f = [&](cplx z, cplx w) {
        cplx num = (z * w - 1.0) * (z - c);
        cplx den = z * (z - w) * (z * z - 1.0) * (w - c);
        cplx powers = ipow(z, -static_cast<double>(x)) * ipow(w, static_cast<double>(y)) *
                      ipow(1.0 - q / z, N) * ipow(1.0 - q / w, -N) * ipow(1.0 - q * z, -M_u) *
                      ipow(1.0 - q * w, M_v);
        return num / den * powers;
    };
    cplx val = kInv2PiISq * double_integral(f, cz, cw, tol, err, rel_floor);
    if (M_u > M_v) {
        // For observation levels in this order the series representation wants
        // the w contour outside the z contour.  Pulling w inside crosses the
        // simple pole at w = z, whose residue collapses to a single integral.
        double a_x = static_cast<double>(y - x - 1);
        double d = static_cast<double>(M_v - M_u);
        double rr = argmin_radial(q, a_x, 0.0, d, 0.2, hi - 2.0 * margin, false);
        auto g = [&](cplx z) {
            return ipow(z, a_x) * ipow(1.0 - q * z, d);
        };
        QuadResult res = quad_contour(g, circle_contour(rr), tol, rel_floor);
        err += res.err;
        val -= kInv2PiI * res.value;
    }
    return val;
}

}  // namespace

Kernel2x2 kernel_geo(const GeomParams& params, int N, int M_u, int M_v, long long x, long long y,
                     double tol) {
    params.validate();
    if (M_u < 1 || M_u > N || M_v < 1 || M_v > N)
        throw std::domain_error("kernel_geo: observation levels must lie in 1..N");
    double q = params.q, c = params.c;
    // The four entries differ in scale by dozens of orders of magnitude, so an
    // absolute tolerance is meaningless here; a positive tol is instead read
    // as a per-entry relative accuracy floor, and zero refines each entry all
    // the way to the quadrature noise floor.
    double rel_floor = (tol > 0.0) ? tol : 1e-14;
    tol = 0.0;

    Kernel2x2 K;

    {  // K11: contours in (1, 1/q), each near its side's saddle.
        Contour cz = circle_contour(geo_saddle_radius(q, N, M_u, x, 1.0, 1.0 / q));
        Contour cw = circle_contour(geo_saddle_radius(q, N, M_v, y, 1.0, 1.0 / q));
        auto f = [&](cplx z, cplx w) {
            cplx num = (z - w) * (1.0 - c / z) * (1.0 - c / w);
            cplx den = (z * z - 1.0) * (w * w - 1.0) * (z * w - 1.0);
            cplx powers = ipow(z, -static_cast<double>(x)) * ipow(w, -static_cast<double>(y)) *
                          ipow(1.0 - q / z, N) * ipow(1.0 - q / w, N) * ipow(1.0 - q * z, -M_u) *
                          ipow(1.0 - q * w, -M_v);
            return num / den * powers;
        };
        K.k11 = kInv2PiISq * double_integral(f, cz, cw, tol, K.err_estimate, rel_floor);
    }

    K.k12 = kernel_geo_12(params, N, M_u, M_v, x, y, tol, K.err_estimate, rel_floor);
    K.k21 = -kernel_geo_12(params, N, M_v, M_u, y, x, tol, K.err_estimate, rel_floor);

    {  // K22: both sides carry negative powers of N.  Each runs over a loop
        // whose front crosses the axis near its saddle (outside the pole at c)
        // and whose back stays just outside radius 1, which keeps |zw| > 1
        // away from the 1/(zw - 1) pole.
        double hi = 1.0 / q;
        double base = std::max({c, q, 1.0});
        double margin = 0.02 * (hi - base);
        double sz = geo_saddle_radius(q, N, M_u, x, 1.0, hi);
        double sw = geo_saddle_radius(q, N, M_v, y, 1.0, hi);
        double rfz = std::min(std::max(sz, base + margin), hi - 2.0 * margin);
        double rfw = std::min(std::max(sw, base + 2.0 * margin), hi - margin);
        Contour cz = loop_contour(rfz, 1.03);
        Contour cw = loop_contour(std::max(rfw, rfz + margin), 1.06);
        auto f = [&](cplx z, cplx w) {
            cplx num = z - w;
            cplx den = (z * w - 1.0) * (z - c) * (w - c);
            cplx powers = ipow(z, static_cast<double>(x)) * ipow(w, static_cast<double>(y)) *
                          ipow(1.0 - q / z, -N) * ipow(1.0 - q / w, -N) * ipow(1.0 - q * z, M_u) *
                          ipow(1.0 - q * w, M_v);
            return num / den * powers;
        };
        K.k22 = kInv2PiISq * double_integral(f, cz, cw, tol, K.err_estimate, rel_floor);
    }

    return K;
}

double first_intensity_geo(const GeomParams& params, int N, int M, long long x, double tol) {
    params.validate();
    if (M < 1 || M > N)
        throw std::domain_error("first_intensity_geo: observation level must lie in 1..N");
    double rel_floor = (tol > 0.0) ? tol : 1e-14;
    double err = 0;
    return kernel_geo_12(params, N, M, M, x, x, 0.0, err, rel_floor).real();
}

// ---------------------------------------------------------------------------
// Prelimit contours.
// ---------------------------------------------------------------------------

BulkContours build_prelimit_contours(const BulkScaling& s, int N, double theta0, double R0) {
    if (!(theta0 > kPi / 4.0 && theta0 < kPi / 2.0))
        throw std::domain_error("build_prelimit_contours: theta must lie in (pi/4, pi/2)");
    if (!(R0 > 1.0 / s.q)) throw std::domain_error("build_prelimit_contours: R must exceed 1/q");
    double n13 = std::cbrt(static_cast<double>(N));
    double r = 1.0 / (std::cos(theta0) * n13);
    if (1.0 / s.q - s.c < r)
        throw std::domain_error("admissibility: 1/q - c < sec(theta) N^{-1/3}; increase N");
    double n16 = std::pow(static_cast<double>(N), -1.0 / 6.0);
    double n112 = std::pow(static_cast<double>(N), -1.0 / 12.0);
    double Rg2 = s.z_c * s.z_c + n16 - s.z_c * n112;
    if (Rg2 <= 1.0)
        throw std::domain_error("admissibility: gamma_N radius <= 1; increase N");

    BulkContours ct;
    ct.Gamma = build_contour_C(s.z_c, theta0, R0, r);
    ct.gamma = build_contour_C(s.z_c, 2.0 * kPi / 3.0, std::sqrt(Rg2), 0.0);
    ct.gamma_tilde = build_contour_C(s.z_c, kPi / 2.0, std::sqrt(s.z_c * s.z_c + n16), 0.0);

    // Nesting: |z| >= z_c + N^{-1/3} > z_c >= |w| > z_c - N^{-1/12} > 1.
    double zmin = sample_min_abs(ct.Gamma);
    double wmax = sample_max_abs(ct.gamma);
    double wmin = sample_min_abs(ct.gamma);
    if (zmin < s.z_c + 1.0 / n13 - 1e-9)
        throw std::domain_error("admissibility: min |z| on Gamma_N < z_c + N^{-1/3}");
    if (wmax > s.z_c + 1e-9)
        throw std::domain_error("admissibility: max |w| on gamma_N > z_c");
    if (wmin <= std::max(1.0, s.z_c - n112))
        throw std::domain_error("admissibility: min |w| on gamma_N too small; increase N");
    return ct;
}

EdgeContours build_prelimit_contours(const EdgeScaling& s, double kappa, int N, double theta0,
                                     double R0) {
    if (!(theta0 > kPi / 4.0 && theta0 < kPi / 2.0))
        throw std::domain_error("build_prelimit_contours: theta must lie in (pi/4, pi/2)");
    if (!(R0 > 1.0 / s.q)) throw std::domain_error("build_prelimit_contours: R must exceed 1/q");
    double n12 = std::sqrt(static_cast<double>(N));
    double r = 1.0 / (std::cos(theta0) * n12);
    if (1.0 / s.q - s.c < r)
        throw std::domain_error("admissibility: 1/q - c < sec(theta) N^{-1/2}; increase N");
    double rk = std::sqrt(kappa);
    double zck = (1.0 + s.q * rk) / (s.q + rk);
    if (!(s.c + 1.0 / n12 > zck))
        throw std::domain_error("admissibility: c + N^{-1/2} <= z_c(kappa)");

    EdgeContours ct;
    ct.Gamma = build_contour_C(s.c, theta0, R0, r);
    ct.gamma = circle_contour(zck);
    double n16 = std::pow(static_cast<double>(N), -1.0 / 6.0);
    ct.gamma_tilde = build_contour_C(s.c, kPi / 2.0, std::sqrt(s.c * s.c + n16), 0.0);
    return ct;
}

// ---------------------------------------------------------------------------
// Bulk prelimit kernel.
// ---------------------------------------------------------------------------

namespace {

struct BulkFrame {
    const BulkScaling& P;
    int N;
    double n13, n23;
    double S1v, G1v, S1c, G1c;  // phase values at z_c and c
    double frac;                // kappa N - floor(kappa N)

    explicit BulkFrame(const BulkScaling& p, int n) : P(p), N(n) {
        n13 = std::cbrt(static_cast<double>(N));
        n23 = n13 * n13;
        PhaseSpec sp = PhaseSpec::bulk(P);
        S1v = phase_eval(sp, {P.z_c, 0.0}, PhaseFn::S).real();
        G1v = phase_eval(sp, {P.z_c, 0.0}, PhaseFn::G).real();
        S1c = phase_eval(sp, {P.c, 0.0}, PhaseFn::S).real();
        G1c = phase_eval(sp, {P.c, 0.0}, PhaseFn::G).real();
        frac = P.kappa * N - std::floor(P.kappa * N);
    }

    double T(double s) const { return std::floor(s * n23); }
    double A(double x) const { return P.sigma1 * P.z_c * n13 * x; }
    double pref() const { return P.sigma1 * P.z_c * n13; }

    // exp(sign * (N S1bar + T_s G1bar - A(x) Log(z/z_c))) as combined exponents.
    ExpFactor side(int sign, double s, double x) const {
        ExpFactor e;
        e.q = P.q;
        double Ts = T(s);
        double Ax = A(x);
        e.e_qinv = sign * static_cast<double>(N);
        e.e_qz = sign * (-P.kappa * N - Ts);
        e.e_z = sign * (-(P.h1 * N + P.p1 * Ts + Ax));
        e.cst = sign * (-N * S1v - Ts * G1v + Ax * std::log(P.z_c));
        return e;
    }

    // Real value of exp(-N S1bar(c) - T_t G1bar(c) + A(y) log(c/z_c) - frac log(1-qc)).
    double const_at_c(double t, double y) const {
        double ex = -N * (S1c - S1v) - T(t) * (G1c - G1v) +
                    A(y) * (std::log(P.c) - std::log(P.z_c)) - frac * std::log(1.0 - P.q * P.c);
        return std::exp(ex);
    }
};

cplx bulk_I12_plus_R12(const BulkFrame& fr, const BulkContours& ct, double s, double t, double x,
                       double y, double tol, double& err) {
    const BulkScaling& P = fr.P;
    double q = P.q, c = P.c;

    ExpFactor Ez = fr.side(+1, s, x);
    Ez.e_qz += fr.frac;
    ExpFactor Ew = fr.side(-1, t, y);
    Ew.e_qz -= fr.frac;

    auto f12 = [&](cplx z, cplx w) {
        cplx H = (z * w - 1.0) * (z - c) / (z * (z - w) * (z * z - 1.0) * (w - c));
        return Ez(z) * Ew(w) * H;
    };
    cplx I12 = fr.pref() * kInv2PiISq * double_integral(f12, ct.Gamma, ct.gamma, tol, err);

    cplx R12(0.0, 0.0);
    if (s > t) {
        double dT = fr.T(s) - fr.T(t);
        ExpFactor Eg;
        Eg.q = q;
        Eg.e_qz = -dT;
        Eg.e_z = -dT * P.p1 + fr.A(y) - fr.A(x);
        Eg.cst = -dT * fr.G1v + (fr.A(x) - fr.A(y)) * std::log(P.z_c);
        QuadResult t1 = quad_contour([&](cplx z) { return Eg(z) / z; }, ct.gamma_tilde, tol);
        err += t1.err;
        R12 -= fr.pref() * kInv2PiI * t1.value;
    }
    double Cw = fr.const_at_c(t, y);
    QuadResult t2 = quad_contour(
        [&](cplx z) { return Ez(z) * Cw * (z * c - 1.0) / (z * (z * z - 1.0)); }, ct.Gamma, tol);
    err += t2.err;
    R12 += fr.pref() * kInv2PiI * t2.value;

    return I12 + R12;
}

}  // namespace

Kernel2x2 kernel_bulk_N(const BulkScaling& scaling, int N, double s, double t, double x, double y,
                        double theta0, double R0, double tol) {
    if (theta0 <= 0 || R0 <= 0) {
        auto [th, R] = find_descent_parameters(PhaseSpec::bulk(scaling));
        theta0 = th;
        R0 = R;
    }
    BulkFrame fr(scaling, N);
    for (double u : {s, t}) {
        double M = std::floor(scaling.kappa * N) + fr.T(u);
        if (M < 1 || M > N)
            throw std::domain_error("kernel_bulk_N: observation level outside 1..N");
    }
    BulkContours ct = build_prelimit_contours(scaling, N, theta0, R0);
    double q = scaling.q, c = scaling.c;

    Kernel2x2 K;

    {  // I11 over Gamma x Gamma.
        ExpFactor Ez = fr.side(+1, s, x);
        Ez.e_qz += fr.frac;
        ExpFactor Ew = fr.side(+1, t, y);
        Ew.e_qz += fr.frac;
        auto f = [&](cplx z, cplx w) {
            cplx H = (z - w) * (1.0 - c / z) * (1.0 - c / w) /
                     ((z * z - 1.0) * (w * w - 1.0) * (z * w - 1.0));
            return Ez(z) * Ew(w) * H;
        };
        K.k11 = fr.pref() * kInv2PiISq * double_integral(f, ct.Gamma, ct.Gamma, tol, K.err_estimate);
    }

    K.k12 = bulk_I12_plus_R12(fr, ct, s, t, x, y, tol, K.err_estimate);
    K.k21 = -bulk_I12_plus_R12(fr, ct, t, s, y, x, tol, K.err_estimate);

    {  // I22 + R22 over gamma x gamma.
        ExpFactor Ez = fr.side(-1, s, x);
        Ez.e_qz -= fr.frac;
        ExpFactor Ew = fr.side(-1, t, y);
        Ew.e_qz -= fr.frac;
        auto f = [&](cplx z, cplx w) {
            cplx H = (z - w) / ((z * w - 1.0) * (z - c) * (w - c));
            return Ez(z) * Ew(w) * H;
        };
        cplx I22 =
            fr.pref() * kInv2PiISq * double_integral(f, ct.gamma, ct.gamma, tol, K.err_estimate);

        double Cw = fr.const_at_c(t, y);
        double Cz = fr.const_at_c(s, x);
        QuadResult r1 = quad_contour([&](cplx z) { return Ez(z) * Cw / (c * z - 1.0); }, ct.gamma, tol);
        QuadResult r2 = quad_contour([&](cplx w) { return Ew(w) * Cz / (c * w - 1.0); }, ct.gamma, tol);
        K.err_estimate += r1.err + r2.err;
        K.k22 = I22 + fr.pref() * kInv2PiI * (r1.value - r2.value);
    }

    (void)q;
    return K;
}

// ---------------------------------------------------------------------------
// Edge prelimit kernel.
// ---------------------------------------------------------------------------

namespace {

struct EdgeFrame {
    const EdgeScaling& P;
    int N;
    double n12;

    EdgeFrame(const EdgeScaling& p, int n) : P(p), N(n) { n12 = std::sqrt(static_cast<double>(N)); }

    double frac(double u) const { return u * N - std::floor(u * N); }
    double A(double x) const { return P.sigma2 * n12 * x; }
    double pref() const { return P.sigma2 * n12; }

    double S2_at_c(double u) const {
        PhaseSpec sp = PhaseSpec::edge(P, u);
        return phase_eval(sp, {P.c, 0.0}, PhaseFn::S).real();
    }
    double G2_at_c() const {
        PhaseSpec sp = PhaseSpec::edge(P, 0.5);  // G2 does not depend on kappa
        return phase_eval(sp, {P.c, 0.0}, PhaseFn::G).real();
    }

    // exp(sign * (N S2bar(u,z) - A(x) Log(z/c))) including the H-factor
    // (1-qz)^{+-frac_u} (1-qc)^{-+frac_u}, as combined exponents.
    ExpFactor side(int sign, double u, double x) const {
        ExpFactor e;
        e.q = P.q;
        double Ax = A(x);
        e.e_qinv = sign * static_cast<double>(N);
        e.e_qz = sign * (-u * N) + sign * frac(u);
        e.e_z = sign * (-(P.h2(u) * N + Ax));
        e.cst = sign * (-N * S2_at_c(u) + Ax * std::log(P.c)) -
                sign * frac(u) * std::log(1.0 - P.q * P.c);
        return e;
    }
};

cplx edge_I12_plus_R12(const EdgeFrame& fr, const EdgeContours& cts, const Contour& gamma_t,
                       double s, double t, double x, double y, double tol, double& err) {
    const EdgeScaling& P = fr.P;
    double q = P.q, c = P.c;

    ExpFactor Ez = fr.side(+1, s, x);
    ExpFactor Ew = fr.side(-1, t, y);

    auto f12 = [&](cplx z, cplx w) {
        cplx H = (z * w - 1.0) * (z - c) / (z * (z - w) * (z * z - 1.0) * (w - c));
        return Ez(z) * Ew(w) * H;
    };
    cplx I12 = fr.pref() * kInv2PiISq * double_integral(f12, cts.Gamma, gamma_t, tol, err);

    cplx R12(0.0, 0.0);
    if (s > t) {
        double G2c = fr.G2_at_c();
        ExpFactor Eg;
        Eg.q = q;
        double dN = (s - t) * fr.N;
        Eg.e_qz = -dN + (fr.frac(s) - fr.frac(t));
        Eg.e_z = -dN * P.p2 + fr.A(y) - fr.A(x);
        Eg.cst = -dN * G2c + (fr.A(x) - fr.A(y)) * std::log(c) +
                 (fr.frac(t) - fr.frac(s)) * std::log(1.0 - q * c);
        QuadResult t1 = quad_contour([&](cplx z) { return Eg(z) / z; }, cts.gamma_tilde, tol);
        err += t1.err;
        R12 -= fr.pref() * kInv2PiI * t1.value;
    }
    // Second term: F12(z, c) has trivial w-part since S2bar(t, c) = 0.
    QuadResult t2 = quad_contour(
        [&](cplx z) { return Ez(z) * (z * c - 1.0) / (z * (z * z - 1.0)); }, cts.Gamma, tol);
    err += t2.err;
    R12 += fr.pref() * kInv2PiI * t2.value;

    return I12 + R12;
}

}  // namespace

Kernel2x2 kernel_edge_N(const EdgeScaling& scaling, int N, double s, double t, double x, double y,
                        double theta0, double R0, double tol) {
    for (double u : {s, t}) {
        if (!(u > scaling.kappa0 && u < 1.0))
            throw std::domain_error("kernel_edge_N: times must lie in (kappa0, 1)");
        double M = std::floor(u * N);
        if (M < 1 || M > N) throw std::domain_error("kernel_edge_N: observation level outside 1..N");
    }
    if (theta0 <= 0 || R0 <= 0) {
        auto [th, R] = find_descent_parameters(PhaseSpec::edge(scaling, std::max(s, t)));
        theta0 = th;
        R0 = R;
    }
    EdgeFrame fr(scaling, N);
    EdgeContours ct_s = build_prelimit_contours(scaling, s, N, theta0, R0);
    EdgeContours ct_t = build_prelimit_contours(scaling, t, N, theta0, R0);
    double c = scaling.c;

    Kernel2x2 K;

    {  // I11 over Gamma_s x Gamma_t.
        ExpFactor Ez = fr.side(+1, s, x);
        ExpFactor Ew = fr.side(+1, t, y);
        auto f = [&](cplx z, cplx w) {
            cplx H = (z - w) * (1.0 - c / z) * (1.0 - c / w) /
                     ((z * z - 1.0) * (w * w - 1.0) * (z * w - 1.0));
            return Ez(z) * Ew(w) * H;
        };
        K.k11 =
            fr.pref() * kInv2PiISq * double_integral(f, ct_s.Gamma, ct_t.Gamma, tol, K.err_estimate);
    }

    K.k12 = edge_I12_plus_R12(fr, ct_s, ct_t.gamma, s, t, x, y, tol, K.err_estimate);
    K.k21 = -edge_I12_plus_R12(fr, ct_t, ct_s.gamma, t, s, y, x, tol, K.err_estimate);

    {  // I22 + R22 over gamma_s x gamma_t.
        ExpFactor Ez = fr.side(-1, s, x);
        ExpFactor Ew = fr.side(-1, t, y);
        auto f = [&](cplx z, cplx w) {
            cplx H = (z - w) / ((z * w - 1.0) * (z - c) * (w - c));
            return Ez(z) * Ew(w) * H;
        };
        cplx I22 = fr.pref() * kInv2PiISq *
                   double_integral(f, ct_s.gamma, ct_t.gamma, tol, K.err_estimate);

        QuadResult r1 = quad_contour([&](cplx z) { return Ez(z) / (c * z - 1.0); }, ct_s.gamma, tol);
        QuadResult r2 = quad_contour([&](cplx w) { return Ew(w) / (c * w - 1.0); }, ct_t.gamma, tol);
        K.err_estimate += r1.err + r2.err;
        K.k22 = I22 + fr.pref() * kInv2PiI * (r1.value - r2.value);
    }

    return K;
}

// ---------------------------------------------------------------------------
// Limiting kernels.
// ---------------------------------------------------------------------------

namespace {

// Truncation length for cubic-decay ray integrals: the first L with
// L^3/6 - linear*L - quad*L^2 > 40.
double ray_truncation(double linear, double quad = 0.0) {
    double L = 6.0;
    while (L * L * L / 6.0 - quad * L * L - linear * L < 40.0) L += 0.5;
    return L;
}

Contour wedge_rays(cplx anchor, double angle, double L) {
    Contour ct;
    cplx up = std::polar(1.0, angle);
    cplx down = std::conj(up);
    ct.pieces.push_back(ContourPiece::segment(anchor + L * down, anchor));
    ct.pieces.push_back(ContourPiece::segment(anchor, anchor + L * up));
    return ct;
}

}  // namespace

double airy_kernel_ext(double t1, double x1, double t2, double x2, double tol) {
    double heat = 0.0;
    if (t2 > t1) {
        double d = t2 - t1;
        heat = -std::exp(-(x2 - x1) * (x2 - x1) / (4.0 * d) - d * (x2 + x1) / 2.0 +
                         d * d * d / 12.0) /
               std::sqrt(4.0 * kPi * d);
    }
    double beta = -0.75;
    double alpha = std::max(0.75, beta + (t2 - t1) + 1.0);
    double span = std::abs(x1) + std::abs(x2) + std::abs(t1) + std::abs(t2) + alpha - beta + 2.0;
    double L = ray_truncation(span);

    Contour cz = wedge_rays(cplx(alpha, 0.0), kPi / 3.0, L);
    Contour cw = wedge_rays(cplx(beta, 0.0), 2.0 * kPi / 3.0, L);
    double err = 0.0;
    auto f = [&](cplx z, cplx w) {
        cplx ex = z * z * z / 3.0 - x1 * z - w * w * w / 3.0 + x2 * w;
        return std::exp(ex) / (z + t1 - w - t2);
    };
    cplx dbl = kInv2PiISq * double_integral(f, cz, cw, tol, err);
    return heat + dbl.real();
}

double kbm(double s, double x, double t, double y) {
    if (s <= 0.0 || t <= 0.0) throw std::domain_error("kbm: times must be positive");
    double v = std::exp(-x * x / (2.0 * s)) / std::sqrt(2.0 * kPi * s);
    if (s > t)
        v -= std::exp(-(x - y) * (x - y) / (2.0 * (s - t))) / std::sqrt(2.0 * kPi * (s - t));
    return v;
}

double limit_bulk_k12(double s, double x, double t, double y, double f1, double tol) {
    if (!(f1 > 0.0)) throw std::domain_error("limit_bulk_k12: f1 must be positive");
    double pre = std::exp(2.0 * f1 * f1 * f1 * (s * s * s - t * t * t) / 3.0 + f1 * s * x -
                          f1 * t * y);
    return pre * airy_kernel_ext(-f1 * s, x + f1 * f1 * s * s, -f1 * t, y + f1 * f1 * t * t, tol);
}

double limit_bulk_k12_direct(double s, double x, double t, double y, double f1, double tol) {
    if (!(f1 > 0.0)) throw std::domain_error("limit_bulk_k12_direct: f1 must be positive");
    double heat = 0.0;
    if (s > t)
        heat = -std::exp(-(y - x) * (y - x) / (4.0 * f1 * (s - t))) /
               std::sqrt(4.0 * kPi * f1 * (s - t));

    double quad = f1 * (std::abs(s) + std::abs(t)) / 2.0 + 0.5;
    double L = ray_truncation(std::abs(x) + std::abs(y) + 2.0, quad);
    Contour cz = wedge_rays(cplx(0.5, 0.0), kPi / 3.0, L);
    Contour cw = wedge_rays(cplx(0.0, 0.0), 2.0 * kPi / 3.0, L);
    double err = 0.0;
    auto f = [&](cplx z, cplx w) {
        cplx ex = z * z * z / 3.0 - w * w * w / 3.0 + s * f1 * z * z - t * f1 * w * w - x * z + y * w;
        return std::exp(ex) / (z - w);
    };
    cplx dbl = kInv2PiISq * double_integral(f, cz, cw, tol, err);
    return heat + dbl.real();
}

// ---------------------------------------------------------------------------
// Descent certification.
// ---------------------------------------------------------------------------

DescentReport descent_report(const PhaseSpec& spec, const Contour& contour, int grid,
                             double c_for_diff) {
    DescentReport rep;
    if (grid < 2 || contour.pieces.empty()) return rep;
    cplx pc(spec.p_c, 0.0);
    double s_at_pc = phase_eval(spec, pc, PhaseFn::S).real();

    int per_piece = std::max(2, grid / static_cast<int>(contour.pieces.size()));
    double diam = 0.0;
    for (const auto& piece : contour.pieces)
        diam = std::max(diam, std::abs(piece.end() - pc));
    double r_min = 1e-6 * std::max(diam, 1.0);
    rep.max_res_bar = -std::numeric_limits<double>::infinity();

    for (const auto& piece : contour.pieces) {
        for (int k = 0; k <= per_piece; ++k) {
            cplx z, dz;
            piece.at(static_cast<double>(k) / per_piece, z, dz);
            double r = std::abs(z - pc);
            if (r <= r_min) continue;
            ++rep.points;
            double v = phase_eval(spec, z, PhaseFn::S).real() - s_at_pc;
            rep.max_res_bar = std::max(rep.max_res_bar, v);
            if (v >= 0.0) ++rep.descent_violations;
        }
    }

    // Monotonicity on origin-centered circles of radius <= z_c(kappa):
    // d/dtheta Re S > 0 and d/dtheta Re G < 0 on (0, pi).
    double rk = std::sqrt(spec.kappa);
    double zck = (1.0 + spec.q * rk) / (spec.q + rk);
    double r_cap = std::min(spec.p_c, zck);
    double dth = 1e-6;
    for (int j = 1; j <= 8; ++j) {
        double R = r_cap * static_cast<double>(j) / 8.0;
        if (std::abs(R - spec.q) < 1e-3) continue;  // S is singular at z = q
        for (int k = 1; k < 40; ++k) {
            double th = kPi * static_cast<double>(k) / 40.0;
            auto re_at = [&](PhaseFn fn, double a) {
                return phase_eval(spec, std::polar(R, a), fn).real();
            };
            double dS = (re_at(PhaseFn::S, th + dth) - re_at(PhaseFn::S, th - dth)) / (2.0 * dth);
            double dG = (re_at(PhaseFn::G, th + dth) - re_at(PhaseFn::G, th - dth)) / (2.0 * dth);
            if (dS <= 0.0) ++rep.circle_s_violations;
            if (dG >= 0.0) ++rep.circle_g_violations;
        }
    }

    if (c_for_diff > 0.0) {
        // S_1(z_c) - S_1(c) < 0 and S_2(z_c) - S_2(c) > 0; evaluated with the
        // spec's own anchor z_c and the edge anchor c.
        double zc = std::min(spec.p_c, c_for_diff);
        PhaseSpec s1 = PhaseSpec::make(spec.q, spec.kappa, zc);
        PhaseSpec s2 = PhaseSpec::make(spec.q, spec.kappa, c_for_diff);
        rep.s1_diff = (phase_eval(s1, {zc, 0.0}, PhaseFn::S) -
                       phase_eval(s1, {c_for_diff, 0.0}, PhaseFn::S))
                          .real();
        rep.s2_diff = (phase_eval(s2, {zc, 0.0}, PhaseFn::S) -
                       phase_eval(s2, {c_for_diff, 0.0}, PhaseFn::S))
                          .real();
    }
    return rep;
}

std::pair<double, double> find_descent_parameters(const PhaseSpec& spec) {
    static std::mutex mu;
    static std::map<std::tuple<double, double, double>, std::pair<double, double>> cache;
    std::tuple<double, double, double> key{spec.q, spec.kappa, spec.p_c};
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }

    // Shallow angles first: they minimize sec(theta) and hence the smallest
    // admissible N of the prelimit contours.
    for (double frac = 0.26; frac <= 0.45 + 1e-9; frac += 0.01) {
        double theta0 = frac * kPi;
        for (double R0 = 1.0 / spec.q + 0.5; R0 <= 1.0 / spec.q + 4.0; R0 += 0.5) {
            Contour ct = build_contour_C(spec.p_c, theta0, R0, 0.0);
            DescentReport rep = descent_report(spec, ct, 2000);
            if (rep.clean()) {
                std::lock_guard<std::mutex> lk(mu);
                cache[key] = {theta0, R0};
                return {theta0, R0};
            }
        }
    }
    throw std::runtime_error("find_descent_parameters: no clean descent contour found");
}

}  // namespace hslpp
