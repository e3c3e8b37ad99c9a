#include "hslpp/scaling.hpp"

#include <algorithm>
#include <stdexcept>

namespace hslpp {

namespace {

void check_supercritical(double q, double c) {
    if (!(q > 0.0 && q < 1.0)) throw std::domain_error("scaling: q must lie in (0,1)");
    if (!(c > 1.0 && c < 1.0 / q)) throw std::domain_error("scaling: c must lie in (1,1/q)");
}

}  // namespace

BulkScaling bulk_params(double q, double c, double kappa) {
    check_supercritical(q, c);
    BulkScaling p;
    p.q = q;
    p.c = c;
    p.kappa = kappa;
    p.kappa0 = ((1.0 - q * c) / (c - q)) * ((1.0 - q * c) / (c - q));
    if (!(kappa > p.kappa0 && kappa < 1.0))
        throw std::domain_error("bulk_params: kappa must lie in (kappa0, 1)");
    double rk = std::sqrt(kappa);
    double q2 = 1.0 - q * q;
    p.z_c = (1.0 + q * rk) / (q + rk);
    p.sigma1 = std::cbrt(q) * std::pow(q + rk, 5.0 / 3.0) /
               (std::pow(kappa, 1.0 / 6.0) * std::pow(q2, 2.0 / 3.0) * std::cbrt(1.0 + q * rk));
    p.f1 = std::cbrt(q) / (2.0 * std::pow(kappa, 2.0 / 3.0) * std::pow(q2, 2.0 / 3.0) *
                           std::cbrt(q + rk) * std::cbrt(1.0 + q * rk));
    p.p1 = q * (1.0 + q * rk) / (q2 * rk);
    p.h1 = q * (q + 2.0 * rk + q * kappa) / q2;
    return p;
}

EdgeScaling edge_params(double q, double c) {
    check_supercritical(q, c);
    EdgeScaling p;
    p.q = q;
    p.c = c;
    p.kappa0 = ((1.0 - q * c) / (c - q)) * ((1.0 - q * c) / (c - q));
    p.p2 = q * c / (1.0 - q * c);
    p.sigma2 = std::sqrt(p.p2 * (1.0 + p.p2));
    return p;
}

double h_bot(double q, double kappa) {
    if (!(q > 0.0 && q < 1.0)) throw std::domain_error("h_bot: q must lie in (0,1)");
    if (kappa < 0.0) throw std::domain_error("h_bot: kappa must be nonnegative");
    double rk = std::sqrt(kappa);
    return q * (q + 2.0 * rk + q * kappa) / (1.0 - q * q);
}

double h_top(double q, double c, double kappa) {
    check_supercritical(q, c);
    return q / (c - q) + q * c / (1.0 - q * c) * kappa;
}

LatticeSpec bulk_lattice(const BulkScaling& p, int N, double t) {
    LatticeSpec l;
    l.a = 1.0 / (p.sigma1 * p.z_c * std::cbrt(static_cast<double>(N)));
    double T_t = std::floor(t * std::pow(static_cast<double>(N), 2.0 / 3.0));
    l.b = -l.a * (p.h1 * N + p.p1 * T_t);
    return l;
}

LatticeSpec edge_lattice(const EdgeScaling& p, int N, double kappa) {
    LatticeSpec l;
    l.a = 1.0 / (p.sigma2 * std::sqrt(static_cast<double>(N)));
    l.b = -l.a * p.h2(kappa) * N;
    return l;
}

double SampledCurve::eval(double x) const {
    if (t.empty()) throw std::logic_error("SampledCurve: empty");
    if (x <= t.front()) return u.front();
    if (x >= t.back()) return u.back();
    auto it = std::lower_bound(t.begin(), t.end(), x);
    std::size_t hi = static_cast<std::size_t>(it - t.begin());
    std::size_t lo = hi - 1;
    double w = (x - t[lo]) / (t[hi] - t[lo]);
    return (1.0 - w) * u[lo] + w * u[hi];
}

namespace {

// Linear interpolation of integer-indexed curve values with the extension
// convention: 0 to the left of index 0, final value to the right of the end.
double interp_curve(const std::vector<long long>& v, double s) {
    if (s <= 0.0) return 0.0;
    double last = static_cast<double>(v.size() - 1);
    if (s >= last) return static_cast<double>(v.back());
    auto lo = static_cast<std::size_t>(std::floor(s));
    double w = s - static_cast<double>(lo);
    return (1.0 - w) * static_cast<double>(v[lo]) + w * static_cast<double>(v[lo + 1]);
}

}  // namespace

double rescale_top_at(const std::vector<long long>& L1, int N, const EdgeScaling& p, double t) {
    double C_top = std::floor(p.q * N / (p.c - p.q));
    double s = t * N;
    double val = interp_curve(L1, s) - C_top - p.p2 * s;
    return val / (p.sigma2 * std::sqrt(static_cast<double>(N)));
}

double rescale_bottom_at(const std::vector<long long>& curve, int N, const BulkScaling& p, double t) {
    double n23 = std::pow(static_cast<double>(N), 2.0 / 3.0);
    double s = std::floor(p.kappa * N) + t * n23;
    if (s < 0.0 || s > static_cast<double>(N))
        throw std::domain_error("rescale_bottom_at: time outside [0,N]");
    double C_bot = std::floor(p.h1 * N);
    double val = interp_curve(curve, s) - C_bot - p.p1 * t * n23;
    return val / (std::sqrt(p.p1 * (1.0 + p.p1)) * std::cbrt(static_cast<double>(N)));
}

SampledCurve rescale_top(const std::vector<long long>& L1, int N, const EdgeScaling& p,
                         const std::vector<double>& times) {
    SampledCurve out;
    out.t = times;
    out.u.reserve(times.size());
    for (double t : times) out.u.push_back(rescale_top_at(L1, N, p, t));
    return out;
}

SampledCurve rescale_bottom(const std::vector<long long>& curve, int N, const BulkScaling& p,
                            const std::vector<double>& times) {
    SampledCurve out;
    out.t = times;
    out.u.reserve(times.size());
    for (double t : times) out.u.push_back(rescale_bottom_at(curve, N, p, t));
    return out;
}

}  // namespace hslpp
