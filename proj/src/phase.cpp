#include "hslpp/phase.hpp"

#include <stdexcept>

namespace hslpp {

PhaseSpec PhaseSpec::make(double q, double kappa, double p_c) {
    if (!(q > 0.0 && q < 1.0)) throw std::domain_error("PhaseSpec: q must lie in (0,1)");
    if (!(p_c > q && p_c < 1.0 / q)) throw std::domain_error("PhaseSpec: anchor must lie in (q, 1/q)");
    PhaseSpec s;
    s.q = q;
    s.kappa = kappa;
    s.p_c = p_c;
    s.h = (q * kappa * p_c * p_c - q * q * (kappa + 1.0) * p_c + q) /
          ((p_c - q) * (1.0 - q * p_c));
    s.p = q * p_c / (1.0 - q * p_c);
    return s;
}

PhaseSpec PhaseSpec::bulk(const BulkScaling& s) { return make(s.q, s.kappa, s.z_c); }

PhaseSpec PhaseSpec::edge(const EdgeScaling& s, double kappa) { return make(s.q, kappa, s.c); }

namespace {

using cd = std::complex<double>;

void check_regular(const PhaseSpec& s, cd z) {
    double q = s.q;
    if (std::abs(z) < 1e-14 || std::abs(z - cd(q, 0)) < 1e-14 || std::abs(z - cd(1.0 / q, 0)) < 1e-14)
        throw std::domain_error("phase_eval: z at a singular point");
}

}  // namespace

cd phase_eval(const PhaseSpec& spec, cd z, PhaseFn which, int derivative_order) {
    check_regular(spec, z);
    double q = spec.q;
    double kappa = spec.kappa;
    bool is_s = (which == PhaseFn::S || which == PhaseFn::SCentered);
    bool centered = (which == PhaseFn::SCentered || which == PhaseFn::GCentered);
    double coeff = is_s ? spec.h : spec.p;

    auto value = [&](cd w) -> cd {
        if (is_s)
            return std::log(1.0 - q / w) - kappa * std::log(1.0 - q * w) - coeff * std::log(w);
        return -std::log(1.0 - q * w) - coeff * std::log(w);
    };

    switch (derivative_order) {
        case 0: {
            cd v = value(z);
            if (centered) v -= value(cd(spec.p_c, 0.0));
            return v;
        }
        case 1:
            if (is_s) return 1.0 / (z - q) - (1.0 + coeff) / z + kappa * q / (1.0 - q * z);
            return q / (1.0 - q * z) - coeff / z;
        case 2:
            if (is_s)
                return -1.0 / ((z - q) * (z - q)) + (1.0 + coeff) / (z * z) +
                       kappa * q * q / ((1.0 - q * z) * (1.0 - q * z));
            return q * q / ((1.0 - q * z) * (1.0 - q * z)) + coeff / (z * z);
        case 3: {
            cd zq3 = (z - q) * (z - q) * (z - q);
            cd z3 = z * z * z;
            cd qz3 = (1.0 - q * z) * (1.0 - q * z) * (1.0 - q * z);
            if (is_s) return 2.0 / zq3 - 2.0 * (1.0 + coeff) / z3 + 2.0 * kappa * q * q * q / qz3;
            return 2.0 * q * q * q / qz3 - 2.0 * coeff / z3;
        }
        default:
            throw std::invalid_argument("phase_eval: derivative order must be 0..3");
    }
}

}  // namespace hslpp
