// Phase functions S and G of the steepest-descent analysis.  Both families
// (bulk and edge) and their interpolations share one closed form
//
//   S(z) = log(1 - q/z) - kappa log(1 - qz) - h(p_c) log z,
//   G(z) = -log(1 - qz) - p(p_c) log z,
//
// anchored at a critical point p_c in [z_c, c]: p_c = z_c gives S_1, G_1 and
// p_c = c gives S_2, G_2.  Principal branches throughout.

#pragma once

#include <complex>

#include "hslpp/scaling.hpp"

namespace hslpp {

enum class PhaseFn { S, G, SCentered, GCentered };

struct PhaseSpec {
    double q = 0;
    double kappa = 0;  // b^2
    double p_c = 0;    // anchor in [z_c, c]
    double h = 0;      // coefficient of -log z in S
    double p = 0;      // coefficient of -log z in G

    /// Anchor at p_c with the interpolating coefficient
    /// C(p_c) = [q kappa p_c^2 - q^2(kappa+1) p_c + q] / ((p_c - q)(1 - q p_c)).
    static PhaseSpec make(double q, double kappa, double p_c);
    /// S_1/G_1: anchored at z_c(kappa).
    static PhaseSpec bulk(const BulkScaling& s);
    /// S_2/G_2 at time kappa: anchored at c.
    static PhaseSpec edge(const EdgeScaling& s, double kappa);

    double critical_point() const { return p_c; }
};

/// Value or analytic derivative (order 0..3) of the requested function at z.
std::complex<double> phase_eval(const PhaseSpec& spec, std::complex<double> z, PhaseFn which,
                                int derivative_order = 0);

}  // namespace hslpp
