// Closed-form constants of the two scaling regimes (bulk N^{1/3} and edge
// N^{1/2}) and the affine rescaling maps from line-ensemble coordinates to
// the limiting frames.

#pragma once

#include <cmath>
#include <vector>

namespace hslpp {

/// Constants of the bulk (bottom-curve) scaling at a fixed kappa in (kappa0,1).
struct BulkScaling {
    double q = 0, c = 0, kappa = 0;
    double kappa0 = 0;  // ((1-qc)/(c-q))^2
    double z_c = 0;     // (1+q sqrt(kappa))/(q+sqrt(kappa))
    double sigma1 = 0, f1 = 0, p1 = 0, h1 = 0;
};

/// Constants of the edge (top-curve) scaling.
struct EdgeScaling {
    double q = 0, c = 0;
    double kappa0 = 0;
    double p2 = 0;      // qc/(1-qc)
    double sigma2 = 0;  // sqrt(p2(1+p2))

    double h2(double kappa) const { return kappa * p2 + q / (c - q); }
};

/// Lattice a*Z + b.
struct LatticeSpec {
    double a = 1;  // spacing, > 0
    double b = 0;  // offset

    double point(long long k) const { return a * static_cast<double>(k) + b; }
    /// Smallest lattice point >= x, as an index.
    long long first_index_at_or_above(double x) const { return static_cast<long long>(std::ceil((x - b) / a - 1e-12)); }
};

BulkScaling bulk_params(double q, double c, double kappa);
EdgeScaling edge_params(double q, double c);

/// Law-of-large-numbers profile of the lower curves: lambda_i(m,N)/N
/// concentrates around h_bot(m/N).  Defined for all q in (0,1).
double h_bot(double q, double kappa);

/// Profile of the separated top curve in the supercritical regime on
/// (kappa0, 1): q/(c-q) + p2*kappa.
double h_top(double q, double c, double kappa);

/// Lattice carrying the bulk variables X_i = a*(lambda_i - h1 N - p1 T_t - i):
/// spacing (sigma1 z_c)^{-1} N^{-1/3}, offset -a*(h1 N + p1 T_t).
LatticeSpec bulk_lattice(const BulkScaling& p, int N, double t);

/// Edge lattice: spacing sigma2^{-1} N^{-1/2}, offset -a*h2(kappa)*N.
LatticeSpec edge_lattice(const EdgeScaling& p, int N, double kappa);

/// Sampled function with linear interpolation between the stored abscissae.
struct SampledCurve {
    std::vector<double> t;
    std::vector<double> u;

    double eval(double x) const;
};

/// U_1^top(t) = [p2(1+p2)]^{-1/2} N^{-1/2} (L1(tN) - floor(q N/(c-q)) - p2 t N),
/// with L1 given at integer times 0..N (linearly interpolated, extended by 0
/// to the left and by L1(N) to the right).
double rescale_top_at(const std::vector<long long>& L1, int N, const EdgeScaling& p, double t);

/// U_i^bot(t) = [p1(1+p1)]^{-1/2} N^{-1/3} (curve(floor(kappa N)+t N^{2/3})
/// - floor(h1 N) - p1 t N^{2/3}) where `curve` holds lambda_{i+1}(m,N) at
/// integer m (interpolated).
double rescale_bottom_at(const std::vector<long long>& curve, int N, const BulkScaling& p, double t);

/// Evaluate a rescaling over a grid of times.
SampledCurve rescale_top(const std::vector<long long>& L1, int N, const EdgeScaling& p,
                         const std::vector<double>& times);
SampledCurve rescale_bottom(const std::vector<long long>& curve, int N, const BulkScaling& p,
                            const std::vector<double>& times);

}  // namespace hslpp
