// Monte Carlo experiments on the rescaled line ensembles: profile data,
// replicated top/bottom-curve statistics, kernel convergence tables, and the
// statistical helpers (moments, Kolmogorov-Smirnov distances) they share.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hslpp/lpp.hpp"
#include "hslpp/scaling.hpp"

namespace hslpp {

struct ExperimentConfig {
    GeomParams params;
    int N = 200;
    long long replicas = 1000;
    std::uint64_t seed = 1;
    int threads = 0;             ///< 0 = HSLPP_THREADS env or hardware default
    std::vector<double> times;   ///< observation times t
    double kappa = 0.36;         ///< bulk anchor for bottom-curve experiments
};

struct SummaryStats {
    long long count = 0;
    double mean = 0, variance = 0, skewness = 0;
    double ks = 0;  ///< KS distance to the reference law if one was supplied
};

/// One audited statistic of an experiment report.
struct StatCheck {
    std::string name;
    double estimate = 0, se = 0, target = 0, tol = 0;
    bool pass = false;
};

/// Sample moments; `cdf`, if nonempty, adds the KS distance to it.
SummaryStats summarize(std::vector<double> xs, const std::function<double(double)>& cdf = {});

/// sup_x |F_n(x) - cdf(x)| for the empirical distribution of xs.
double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf);

/// Two-sample KS distance.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

double normal_cdf(double x, double mean, double var);

/// Resolve a thread count: positive input wins, then HSLPP_THREADS, then the
/// hardware concurrency (at least 1).
int resolve_threads(int requested);

/// Run body(i) for i = 0..n-1 on `threads` workers.  The body must be safe to
/// call concurrently for distinct indices.
void parallel_for(long long n, int threads, const std::function<void(long long)>& body);

/// Rescaled top curve U_1^top(t) per replica; result[k][r] is time
/// config.times[k], replica r.
std::vector<std::vector<double>> run_top_experiment(const ExperimentConfig& config);

/// Rescaled curves U_i^bot(t) at the bulk anchor config.kappa for i = 1, 2;
/// result[i][k][r] indexes curve, time, replica.
std::vector<std::vector<std::vector<double>>> run_bottom_experiment(const ExperimentConfig& config);

/// Audited report for the top-curve experiment: mean, variance against
/// t - kappa0, covariance against min(s,t) - kappa0, increment decorrelation
/// (when four or more times are given), and KS against the matching Gaussian.
std::vector<StatCheck> top_experiment_report(const ExperimentConfig& config);

/// Audited report for the bottom-curve experiment at t = 0: KS
/// self-consistency between sizes config.N and N_large, strict ordering of
/// the first two rescaled curves, and growth of the top-to-second-curve
/// separation statistic between the two sizes.
std::vector<StatCheck> bottom_experiment_report(const ExperimentConfig& config, int N_large);

enum class Frame { Bulk, Edge };

struct ConvergenceRow {
    int N = 0;
    double err12 = 0;    ///< |K^N_12 - limiting kernel|
    double abs11 = 0;    ///< |K^N_11|
    double abs22 = 0;    ///< |K^N_22|
    double quad_err = 0; ///< accumulated quadrature error estimate
};

/// Kernel convergence table at one scaled space-time point (s,x;t,y): the
/// prelimit kernel against its limit (Brownian kernel at the edge, Airy-type
/// kernel in the bulk) along the given ladder of system sizes.
std::vector<ConvergenceRow> run_convergence_study(const GeomParams& params, Frame frame,
                                                  double kappa, const std::vector<int>& Ns,
                                                  double s, double t, double x, double y,
                                                  double tol = 1e-7);

/// One replica's top curves, raw and rescaled.
struct ProfileResult {
    int N = 0;
    std::vector<std::vector<long long>> curves;  ///< curves[i][m] = lambda_{i+1}(m,N)
    SampledCurve top_scaled;                     ///< U_1^top on a grid in (kappa0, 1)
    SampledCurve bottom_scaled;                  ///< U_1^bot on a grid around kappa
};

/// Sample one ensemble and report the first `n_curves` curves plus the
/// rescaled top/bottom observables (rescalings need supercritical params).
ProfileResult run_profile(const GeomParams& params, int N, double kappa, std::uint64_t seed,
                          int n_curves = 5);

}  // namespace hslpp
