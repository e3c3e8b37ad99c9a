#include "hslpp/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "hslpp/kernels.hpp"

namespace hslpp {

namespace {

std::uint64_t replica_seed(std::uint64_t seed, long long rep) {
    return seed + static_cast<std::uint64_t>(rep) * 0x9e3779b97f4a7c15ull;
}

// Raw curves lambda_1 .. lambda_k (as functions of m = 0..N) for one replica.
std::vector<std::vector<long long>> replica_curves(const GeomParams& params, int N,
                                                   std::uint64_t seed, int k) {
    WeightArray w = sample_weights(params, N, seed);
    LineEnsembleDiscrete fam = lambda_family(w, static_cast<std::size_t>(k));
    std::vector<std::vector<long long>> curves(k, std::vector<long long>(N + 1, 0));
    for (int m = 0; m <= N; ++m)
        for (int i = 0; i < k; ++i) curves[i][m] = fam.by_m[m].part(i + 1);
    return curves;
}

double sample_sd(const std::vector<double>& xs) {
    double n = static_cast<double>(xs.size());
    double mean = 0;
    for (double x : xs) mean += x;
    mean /= n;
    double m2 = 0;
    for (double x : xs) m2 += (x - mean) * (x - mean);
    return std::sqrt(m2 / std::max(1.0, n - 1.0));
}

}  // namespace

SummaryStats summarize(std::vector<double> xs, const std::function<double(double)>& cdf) {
    SummaryStats s;
    s.count = static_cast<long long>(xs.size());
    if (xs.empty()) return s;
    double n = static_cast<double>(xs.size());
    double sum = 0;
    for (double x : xs) sum += x;
    s.mean = sum / n;
    double m2 = 0, m3 = 0;
    for (double x : xs) {
        double d = x - s.mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    s.variance = xs.size() > 1 ? m2 / (n - 1.0) : 0.0;
    double sd = std::sqrt(m2 / n);
    s.skewness = sd > 0 ? (m3 / n) / (sd * sd * sd) : 0.0;
    if (cdf) s.ks = ks_statistic(xs, cdf);
    return s;
}

double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
    if (xs.empty()) throw std::domain_error("ks_statistic: empty sample");
    std::sort(xs.begin(), xs.end());
    double n = static_cast<double>(xs.size());
    double d = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double f = cdf(xs[i]);
        d = std::max(d, std::abs((static_cast<double>(i) + 1.0) / n - f));
        d = std::max(d, std::abs(static_cast<double>(i) / n - f));
    }
    return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::domain_error("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double normal_cdf(double x, double mean, double var) {
    if (!(var > 0)) throw std::domain_error("normal_cdf: variance must be positive");
    return 0.5 * std::erfc(-(x - mean) / std::sqrt(2.0 * var));
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("HSLPP_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(long long n, int threads, const std::function<void(long long)>& body) {
    threads = static_cast<int>(std::min<long long>(resolve_threads(threads), n));
    if (threads <= 1) {
        for (long long i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<long long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&]() {
            for (long long i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    for (auto& th : pool) th.join();
}

std::vector<std::vector<double>> run_top_experiment(const ExperimentConfig& config) {
    config.params.validate();
    if (config.times.empty()) throw std::domain_error("run_top_experiment: no observation times");
    EdgeScaling es = edge_params(config.params.q, config.params.c);
    std::vector<std::vector<double>> out(config.times.size(),
                                         std::vector<double>(config.replicas, 0.0));
    parallel_for(config.replicas, config.threads, [&](long long rep) {
        auto curves = replica_curves(config.params, config.N, replica_seed(config.seed, rep), 1);
        for (std::size_t k = 0; k < config.times.size(); ++k)
            out[k][rep] = rescale_top_at(curves[0], config.N, es, config.times[k]);
    });
    return out;
}

std::vector<std::vector<std::vector<double>>> run_bottom_experiment(
    const ExperimentConfig& config) {
    config.params.validate();
    if (config.times.empty())
        throw std::domain_error("run_bottom_experiment: no observation times");
    BulkScaling bs = bulk_params(config.params.q, config.params.c, config.kappa);
    std::vector<std::vector<std::vector<double>>> out(
        2, std::vector<std::vector<double>>(config.times.size(),
                                            std::vector<double>(config.replicas, 0.0)));
    parallel_for(config.replicas, config.threads, [&](long long rep) {
        // U_i^bot reads curve lambda_{i+1}.
        auto curves = replica_curves(config.params, config.N, replica_seed(config.seed, rep), 3);
        for (std::size_t k = 0; k < config.times.size(); ++k) {
            out[0][k][rep] = rescale_bottom_at(curves[1], config.N, bs, config.times[k]);
            out[1][k][rep] = rescale_bottom_at(curves[2], config.N, bs, config.times[k]);
        }
    });
    return out;
}

std::vector<StatCheck> top_experiment_report(const ExperimentConfig& config) {
    EdgeScaling es = edge_params(config.params.q, config.params.c);
    for (double t : config.times)
        if (!(t > es.kappa0 && t < 1.0))
            throw std::domain_error("top_experiment_report: times must lie in (kappa0, 1)");
    auto samples = run_top_experiment(config);
    double n = static_cast<double>(config.replicas);
    std::vector<StatCheck> out;

    for (std::size_t k = 0; k < config.times.size(); ++k) {
        double t = config.times[k];
        SummaryStats s = summarize(samples[k],
                                   [&](double x) { return normal_cdf(x, 0.0, t - es.kappa0); });
        double sd = std::sqrt(s.variance);

        StatCheck mean{"mean(t=" + std::to_string(t) + ")", s.mean, sd / std::sqrt(n), 0.0, 0.0,
                       false};
        mean.tol = 3.0 * mean.se;
        mean.pass = std::abs(mean.estimate - mean.target) <= mean.tol;
        out.push_back(mean);

        StatCheck var{"var(t=" + std::to_string(t) + ")", s.variance,
                      s.variance * std::sqrt(2.0 / (n - 1.0)), t - es.kappa0, 0.0, false};
        var.tol = 0.15 * var.target;
        var.pass = std::abs(var.estimate - var.target) <= var.tol;
        out.push_back(var);

        StatCheck ks{"ks(t=" + std::to_string(t) + ")", s.ks, 0.0, 0.0, 0.08, false};
        ks.pass = ks.estimate < ks.tol;
        out.push_back(ks);
    }

    if (config.times.size() >= 2) {
        std::size_t a = 0, b = config.times.size() - 1;
        double ma = 0, mb = 0;
        for (long long r = 0; r < config.replicas; ++r) {
            ma += samples[a][r];
            mb += samples[b][r];
        }
        ma /= n;
        mb /= n;
        std::vector<double> prod(config.replicas);
        for (long long r = 0; r < config.replicas; ++r)
            prod[r] = (samples[a][r] - ma) * (samples[b][r] - mb);
        SummaryStats ps = summarize(prod);
        StatCheck cov{"cov(t=" + std::to_string(config.times[a]) + ",t=" +
                          std::to_string(config.times[b]) + ")",
                      ps.mean, std::sqrt(ps.variance / n),
                      std::min(config.times[a], config.times[b]) - es.kappa0, 0.0, false};
        cov.tol = 3.0 * cov.se;
        cov.pass = std::abs(cov.estimate - cov.target) <= cov.tol;
        out.push_back(cov);
    }

    if (config.times.size() >= 4) {
        // Increments over disjoint intervals should be uncorrelated.
        std::vector<double> u(config.replicas), v(config.replicas);
        for (long long r = 0; r < config.replicas; ++r) {
            u[r] = samples[1][r] - samples[0][r];
            v[r] = samples[3][r] - samples[2][r];
        }
        double su = sample_sd(u), sv = sample_sd(v);
        double mu = summarize(u).mean, mv = summarize(v).mean;
        double cov = 0;
        for (long long r = 0; r < config.replicas; ++r) cov += (u[r] - mu) * (v[r] - mv);
        cov /= (n - 1.0);
        StatCheck corr{"increment_corr", cov / (su * sv), 1.0 / std::sqrt(n), 0.0, 0.0, false};
        corr.tol = 3.0 * corr.se;
        corr.pass = std::abs(corr.estimate) <= corr.tol;
        out.push_back(corr);
    }
    return out;
}

std::vector<StatCheck> bottom_experiment_report(const ExperimentConfig& config, int N_large) {
    BulkScaling bs = bulk_params(config.params.q, config.params.c, config.kappa);
    (void)bs;

    auto run_at = [&](int N, std::vector<double>& u1, std::vector<double>& u2,
                      std::vector<double>& sep) {
        ExperimentConfig cfg = config;
        cfg.N = N;
        cfg.times = {0.0};
        auto s = run_bottom_experiment(cfg);
        u1 = s[0][0];
        u2 = s[1][0];
        // Separation statistic: min over a t-window of (lambda_1 - lambda_2)
        // in U^bot units.
        BulkScaling b = bulk_params(cfg.params.q, cfg.params.c, cfg.kappa);
        double unit = std::sqrt(b.p1 * (1.0 + b.p1)) * std::cbrt(static_cast<double>(N));
        sep.assign(cfg.replicas, 0.0);
        parallel_for(cfg.replicas, cfg.threads, [&](long long rep) {
            auto curves = replica_curves(cfg.params, N, replica_seed(cfg.seed, rep), 2);
            double n23 = std::pow(static_cast<double>(N), 2.0 / 3.0);
            long long m0 = static_cast<long long>(std::floor(cfg.kappa * N) - n23);
            long long m1 = static_cast<long long>(std::floor(cfg.kappa * N) + n23);
            m0 = std::max<long long>(m0, 0);
            m1 = std::min<long long>(m1, N);
            long long mn = curves[0][m0] - curves[1][m0];
            for (long long m = m0; m <= m1; ++m)
                mn = std::min(mn, curves[0][m] - curves[1][m]);
            sep[rep] = static_cast<double>(mn) / unit;
        });
    };

    std::vector<double> u1s, u2s, seps, u1l, u2l, sepl;
    run_at(config.N, u1s, u2s, seps);
    run_at(N_large, u1l, u2l, sepl);

    std::vector<StatCheck> out;
    StatCheck ks{"ks_self_consistency", ks_two_sample(u1s, u1l), 0.0, 0.0, 0.08, false};
    ks.pass = ks.estimate < ks.tol;
    out.push_back(ks);

    long long ordered = 0;
    for (long long r = 0; r < config.replicas; ++r)
        if (u1l[r] > u2l[r]) ++ordered;
    StatCheck ord{"ordering_fraction",
                  static_cast<double>(ordered) / static_cast<double>(config.replicas), 0.0, 1.0,
                  0.01, false};
    ord.pass = ord.estimate >= 1.0 - ord.tol;
    out.push_back(ord);

    long long grew = 0;
    for (long long r = 0; r < config.replicas; ++r)
        if (sepl[r] > seps[r]) ++grew;
    StatCheck sep{"separation_growth_fraction",
                  static_cast<double>(grew) / static_cast<double>(config.replicas), 0.0, 0.95, 0.0,
                  false};
    sep.pass = sep.estimate >= sep.target;
    out.push_back(sep);
    return out;
}

std::vector<ConvergenceRow> run_convergence_study(const GeomParams& params, Frame frame,
                                                  double kappa, const std::vector<int>& Ns,
                                                  double s, double t, double x, double y,
                                                  double tol) {
    std::vector<ConvergenceRow> out;
    if (frame == Frame::Edge) {
        EdgeScaling es = edge_params(params.q, params.c);
        double limit = kbm(s - es.kappa0, x, t - es.kappa0, y);
        for (int N : Ns) {
            Kernel2x2 K = kernel_edge_N(es, N, s, t, x, y, 0.0, 0.0, tol);
            out.push_back({N, std::abs(K.k12 - limit), std::abs(K.k11), std::abs(K.k22),
                           K.err_estimate});
        }
    } else {
        BulkScaling bs = bulk_params(params.q, params.c, kappa);
        double limit = limit_bulk_k12(s, x, t, y, bs.f1);
        for (int N : Ns) {
            Kernel2x2 K = kernel_bulk_N(bs, N, s, t, x, y, 0.0, 0.0, tol);
            out.push_back({N, std::abs(K.k12 - limit), std::abs(K.k11), std::abs(K.k22),
                           K.err_estimate});
        }
    }
    return out;
}

ProfileResult run_profile(const GeomParams& params, int N, double kappa, std::uint64_t seed,
                          int n_curves) {
    params.validate();
    if (n_curves < 1) throw std::domain_error("run_profile: need at least one curve");
    ProfileResult res;
    res.N = N;
    res.curves = replica_curves(params, N, seed, n_curves);

    if (params.regime() == Regime::Supercritical) {
        EdgeScaling es = edge_params(params.q, params.c);
        BulkScaling bs = bulk_params(params.q, params.c, kappa);

        std::vector<double> tt;
        for (int k = 1; k < 60; ++k)
            tt.push_back(es.kappa0 + (1.0 - es.kappa0) * static_cast<double>(k) / 60.0);
        res.top_scaled = rescale_top(res.curves[0], N, es, tt);

        // Keep floor(kappa N) + t N^{2/3} inside [0, N].
        double n23 = std::pow(static_cast<double>(N), 2.0 / 3.0);
        double tmax = 0.9 * std::min(kappa, 1.0 - kappa) * N / n23;
        std::vector<double> tb;
        for (int k = -30; k <= 30; ++k) tb.push_back(tmax * static_cast<double>(k) / 30.0);
        if (res.curves.size() >= 2) res.bottom_scaled = rescale_bottom(res.curves[1], N, bs, tb);
    }
    return res;
}

}  // namespace hslpp
