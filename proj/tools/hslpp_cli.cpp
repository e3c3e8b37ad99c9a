// Command-line entry point: sampling, profiles, experiment recipes, kernel
// evaluation, and descent certification, with CSV/JSON output.
//
// Exit codes: 0 success, 1 validation or usage error, 2 numerical failure.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hslpp/contour.hpp"
#include "hslpp/gibbs.hpp"
#include "hslpp/kernels.hpp"
#include "hslpp/lpp.hpp"
#include "hslpp/montecarlo.hpp"
#include "hslpp/pfaffian.hpp"
#include "hslpp/scaling.hpp"

namespace {

constexpr int kSchemaVersion = 1;

using nlohmann::json;

struct Options {
    double q = 0.5, c = 1.4, kappa = 0.36;
    int N = 100, N_large = 0, threads = 0, curves = 5;
    long long replicas = 1000, samples = 100000;
    unsigned long long seed = 1;
    double s = 0.5, t = 0.5, x = 0.0, y = 0.0, tol = 1e-7;
    std::vector<double> times;
    std::vector<int> Ns;
    std::string which = "bm", frame = "edge", out, config_path;
};

// Flat key=value config file; unknown keys are rejected with the line number.
void load_config(const std::string& path, Options& o) {
    std::ifstream in(path);
    if (!in) throw std::domain_error("config file not found: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string trimmed = line.substr(line.find_first_not_of(" \t") == std::string::npos
                                              ? line.size()
                                              : line.find_first_not_of(" \t"));
        if (trimmed.empty() || trimmed[0] == '#') continue;
        auto eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw std::domain_error("config parse error at line " + std::to_string(lineno) +
                                    ": expected key=value");
        std::string key = trimmed.substr(0, eq);
        std::string val = trimmed.substr(eq + 1);
        try {
            if (key == "q") o.q = std::stod(val);
            else if (key == "c") o.c = std::stod(val);
            else if (key == "kappa") o.kappa = std::stod(val);
            else if (key == "N") o.N = std::stoi(val);
            else if (key == "N_large") o.N_large = std::stoi(val);
            else if (key == "threads") o.threads = std::stoi(val);
            else if (key == "curves") o.curves = std::stoi(val);
            else if (key == "replicas") o.replicas = std::stoll(val);
            else if (key == "samples") o.samples = std::stoll(val);
            else if (key == "seed") o.seed = std::stoull(val);
            else if (key == "s") o.s = std::stod(val);
            else if (key == "t") o.t = std::stod(val);
            else if (key == "x") o.x = std::stod(val);
            else if (key == "y") o.y = std::stod(val);
            else if (key == "tol") o.tol = std::stod(val);
            else if (key == "which") o.which = val;
            else if (key == "frame") o.frame = val;
            else if (key == "out") o.out = val;
            else
                throw std::domain_error("config parse error at line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw std::domain_error("config parse error at line " + std::to_string(lineno) +
                                    ": bad value for '" + key + "'");
        }
    }
}

class Output {
  public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::domain_error("cannot open output file: " + path);
        }
    }
    std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config_path, "key=value config file (flags take precedence)");
    cmd->add_option("--q", o.q, "geometric parameter q in (0,1)");
    cmd->add_option("--c", o.c, "boundary parameter c in [0,1/q)");
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--threads", o.threads, "worker threads (0 = HSLPP_THREADS or hardware)");
    cmd->add_option("--out", o.out, "output path (default stdout)");
}

json stat_checks_json(const std::vector<hslpp::StatCheck>& checks) {
    json arr = json::array();
    for (const auto& s : checks)
        arr.push_back({{"stat", s.name},
                       {"estimate", s.estimate},
                       {"se", s.se},
                       {"target", s.target},
                       {"tol", s.tol},
                       {"pass", s.pass}});
    return arr;
}

void emit_json(Output& out, json j) {
    j["schema_version"] = kSchemaVersion;
    out.os() << j.dump(2) << "\n";
}

int run_sample(const Options& o) {
    hslpp::GeomParams params{o.q, o.c};
    params.validate();
    hslpp::WeightArray w = hslpp::sample_weights(params, o.N, o.seed);
    hslpp::LineEnsembleDiscrete fam =
        hslpp::lambda_family(w, static_cast<std::size_t>(o.curves));
    Output out(o.out);
    out.os() << "# schema_version " << kSchemaVersion << "\n";
    out.os() << "m,i,lambda\n";
    for (int m = 0; m <= o.N; ++m)
        for (int i = 1; i <= o.curves; ++i)
            out.os() << m << "," << i << "," << fam.by_m[m].part(i) << "\n";
    return 0;
}

int run_profile_cmd(const Options& o) {
    hslpp::GeomParams params{o.q, o.c};
    hslpp::ProfileResult res = hslpp::run_profile(params, o.N, o.kappa, o.seed, o.curves);
    Output out(o.out);
    auto& os = out.os();
    os << "# schema_version " << kSchemaVersion << "\n";
    os << "x,curve,value\n";
    os.precision(15);
    double n = static_cast<double>(o.N);
    for (std::size_t i = 0; i < res.curves.size(); ++i)
        for (int m = 0; m <= o.N; ++m)
            os << m / n << ",lambda" << (i + 1) << "," << res.curves[i][m] / n << "\n";
    for (int m = 0; m <= o.N; ++m) {
        double xk = m / n;
        os << xk << ",h_bot," << hslpp::h_bot(o.q, xk) << "\n";
        if (params.regime() == hslpp::Regime::Supercritical)
            os << xk << ",h_top," << hslpp::h_top(o.q, o.c, xk) << "\n";
    }
    return 0;
}

int run_top_bm(const Options& o) {
    hslpp::ExperimentConfig cfg;
    cfg.params = {o.q, o.c};
    cfg.N = o.N;
    cfg.replicas = o.replicas;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    cfg.times = o.times.empty() ? std::vector<double>{0.2, 0.4, 0.6, 0.8} : o.times;
    auto checks = hslpp::top_experiment_report(cfg);
    Output out(o.out);
    emit_json(out, json{{"experiment", "top-bm"}, {"N", o.N}, {"replicas", o.replicas},
                        {"checks", stat_checks_json(checks)}});
    return 0;
}

int run_bottom_airy(const Options& o) {
    hslpp::ExperimentConfig cfg;
    cfg.params = {o.q, o.c};
    cfg.N = o.N;
    cfg.kappa = o.kappa;
    cfg.replicas = o.replicas;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    cfg.times = {0.0};
    int n_large = o.N_large > 0 ? o.N_large : 4 * o.N;
    auto checks = hslpp::bottom_experiment_report(cfg, n_large);
    Output out(o.out);
    emit_json(out, json{{"experiment", "bottom-airy"}, {"N", o.N}, {"N_large", n_large},
                        {"replicas", o.replicas}, {"checks", stat_checks_json(checks)}});
    return 0;
}

int run_kernel(const Options& o) {
    hslpp::Kernel2x2 K;
    if (o.which == "geo") {
        hslpp::GeomParams params{o.q, o.c};
        K = hslpp::kernel_geo(params, o.N, static_cast<int>(o.s), static_cast<int>(o.t),
                              static_cast<long long>(o.x), static_cast<long long>(o.y), o.tol);
    } else if (o.which == "bulk") {
        hslpp::BulkScaling bs = hslpp::bulk_params(o.q, o.c, o.kappa);
        K = hslpp::kernel_bulk_N(bs, o.N, o.s, o.t, o.x, o.y, 0.0, 0.0, o.tol);
    } else if (o.which == "edge") {
        hslpp::EdgeScaling es = hslpp::edge_params(o.q, o.c);
        K = hslpp::kernel_edge_N(es, o.N, o.s, o.t, o.x, o.y, 0.0, 0.0, o.tol);
    } else if (o.which == "airy") {
        K.k12 = hslpp::airy_kernel_ext(o.s, o.x, o.t, o.y, o.tol);
    } else if (o.which == "bm") {
        K.k12 = hslpp::kbm(o.s, o.x, o.t, o.y);
    } else if (o.which == "limit12") {
        hslpp::BulkScaling bs = hslpp::bulk_params(o.q, o.c, o.kappa);
        K.k12 = hslpp::limit_bulk_k12(o.s, o.x, o.t, o.y, bs.f1, o.tol);
    } else {
        throw std::domain_error("kernel: unknown --which '" + o.which + "'");
    }
    Output out(o.out);
    emit_json(out, json{{"which", o.which},
                        {"k11", {K.k11.real(), K.k11.imag()}},
                        {"k12", {K.k12.real(), K.k12.imag()}},
                        {"k21", {K.k21.real(), K.k21.imag()}},
                        {"k22", {K.k22.real(), K.k22.imag()}},
                        {"err_estimate", K.err_estimate}});
    return 0;
}

int run_converge(const Options& o) {
    hslpp::GeomParams params{o.q, o.c};
    hslpp::Frame frame;
    if (o.frame == "edge")
        frame = hslpp::Frame::Edge;
    else if (o.frame == "bulk")
        frame = hslpp::Frame::Bulk;
    else
        throw std::domain_error("converge: unknown --frame '" + o.frame + "'");
    std::vector<int> Ns = o.Ns.empty() ? std::vector<int>{100, 400, 800} : o.Ns;
    auto rows = hslpp::run_convergence_study(params, frame, o.kappa, Ns, o.s, o.t, o.x, o.y, o.tol);
    Output out(o.out);
    auto& os = out.os();
    os << "# schema_version " << kSchemaVersion << "\n";
    os << "N,err12,abs11,abs22,quad_err\n";
    os.precision(15);
    for (const auto& r : rows)
        os << r.N << "," << r.err12 << "," << r.abs11 << "," << r.abs22 << "," << r.quad_err
           << "\n";
    return 0;
}

int run_gibbs_check(const Options& o) {
    hslpp::GeomParams params{o.q, o.c};
    auto res = hslpp::gibbs_property_test(params, o.samples, o.seed);
    Output out(o.out);
    emit_json(out, json{{"tv", res.tv},
                        {"conditioned_samples", res.conditioned_samples},
                        {"boundary_top", res.boundary_top},
                        {"boundary_bottom", res.boundary_bottom}});
    return 0;
}

int run_descent_report(const Options& o) {
    hslpp::PhaseSpec spec = (o.frame == "edge")
                                ? hslpp::PhaseSpec::make(o.q, o.kappa, o.c)
                                : hslpp::PhaseSpec::bulk(hslpp::bulk_params(o.q, o.c, o.kappa));
    auto [theta0, R0] = hslpp::find_descent_parameters(spec);
    hslpp::Contour ct = hslpp::build_contour_C(spec.p_c, theta0, R0, 0.0);
    hslpp::DescentReport rep = hslpp::descent_report(spec, ct, 2000, o.c);
    Output out(o.out);
    emit_json(out, json{{"frame", o.frame},
                        {"theta0", theta0},
                        {"R0", R0},
                        {"points", rep.points},
                        {"descent_violations", rep.descent_violations},
                        {"max_res_bar", rep.max_res_bar},
                        {"circle_s_violations", rep.circle_s_violations},
                        {"circle_g_violations", rep.circle_g_violations},
                        {"s1_diff", rep.s1_diff},
                        {"s2_diff", rep.s2_diff},
                        {"clean", rep.clean()}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"half-space LPP numerical laboratory"};
    app.require_subcommand(1);
    Options o;

    auto* sample = app.add_subcommand("sample", "sample an ensemble, emit lambda_i(m,N) as CSV");
    add_common(sample, o);
    sample->add_option("--N", o.N, "system size");
    sample->add_option("--curves", o.curves, "number of curves to emit");

    auto* profile = app.add_subcommand("profile", "profile data with reference curves");
    add_common(profile, o);
    profile->add_option("--N", o.N, "system size");
    profile->add_option("--kappa", o.kappa, "bulk anchor in (kappa0,1)");
    profile->add_option("--curves", o.curves, "number of curves to emit");

    auto* topbm = app.add_subcommand("top-bm", "top-curve Brownianity experiment");
    add_common(topbm, o);
    topbm->add_option("--N", o.N, "system size");
    topbm->add_option("--replicas", o.replicas, "number of replicas");
    topbm->add_option("--t", o.times, "observation times in (kappa0,1)");

    auto* bottom = app.add_subcommand("bottom-airy", "bottom-curve statistics experiment");
    add_common(bottom, o);
    bottom->add_option("--N", o.N, "smaller system size");
    bottom->add_option("--N-large", o.N_large, "larger system size (default 4N)");
    bottom->add_option("--kappa", o.kappa, "bulk anchor in (kappa0,1)");
    bottom->add_option("--replicas", o.replicas, "number of replicas");

    auto* kernel = app.add_subcommand("kernel", "evaluate a kernel at one point");
    add_common(kernel, o);
    kernel->add_option("--which", o.which, "geo|bulk|edge|airy|bm|limit12");
    kernel->add_option("--N", o.N, "system size (geo/bulk/edge)");
    kernel->add_option("--kappa", o.kappa, "bulk anchor");
    kernel->add_option("--s", o.s, "first time (geo: level M_u)");
    kernel->add_option("--t", o.t, "second time (geo: level M_v)");
    kernel->add_option("--x", o.x, "first position");
    kernel->add_option("--y", o.y, "second position");
    kernel->add_option("--tol", o.tol, "quadrature tolerance");

    auto* conv = app.add_subcommand("converge", "kernel convergence table over N");
    add_common(conv, o);
    conv->add_option("--frame", o.frame, "bulk|edge");
    conv->add_option("--Ns", o.Ns, "system sizes");
    conv->add_option("--kappa", o.kappa, "bulk anchor");
    conv->add_option("--s", o.s, "first time");
    conv->add_option("--t", o.t, "second time");
    conv->add_option("--x", o.x, "first position");
    conv->add_option("--y", o.y, "second position");
    conv->add_option("--tol", o.tol, "quadrature tolerance");

    auto* gibbs = app.add_subcommand("gibbs-check", "conditional-uniformity test at N=2");
    add_common(gibbs, o);
    gibbs->add_option("--samples", o.samples, "number of growth-model samples");

    auto* descent = app.add_subcommand("descent-report", "certify a steepest-descent contour");
    add_common(descent, o);
    descent->add_option("--frame", o.frame, "bulk|edge");
    descent->add_option("--kappa", o.kappa, "bulk anchor");

    try {
        // A config file, if named anywhere on the command line, seeds the
        // defaults; explicit flags then override during the real parse.
        for (int i = 1; i + 1 < argc; ++i)
            if (std::string(argv[i]) == "--config") load_config(argv[i + 1], o);
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (*sample) return run_sample(o);
        if (*profile) return run_profile_cmd(o);
        if (*topbm) return run_top_bm(o);
        if (*bottom) return run_bottom_airy(o);
        if (*kernel) return run_kernel(o);
        if (*conv) return run_converge(o);
        if (*gibbs) return run_gibbs_check(o);
        if (*descent) return run_descent_report(o);
    } catch (const std::domain_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
