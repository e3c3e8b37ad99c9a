#include "hslpp/schur.hpp"

#include <cmath>
#include <stdexcept>

namespace hslpp {

double skew_schur_weight(const Partition& lambda, const Partition& mu, double x) {
    if (x < 0.0) throw std::domain_error("skew_schur_weight: x must be nonnegative");
    if (!interlaces(lambda, mu)) return 0.0;
    return std::pow(x, static_cast<double>(lambda.weight() - mu.weight()));
}

double boundary_monomial(const Partition& lambda, double c) {
    if (c < 0.0) throw std::domain_error("boundary_monomial: c must be nonnegative");
    long long e = lambda.alternating_sum();
    if (e == 0) return 1.0;  // covers the c = 0 convention 0^0 = 1
    return std::pow(c, static_cast<double>(e));
}

double unnormalized_weight(const SchurSequence& seq, const GeomParams& params) {
    params.validate();
    if (static_cast<int>(seq.lam.size()) != seq.N)
        throw std::invalid_argument("unnormalized_weight: sequence length mismatch");
    double w = boundary_monomial(seq.lam.empty() ? Partition{} : seq.lam.front(), params.c);
    for (int r = 1; r <= seq.N; ++r) {
        const Partition& lambda = seq.lam[r - 1];
        const Partition& mu = (r < seq.N) ? seq.lam[r] : Partition{};
        w *= skew_schur_weight(lambda, mu, params.q);
        if (w == 0.0) return 0.0;
    }
    return w;
}

double partition_function(const GeomParams& params, int N) {
    params.validate();
    if (params.c * params.q >= 1.0) throw std::domain_error("partition_function: cq >= 1 diverges");
    double z = std::pow(1.0 - params.c * params.q, -static_cast<double>(N));
    z *= std::pow(1.0 - params.q * params.q, -0.5 * N * (N - 1));
    return z;
}

namespace {

// Enumerate partitions lambda with mu ⪯ lambda and lambda_1 <= cap.
// Interlacing pins lambda_{i+1} into [mu_{i+1}, mu_i], so lambda has at most
// length(mu)+1 parts.
void interlacing_covers(const Partition& mu, long long cap, std::vector<Partition>& out) {
    std::size_t max_len = mu.length() + 1;
    std::vector<long long> parts(max_len, 0);
    // Recursive fill of parts[0..max_len-1].
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == max_len) {
            out.emplace_back(parts);
            return;
        }
        long long lo = mu.part(i + 1);
        long long hi = (i == 0) ? cap : std::min(mu.part(i), parts[i - 1]);
        for (long long v = lo; v <= hi; ++v) {
            parts[i] = v;
            self(self, i + 1);
        }
        parts[i] = 0;
    };
    rec(rec, 0);
}

}  // namespace

std::vector<std::pair<SchurSequence, double>> enumerate_exact(const GeomParams& params, int N,
                                                              long long cap, double* tail_mass) {
    params.validate();
    if (N < 0 || N > 3) throw std::length_error("enumerate_exact: N must be in 0..3");
    if (cap < 0 || cap > 256) throw std::length_error("enumerate_exact: cap out of supported range");

    std::vector<std::pair<SchurSequence, double>> result;
    double z = partition_function(params, N);

    // Build sequences from lambda^N up to lambda^1.
    std::vector<Partition> stack(static_cast<std::size_t>(N));
    auto rec = [&](auto&& self, int r) -> void {  // r counts down from N to 1
        if (r == 0) {
            SchurSequence seq;
            seq.N = N;
            seq.lam.assign(stack.rbegin(), stack.rend());
            double w = unnormalized_weight(seq, params);
            if (w > 0.0) result.emplace_back(std::move(seq), w / z);
            return;
        }
        const Partition& below = (r == N) ? Partition{} : stack[static_cast<std::size_t>(N - r) - 1];
        std::vector<Partition> covers;
        interlacing_covers(below, cap, covers);
        for (auto& lam : covers) {
            stack[static_cast<std::size_t>(N - r)] = lam;
            self(self, r - 1);
        }
    };
    if (N == 0) {
        result.emplace_back(SchurSequence{0, {}}, 1.0);
    } else {
        rec(rec, N);
    }

    double total = 0.0;
    for (const auto& [seq, p] : result) total += p;
    if (tail_mass) *tail_mass = 1.0 - total;
    return result;
}

const SchurSequence& sample_enumerated(const std::vector<std::pair<SchurSequence, double>>& dist,
                                       CounterRng& rng) {
    if (dist.empty()) throw std::invalid_argument("sample_enumerated: empty distribution");
    double u = rng.next_unit();
    double acc = 0.0;
    for (const auto& [seq, p] : dist) {
        acc += p;
        if (u <= acc) return seq;
    }
    return dist.back().first;
}

GibbsLineEnsemble to_line_ensemble(const SchurSequence& seq) {
    GibbsLineEnsemble ens;
    ens.N = seq.N;
    ens.by_s.resize(static_cast<std::size_t>(seq.N) + 1);
    ens.by_s[0] = Partition{};
    for (int s = 1; s <= seq.N; ++s) ens.by_s[s] = seq.lam[static_cast<std::size_t>(seq.N - s)];
    return ens;
}

}  // namespace hslpp
