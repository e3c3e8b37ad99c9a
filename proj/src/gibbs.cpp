#include "hslpp/gibbs.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace hslpp {

namespace {

unsigned long long uniform_below(CounterRng& rng, unsigned long long m) {
    // Rejection against the largest multiple of m to avoid modulo bias.
    unsigned long long limit = UINT64_MAX - UINT64_MAX % m;
    unsigned long long v;
    do {
        v = rng.next_u64();
    } while (v >= limit);
    return v % m;
}

}  // namespace

double count_paths(const BridgeSpec& spec) {
    if (!spec.feasible()) return 0.0;
    long long dz = spec.z2 - spec.z1;
    long long dt = spec.t2 - spec.t1;
    // binom(dz + dt - 1, dt - 1)
    double r = 1.0;
    for (long long j = 1; j <= dt - 1; ++j)
        r *= static_cast<double>(dz + j) / static_cast<double>(j);
    return r;
}

std::vector<long long> sample_bridge(const BridgeSpec& spec, CounterRng& rng) {
    if (!spec.feasible()) throw std::domain_error("sample_bridge: infeasible endpoints");
    long long dz = spec.z2 - spec.z1;
    long long dt = spec.t2 - spec.t1;
    long long slots = dz + dt - 1;
    long long bars = dt - 1;

    // Floyd's algorithm: uniform `bars`-subset of {0, ..., slots-1}.
    std::set<long long> chosen;
    for (long long j = slots - bars; j < slots; ++j) {
        long long t = static_cast<long long>(uniform_below(rng, static_cast<unsigned long long>(j + 1)));
        if (!chosen.insert(t).second) chosen.insert(j);
    }

    std::vector<long long> path;
    path.reserve(dt + 1);
    path.push_back(spec.z1);
    long long prev = -1;
    long long acc = spec.z1;
    for (long long b : chosen) {
        acc += b - prev - 1;  // stars between consecutive bars
        path.push_back(acc);
        prev = b;
    }
    acc += slots - prev - 1;
    path.push_back(acc);
    // With bars = dt - 1 the path has dt + 1 entries and ends at z2.
    return path;
}

long long InterlacedSpec::ceil_at(long long s) const {
    if (ceiling.empty()) return kNoCeiling;
    return ceiling.at(static_cast<std::size_t>(s - t1));
}

long long InterlacedSpec::floor_at(long long s) const {
    if (floor_bound.empty()) return kNoFloor;
    return floor_bound.at(static_cast<std::size_t>(s - t1));
}

bool interlaced_feasible(const InterlacedSpec& spec) {
    int k = spec.lines();
    if (k == 0) return true;
    long long dt = spec.t2 - spec.t1;
    if (dt < 1 || spec.right.size() != spec.left.size()) return false;

    // Pointwise-maximal configuration, top line first.  upper[r] holds the
    // maximal value of the line above at time t1 + r (the ceiling for i = 1).
    std::vector<long long> upper(dt + 1);
    for (long long r = 0; r <= dt; ++r) upper[r] = spec.ceil_at(spec.t1 + r);

    for (int i = 0; i < k; ++i) {
        long long L = spec.left[i], R = spec.right[i];
        if (R < L) return false;
        // cap at time r in (t1, t2] is upper[r-1]; suffix minima give the
        // maximal nondecreasing path, which must stay above both endpoints.
        std::vector<long long> bmax(dt + 1);
        long long suffix = R;
        for (long long r = dt; r >= 1; --r) {
            suffix = std::min(suffix, upper[r - 1]);
            bmax[r] = suffix;
            if (suffix < L) return false;
        }
        if (bmax[dt] != R) return false;  // R exceeds some cap on the way
        bmax[0] = L;
        upper = bmax;
    }
    for (long long r = 1; r <= dt; ++r)
        if (upper[r - 1] < spec.floor_at(spec.t1 + r)) return false;
    return true;
}

std::vector<std::vector<long long>> sample_interlaced(const InterlacedSpec& spec, CounterRng& rng,
                                                      long long max_attempts) {
    if (!interlaced_feasible(spec))
        throw std::domain_error("sample_interlaced: infeasible window");
    int k = spec.lines();
    long long dt = spec.t2 - spec.t1;

    for (long long attempt = 0; attempt < max_attempts; ++attempt) {
        std::vector<std::vector<long long>> lines(k);
        for (int i = 0; i < k; ++i) {
            BridgeSpec b{spec.t1, spec.t2, spec.left[i], spec.right[i]};
            lines[i] = sample_bridge(b, rng);
        }
        bool ok = true;
        for (long long r = 1; r <= dt && ok; ++r) {
            if (spec.ceil_at(spec.t1 + r - 1) < lines[0][r]) ok = false;
            for (int i = 0; i + 1 < k && ok; ++i)
                if (lines[i][r - 1] < lines[i + 1][r]) ok = false;
            if (ok && lines[k - 1][r - 1] < spec.floor_at(spec.t1 + r)) ok = false;
        }
        if (ok) return lines;
    }
    throw std::runtime_error("sample_interlaced: rejection attempt cap exhausted");
}

GibbsTestResult gibbs_property_test(const GeomParams& params, long long n_samples,
                                    unsigned long long seed) {
    params.validate();
    // Boundary pair (top, bottom) = (lambda_1(2,2), lambda_2(2,2)); interior
    // observable is lambda_1(1,2).
    std::map<std::pair<long long, long long>, std::map<long long, long long>> hist;
    for (long long rep = 0; rep < n_samples; ++rep) {
        unsigned long long s = seed + static_cast<unsigned long long>(rep) * 0x9e3779b97f4a7c15ull;
        WeightArray w = sample_weights(params, 2, s);
        LineEnsembleDiscrete fam = lambda_family(w);
        long long a = fam.by_m[2].part(1);
        long long b = fam.by_m[2].part(2);
        long long v = fam.by_m[1].part(1);
        hist[{a, b}][v] += 1;
    }

    // Condition on the most frequent boundary with a nondegenerate interior
    // range (a > b), so uniformity is a nontrivial statement.
    GibbsTestResult res;
    long long best = -1;
    std::map<long long, long long> cond;
    for (const auto& [key, counts] : hist) {
        if (key.first <= key.second) continue;
        long long total = 0;
        for (const auto& [v, n] : counts) total += n;
        if (total > best) {
            best = total;
            res.boundary_top = key.first;
            res.boundary_bottom = key.second;
            cond = counts;
        }
    }
    if (best <= 0) return res;
    res.conditioned_samples = best;

    // Reference law: uniform sampling of the one-line window with the same
    // boundary data.  The ceiling is absent; the line below enters at time 2
    // with value b, giving the floor constraint B_1(1) >= b.
    InterlacedSpec spec;
    spec.t1 = 0;
    spec.t2 = 2;
    spec.left = {0};
    spec.right = {res.boundary_top};
    spec.floor_bound = {kNoFloor, kNoFloor, res.boundary_bottom};

    CounterRng rng(seed, 1);
    long long m = std::max<long long>(best * 4, 20000);
    std::map<long long, long long> ref;
    for (long long rep = 0; rep < m; ++rep) {
        auto lines = sample_interlaced(spec, rng);
        ref[lines[0][1]] += 1;
    }

    std::set<long long> support;
    for (const auto& [v, n] : cond) support.insert(v);
    for (const auto& [v, n] : ref) support.insert(v);
    double tv = 0.0;
    for (long long v : support) {
        double p = cond.count(v) ? static_cast<double>(cond.at(v)) / best : 0.0;
        double q = ref.count(v) ? static_cast<double>(ref.at(v)) / m : 0.0;
        tv += std::abs(p - q);
    }
    res.tv = 0.5 * tv;
    return res;
}

}  // namespace hslpp
