#include "hslpp/lpp.hpp"

#include <algorithm>
#include <limits>

#include "hslpp/rng.hpp"

namespace hslpp {

long long WeightArray::rectangle_sum(int m, int n) const {
    long long total = 0;
    for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= n; ++j) {
            long long v = (*this)(i, j);
            if (total > std::numeric_limits<long long>::max() - v)
                throw std::overflow_error("WeightArray: rectangle sum overflow");
            total += v;
        }
    return total;
}

bool LineEnsembleDiscrete::interlaced() const {
    for (int m = 1; m <= N; ++m)
        if (!interlaces(by_m[m], by_m[m - 1])) return false;
    return true;
}

void RskAccumulator::insert_letter(int letter) {
    int x = letter;
    for (std::size_t r = 0;; ++r) {
        if (max_rows_ != 0 && r >= max_rows_) return;  // exact truncation
        if (r == rows_.size()) rows_.emplace_back();
        auto& row = rows_[r];
        auto it = std::upper_bound(row.begin(), row.end(), x);
        if (it == row.end()) {
            row.push_back(x);
            return;
        }
        std::swap(*it, x);  // bump the displaced letter to the next row
    }
}

Partition RskAccumulator::shape() const {
    std::vector<long long> parts;
    parts.reserve(rows_.size());
    for (const auto& row : rows_) parts.push_back(static_cast<long long>(row.size()));
    return Partition(std::move(parts));
}

WeightArray sample_weights(const GeomParams& params, int n, std::uint64_t seed) {
    params.validate();
    WeightArray W(n);
    CounterRng rng(seed);
    double off = params.q * params.q;
    double diag = params.c * params.q;
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j) W.set(i, j, rng.next_geometric(i == j ? diag : off));
    return W;
}

long long last_passage_g1(const WeightArray& W, int m, int n) {
    if (m < 1 || n < 1 || m > W.size() || n > W.size())
        throw std::out_of_range("last_passage_g1: indices out of range");
    std::vector<long long> row(static_cast<std::size_t>(n) + 1, 0);
    for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= n; ++j) row[j] = W(i, j) + std::max(row[j], row[j - 1]);
    return row[n];
}

Partition greene_shape(const WeightArray& W, int m, int n, std::size_t max_rows) {
    if (m < 1 || n < 1 || m > W.size() || n > W.size())
        throw std::out_of_range("greene_shape: indices out of range");
    W.rectangle_sum(m, n);  // overflow guard on the total weight
    RskAccumulator acc(max_rows);
    for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= n; ++j) acc.insert_cell(j, W(i, j));
    return acc.shape();
}

namespace {

// One up-right path (1,a) -> (m, b) as the set of visited cells, built by
// depth-first enumeration.
void enumerate_paths(int m, int n, int a, int b, int i, int j, std::vector<int>& cells,
                     std::vector<std::vector<int>>& out) {
    cells.push_back((i - 1) * n + (j - 1));
    if (i == m && j == b) {
        out.push_back(cells);
    } else {
        if (i < m) enumerate_paths(m, n, a, b, i + 1, j, cells, out);
        if (j < b) enumerate_paths(m, n, a, b, i, j + 1, cells, out);
    }
    cells.pop_back();
}

long long path_weight(const WeightArray& W, int n, const std::vector<int>& cells) {
    long long s = 0;
    for (int cell : cells) s += W(cell / n + 1, cell % n + 1);
    return s;
}

bool disjoint(const std::vector<int>& p, std::vector<char>& used) {
    for (int cell : p)
        if (used[cell]) return false;
    for (int cell : p) used[cell] = 1;
    return true;
}

void release(const std::vector<int>& p, std::vector<char>& used) {
    for (int cell : p) used[cell] = 0;
}

// Try all combinations of one path per start point, tracking cell usage.
void search(const std::vector<std::vector<std::vector<int>>>& families, std::size_t idx,
            std::vector<char>& used, long long acc, const WeightArray& W, int n, long long& best) {
    if (idx == families.size()) {
        best = std::max(best, acc);
        return;
    }
    for (const auto& p : families[idx]) {
        if (!disjoint(p, used)) continue;
        search(families, idx + 1, used, acc + path_weight(W, n, p), W, n, best);
        release(p, used);
    }
}

}  // namespace

long long brute_force_gk(const WeightArray& W, int m, int n, int k, int size_cap) {
    if (m < 1 || n < 1 || m > W.size() || n > W.size())
        throw std::out_of_range("brute_force_gk: indices out of range");
    if (k < 1) throw std::invalid_argument("brute_force_gk: k must be positive");
    if (m > size_cap || n > size_cap)
        throw std::length_error("brute_force_gk: instance exceeds the size cap");
    // k beyond min(m,n): the k paths cover the whole rectangle.
    if (k > std::min(m, n)) return W.rectangle_sum(m, n);

    std::vector<std::vector<std::vector<int>>> families(k);
    for (int i = 1; i <= k; ++i) {
        std::vector<int> cells;
        enumerate_paths(m, n, i, n - k + i, 1, i, cells, families[static_cast<std::size_t>(i) - 1]);
    }
    long long best = std::numeric_limits<long long>::min();
    std::vector<char> used(static_cast<std::size_t>(m) * n, 0);
    search(families, 0, used, 0, W, n, best);
    if (best == std::numeric_limits<long long>::min())
        throw std::logic_error("brute_force_gk: no disjoint path tuple exists");
    return best;
}

LineEnsembleDiscrete lambda_family(const WeightArray& W, std::size_t max_curves) {
    int N = W.size();
    LineEnsembleDiscrete ens;
    ens.N = N;
    ens.by_m.resize(static_cast<std::size_t>(N) + 1);
    ens.by_m[0] = Partition{};  // lambda(0,N) is empty
    RskAccumulator acc(max_curves);
    for (int i = 1; i <= N; ++i) {
        for (int j = 1; j <= N; ++j) acc.insert_cell(j, W(i, j));
        ens.by_m[i] = acc.shape();
    }
    return ens;
}

}  // namespace hslpp
