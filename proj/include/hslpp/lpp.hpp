// Half-space geometric last passage percolation: weight sampling, last
// passage times G_k, the partitions lambda(m,n), and discrete line ensembles.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hslpp/partition.hpp"

namespace hslpp {

enum class Regime { Subcritical, Critical, Supercritical };

struct GeomParams {
    double q = 0.5;  // in (0,1)
    double c = 1.4;  // in [0, 1/q)

    Regime regime() const {
        if (c < 1.0) return Regime::Subcritical;
        if (c == 1.0) return Regime::Critical;
        return Regime::Supercritical;
    }

    void validate() const {
        if (!(q > 0.0 && q < 1.0)) throw std::domain_error("GeomParams: q must lie in (0,1)");
        if (!(c >= 0.0 && c < 1.0 / q)) throw std::domain_error("GeomParams: c must lie in [0,1/q)");
    }
};

/// Symmetric n x n array of nonnegative integer weights.
class WeightArray {
public:
    WeightArray(int n, long long fill = 0) : n_(n), w_(static_cast<std::size_t>(n) * n, fill) {
        if (n < 1) throw std::invalid_argument("WeightArray: n must be positive");
    }

    int size() const { return n_; }

    /// 1-based access.
    long long operator()(int i, int j) const { return w_[idx(i, j)]; }
    void set(int i, int j, long long v) {
        w_[idx(i, j)] = v;
        w_[idx(j, i)] = v;
    }

    bool is_symmetric() const {
        for (int i = 1; i <= n_; ++i)
            for (int j = i + 1; j <= n_; ++j)
                if ((*this)(i, j) != (*this)(j, i)) return false;
        return true;
    }

    /// Sum over the m x n top-left rectangle; throws on (unlikely) overflow.
    long long rectangle_sum(int m, int n) const;

private:
    std::size_t idx(int i, int j) const {
        if (i < 1 || j < 1 || i > n_ || j > n_) throw std::out_of_range("WeightArray: index out of range");
        return static_cast<std::size_t>(i - 1) * n_ + (j - 1);
    }

    int n_;
    std::vector<long long> w_;
};

/// Discrete line ensemble lambda_i(m,N), m = 0..N.  Only the first
/// `max_curves` curves are stored when truncation was requested.
struct LineEnsembleDiscrete {
    int N = 0;
    std::vector<Partition> by_m;  // by_m[m] = lambda(m, N), m = 0..N

    long long lambda(std::size_t i, int m) const { return by_m.at(m).part(i); }

    /// Verify the interlacing chain lambda(m-1,N) ⪯ lambda(m,N) for all m.
    bool interlaced() const;
};

/// Shape-only RSK row insertion with letter multiplicities.  Truncation to
/// `max_rows` rows is exact for the retained rows: bumping only moves letters
/// downward, so discarding what falls out of the last tracked row cannot
/// change the rows above it.
class RskAccumulator {
public:
    explicit RskAccumulator(std::size_t max_rows = 0) : max_rows_(max_rows) {}

    void insert_letter(int letter);
    void insert_cell(int letter, long long count) {
        for (long long r = 0; r < count; ++r) insert_letter(letter);
    }

    Partition shape() const;

private:
    std::vector<std::vector<int>> rows_;  // weakly increasing letters per row
    std::size_t max_rows_;
};

/// Sample the symmetric weight field: Geom(q^2) above the diagonal,
/// Geom(cq) on it.  Deterministic given (params, n, seed).
WeightArray sample_weights(const GeomParams& params, int n, std::uint64_t seed);

/// G_1(m,n) by the standard corner-growth dynamic program.
long long last_passage_g1(const WeightArray& W, int m, int n);

/// lambda(m,n): the partition with lambda_1 + ... + lambda_k = G_k(m,n).
/// max_rows = 0 computes the full shape; max_rows = k computes the first k
/// parts exactly.
Partition greene_shape(const WeightArray& W, int m, int n, std::size_t max_rows = 0);

/// Exhaustive maximum of W(pi_1) + ... + W(pi_k) over k pairwise
/// vertex-disjoint up-right paths (1,i) -> (m, n-k+i).  Exponential cost;
/// guarded by `size_cap` on max(m,n).
long long brute_force_gk(const WeightArray& W, int m, int n, int k, int size_cap = 5);

/// All partitions lambda(m,N) for m = 0..N (optionally only the first
/// max_curves parts of each).
LineEnsembleDiscrete lambda_family(const WeightArray& W, std::size_t max_curves = 0);

}  // namespace hslpp
