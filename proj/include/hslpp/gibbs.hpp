// Gibbs resampling of line-ensemble windows.
//
// Within a time window, and conditioned on the entry/exit values of the lines
// together with bounding curves above and below, the discrete line ensembles
// of this model are uniform over monotone interlaced configurations.  This
// module counts and samples nondecreasing integer bridges, samples uniform
// interlaced families by rejection, and tests the conditional-uniformity
// property against direct simulation of the growth model.

#pragma once

#include <cstdint>
#include <vector>

#include "hslpp/lpp.hpp"
#include "hslpp/rng.hpp"

namespace hslpp {

/// Sentinel values for absent ceiling/floor constraints.
inline constexpr long long kNoCeiling = INT64_MAX;
inline constexpr long long kNoFloor = INT64_MIN;

/// A nondecreasing integer path on times t1..t2 with fixed endpoints.
struct BridgeSpec {
    long long t1 = 0, t2 = 0;
    long long z1 = 0, z2 = 0;

    bool feasible() const { return t2 > t1 && z2 >= z1; }
};

/// Number of nondecreasing bridges: compositions of z2-z1 into t2-t1
/// nonnegative increments.  Returned as a double since counts grow fast.
double count_paths(const BridgeSpec& spec);

/// Uniform sample among all bridges; values[r] is the path at time t1+r.
std::vector<long long> sample_bridge(const BridgeSpec& spec, CounterRng& rng);

/// k lines B_1 >= ... >= B_k on times t1..t2, each a nondecreasing bridge with
/// prescribed endpoints, subject to the interlacing B_i(r-1) >= B_{i+1}(r),
/// with B_0 read from `ceiling` and B_{k+1} from `floor_bound` (indexed by
/// r - t1; empty vectors mean unconstrained).
struct InterlacedSpec {
    long long t1 = 0, t2 = 0;
    std::vector<long long> left, right;        ///< per-line values at t1, t2
    std::vector<long long> ceiling, floor_bound;  ///< per-time bounds, size t2-t1+1

    int lines() const { return static_cast<int>(left.size()); }
    long long ceil_at(long long s) const;
    long long floor_at(long long s) const;
};

/// True iff at least one admissible configuration exists (checked by building
/// the pointwise-maximal configuration top-down).
bool interlaced_feasible(const InterlacedSpec& spec);

/// Uniform sample over admissible configurations, by rejection from
/// independent uniform bridges.  result[i][r] is line i+1 at time t1+r.
/// Throws if the spec is infeasible or the attempt cap is exhausted.
std::vector<std::vector<long long>> sample_interlaced(const InterlacedSpec& spec, CounterRng& rng,
                                                      long long max_attempts = 2000000);

struct GibbsTestResult {
    double tv = 1.0;                    ///< total variation between the two laws
    long long conditioned_samples = 0;  ///< growth-model samples matching the boundary
    long long boundary_top = 0, boundary_bottom = 0;  ///< conditioning values
};

/// Conditional-uniformity check at N = 2.  Samples the symmetric growth model,
/// conditions the top line at the interior time on the most frequent boundary
/// pair, and compares that conditional law (total variation) against direct
/// uniform sampling of the corresponding one-line interlaced window.
GibbsTestResult gibbs_property_test(const GeomParams& params, long long n_samples,
                                    unsigned long long seed);

}  // namespace hslpp
