// Pfaffian Schur process with single-variable specializations: exact weights,
// normalization, small-N enumeration, and the mapping to line ensembles.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hslpp/lpp.hpp"
#include "hslpp/partition.hpp"
#include "hslpp/rng.hpp"

namespace hslpp {

/// Partition sequence lambda^1 ⪰ lambda^2 ⪰ ... ⪰ lambda^N (⪰ empty).
struct SchurSequence {
    int N = 0;
    std::vector<Partition> lam;  // lam[r-1] = lambda^r

    bool operator==(const SchurSequence& o) const { return N == o.N && lam == o.lam; }
    bool operator<(const SchurSequence& o) const { return lam < o.lam; }
};

/// Curves L_i(s) = lambda^{N-s+1}_i for s = 1..N, L_i(0) = 0.
struct GibbsLineEnsemble {
    int N = 0;
    std::vector<Partition> by_s;  // by_s[s], s = 0..N

    long long L(std::size_t i, int s) const { return by_s.at(s).part(i); }
};

/// Single-variable skew Schur polynomial s_{lambda/mu}(x) = 1{mu ⪯ lambda} x^{|lambda|-|mu|}.
double skew_schur_weight(const Partition& lambda, const Partition& mu, double x);

/// Boundary monomial tau_lambda(c) = c^{lambda_1 - lambda_2 + lambda_3 - ...}.
double boundary_monomial(const Partition& lambda, double c);

/// tau_{lambda^1}(c) * prod_r s_{lambda^r / lambda^{r+1}}(q); zero iff some
/// consecutive interlacing fails.
double unnormalized_weight(const SchurSequence& seq, const GeomParams& params);

/// Z = (1-cq)^{-N} (1-q^2)^{-N(N-1)/2}.
double partition_function(const GeomParams& params, int N);

/// All sequences with parts <= cap, with exact probabilities; the tail mass
/// 1 - sum is reported through `tail_mass`.
std::vector<std::pair<SchurSequence, double>> enumerate_exact(const GeomParams& params, int N,
                                                              long long cap, double* tail_mass = nullptr);

/// Draw from an enumerated distribution by inverse CDF (tail mass is assigned
/// to the last entry; keep it negligible via the cap).
const SchurSequence& sample_enumerated(const std::vector<std::pair<SchurSequence, double>>& dist,
                                       CounterRng& rng);

/// L_i(s) = lambda^{N-s+1}_i.
GibbsLineEnsemble to_line_ensemble(const SchurSequence& seq);

}  // namespace hslpp
