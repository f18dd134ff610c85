#pragma once

#include <gmpxx.h>

#include <optional>
#include <span>
#include <vector>

#include "matchsim/graph.hpp"

namespace matchsim {

using BigInt = mpz_class;

/// Number of classes incompatible with every letter of z (a class counts
/// as incompatible with itself: the graph is simple).
int beta(std::span<const int> z, const CompatibilityGraph& g);

/// Distinct letters of the second half of w (length 2p), in order of first
/// appearance. Defined for strongly synchronizing words.
std::vector<int> trace_of(std::span<const int> w);

/// Every admissible trace: each permutation of each non-empty U subset of
/// the classes with E(U) != V, ordered by subset mask then lexicographically.
std::vector<std::vector<int>> enumerate_traces(const CompatibilityGraph& g);

/// N_z: exact number of strongly synchronizing words of length 2p whose
/// trace is z, by dynamic programming over the first-occurrence index
/// family. Zero when p < |z|.
BigInt count_for_trace(std::span<const int> z, int p, const CompatibilityGraph& g);

/// Reference evaluation of N_z enumerating index families directly; kept
/// for cross-checking the DP at small p.
BigInt count_for_trace_direct(std::span<const int> z, int p, const CompatibilityGraph& g);

/// N(G,p): total number of strongly synchronizing words, exact.
BigInt count_strongly_synchronizing(const CompatibilityGraph& g, int p);

/// Exhaustive count over all n^(2p) words; test oracle for small p.
BigInt brute_force_count_strongly_synchronizing(const CompatibilityGraph& g, int p);

/// q^(p,mu): probability that 2p consecutive arrivals form a strongly
/// synchronizing word, via the mu-weighted trace sum. For uniform mu this
/// equals N(G,p)/n^(2p).
double sync_probability(const CompatibilityGraph& g, int p, std::span<const double> mu);

struct CoalescenceBounds {
  double iterations;  // bound on E[I], uniform mu
  double horizon;     // bound on E[-T] = p * 2^iterations
};

/// Corollary bounds from N strongly synchronizing words under uniform mu;
/// nullopt when N == 0 (the control never triggers).
std::optional<CoalescenceBounds> coalescence_bounds(int n, int p, const BigInt& N);

/// General-mu horizon bound 2p / q^(p,mu); nullopt when q == 0.
std::optional<double> horizon_bound_for_mu(const CompatibilityGraph& g, int p,
                                           std::span<const double> mu);

}  // namespace matchsim
