#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "matchsim/meter.hpp"

namespace matchsim {

// Sentinel letters of word-profiles. Classes are 1-based; 0 marks a slot
// whose item was matched (or never existed), -1 marks a latency slot.
inline constexpr int kMatchedSlot = 0;
inline constexpr int kLatency = -1;

/// Simple undirected compatibility graph on classes 1..n.
/// Immutable after construction; edges are kept canonical (i<j, sorted)
/// so that serialized graphs round-trip bit-exactly.
class CompatibilityGraph {
public:
  CompatibilityGraph(int n, std::vector<std::pair<int, int>> edges);

  int size() const { return n_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  /// True iff {i,j} is an edge. Counts one letter operation when a meter
  /// is active. i == j is never compatible (simple graph).
  bool compatible(int i, int j) const {
    check_class(i);
    check_class(j);
    note_op();
    return adjacency_[static_cast<std::size_t>(i) * (n_ + 1) + j] != 0;
  }

  /// Word-profile letter variant: sentinels 0 and -1 are compatible with
  /// nothing (-1 by the latency convention, 0 because the slot is empty).
  /// Still one letter operation.
  bool letter_compatible(int a, int b) const {
    if (a <= 0 || b <= 0) {
      note_op();
      return false;
    }
    return compatible(a, b);
  }

  /// E(U): all classes sharing an edge with some member of u.
  std::vector<int> neighborhood(std::span<const int> u) const;

  /// True iff the graph is connected (n >= 1; the empty edge set on one
  /// node counts as connected).
  bool connected() const;

  bool operator==(const CompatibilityGraph& other) const {
    return n_ == other.n_ && edges_ == other.edges_;
  }

private:
  void check_class(int i) const;

  int n_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<char> adjacency_;  // (n+1)^2, row-major, 1-based
};

/// Erdos-Renyi graph with edge probability q, resampled until connected.
/// Deterministic for a fixed seed. Throws ConfigError when the attempt
/// budget is exhausted (q too small to reach connectivity in practice).
CompatibilityGraph random_connected_er(int n, double q, std::uint64_t seed,
                                       int max_attempts = 100000);

/// Built-in graphs: "paw", "path:<n>", "complete:<n>".
CompatibilityGraph named_graph(const std::string& name);

}  // namespace matchsim
