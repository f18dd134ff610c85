#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "matchsim/engine.hpp"
#include "matchsim/graph.hpp"
#include "matchsim/model.hpp"
#include "matchsim/tape.hpp"

namespace matchsim {

/// True iff w (length 2p) is strongly synchronizing: w_i incompatible with
/// w_j for all i in [1,p], j in [p+1, p+i]. Latency letters (-1) are
/// incompatible with everything. A word that passes costs p(p+1)/2 letter
/// comparisons; failures short-circuit.
bool is_strongly_synchronizing(const Word& w, const CompatibilityGraph& g);

/// The last (up to) 2p arrivals, with incremental strong-synchronization
/// detection: each push performs at most p letter comparisons and keeps,
/// per pending window offset, the count of compatible (violating) pairs.
/// Tests cross-check this bookkeeping against the full predicate above.
class ArrivalWindow {
public:
  ArrivalWindow(const CompatibilityGraph* g, int p);

  void push(int letter);

  bool full() const { return pushed_ >= 2 * p_; }
  /// Current window predicate; O(1), no letter comparisons (those were
  /// paid during push).
  bool strongly_synchronizing() const {
    return full() && violations_[static_cast<std::size_t>((pushed_ - 2 * p_) % p_)] == 0;
  }
  /// Letters oldest-first, length min(pushes, 2p).
  Word word() const;
  std::int64_t pushes() const { return pushed_; }

private:
  int letter_at(std::int64_t position) const {
    return letters_[static_cast<std::size_t>(position % (2 * p_))];
  }

  const CompatibilityGraph* graph_;
  int p_;
  std::vector<int> letters_;     // ring, capacity 2p
  std::vector<int> violations_;  // ring over window offsets, capacity p
  std::int64_t pushed_ = 0;
};

/// z(w) for a strongly synchronizing w: the word-profile reached from the
/// empty state under the second half of w. Equal to W(x, w) for every x.
/// draws feed the policy, one per second-half letter.
Word endpoint_state(const Word& w, const Policy& policy, const CompatibilityGraph& g,
                    std::span<const double> draws);

/// Exhaustive synchronization check: folds w from every state of the
/// word-profile space (shared draws) and compares the results, latency
/// letters mapped to 0 first. Refuses state spaces above `state_cap`.
bool is_synchronizing_bruteforce(const Word& w, const Policy& policy,
                                 const CompatibilityGraph& g, int p, bool latency,
                                 std::span<const double> draws,
                                 std::size_t state_cap = 1u << 22);

/// Algorithm 3: perfect sample of the word-profile chain, detecting
/// strongly synchronizing words in the sliding window of the last 2p
/// arrivals. Deterministic patience required; latency allowed.
/// options.initial_horizon == 0 selects the default 2p.
SampleResult<Word> sample_syncword(const CompatibilityGraph& g, const ArrivalModel& model,
                                   const Policy& policy, InputTape& tape,
                                   SampleOptions options = {.initial_horizon = 0});

}  // namespace matchsim
