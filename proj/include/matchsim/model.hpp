#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "matchsim/graph.hpp"
#include "matchsim/tape.hpp"

namespace matchsim {

/// Admissible matching policies. The chosen match is a function of the
/// current state, the arrival, and (for ml/random ties) one uniform draw;
/// fcfm and priority consume no randomness.
struct Policy {
  enum class Kind { fcfm, ml, priority, random };

  Kind kind = Kind::fcfm;
  std::vector<int> priority_order;  // permutation of 1..n, priority only

  static Policy fcfm() { return {Kind::fcfm, {}}; }
  static Policy ml() { return {Kind::ml, {}}; }
  static Policy random() { return {Kind::random, {}}; }
  static Policy priority(std::vector<int> order);

  /// Parses "fcfm", "ml", "random" or "priority:3,1,2,4"; the priority
  /// order must be a permutation of 1..n.
  static Policy parse(const std::string& text, int n);
  std::string name() const;
};

/// Word-profile: length-p word over classes, 0 (matched/empty) and -1
/// (latency slot). Position i holds the slot of the arrival p-i steps ago.
using Word = std::vector<int>;

std::string word_to_string(const Word& w);

/// One step of the word-profile chain: candidate slots are the stored
/// letters compatible with the arrival; if any, the policy picks one, that
/// slot becomes 0 and the matched arrival contributes a 0 slot; otherwise
/// the arrival's class (or -1 for latency) enters on the right. The head
/// letter drops off either way.
Word word_step(const Word& state, int arrival, const Policy& policy,
               const CompatibilityGraph& g, double draw);

/// The slot the policy matches for this arrival, or nullopt when nothing
/// stored is compatible (a latency arrival never matches).
std::optional<std::size_t> word_match_position(const Word& state, int arrival,
                                               const Policy& policy,
                                               const CompatibilityGraph& g, double draw);

/// Left fold of word_step over a word of arrivals; draws[i] feeds step i.
Word apply_word(Word state, std::span<const int> arrivals, const Policy& policy,
                const CompatibilityGraph& g, std::span<const double> draws);

/// All words of length p over {0} u {-1 if latency} u {1..n}, in a fixed
/// enumeration order (used by the primitive CFTP and the agreement tests).
std::vector<Word> enumerate_word_states(int n, int p, bool latency);

/// Index of a word in the enumerate_word_states order.
std::size_t word_state_index(const Word& w, int n, bool latency);

/// Profile-chain item: remaining patience (> 0) and class, in arrival order.
struct ProfileItem {
  double remaining = 0.0;
  int cls = 0;

  bool operator==(const ProfileItem&) const = default;
};

/// General-patience profile state; empty vector is the empty system.
using Profile = std::vector<ProfileItem>;

/// One step of the profile chain: match-or-store the arrival, erase items
/// whose remaining patience dropped under 1 (the fresh arrival included),
/// then age everything by one slot. Latency events only erase and age.
Profile profile_step(const Profile& state, const InputEvent& event, const Policy& policy,
                     const CompatibilityGraph& g, double draw);

/// Largest remaining patience in the profile; 0 for the empty state.
double phi(const Profile& state);

}  // namespace matchsim
