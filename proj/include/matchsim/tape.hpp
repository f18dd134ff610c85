#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace matchsim {

// Deterministic patience p + eps with an unspecified eps in (0,1): items can
// be matched by the p arrivals after their own and are gone one slot later.
// Where a numeric value is unavoidable (the dominating recursion) we pin
//eps = 1/2, which keeps every intermediate value dyadic and the comparisons
// against 1 exact.
inline constexpr double kPatienceEpsilon = 0.5;

struct PatienceLaw {
  enum class Kind { deterministic, discrete };

  Kind kind = Kind::deterministic;
  int word_length = 1;                                  // p, deterministic only
  std::vector<std::pair<double, double>> support;       // (value, prob), discrete only

  static PatienceLaw deterministic(int p);
  /// Finite-support law; values must be positive, bounded, and not within
  /// 1e-9 of an integer (step semantics hinge on strict comparisons with 1).
  static PatienceLaw discrete(std::vector<std::pair<double, double>> support);

  double bound() const;             // m: P(P <= m) = 1
  double prob_at_most(double x) const;
};

struct ArrivalModel {
  std::vector<double> mu;           // class distribution over 1..n
  PatienceLaw patience;
  double gamma = 0.0;               // latency probability

  /// Validates against a graph of n classes: mu sums to 1 within 1e-12,
  /// gamma in [0,1), patience law well formed.
  void validate(int n) const;
  bool latency_enabled() const { return gamma > 0.0; }
};

struct InputEvent {
  int cls = 0;                      // class in 1..n, or kLatency
  double patience = 0.0;            // 0 exactly for latency slots

  bool operator==(const InputEvent&) const = default;
};

/// Stateless draw of the event at (seed, index); the tape memoizes these,
/// forward runs use them directly on non-negative indices.
InputEvent draw_event(std::uint64_t seed, std::int64_t index, const ArrivalModel& model);

/// Uniform [0,1) tie-break draw attached to a time index, from a stream
/// independent of the event draws.
double draw_policy_uniform(std::uint64_t seed, std::int64_t index);

/// Mixes a master seed with a replication index into an independent-quality
/// stream seed (splitmix64 finalizer over the pair; injective in practice).
std::uint64_t derive_replication_seed(std::uint64_t master, std::uint64_t replication);

/// Time-indexed memoized input for backward simulation. Every read of a
/// given index returns the identical event, no matter in which order the
/// doubling horizons touch it; contents are a pure function of (seed, index).
class InputTape {
public:
  InputTape(std::uint64_t seed, ArrivalModel model)
      : seed_(seed), model_(std::move(model)) {}

  /// j must be strictly negative: the samplers only consume past input.
  const InputEvent& event_at(std::int64_t j);
  double policy_draw_at(std::int64_t j);

  std::uint64_t seed() const { return seed_; }
  const ArrivalModel& model() const { return model_; }
  std::size_t events_drawn() const { return events_.size(); }

private:
  std::uint64_t seed_;
  ArrivalModel model_;
  std::unordered_map<std::int64_t, InputEvent> events_;
  std::unordered_map<std::int64_t, double> draws_;
};

}  // namespace matchsim
