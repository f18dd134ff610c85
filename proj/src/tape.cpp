#include "matchsim/tape.hpp"

#include <cmath>
#include <string>

#include "matchsim/errors.hpp"
#include "matchsim/graph.hpp"

namespace matchsim {

namespace {

// splitmix64 finalizer; the per-index substreams below are all derived from
// (seed, index, stream tag) through it.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t mix3(std::uint64_t seed, std::uint64_t index, std::uint64_t tag) {
  return mix(mix(mix(seed) ^ index) ^ tag);
}

double to_unit(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

constexpr std::uint64_t kLatencyTag = 0x6c617465ull;   // substream tags
constexpr std::uint64_t kClassTag = 0x636c6173ull;
constexpr std::uint64_t kPatienceTag = 0x70617469ull;
constexpr std::uint64_t kPolicyTag = 0x706f6c69ull;
constexpr std::uint64_t kReplicationTag = 0x7265706cull;

}  // namespace

PatienceLaw PatienceLaw::deterministic(int p) {
  if (p < 1) throw ConfigError("deterministic patience needs p >= 1");
  PatienceLaw law;
  law.kind = Kind::deterministic;
  law.word_length = p;
  return law;
}

PatienceLaw PatienceLaw::discrete(std::vector<std::pair<double, double>> support) {
  if (support.empty()) throw ConfigError("discrete patience law needs at least one atom");
  double total = 0.0;
  for (const auto& [value, prob] : support) {
    if (!(value > 0.0)) throw ConfigError("patience values must be positive");
    if (std::abs(value - std::round(value)) < 1e-9)
      throw ConfigError("patience value " + std::to_string(value) +
                        " is too close to an integer; renege comparisons against 1 "
                        "would be ambiguous");
    if (prob < 0.0 || prob > 1.0) throw ConfigError("patience probabilities must be in [0,1]");
    total += prob;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw ConfigError("patience probabilities sum to " + std::to_string(total) + ", not 1");
  PatienceLaw law;
  law.kind = Kind::discrete;
  law.support = std::move(support);
  return law;
}

double PatienceLaw::bound() const {
  if (kind == Kind::deterministic) return word_length + kPatienceEpsilon;
  double m = 0.0;
  for (const auto& [value, prob] : support)
    if (prob > 0.0 && value > m) m = value;
  return m;
}

double PatienceLaw::prob_at_most(double x) const {
  if (kind == Kind::deterministic)
    return (word_length + kPatienceEpsilon <= x) ? 1.0 : 0.0;
  double total = 0.0;
  for (const auto& [value, prob] : support)
    if (value <= x) total += prob;
  return total;
}

void ArrivalModel::validate(int n) const {
  if (static_cast<int>(mu.size()) != n)
    throw ConfigError("mu has " + std::to_string(mu.size()) + " entries for " +
                      std::to_string(n) + " classes");
  double total = 0.0;
  for (double m : mu) {
    if (m < 0.0) throw ConfigError("mu entries must be non-negative");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw ConfigError("mu sums to " + std::to_string(total) + ", not 1");
  if (gamma < 0.0 || gamma >= 1.0) throw ConfigError("gamma must be in [0, 1)");
  if (patience.kind == PatienceLaw::Kind::discrete && patience.support.empty())
    throw ConfigError("empty discrete patience law");
}

InputEvent draw_event(std::uint64_t seed, std::int64_t index, const ArrivalModel& model) {
  const auto uindex = static_cast<std::uint64_t>(index);
  if (model.gamma > 0.0 && to_unit(mix3(seed, uindex, kLatencyTag)) < model.gamma)
    return InputEvent{kLatency, 0.0};

  const double u = to_unit(mix3(seed, uindex, kClassTag));
  int cls = static_cast<int>(model.mu.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < model.mu.size(); ++k) {
    acc += model.mu[k];
    if (u < acc) {
      cls = static_cast<int>(k) + 1;
      break;
    }
  }

  double patience = 0.0;
  if (model.patience.kind == PatienceLaw::Kind::deterministic) {
    patience = model.patience.word_length + kPatienceEpsilon;
  } else {
    const double v = to_unit(mix3(seed, uindex, kPatienceTag));
    double cum = 0.0;
    patience = model.patience.support.back().first;
    for (const auto& [value, prob] : model.patience.support) {
      cum += prob;
      if (v < cum) {
        patience = value;
        break;
      }
    }
  }
  return InputEvent{cls, patience};
}

double draw_policy_uniform(std::uint64_t seed, std::int64_t index) {
  return to_unit(mix3(seed, static_cast<std::uint64_t>(index), kPolicyTag));
}

std::uint64_t derive_replication_seed(std::uint64_t master, std::uint64_t replication) {
  return mix3(master, replication, kReplicationTag);
}

const InputEvent& InputTape::event_at(std::int64_t j) {
  if (j >= 0)
    throw ConfigError("tape read at time " + std::to_string(j) +
                      "; only strictly-past indices are defined");
  auto [it, inserted] = events_.try_emplace(j);
  if (inserted) it->second = draw_event(seed_, j, model_);
  return it->second;
}

double InputTape::policy_draw_at(std::int64_t j) {
  if (j >= 0)
    throw ConfigError("tape draw at time " + std::to_string(j) +
                      "; only strictly-past indices are defined");
  auto [it, inserted] = draws_.try_emplace(j, 0.0);
  if (inserted) it->second = draw_policy_uniform(seed_, j);
  return it->second;
}

}  // namespace matchsim
