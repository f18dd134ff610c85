#pragma once

#include <span>

#include "matchsim/engine.hpp"
#include "matchsim/graph.hpp"
#include "matchsim/model.hpp"
#include "matchsim/tape.hpp"

namespace matchsim {

/// One step of the dominating infinite-server recursion:
/// y' = [max(y, patience) - 1]^+.
inline double dominating_step(double y, double patience) {
  const double v = (y > patience ? y : patience) - 1.0;
  return v > 0.0 ? v : 0.0;
}

/// Latency-model shortcut: the recursion above sits at 0 exactly when the
/// last p patience values are all 0 (all-latency window).
bool latency_endpoint_check(std::span<const double> last_patiences);

/// Throws ConfigError unless the model admits Algorithm 2: the patience
/// law must be bounded with P(P <= 1) > 0 (for deterministic patience this
/// needs latency, gamma > 0).
void validate_dominated_model(const ArrivalModel& model);

/// Algorithm 2 on the general profile chain (bounded discrete patience).
/// The control chain starts at the patience bound m and the empty profile
/// is the endpoint target. options.initial_horizon == 0 selects 1.
SampleResult<Profile> sample_dominated_profile(const CompatibilityGraph& g,
                                               const ArrivalModel& model, const Policy& policy,
                                               InputTape& tape,
                                               SampleOptions options = {.initial_horizon = 0});

/// Algorithm 2 on the latency word-profile chain (deterministic patience,
/// gamma > 0); the endpoint target is the all-latency word.
SampleResult<Word> sample_dominated_word(const CompatibilityGraph& g, const ArrivalModel& model,
                                         const Policy& policy, InputTape& tape,
                                         SampleOptions options = {.initial_horizon = 0});

}  // namespace matchsim
