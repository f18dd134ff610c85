#include "matchsim/dominated.hpp"

#include "matchsim/errors.hpp"

namespace matchsim {

bool latency_endpoint_check(std::span<const double> last_patiences) {
  for (double patience : last_patiences)
    if (patience != 0.0) return false;
  return true;
}

void validate_dominated_model(const ArrivalModel& model) {
  // Effective P(P <= 1): latency slots carry patience 0, real arrivals
  // follow the configured law.
  const double p_short = model.gamma + (1.0 - model.gamma) * model.patience.prob_at_most(1.0);
  if (!(p_short > 0.0))
    throw ConfigError("patience law violates P(P<=1)>0; the dominating queue never empties");
}

namespace {

template <class ModelState, class Target, class ModelStep>
SampleResult<ModelState> run_dominated(const CompatibilityGraph& g, const ArrivalModel& model,
                                       InputTape& tape, Target&& target, ModelStep&& model_step,
                                       SampleOptions options) {
  model.validate(g.size());
  validate_dominated_model(model);
  if (options.initial_horizon == 0) options.initial_horizon = 1;
  const double m = model.patience.bound();

  auto control_step = [](double y, const InputEvent& event, double) {
    return dominating_step(y, event.patience);
  };
  auto at_endpoint = [](double y) { return y == 0.0; };
  return sample_by_control(tape, m, control_step, at_endpoint, target, model_step, options);
}

}  // namespace

SampleResult<Profile> sample_dominated_profile(const CompatibilityGraph& g,
                                               const ArrivalModel& model, const Policy& policy,
                                               InputTape& tape, SampleOptions options) {
  auto target = [](double, std::int64_t) { return Profile{}; };
  auto model_step = [&](Profile state, const InputEvent& event, double draw) {
    return profile_step(state, event, policy, g, draw);
  };
  return run_dominated<Profile>(g, model, tape, target, model_step, options);
}

SampleResult<Word> sample_dominated_word(const CompatibilityGraph& g, const ArrivalModel& model,
                                         const Policy& policy, InputTape& tape,
                                         SampleOptions options) {
  if (model.patience.kind != PatienceLaw::Kind::deterministic)
    throw ConfigError("the word-profile variant of algo2 needs deterministic patience");
  const int p = model.patience.word_length;
  auto target = [p](double, std::int64_t) { return Word(static_cast<std::size_t>(p), kLatency); };
  auto model_step = [&](Word state, const InputEvent& event, double draw) {
    return word_step(state, event.cls, policy, g, draw);
  };
  return run_dominated<Word>(g, model, tape, target, model_step, options);
}

}  // namespace matchsim
