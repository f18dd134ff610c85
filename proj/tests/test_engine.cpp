#include <doctest.h>

#include "matchsim/dominated.hpp"
#include "matchsim/engine.hpp"
#include "matchsim/errors.hpp"
#include "matchsim/estimate.hpp"
#include "matchsim/graph.hpp"
#include "matchsim/model.hpp"
#include "matchsim/syncword.hpp"

using namespace matchsim;

namespace {

ArrivalModel uniform_deterministic(int n, int p, double gamma = 0.0) {
  ArrivalModel model;
  model.mu.assign(static_cast<std::size_t>(n), 1.0 / n);
  model.patience = PatienceLaw::deterministic(p);
  model.gamma = gamma;
  return model;
}

}  // namespace

TEST_CASE("a control chain starting at an endpoint pins the state immediately") {
  const CompatibilityGraph paw = named_graph("paw");
  const ArrivalModel model = uniform_deterministic(4, 1);
  InputTape tape(5, model);

  // Control state: a counter that is always at its endpoint. With the
  // initial horizon 1 the hit happens at time -1, so the output is one
  // model transition of the pinned state.
  auto control_step = [](int y, const InputEvent&, double) { return y; };
  auto at_endpoint = [](int) { return true; };
  const Word pinned{2};
  auto target = [&](int, std::int64_t) { return pinned; };
  auto model_step = [&](Word w, const InputEvent& event, double draw) {
    return word_step(w, event.cls, Policy::fcfm(), paw, draw);
  };

  const auto run = sample_by_control(tape, 0, control_step, at_endpoint, target, model_step,
                                     SampleOptions{.initial_horizon = 1});
  CHECK(run.report.iterations == 1);
  CHECK(run.report.start_time == -1);
  CHECK(run.report.detection_time == -1);
  InputTape replay(5, model);
  CHECK(run.sample == word_step(pinned, replay.event_at(-1).cls, Policy::fcfm(), paw,
                                replay.policy_draw_at(-1)));
}

TEST_CASE("an unreachable endpoint trips the horizon cap") {
  const ArrivalModel model = uniform_deterministic(4, 1);
  InputTape tape(6, model);
  auto control_step = [](int y, const InputEvent&, double) { return y + 1; };
  auto at_endpoint = [](int) { return false; };
  auto target = [](int, std::int64_t) { return Word{}; };
  auto model_step = [](Word w, const InputEvent&, double) { return w; };
  CHECK_THROWS_AS(sample_by_control(tape, 0, control_step, at_endpoint, target, model_step,
                                    SampleOptions{.initial_horizon = 1, .horizon_cap = 64}),
                  NonTerminationError);
}

TEST_CASE("primitive CFTP on a one-state space returns it at the first horizon") {
  const CompatibilityGraph k2 = named_graph("complete:2");
  const ArrivalModel model = uniform_deterministic(2, 1);
  InputTape tape(3, model);
  // A single absorbing state: the fold trivially coalesces.
  auto step = [](Word w, const InputEvent&, double) { return w; };
  const std::vector<Word> states{Word{0}};
  const auto run = primitive_cftp(tape, states, step, words_equal_metered,
                                  SampleOptions{.initial_horizon = 1});
  CHECK(run.sample == Word{0});
  CHECK(run.report.iterations == 1);
  CHECK(run.report.start_time == -1);
}

TEST_CASE("pathwise equality of algo3 and primitive CFTP on shared tapes") {
  const CompatibilityGraph paw = named_graph("paw");
  const ArrivalModel model = uniform_deterministic(4, 1);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    InputTape t1(seed, model);
    InputTape t2(seed, model);
    const auto a = sample_syncword(paw, model, Policy::fcfm(), t1);
    const auto b = run_word_sampler(SamplerKind::cftp, paw, model, Policy::fcfm(), t2);
    CHECK(a.sample == b.sample);
  }
}

TEST_CASE("coalescence is never later than control detection (R >= N)") {
  const CompatibilityGraph paw = named_graph("paw");
  const ArrivalModel model = uniform_deterministic(4, 2);
  for (std::uint64_t seed = 100; seed < 160; ++seed) {
    InputTape t1(seed, model);
    InputTape t2(seed, model);
    const SampleOptions options{.initial_horizon = 4};  // 2p, shared by both
    const auto control = sample_syncword(paw, model, Policy::fcfm(), t1, options);
    const auto states = enumerate_word_states(4, 2, false);
    auto step = [&](Word w, const InputEvent& event, double draw) {
      return word_step(w, event.cls, Policy::fcfm(), paw, draw);
    };
    const auto primitive = primitive_cftp(t2, states, step, words_equal_metered, options);
    CHECK(-primitive.report.start_time <= -control.report.start_time);
    CHECK(primitive.sample == control.sample);
  }
}

TEST_CASE("detection depends only on the events in the detected window") {
  const CompatibilityGraph paw = named_graph("paw");
  const ArrivalModel model = uniform_deterministic(4, 2, 0.25);
  const int p = 2;
  for (std::uint64_t seed = 7; seed < 27; ++seed) {
    InputTape tape(seed, model);
    const auto run = sample_syncword(paw, model, Policy::fcfm(), tape);
    const std::int64_t t = run.report.detection_time;
    // Rebuild the detected window from the memoized events alone: the same
    // letters re-read from any deeper horizon give the same detection.
    InputTape replay(seed, model);
    Word window;
    for (std::int64_t j = t - 2 * p; j < t; ++j) window.push_back(replay.event_at(j).cls);
    CHECK(is_strongly_synchronizing(window, paw));
  }
}
