#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "matchsim/errors.hpp"
#include "matchsim/meter.hpp"
#include "matchsim/tape.hpp"

namespace matchsim {

struct SampleOptions {
  std::int64_t initial_horizon = 1;
  std::int64_t horizon_cap = std::int64_t{1} << 30;  // cap on -T_up
};

struct SampleReport {
  std::int64_t iterations = 0;      // doubling rounds, I
  std::int64_t start_time = 0;      // horizon at success, T = -initial * 2^(I-1)
  std::int64_t detection_time = 0;  // first endpoint hit (0 for primitive CFTP)
  std::uint64_t events_consumed = 0;
  std::uint64_t operations = 0;     // letter comparisons, see meter.hpp
};

template <class X>
struct SampleResult {
  X sample;
  SampleReport report;
};

/// Perfect sampling by control. Simulates the control chain from its start
/// state over doubling backward horizons until it reaches an endpoint; the
/// endpoint pins the model state, which is then folded to time 0. The tape
/// memoization guarantees that every horizon rereads the same input.
///
/// control_step : (Y, event, draw) -> Y
/// at_endpoint  : Y -> bool                     (no letter cost; pay in control_step)
/// target       : (Y, detection_time) -> X      (may read the tape for draws)
/// model_step   : (X, event, draw) -> X
template <class Y, class ControlStep, class Endpoint, class Target, class ModelStep>
auto sample_by_control(InputTape& tape, const Y& control_start, ControlStep&& control_step,
                       Endpoint&& at_endpoint, Target&& target, ModelStep&& model_step,
                       const SampleOptions& options = {}) {
  using X = decltype(target(control_start, std::int64_t{0}));
  if (options.initial_horizon < 1) throw ConfigError("initial horizon must be >= 1");

  OperationMeter meter;
  MeterScope scope(meter);

  std::int64_t t_up = -options.initial_horizon;
  std::int64_t iterations = 0;
  for (;;) {
    ++iterations;
    std::int64_t i = t_up;
    Y control = control_start;  // the control chain restarts at y, never resumes
    while (i < 0 && !at_endpoint(control)) {
      control = control_step(std::move(control), tape.event_at(i), tape.policy_draw_at(i));
      ++i;
    }
    if (at_endpoint(control)) {
      SampleReport report;
      report.iterations = iterations;
      report.start_time = t_up;
      report.detection_time = i;
      X state = target(control, i);
      while (i < 0) {
        state = model_step(std::move(state), tape.event_at(i), tape.policy_draw_at(i));
        ++i;
      }
      report.events_consumed = static_cast<std::uint64_t>(-t_up);
      report.operations = meter.count;
      return SampleResult<X>{std::move(state), report};
    }
    if (-t_up >= options.horizon_cap)
      throw NonTerminationError(
          "no endpoint hit within horizon " + std::to_string(-t_up) +
          "; the control endpoint looks unreachable for this configuration");
    t_up *= 2;
  }
}

/// Letterwise equality with metering (short-circuits on the first
/// mismatch); the coalescence test of the primitive CFTP runs through it.
inline bool words_equal_metered(const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    note_op();
    if (a[i] != b[i]) return false;
  }
  return true;
}

/// Primitive CFTP: folds the chain from every state of a finite space over
/// the shared input; returns the common time-0 value once all trajectories
/// coincide, doubling the horizon otherwise. All copies read the same
/// events and the same per-step policy draws.
template <class X, class ModelStep, class Equal>
SampleResult<X> primitive_cftp(InputTape& tape, const std::vector<X>& states,
                               ModelStep&& model_step, Equal&& equal,
                               const SampleOptions& options = {}) {
  if (states.empty()) throw ConfigError("primitive CFTP needs a non-empty state list");
  if (options.initial_horizon < 1) throw ConfigError("initial horizon must be >= 1");

  OperationMeter meter;
  MeterScope scope(meter);

  std::int64_t t_up = -options.initial_horizon;
  std::int64_t iterations = 0;
  for (;;) {
    ++iterations;
    std::vector<X> current = states;
    for (std::int64_t i = t_up; i < 0; ++i) {
      const InputEvent& event = tape.event_at(i);
      const double draw = tape.policy_draw_at(i);
      for (auto& state : current) state = model_step(std::move(state), event, draw);
    }
    bool coalesced = true;
    for (std::size_t k = 1; k < current.size() && coalesced; ++k)
      coalesced = equal(current[0], current[k]);
    if (coalesced) {
      SampleReport report;
      report.iterations = iterations;
      report.start_time = t_up;
      report.detection_time = 0;
      report.events_consumed = static_cast<std::uint64_t>(-t_up);
      report.operations = meter.count;
      return SampleResult<X>{std::move(current.front()), report};
    }
    if (-t_up >= options.horizon_cap)
      throw NonTerminationError("primitive CFTP found no coalescence within horizon " +
                                std::to_string(-t_up));
    t_up *= 2;
  }
}

}  // namespace matchsim
