#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "matchsim/errors.hpp"
#include "matchsim/graph.hpp"
#include "matchsim/tape.hpp"

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

TEST_CASE("events are memoized") {
  InputTape tape(99, uniform_deterministic(4, 2));
  const InputEvent first = tape.event_at(-5);
  const InputEvent again = tape.event_at(-5);
  CHECK(first == again);
  CHECK(tape.events_drawn() == 1);
}

TEST_CASE("no latency events when gamma is zero") {
  InputTape tape(3, uniform_deterministic(4, 2, 0.0));
  for (std::int64_t j = -2000; j < 0; ++j) CHECK(tape.event_at(j).cls >= 1);
}

TEST_CASE("deterministic patience is p + eps on every arrival") {
  InputTape tape(17, uniform_deterministic(5, 3, 0.3));
  for (std::int64_t j = -2000; j < 0; ++j) {
    const InputEvent& event = tape.event_at(j);
    if (event.cls == kLatency)
      CHECK(event.patience == 0.0);
    else
      CHECK(event.patience == 3.0 + kPatienceEpsilon);
  }
}

TEST_CASE("non-negative indices are rejected") {
  InputTape tape(1, uniform_deterministic(4, 1));
  CHECK_THROWS_AS((void)tape.event_at(0), ConfigError);
  CHECK_THROWS_AS((void)tape.event_at(7), ConfigError);
  CHECK_THROWS_AS((void)tape.policy_draw_at(0), ConfigError);
}

TEST_CASE("replication seed derivation") {
  SUBCASE("deterministic") {
    CHECK(derive_replication_seed(123, 7) == derive_replication_seed(123, 7));
  }
  SUBCASE("no collision across a seed corpus") {
    for (std::uint64_t s = 0; s < 10000; ++s)
      CHECK(derive_replication_seed(s, 0) != derive_replication_seed(s, 1));
  }
  SUBCASE("replication streams are distinct for one master") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t r = 0; r < 10000; ++r)
      CHECK(seen.insert(derive_replication_seed(42, r)).second);
  }
  SUBCASE("flipping the replication index changes the event stream") {
    const ArrivalModel model = uniform_deterministic(4, 2, 0.2);
    InputTape a(derive_replication_seed(5, 0), model);
    InputTape b(derive_replication_seed(5, 1), model);
    int differing = 0;
    for (std::int64_t j = -100; j < 0; ++j)
      if (!(a.event_at(j) == b.event_at(j))) ++differing;
    CHECK(differing > 50);
  }
}

TEST_CASE("window doubling rereads identical events") {
  const ArrivalModel model = uniform_deterministic(4, 2, 0.2);
  // One tape reads [-8,-1] then deepens; the other starts deep. Per-index
  // derivation makes the overlap literal.
  InputTape shallow(31, model);
  std::vector<InputEvent> first_pass;
  for (std::int64_t j = -8; j < 0; ++j) first_pass.push_back(shallow.event_at(j));
  for (std::int64_t j = -16; j < 0; ++j) (void)shallow.event_at(j);

  InputTape deep(31, model);
  for (std::int64_t j = -16; j < 0; ++j) (void)deep.event_at(j);
  for (std::int64_t j = -8; j < 0; ++j) {
    CHECK(shallow.event_at(j) == first_pass[static_cast<std::size_t>(j + 8)]);
    CHECK(deep.event_at(j) == first_pass[static_cast<std::size_t>(j + 8)]);
  }
}

TEST_CASE("class marginal matches mu (1 - gamma) and latency matches gamma") {
  ArrivalModel model;
  model.mu = {0.5, 0.3, 0.2};
  model.patience = PatienceLaw::deterministic(2);
  model.gamma = 0.3;
  model.validate(3);

  InputTape tape(2024, model);
  const std::int64_t total = 100000;
  std::vector<std::int64_t> counts(4, 0);  // [0] = latency
  for (std::int64_t j = -total; j < 0; ++j) {
    const InputEvent& event = tape.event_at(j);
    ++counts[event.cls == kLatency ? 0 : static_cast<std::size_t>(event.cls)];
  }
  auto within_3_se = [&](double observed, double expected) {
    const double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(total));
    return std::abs(observed - expected) <= 3.0 * se;
  };
  CHECK(within_3_se(static_cast<double>(counts[0]) / total, 0.3));
  for (int c = 1; c <= 3; ++c)
    CHECK(within_3_se(static_cast<double>(counts[static_cast<std::size_t>(c)]) / total,
                      model.mu[static_cast<std::size_t>(c - 1)] * 0.7));
}

TEST_CASE("patience law validation") {
  CHECK_THROWS_AS(PatienceLaw::discrete({}), ConfigError);
  CHECK_THROWS_AS(PatienceLaw::discrete({{2.0, 1.0}}), ConfigError);          // integer value
  CHECK_THROWS_AS(PatienceLaw::discrete({{2.5, 0.5}}), ConfigError);          // probs sum != 1
  CHECK_THROWS_AS(PatienceLaw::discrete({{-0.5, 1.0}}), ConfigError);         // negative
  CHECK_THROWS_AS(PatienceLaw::discrete({{1.0 + 1e-10, 1.0}}), ConfigError);  // near-integer
  const PatienceLaw law = PatienceLaw::discrete({{0.5, 0.4}, {2.5, 0.6}});
  CHECK(law.bound() == 2.5);
  CHECK(law.prob_at_most(1.0) == 0.4);
}

TEST_CASE("arrival model validation") {
  ArrivalModel model = uniform_deterministic(4, 2);
  model.mu[0] += 0.1;
  CHECK_THROWS_AS(model.validate(4), ConfigError);
  model = uniform_deterministic(4, 2);
  CHECK_THROWS_AS(model.validate(5), ConfigError);
  model.gamma = 1.0;
  CHECK_THROWS_AS(model.validate(4), ConfigError);
}

TEST_CASE("discrete patience draws stay on the support") {
  ArrivalModel model;
  model.mu = {0.5, 0.5};
  model.patience = PatienceLaw::discrete({{0.5, 0.4}, {2.5, 0.6}});
  InputTape tape(8, model);
  std::int64_t low = 0;
  const std::int64_t total = 20000;
  for (std::int64_t j = -total; j < 0; ++j) {
    const double p = tape.event_at(j).patience;
    CHECK((p == 0.5 || p == 2.5));
    if (p == 0.5) ++low;
  }
  const double freq = static_cast<double>(low) / total;
  CHECK(std::abs(freq - 0.4) < 3.0 * std::sqrt(0.4 * 0.6 / total));
}
