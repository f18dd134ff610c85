#include <doctest.h>

#include <cmath>
#include <random>

#include "matchsim/dominated.hpp"
#include "matchsim/errors.hpp"
#include "matchsim/graph.hpp"
#include "matchsim/model.hpp"

using namespace matchsim;

namespace {

Word make_word(std::initializer_list<int> letters) { return Word(letters); }

}  // namespace

TEST_CASE("profile_step walk-through") {
  const CompatibilityGraph paw = named_graph("paw");
  const Policy fcfm = Policy::fcfm();

  SUBCASE("arrival stored into the empty profile") {
    const Profile next = profile_step({}, InputEvent{1, 2.5}, fcfm, paw, 0.0);
    REQUIRE(next.size() == 1);
    CHECK(next[0] == ProfileItem{1.5, 1});
  }
  SUBCASE("incompatible stored item reneges under the same step") {
    const Profile start{{0.5, 3}};
    const Profile next = profile_step(start, InputEvent{1, 2.5}, fcfm, paw, 0.0);
    REQUIRE(next.size() == 1);
    CHECK(next[0] == ProfileItem{1.5, 1});
  }
  SUBCASE("match removes the stored item and the arrival departs") {
    const Profile start{{2.5, 1}};
    CHECK(profile_step(start, InputEvent{2, 9.5}, fcfm, paw, 0.0).empty());
  }
  SUBCASE("an item with expiring patience can still be matched at the arrival instant") {
    const Profile start{{0.5, 3}};
    CHECK(profile_step(start, InputEvent{2, 9.5}, fcfm, paw, 0.0).empty());
  }
  SUBCASE("latency events only age the profile") {
    const Profile start{{2.5, 1}, {0.5, 3}};
    const Profile next = profile_step(start, InputEvent{kLatency, 0.0}, fcfm, paw, 0.0);
    REQUIRE(next.size() == 1);
    CHECK(next[0] == ProfileItem{1.5, 1});
  }
}

TEST_CASE("word_step examples on the paw graph") {
  const CompatibilityGraph paw = named_graph("paw");

  SUBCASE("fcfm matches the earliest compatible slot") {
    CHECK(word_step(make_word({1, 3, 4}), 2, Policy::fcfm(), paw, 0.0) == make_word({3, 4, 0}));
  }
  SUBCASE("ml picks the class with the longest queue") {
    CHECK(word_step(make_word({4, 3, 3}), 2, Policy::ml(), paw, 0.0) == make_word({0, 3, 0}));
    CHECK(word_step(make_word({4, 3, 3}), 2, Policy::fcfm(), paw, 0.0) == make_word({3, 3, 0}));
  }
  SUBCASE("empty buffer stores the arrival") {
    CHECK(word_step(make_word({0, 0, 0}), 2, Policy::fcfm(), paw, 0.0) == make_word({0, 0, 2}));
  }
  SUBCASE("latency arrival slides a -1 in") {
    CHECK(word_step(make_word({1, 0, 3}), kLatency, Policy::fcfm(), paw, 0.0) ==
          make_word({0, 3, kLatency}));
  }
  SUBCASE("output length is always p") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 200; ++trial) {
      Word w;
      for (int i = 0; i < 4; ++i) w.push_back(static_cast<int>(rng() % 5));
      const int arrival = 1 + static_cast<int>(rng() % 4);
      CHECK(word_step(w, arrival, Policy::ml(), paw, 0.5).size() == w.size());
    }
  }
}

TEST_CASE("policy selection details") {
  const CompatibilityGraph paw = named_graph("paw");

  SUBCASE("fcfm and priority consume no randomness") {
    const Word w = make_word({1, 3, 4});
    for (double draw : {0.0, 0.3, 0.999}) {
      CHECK(word_step(w, 2, Policy::fcfm(), paw, draw) == make_word({3, 4, 0}));
      CHECK(word_step(w, 2, Policy::parse("priority:4,3,1,2", 4), paw, draw) ==
            make_word({3, 0, 0}));
    }
  }
  SUBCASE("priority picks its first class present, earliest slot") {
    const Policy priority = Policy::parse("priority:3,4,1,2", 4);
    CHECK(word_step(make_word({4, 3, 3}), 2, priority, paw, 0.0) == make_word({0, 3, 0}));
  }
  SUBCASE("ml ties are broken uniformly by the draw over tied classes") {
    // State {3, 4}: both compatible with arrival 2, multiplicity 1 each.
    const Word w = make_word({3, 4});
    CHECK(word_step(w, 2, Policy::ml(), paw, 0.2) == make_word({4, 0}));  // class 3 matched
    CHECK(word_step(w, 2, Policy::ml(), paw, 0.7) == make_word({0, 0}));  // class 4 matched
  }
  SUBCASE("ml prefers the earliest slot within the chosen class") {
    const Word w = make_word({4, 3, 0, 3});
    const auto pos = word_match_position(w, 2, Policy::ml(), paw, 0.0);
    REQUIRE(pos.has_value());
    CHECK(*pos == 1);
  }
  SUBCASE("random matches a uniform candidate") {
    const Word w = make_word({3, 4});
    CHECK(word_step(w, 2, Policy::random(), paw, 0.1) == make_word({4, 0}));
    CHECK(word_step(w, 2, Policy::random(), paw, 0.9) == make_word({0, 0}));
  }
  SUBCASE("policy parsing") {
    CHECK(Policy::parse("fcfm", 4).kind == Policy::Kind::fcfm);
    CHECK(Policy::parse("priority:2,1,4,3", 4).priority_order == std::vector<int>{2, 1, 4, 3});
    CHECK_THROWS_AS(Policy::parse("priority:1,2", 4), ConfigError);
    CHECK_THROWS_AS(Policy::parse("priority:1,2,2,3", 4), ConfigError);
    CHECK_THROWS_AS(Policy::parse("edf", 4), ConfigError);
  }
}

TEST_CASE("apply_word composes word_step") {
  const CompatibilityGraph paw = named_graph("paw");
  const Policy fcfm = Policy::fcfm();

  SUBCASE("paw p=1: fold of 1 then 3 from the empty word") {
    const Word start = make_word({0});
    const std::vector<int> arrivals{1, 3};
    const std::vector<double> draws{0.0, 0.0};
    CHECK(apply_word(start, arrivals, fcfm, paw, draws) == make_word({3}));
  }
  SUBCASE("fold associativity: W(x, uv) = W(W(x, u), v)") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
      Word x;
      for (int i = 0; i < 3; ++i) x.push_back(static_cast<int>(rng() % 5));
      std::vector<int> u, v;
      std::vector<double> du, dv;
      for (int i = 0; i < 2; ++i) {
        u.push_back(1 + static_cast<int>(rng() % 4));
        du.push_back(static_cast<double>(rng() % 1000) / 1000.0);
      }
      for (int i = 0; i < 3; ++i) {
        v.push_back(1 + static_cast<int>(rng() % 4));
        dv.push_back(static_cast<double>(rng() % 1000) / 1000.0);
      }
      std::vector<int> uv = u;
      uv.insert(uv.end(), v.begin(), v.end());
      std::vector<double> duv = du;
      duv.insert(duv.end(), dv.begin(), dv.end());
      const Word lhs = apply_word(x, uv, Policy::ml(), paw, duv);
      const Word rhs = apply_word(apply_word(x, u, Policy::ml(), paw, du), v, Policy::ml(), paw, dv);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("phi") {
  CHECK(phi({}) == 0.0);
  CHECK(phi({{1.5, 1}, {0.3, 4}}) == 1.5);
}

TEST_CASE("phi is dominated by the infinite-server recursion") {
  const CompatibilityGraph paw = named_graph("paw");
  std::mt19937_64 rng(13);
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int trial = 0; trial < 10000; ++trial) {
    Profile x;
    const int items = static_cast<int>(rng() % 4);
    for (int i = 0; i < items; ++i)
      x.push_back(ProfileItem{0.1 + 3.0 * unit(), 1 + static_cast<int>(rng() % 4)});
    const InputEvent event{1 + static_cast<int>(rng() % 4), 0.1 + 3.0 * unit()};
    const Profile next = profile_step(x, event, Policy::fcfm(), paw, unit());
    CHECK(phi(next) <= dominating_step(phi(x), event.patience));
    for (const auto& item : next) CHECK(item.remaining > 0.0);
  }
}

TEST_CASE("word state enumeration and indexing") {
  const auto states = enumerate_word_states(2, 2, false);
  CHECK(states.size() == 9);
  CHECK(states.front() == make_word({0, 0}));
  CHECK(states.back() == make_word({2, 2}));
  for (std::size_t i = 0; i < states.size(); ++i)
    CHECK(word_state_index(states[i], 2, false) == i);

  const auto with_latency = enumerate_word_states(2, 2, true);
  CHECK(with_latency.size() == 16);
  for (std::size_t i = 0; i < with_latency.size(); ++i)
    CHECK(word_state_index(with_latency[i], 2, true) == i);
}

TEST_CASE("word rendering") {
  CHECK(word_to_string(make_word({1, 3, 0})) == "130");
  CHECK(word_to_string(make_word({kLatency, 2})) == "*2");
  CHECK(word_to_string(make_word({11, 2})) == "11,2");
}
