#include "matchsim/syncword.hpp"

#include <algorithm>

#include "matchsim/errors.hpp"

namespace matchsim {

bool is_strongly_synchronizing(const Word& w, const CompatibilityGraph& g) {
  if (w.size() < 2 || w.size() % 2 != 0)
    throw ConfigError("strong-synchronization predicate needs a word of even length 2p, got " +
                      std::to_string(w.size()));
  const int p = static_cast<int>(w.size() / 2);
  for (int i = 0; i < p; ++i)
    for (int j = p; j <= p + i; ++j)
      if (g.letter_compatible(w[static_cast<std::size_t>(i)], w[static_cast<std::size_t>(j)]))
        return false;
  return true;
}

ArrivalWindow::ArrivalWindow(const CompatibilityGraph* g, int p)
    : graph_(g), p_(p), letters_(static_cast<std::size_t>(2 * p), 0),
      violations_(static_cast<std::size_t>(p), 0) {
  if (p < 1) throw ConfigError("window needs p >= 1");
}

void ArrivalWindow::push(int letter) {
  const std::int64_t b = pushed_;  // stream position of the new letter
  letters_[static_cast<std::size_t>(b % (2 * p_))] = letter;
  if (b >= p_) {
    // Offset b-p starts accumulating now; its slot last served offset b-2p,
    // which was checked at the previous push and is dead.
    violations_[static_cast<std::size_t>((b - p_) % p_)] = 0;
    // New pairs (a, b) with gap <= p: a in the first half, b in the second
    // half of every window offset in [a-p+1, b-p].
    for (std::int64_t a = b - p_; a < b; ++a) {
      if (a < 0) continue;
      if (graph_->letter_compatible(letter_at(a), letter)) {
        const std::int64_t lo = std::max<std::int64_t>(0, a - p_ + 1);
        for (std::int64_t s = lo; s <= b - p_; ++s)
          ++violations_[static_cast<std::size_t>(s % p_)];
      }
    }
  }
  ++pushed_;
}

Word ArrivalWindow::word() const {
  const std::int64_t len = std::min<std::int64_t>(pushed_, 2 * p_);
  Word out(static_cast<std::size_t>(len));
  for (std::int64_t k = 0; k < len; ++k)
    out[static_cast<std::size_t>(k)] = letter_at(pushed_ - len + k);
  return out;
}

Word endpoint_state(const Word& w, const Policy& policy, const CompatibilityGraph& g,
                    std::span<const double> draws) {
  if (!is_strongly_synchronizing(w, g))
    throw ConfigError("endpoint_state called on a word that is not strongly synchronizing");
  const std::size_t p = w.size() / 2;
  Word empty(p, kMatchedSlot);
  return apply_word(std::move(empty), std::span<const int>(w).subspan(p), policy, g, draws);
}

namespace {

Word strip_latency(Word w) {
  for (int& letter : w)
    if (letter == kLatency) letter = kMatchedSlot;
  return w;
}

}  // namespace

bool is_synchronizing_bruteforce(const Word& w, const Policy& policy,
                                 const CompatibilityGraph& g, int p, bool latency,
                                 std::span<const double> draws, std::size_t state_cap) {
  const int alphabet = g.size() + 1 + (latency ? 1 : 0);
  double space = 1.0;
  for (int i = 0; i < p; ++i) space *= alphabet;
  if (space > static_cast<double>(state_cap))
    throw ConfigError("word-profile space of size " + std::to_string(space) +
                      " exceeds the brute-force cap");

  const std::vector<Word> states = enumerate_word_states(g.size(), p, latency);
  Word reference;
  bool first = true;
  for (const Word& start : states) {
    Word result = strip_latency(apply_word(start, w, policy, g, draws));
    if (first) {
      reference = std::move(result);
      first = false;
    } else if (result != reference) {
      return false;
    }
  }
  return true;
}

SampleResult<Word> sample_syncword(const CompatibilityGraph& g, const ArrivalModel& model,
                                   const Policy& policy, InputTape& tape,
                                   SampleOptions options) {
  if (model.patience.kind != PatienceLaw::Kind::deterministic)
    throw ConfigError("algo3 requires deterministic patience");
  model.validate(g.size());
  const int p = model.patience.word_length;
  if (options.initial_horizon == 0) options.initial_horizon = 2 * p;

  auto control_step = [&](ArrivalWindow window, const InputEvent& event, double) {
    window.push(event.cls);
    return window;
  };
  auto at_endpoint = [](const ArrivalWindow& window) { return window.strongly_synchronizing(); };
  auto target = [&](const ArrivalWindow& window, std::int64_t t) {
    // z(w): fold the empty profile over the second half of the detected
    // window, reusing the tape draws of those time slots so that every
    // pathwise oracle sees the same tie-breaks.
    const Word w = window.word();
    std::vector<double> draws(static_cast<std::size_t>(p));
    for (int k = 0; k < p; ++k) draws[static_cast<std::size_t>(k)] = tape.policy_draw_at(t - p + k);
    Word empty(static_cast<std::size_t>(p), kMatchedSlot);
    return apply_word(std::move(empty), std::span<const int>(w).subspan(static_cast<std::size_t>(p)),
                      policy, g, draws);
  };
  auto model_step = [&](Word state, const InputEvent& event, double draw) {
    return word_step(state, event.cls, policy, g, draw);
  };

  return sample_by_control(tape, ArrivalWindow(&g, p), control_step, at_endpoint, target,
                           model_step, options);
}

}  // namespace matchsim
