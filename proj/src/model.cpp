#include "matchsim/model.hpp"

#include <algorithm>
#include <cmath>

#include "matchsim/errors.hpp"

namespace matchsim {

Policy Policy::priority(std::vector<int> order) {
  Policy p;
  p.kind = Kind::priority;
  p.priority_order = std::move(order);
  return p;
}

Policy Policy::parse(const std::string& text, int n) {
  if (text == "fcfm") return fcfm();
  if (text == "ml") return ml();
  if (text == "random") return random();
  if (text.rfind("priority:", 0) == 0) {
    std::vector<int> order;
    std::size_t pos = std::string("priority:").size();
    while (pos < text.size()) {
      std::size_t next = text.find(',', pos);
      if (next == std::string::npos) next = text.size();
      order.push_back(std::stoi(text.substr(pos, next - pos)));
      pos = next + 1;
    }
    std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
    for (int c : order) {
      if (c < 1 || c > n || seen[c])
        throw ConfigError("priority order must be a permutation of 1.." + std::to_string(n));
      seen[c] = 1;
    }
    if (static_cast<int>(order.size()) != n)
      throw ConfigError("priority order must list all " + std::to_string(n) + " classes");
    return priority(std::move(order));
  }
  throw ConfigError("unknown policy '" + text +
                    "' (expected fcfm | ml | priority:<classes> | random)");
}

std::string Policy::name() const {
  switch (kind) {
    case Kind::fcfm: return "fcfm";
    case Kind::ml: return "ml";
    case Kind::random: return "random";
    case Kind::priority: {
      std::string s = "priority:";
      for (std::size_t i = 0; i < priority_order.size(); ++i) {
        if (i > 0) s += ',';
        s += std::to_string(priority_order[i]);
      }
      return s;
    }
  }
  return "?";
}

std::string word_to_string(const Word& w) {
  const bool compact =
      std::all_of(w.begin(), w.end(), [](int l) { return l == kLatency || (l >= 0 && l <= 9); });
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (compact)
      out += w[i] == kLatency ? '*' : static_cast<char>('0' + w[i]);
    else
      out += (i > 0 ? "," : "") + (w[i] == kLatency ? std::string("*") : std::to_string(w[i]));
  }
  return out;
}

namespace {

// Uniform pick from k choices with one draw; the clamp guards draw == 1-ulp.
std::size_t uniform_index(double draw, std::size_t k) {
  auto idx = static_cast<std::size_t>(draw * static_cast<double>(k));
  return idx >= k ? k - 1 : idx;
}

// Shared candidate selection over letters; `letters` is either the word
// profile or the class column of the profile chain, `candidates` the
// positions compatible with the arrival, in increasing position order.
std::size_t pick_position(std::span<const int> letters, std::span<const std::size_t> candidates,
                          const Policy& policy, double draw) {
  switch (policy.kind) {
    case Policy::Kind::fcfm:
      return candidates.front();
    case Policy::Kind::random:
      return candidates[uniform_index(draw, candidates.size())];
    case Policy::Kind::priority:
      for (int cls : policy.priority_order)
        for (std::size_t pos : candidates) {
          note_op();
          if (letters[pos] == cls) return pos;
        }
      return candidates.front();  // unreachable for a full permutation
    case Policy::Kind::ml: {
      // Queue length per class over the whole buffer; one comparison per
      // stored letter to classify it.
      int max_class = 0;
      for (int letter : letters) max_class = std::max(max_class, letter);
      std::vector<int> multiplicity(static_cast<std::size_t>(max_class) + 1, 0);
      for (int letter : letters)
        if (letter >= 1) {
          note_op();
          ++multiplicity[letter];
        }
      std::vector<int> classes;  // distinct candidate classes, ascending
      for (std::size_t pos : candidates) classes.push_back(letters[pos]);
      std::sort(classes.begin(), classes.end());
      classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
      int best = 0;
      for (int cls : classes) best = std::max(best, multiplicity[cls]);
      std::vector<int> tied;
      for (int cls : classes)
        if (multiplicity[cls] == best) tied.push_back(cls);
      const int chosen = tied.size() == 1 ? tied.front()
                                          : tied[uniform_index(draw, tied.size())];
      for (std::size_t pos : candidates) {
        note_op();
        if (letters[pos] == chosen) return pos;
      }
      return candidates.front();  // unreachable
    }
  }
  return candidates.front();
}

}  // namespace

std::optional<std::size_t> word_match_position(const Word& state, int arrival,
                                               const Policy& policy,
                                               const CompatibilityGraph& g, double draw) {
  if (arrival == kLatency) return std::nullopt;
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < state.size(); ++i)
    if (state[i] >= 1 && g.compatible(state[i], arrival)) candidates.push_back(i);
  if (candidates.empty()) return std::nullopt;
  return pick_position(state, candidates, policy, draw);
}

Word word_step(const Word& state, int arrival, const Policy& policy,
               const CompatibilityGraph& g, double draw) {
  Word next;
  next.reserve(state.size());
  if (const auto matched = word_match_position(state, arrival, policy, g, draw)) {
    next.assign(state.begin(), state.end());
    next[*matched] = kMatchedSlot;
    next.erase(next.begin());
    next.push_back(kMatchedSlot);
    return next;
  }
  next.assign(state.begin() + 1, state.end());
  next.push_back(arrival);
  return next;
}

Word apply_word(Word state, std::span<const int> arrivals, const Policy& policy,
                const CompatibilityGraph& g, std::span<const double> draws) {
  for (std::size_t i = 0; i < arrivals.size(); ++i) {
    const double draw = i < draws.size() ? draws[i] : 0.0;
    state = word_step(state, arrivals[i], policy, g, draw);
  }
  return state;
}

std::vector<Word> enumerate_word_states(int n, int p, bool latency) {
  std::vector<int> alphabet{kMatchedSlot};
  if (latency) alphabet.push_back(kLatency);
  for (int c = 1; c <= n; ++c) alphabet.push_back(c);

  std::vector<Word> states;
  Word current(static_cast<std::size_t>(p), kMatchedSlot);
  std::vector<std::size_t> digits(static_cast<std::size_t>(p), 0);
  for (;;) {
    for (std::size_t i = 0; i < current.size(); ++i) current[i] = alphabet[digits[i]];
    states.push_back(current);
    std::size_t pos = digits.size();
    while (pos > 0) {
      --pos;
      if (++digits[pos] < alphabet.size()) break;
      digits[pos] = 0;
      if (pos == 0) return states;
    }
  }
}

std::size_t word_state_index(const Word& w, int n, bool latency) {
  const std::size_t base = static_cast<std::size_t>(n) + 1 + (latency ? 1 : 0);
  std::size_t index = 0;
  for (int letter : w) {
    std::size_t digit;
    if (letter == kMatchedSlot)
      digit = 0;
    else if (letter == kLatency)
      digit = 1;
    else
      digit = static_cast<std::size_t>(letter) + (latency ? 1 : 0);
    index = index * base + digit;
  }
  return index;
}

Profile profile_step(const Profile& state, const InputEvent& event, const Policy& policy,
                     const CompatibilityGraph& g, double draw) {
  Profile work = state;
  if (event.cls != kLatency) {
    std::vector<int> classes;
    classes.reserve(work.size());
    for (const auto& item : work) classes.push_back(item.cls);
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < work.size(); ++i)
      if (g.compatible(work[i].cls, event.cls)) candidates.push_back(i);
    if (!candidates.empty()) {
      const std::size_t matched = pick_position(classes, candidates, policy, draw);
      work.erase(work.begin() + static_cast<std::ptrdiff_t>(matched));
    } else {
      work.push_back(ProfileItem{event.patience, event.cls});
    }
  }
  Profile next;
  next.reserve(work.size());
  for (const auto& item : work)
    if (item.remaining >= 1.0) next.push_back(ProfileItem{item.remaining - 1.0, item.cls});
  return next;
}

double phi(const Profile& state) {
  double best = 0.0;
  for (const auto& item : state) best = std::max(best, item.remaining);
  return best;
}

}  // namespace matchsim
