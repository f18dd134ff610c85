#include "matchsim/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "matchsim/dominated.hpp"
#include "matchsim/errors.hpp"
#include "matchsim/stats.hpp"
#include "matchsim/syncword.hpp"

namespace matchsim {

namespace {

constexpr std::int64_t kForwardBurnIn = 1000;
constexpr std::uint64_t kForwardStream = 0xf09d8c95ull;  // replication slot of the forward run

// Static partition of [0, reps) over jobs threads; each worker owns a
// contiguous block, so aggregation is a plain merge.
void run_partitioned(std::int64_t reps, int jobs, const std::function<void(int, std::int64_t, std::int64_t)>& block) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || reps < 2 * jobs) {
    block(0, 0, reps);
    return;
  }
  std::vector<std::thread> threads;
  const std::int64_t chunk = (reps + jobs - 1) / jobs;
  for (int t = 0; t < jobs; ++t) {
    const std::int64_t begin = t * chunk;
    const std::int64_t end = std::min(reps, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&, t, begin, end] { block(t, begin, end); });
  }
  for (auto& th : threads) th.join();
}

}  // namespace

void parallel_replications(std::int64_t reps, int jobs,
                           const std::function<void(std::int64_t)>& fn) {
  run_partitioned(reps, jobs, [&](int, std::int64_t begin, std::int64_t end) {
    for (std::int64_t r = begin; r < end; ++r) fn(r);
  });
}

SamplerKind sampler_from_name(const std::string& name) {
  if (name == "algo2") return SamplerKind::algo2;
  if (name == "algo3") return SamplerKind::algo3;
  if (name == "cftp") return SamplerKind::cftp;
  throw ConfigError("unknown sampler '" + name + "' (expected algo2 | algo3 | cftp)");
}

std::string sampler_name(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::algo2: return "algo2";
    case SamplerKind::algo3: return "algo3";
    case SamplerKind::cftp: return "cftp";
  }
  return "?";
}

SampleResult<Word> run_word_sampler(SamplerKind kind, const CompatibilityGraph& g,
                                    const ArrivalModel& model, const Policy& policy,
                                    InputTape& tape, SampleOptions options) {
  if (model.patience.kind != PatienceLaw::Kind::deterministic)
    throw ConfigError("word-profile samplers need deterministic patience");
  switch (kind) {
    case SamplerKind::algo2:
      return sample_dominated_word(g, model, policy, tape, options);
    case SamplerKind::algo3:
      return sample_syncword(g, model, policy, tape, options);
    case SamplerKind::cftp: {
      const int p = model.patience.word_length;
      if (options.initial_horizon == 0) options.initial_horizon = 2 * p;
      const auto states = enumerate_word_states(g.size(), p, model.latency_enabled());
      auto step = [&](Word state, const InputEvent& event, double draw) {
        return word_step(state, event.cls, policy, g, draw);
      };
      return primitive_cftp(tape, states, step, words_equal_metered, options);
    }
  }
  throw ConfigError("unreachable sampler kind");
}

double LossEstimate::rate(int cls) const {
  return static_cast<double>(class_losses.at(static_cast<std::size_t>(cls - 1))) /
         static_cast<double>(replications);
}

double LossEstimate::rate_se(int cls) const {
  const double p = rate(cls);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(replications));
}

double LossEstimate::total_rate() const {
  // Deliberately the sum of the per-class rates, so the reported identity
  // rho = sum_i rho(i) holds to the last bit.
  double total = 0.0;
  for (int c = 1; c <= static_cast<int>(class_losses.size()); ++c) total += rate(c);
  return total;
}

double LossEstimate::total_se() const {
  std::int64_t losses = 0;
  for (std::int64_t l : class_losses) losses += l;
  const double p = static_cast<double>(losses) / static_cast<double>(replications);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(replications));
}

namespace {

// The loss event of one replication: the perfect sample's head slot holds a
// class and the further arrival does not match it. Returns 0 when nothing
// is lost, the class otherwise.
int replication_loss_class(const CompatibilityGraph& g, const ArrivalModel& model,
                           const Policy& policy, SamplerKind kind, std::uint64_t rep_seed) {
  InputTape tape(rep_seed, model);
  const Word sample = run_word_sampler(kind, g, model, policy, tape).sample;
  const int head = sample.front();
  if (head < 1) return 0;
  // The time-0 arrival and tie-break come from the (never consumed)
  // non-negative side of the replication stream.
  const InputEvent arrival = draw_event(rep_seed, 0, model);
  const double draw = draw_policy_uniform(rep_seed, 0);
  const auto matched = word_match_position(sample, arrival.cls, policy, g, draw);
  if (matched.has_value() && *matched == 0) return 0;  // head matched, departs
  return head;
}

}  // namespace

LossEstimate estimate_loss(const CompatibilityGraph& g, const ArrivalModel& model,
                           const Policy& policy, std::uint64_t master_seed,
                           std::int64_t replications, SamplerKind sampler, int jobs) {
  if (replications < 1) throw ConfigError("need at least one replication");
  model.validate(g.size());

  const int n = g.size();
  std::vector<std::vector<std::int64_t>> partial(
      static_cast<std::size_t>(std::max(1, jobs)), std::vector<std::int64_t>(n, 0));
  run_partitioned(replications, jobs, [&](int worker, std::int64_t begin, std::int64_t end) {
    auto& losses = partial[static_cast<std::size_t>(worker)];
    for (std::int64_t r = begin; r < end; ++r) {
      const std::uint64_t rep_seed = derive_replication_seed(master_seed, static_cast<std::uint64_t>(r));
      const int lost = replication_loss_class(g, model, policy, sampler, rep_seed);
      if (lost >= 1) ++losses[static_cast<std::size_t>(lost - 1)];
    }
  });

  LossEstimate estimate;
  estimate.class_losses.assign(static_cast<std::size_t>(n), 0);
  estimate.replications = replications;
  for (const auto& losses : partial)
    for (int c = 0; c < n; ++c) estimate.class_losses[static_cast<std::size_t>(c)] += losses[static_cast<std::size_t>(c)];
  return estimate;
}

PolicyComparison compare_policies(const CompatibilityGraph& g, const ArrivalModel& model,
                                  const std::vector<Policy>& policies, std::uint64_t master_seed,
                                  std::int64_t replications, SamplerKind sampler, int jobs) {
  if (policies.size() < 2) throw ConfigError("policy comparison needs at least two policies");
  if (replications < 2) throw ConfigError("policy comparison needs at least two replications");
  model.validate(g.size());

  const int n = g.size();
  const std::size_t k = policies.size();
  struct Partial {
    std::vector<std::vector<std::int64_t>> losses;      // [policy][class]
    std::vector<double> d_total, d2_total;              // [policy]
    std::vector<std::vector<double>> d_class, d2_class; // [policy][class]
  };
  std::vector<Partial> partials(static_cast<std::size_t>(std::max(1, jobs)));
  for (auto& part : partials) {
    part.losses.assign(k, std::vector<std::int64_t>(n, 0));
    part.d_total.assign(k, 0.0);
    part.d2_total.assign(k, 0.0);
    part.d_class.assign(k, std::vector<double>(n, 0.0));
    part.d2_class.assign(k, std::vector<double>(n, 0.0));
  }

  run_partitioned(replications, jobs, [&](int worker, std::int64_t begin, std::int64_t end) {
    auto& part = partials[static_cast<std::size_t>(worker)];
    std::vector<int> lost(k, 0);
    for (std::int64_t r = begin; r < end; ++r) {
      const std::uint64_t rep_seed = derive_replication_seed(master_seed, static_cast<std::uint64_t>(r));
      for (std::size_t j = 0; j < k; ++j) {
        lost[j] = replication_loss_class(g, model, policies[j], sampler, rep_seed);
        if (lost[j] >= 1) ++part.losses[j][static_cast<std::size_t>(lost[j] - 1)];
      }
      for (std::size_t j = 0; j < k; ++j) {
        const double dt = (lost[j] >= 1 ? 1.0 : 0.0) - (lost[0] >= 1 ? 1.0 : 0.0);
        part.d_total[j] += dt;
        part.d2_total[j] += dt * dt;
        for (int c = 1; c <= n; ++c) {
          const double dc = (lost[j] == c ? 1.0 : 0.0) - (lost[0] == c ? 1.0 : 0.0);
          part.d_class[j][static_cast<std::size_t>(c - 1)] += dc;
          part.d2_class[j][static_cast<std::size_t>(c - 1)] += dc * dc;
        }
      }
    }
  });

  PolicyComparison out;
  out.policies = policies;
  out.estimates.resize(k);
  out.diff_total.assign(k, 0.0);
  out.diff_total_se.assign(k, 0.0);
  out.diff_class.assign(k, std::vector<double>(n, 0.0));
  out.diff_class_se.assign(k, std::vector<double>(n, 0.0));
  const double reps = static_cast<double>(replications);
  for (std::size_t j = 0; j < k; ++j) {
    out.estimates[j].class_losses.assign(static_cast<std::size_t>(n), 0);
    out.estimates[j].replications = replications;
    double sum_d = 0.0, sum_d2 = 0.0;
    std::vector<double> sum_dc(static_cast<std::size_t>(n), 0.0), sum_dc2(static_cast<std::size_t>(n), 0.0);
    for (const auto& part : partials) {
      for (int c = 0; c < n; ++c) out.estimates[j].class_losses[static_cast<std::size_t>(c)] += part.losses[j][static_cast<std::size_t>(c)];
      sum_d += part.d_total[j];
      sum_d2 += part.d2_total[j];
      for (int c = 0; c < n; ++c) {
        sum_dc[static_cast<std::size_t>(c)] += part.d_class[j][static_cast<std::size_t>(c)];
        sum_dc2[static_cast<std::size_t>(c)] += part.d2_class[j][static_cast<std::size_t>(c)];
      }
    }
    out.diff_total[j] = sum_d / reps;
    const double var = std::max(0.0, (sum_d2 - sum_d * sum_d / reps) / (reps - 1.0));
    out.diff_total_se[j] = std::sqrt(var / reps);
    for (int c = 0; c < n; ++c) {
      out.diff_class[j][static_cast<std::size_t>(c)] = sum_dc[static_cast<std::size_t>(c)] / reps;
      const double vc = std::max(0.0, (sum_dc2[static_cast<std::size_t>(c)] -
                                       sum_dc[static_cast<std::size_t>(c)] * sum_dc[static_cast<std::size_t>(c)] / reps) /
                                          (reps - 1.0));
      out.diff_class_se[j][static_cast<std::size_t>(c)] = std::sqrt(vc / reps);
    }
  }
  return out;
}

OpsComparison compare_samplers_ops(const CompatibilityGraph& g, const ArrivalModel& model,
                                   const Policy& policy, const std::vector<SamplerKind>& samplers,
                                   std::uint64_t master_seed, std::int64_t replications,
                                   int jobs) {
  if (samplers.empty()) throw ConfigError("no samplers to compare");
  if (replications < 1) throw ConfigError("need at least one replication");
  model.validate(g.size());

  const std::size_t k = samplers.size();
  std::vector<std::vector<double>> ops(static_cast<std::size_t>(std::max(1, jobs)),
                                       std::vector<double>(k, 0.0));
  std::vector<std::vector<double>> horizons = ops;
  run_partitioned(replications, jobs, [&](int worker, std::int64_t begin, std::int64_t end) {
    for (std::int64_t r = begin; r < end; ++r) {
      const std::uint64_t rep_seed = derive_replication_seed(master_seed, static_cast<std::uint64_t>(r));
      InputTape tape(rep_seed, model);  // shared across samplers: common random numbers
      for (std::size_t j = 0; j < k; ++j) {
        const auto run = run_word_sampler(samplers[j], g, model, policy, tape);
        ops[static_cast<std::size_t>(worker)][j] += static_cast<double>(run.report.operations);
        horizons[static_cast<std::size_t>(worker)][j] += static_cast<double>(-run.report.start_time);
      }
    }
  });

  OpsComparison out;
  out.samplers = samplers;
  out.replications = replications;
  out.mean_operations.assign(k, 0.0);
  out.mean_horizon.assign(k, 0.0);
  for (std::size_t w = 0; w < ops.size(); ++w)
    for (std::size_t j = 0; j < k; ++j) {
      out.mean_operations[j] += ops[w][j];
      out.mean_horizon[j] += horizons[w][j];
    }
  for (std::size_t j = 0; j < k; ++j) {
    out.mean_operations[j] /= static_cast<double>(replications);
    out.mean_horizon[j] /= static_cast<double>(replications);
  }
  return out;
}

namespace {

AgreementReport chi_square_agreement(const std::vector<std::int64_t>& perfect_counts,
                                     const std::vector<std::int64_t>& forward_counts,
                                     std::int64_t n1, std::int64_t n2, double significance) {
  // Two-sample homogeneity chi-square with pooled-expected >= 5 merging.
  const double total = static_cast<double>(n1 + n2);
  double c1_small = 0.0, c2_small = 0.0;
  double chi = 0.0;
  std::int64_t cells = 0;
  std::int64_t merged = 0;
  double tv = 0.0;

  auto add_cell = [&](double c1, double c2) {
    const double pooled = c1 + c2;
    const double e1 = static_cast<double>(n1) * pooled / total;
    const double e2 = static_cast<double>(n2) * pooled / total;
    chi += (c1 - e1) * (c1 - e1) / e1 + (c2 - e2) * (c2 - e2) / e2;
    ++cells;
  };

  for (std::size_t s = 0; s < perfect_counts.size(); ++s) {
    const double c1 = static_cast<double>(perfect_counts[s]);
    const double c2 = static_cast<double>(forward_counts[s]);
    tv += 0.5 * std::abs(c1 / static_cast<double>(n1) - c2 / static_cast<double>(n2));
    const double pooled = c1 + c2;
    if (pooled == 0.0) continue;
    const double e_min = std::min(static_cast<double>(n1), static_cast<double>(n2)) * pooled / total;
    if (e_min < 5.0) {
      c1_small += c1;
      c2_small += c2;
      ++merged;
    } else {
      add_cell(c1, c2);
    }
  }
  if (c1_small + c2_small > 0.0) add_cell(c1_small, c2_small);

  AgreementReport report;
  report.chi_square = chi;
  report.cells = cells;
  report.merged_states = merged;
  report.degrees_of_freedom = std::max<std::int64_t>(0, cells - 1);
  report.p_value = report.degrees_of_freedom > 0
                       ? chi_square_tail(chi, static_cast<double>(report.degrees_of_freedom))
                       : 1.0;
  report.tv_distance = tv;
  report.significance = significance;
  report.pass = report.p_value > significance;
  return report;
}

}  // namespace

AgreementReport distribution_agreement_fn(
    const CompatibilityGraph& g, const ArrivalModel& model, const Policy& policy,
    const std::function<Word(InputTape&)>& sampler, std::int64_t replications,
    std::int64_t forward_steps, std::uint64_t master_seed, double significance, int jobs) {
  if (replications < 1 || forward_steps < 1)
    throw ConfigError("agreement test needs replications >= 1 and forward_steps >= 1");
  model.validate(g.size());
  if (model.patience.kind != PatienceLaw::Kind::deterministic)
    throw ConfigError("agreement test runs on the finite word-profile space only");

  const int n = g.size();
  const int p = model.patience.word_length;
  const bool latency = model.latency_enabled();
  std::size_t space = 1;
  for (int i = 0; i < p; ++i) space *= static_cast<std::size_t>(n + 1 + (latency ? 1 : 0));
  if (space > (1u << 22)) throw ConfigError("word-profile space too large for the agreement test");

  std::vector<std::vector<std::int64_t>> partial(
      static_cast<std::size_t>(std::max(1, jobs)), std::vector<std::int64_t>(space, 0));
  run_partitioned(replications, jobs, [&](int worker, std::int64_t begin, std::int64_t end) {
    auto& counts = partial[static_cast<std::size_t>(worker)];
    for (std::int64_t r = begin; r < end; ++r) {
      InputTape tape(derive_replication_seed(master_seed, static_cast<std::uint64_t>(r)), model);
      ++counts[word_state_index(sampler(tape), n, latency)];
    }
  });
  std::vector<std::int64_t> perfect_counts(space, 0);
  for (const auto& counts : partial)
    for (std::size_t s = 0; s < space; ++s) perfect_counts[s] += counts[s];

  // One long forward run on an independent stream.
  std::vector<std::int64_t> forward_counts(space, 0);
  const std::uint64_t forward_seed = derive_replication_seed(master_seed, kForwardStream);
  Word state(static_cast<std::size_t>(p), kMatchedSlot);
  for (std::int64_t t = 0; t < kForwardBurnIn + forward_steps; ++t) {
    const InputEvent event = draw_event(forward_seed, t, model);
    state = word_step(state, event.cls, policy, g, draw_policy_uniform(forward_seed, t));
    if (t >= kForwardBurnIn) ++forward_counts[word_state_index(state, n, latency)];
  }

  AgreementReport report =
      chi_square_agreement(perfect_counts, forward_counts, replications, forward_steps, significance);
  report.replications = replications;
  report.forward_steps = forward_steps;
  return report;
}

AgreementReport distribution_agreement(const CompatibilityGraph& g, const ArrivalModel& model,
                                       const Policy& policy, SamplerKind sampler,
                                       std::int64_t replications, std::int64_t forward_steps,
                                       std::uint64_t master_seed, double significance, int jobs) {
  auto run = [&, sampler](InputTape& tape) {
    return run_word_sampler(sampler, g, model, policy, tape).sample;
  };
  return distribution_agreement_fn(g, model, policy, run, replications, forward_steps,
                                   master_seed, significance, jobs);
}

}  // namespace matchsim
