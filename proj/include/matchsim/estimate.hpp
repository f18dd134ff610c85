#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "matchsim/engine.hpp"
#include "matchsim/graph.hpp"
#include "matchsim/model.hpp"
#include "matchsim/tape.hpp"

namespace matchsim {

enum class SamplerKind { algo2, algo3, cftp };

SamplerKind sampler_from_name(const std::string& name);
std::string sampler_name(SamplerKind kind);

/// Runs fn(replication_index) over [0, reps), in parallel when jobs > 1;
/// fn must be safe to call concurrently for distinct indices.
void parallel_replications(std::int64_t reps, int jobs,
                           const std::function<void(std::int64_t)>& fn);

/// Runs the chosen sampler on a word-profile model (deterministic
/// patience; algo2 additionally needs latency). options.initial_horizon
/// == 0 picks the per-algorithm default (1 for algo2, 2p otherwise).
SampleResult<Word> run_word_sampler(SamplerKind kind, const CompatibilityGraph& g,
                                    const ArrivalModel& model, const Policy& policy,
                                    InputTape& tape,
                                    SampleOptions options = {.initial_horizon = 0});

/// Monte-Carlo loss-rate estimate over perfect samples: one perfect sample
/// per replication, one further arrival, and the head slot is lost exactly
/// when it holds a class the transition does not match.
struct LossEstimate {
  std::vector<std::int64_t> class_losses;  // per class 1..n
  std::int64_t replications = 0;

  double rate(int cls) const;          // rho_hat(cls)
  double rate_se(int cls) const;       // normal-approximation standard error
  double total_rate() const;           // rho_hat = sum of per-class rates
  double total_se() const;
};

LossEstimate estimate_loss(const CompatibilityGraph& g, const ArrivalModel& model,
                           const Policy& policy, std::uint64_t master_seed,
                           std::int64_t replications, SamplerKind sampler, int jobs = 1);

/// Policies compared on common random numbers: the same tapes, the same
/// further arrivals. Differences are paired against the first policy.
struct PolicyComparison {
  std::vector<Policy> policies;
  std::vector<LossEstimate> estimates;
  // Paired total-loss difference of policy k against policy 0.
  std::vector<double> diff_total;
  std::vector<double> diff_total_se;
  // Paired per-class differences, diff_class[k][c-1].
  std::vector<std::vector<double>> diff_class;
  std::vector<std::vector<double>> diff_class_se;
};

PolicyComparison compare_policies(const CompatibilityGraph& g, const ArrivalModel& model,
                                  const std::vector<Policy>& policies, std::uint64_t master_seed,
                                  std::int64_t replications, SamplerKind sampler, int jobs = 1);

/// Mean operation counts per sampler over shared tapes.
struct OpsComparison {
  std::vector<SamplerKind> samplers;
  std::vector<double> mean_operations;
  std::vector<double> mean_horizon;  // mean of -T
  std::int64_t replications = 0;
};

OpsComparison compare_samplers_ops(const CompatibilityGraph& g, const ArrivalModel& model,
                                   const Policy& policy, const std::vector<SamplerKind>& samplers,
                                   std::uint64_t master_seed, std::int64_t replications,
                                   int jobs = 1);

/// Chi-square agreement between the perfect-sample empirical law and a
/// forward-run empirical law on the finite word-profile space. Cells whose
/// pooled expected count is too small are merged into one (annotated).
struct AgreementReport {
  double chi_square = 0.0;
  std::int64_t degrees_of_freedom = 0;
  double p_value = 1.0;
  double tv_distance = 0.0;
  std::int64_t cells = 0;
  std::int64_t merged_states = 0;
  bool pass = false;
  std::int64_t replications = 0;
  std::int64_t forward_steps = 0;
  double significance = 0.01;
};

AgreementReport distribution_agreement(const CompatibilityGraph& g, const ArrivalModel& model,
                                       const Policy& policy, SamplerKind sampler,
                                       std::int64_t replications, std::int64_t forward_steps,
                                       std::uint64_t master_seed, double significance = 0.01,
                                       int jobs = 1);

/// Same test with an arbitrary sampler (used by the negative controls).
AgreementReport distribution_agreement_fn(
    const CompatibilityGraph& g, const ArrivalModel& model, const Policy& policy,
    const std::function<Word(InputTape&)>& sampler, std::int64_t replications,
    std::int64_t forward_steps, std::uint64_t master_seed, double significance = 0.01,
    int jobs = 1);

}  // namespace matchsim
