// matchsim: perfect sampling of stochastic matching models with reneging.
//
// Subcommands: sample, count, loss, compare, validate, gen-graph.
// Exit codes: 0 success, 2 configuration error, 3 sampler non-termination.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>

#include <CLI11.hpp>

#include "matchsim/counting.hpp"
#include "matchsim/dominated.hpp"
#include "matchsim/errors.hpp"
#include "matchsim/estimate.hpp"
#include "matchsim/io.hpp"
#include "matchsim/syncword.hpp"

namespace {

using namespace matchsim;

struct ModelOptions {
  std::string graph_spec;
  std::string model_file;
  std::string mu_text = "uniform";
  std::string patience_text;
  int p = 0;
  double gamma = 0.0;
};

struct OutputOptions {
  std::string path;       // empty: stdout
  std::string format = "json";
};

void add_model_options(CLI::App* cmd, ModelOptions& opts, bool patience_relevant = true) {
  cmd->add_option("--graph", opts.graph_spec,
                  "graph: paw | path:<n> | complete:<n> | er:<n>:<q>:<seed> | JSON file")
      ->required();
  cmd->add_option("--model", opts.model_file, "arrival model JSON file (overrides flags)");
  if (patience_relevant) {
    cmd->add_option("--p", opts.p, "word length (deterministic patience p)");
    cmd->add_option("--patience", opts.patience_text,
                    "deterministic:<p> or discrete:<v>=<pr>,<v>=<pr>,...");
    cmd->add_option("--gamma", opts.gamma, "latency probability (default 0)");
    cmd->add_option("--mu", opts.mu_text, "class distribution: uniform or comma list");
  }
}

std::vector<double> parse_mu(const std::string& text, int n) {
  if (text == "uniform") return std::vector<double>(static_cast<std::size_t>(n), 1.0 / n);
  std::vector<double> mu;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) mu.push_back(std::stod(item));
  return mu;
}

PatienceLaw parse_patience(const std::string& text) {
  if (text.rfind("deterministic:", 0) == 0)
    return PatienceLaw::deterministic(std::stoi(text.substr(14)));
  if (text.rfind("discrete:", 0) == 0) {
    std::vector<std::pair<double, double>> support;
    std::istringstream in(text.substr(9));
    std::string atom;
    while (std::getline(in, atom, ',')) {
      const auto eq = atom.find('=');
      if (eq == std::string::npos)
        throw ConfigError("discrete patience atoms are <value>=<prob>, got '" + atom + "'");
      support.emplace_back(std::stod(atom.substr(0, eq)), std::stod(atom.substr(eq + 1)));
    }
    return PatienceLaw::discrete(std::move(support));
  }
  throw ConfigError("patience must be deterministic:<p> or discrete:..., got '" + text + "'");
}

ArrivalModel resolve_model(const ModelOptions& opts, const CompatibilityGraph& g) {
  if (!opts.model_file.empty()) return load_arrival_model(opts.model_file, g.size());
  ArrivalModel model;
  model.mu = parse_mu(opts.mu_text, g.size());
  model.gamma = opts.gamma;
  if (!opts.patience_text.empty()) {
    model.patience = parse_patience(opts.patience_text);
    if (opts.p != 0 && model.patience.kind == PatienceLaw::Kind::deterministic &&
        model.patience.word_length != opts.p)
      throw ConfigError("--p and --patience disagree");
    if (opts.p != 0 && model.patience.kind == PatienceLaw::Kind::discrete)
      throw ConfigError("--p only applies to deterministic patience");
  } else {
    if (opts.p < 1) throw ConfigError("need --p (or --patience / --model)");
    model.patience = PatienceLaw::deterministic(opts.p);
  }
  model.validate(g.size());
  return model;
}

JsonValue word_to_json(const Word& w) {
  JsonValue out = JsonValue::array();
  for (int letter : w) out.push(JsonValue::integer(letter));
  return out;
}

JsonValue profile_to_json(const Profile& profile) {
  JsonValue out = JsonValue::array();
  for (const auto& item : profile) {
    JsonValue pair = JsonValue::array();
    pair.push(JsonValue::real(item.remaining)).push(JsonValue::integer(item.cls));
    out.push(std::move(pair));
  }
  return out;
}

std::string profile_to_string(const Profile& profile) {
  std::string out;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (i > 0) out += '|';
    out += render_double(profile[i].remaining) + ":" + std::to_string(profile[i].cls);
  }
  return out;
}

JsonValue config_json(const std::string& command, const ModelOptions& opts,
                      const CompatibilityGraph& g, const ArrivalModel* model) {
  JsonValue config = JsonValue::object();
  config.set("command", JsonValue::string(command));
  config.set("graph_spec", JsonValue::string(opts.graph_spec));
  config.set("graph", graph_to_json(g));
  if (model != nullptr) config.set("model", arrival_model_to_json(*model));
  return config;
}

void emit(const OutputOptions& out, const std::string& text) {
  if (out.path.empty()) {
    std::fputs(text.c_str(), stdout);
    std::fputc('\n', stdout);
  } else {
    std::ofstream file(out.path, std::ios::binary);
    if (!file) throw ConfigError("cannot write '" + out.path + "'");
    file << text << '\n';
  }
}

void emit_json_or_csv(const OutputOptions& out, const JsonValue& json,
                      const std::string& csv) {
  if (out.format == "json")
    emit(out, json.dump(2));
  else if (out.format == "csv")
    emit(out, csv);
  else
    throw ConfigError("unknown format '" + out.format + "' (json | csv)");
}

std::string csv_config_line(const JsonValue& config) {
  return "# config " + config.dump(0);
}

std::string error_record(const std::string& message, const std::string& kind) {
  JsonValue record = JsonValue::object();
  record.set("error", JsonValue::string(message));
  record.set("kind", JsonValue::string(kind));
  return record.dump(0);
}

// ---- subcommand bodies -------------------------------------------------

int run_gen_graph(int n, double q, std::uint64_t seed, int max_attempts,
                  const OutputOptions& out) {
  const CompatibilityGraph g = random_connected_er(n, q, seed, max_attempts);
  JsonValue json = graph_to_json(g);
  JsonValue config = JsonValue::object();
  config.set("command", JsonValue::string("gen-graph"));
  config.set("n", JsonValue::integer(n));
  config.set("q", JsonValue::real(q));
  config.set("seed", JsonValue::integer(static_cast<std::int64_t>(seed)));
  json.set("config", std::move(config));
  emit(out, json.dump(2));
  return 0;
}

int run_count(const ModelOptions& opts, bool enumerate, bool per_trace,
              const std::string& mu_text, const OutputOptions& out) {
  const CompatibilityGraph g = load_graph(opts.graph_spec);
  if (opts.p < 1) throw ConfigError("count needs --p >= 1");
  const int p = opts.p;

  const BigInt n_words = count_strongly_synchronizing(g, p);
  JsonValue json = JsonValue::object();
  JsonValue config = config_json("count", opts, g, nullptr);
  config.set("p", JsonValue::integer(p));
  json.set("config", std::move(config));
  if (n_words.fits_slong_p())
    json.set("N", JsonValue::integer(n_words.get_si()));
  else
    json.set("N", JsonValue::string(n_words.get_str()));

  if (const auto bounds = coalescence_bounds(g.size(), p, n_words)) {
    json.set("bound_I", JsonValue::real(bounds->iterations));
    json.set("bound_T", JsonValue::real(bounds->horizon));
  } else {
    json.set("diagnostic",
             JsonValue::string("N = 0: no strongly synchronizing word, the control never "
                               "triggers and the bounds are undefined"));
  }
  if (mu_text != "uniform") {
    const auto mu = parse_mu(mu_text, g.size());
    if (const auto bound = horizon_bound_for_mu(g, p, mu))
      json.set("bound_T_mu", JsonValue::real(*bound));
  }
  if (enumerate) {
    const BigInt brute = brute_force_count_strongly_synchronizing(g, p);
    json.set("N_enumerated", brute.fits_slong_p() ? JsonValue::integer(brute.get_si())
                                                  : JsonValue::string(brute.get_str()));
    json.set("enumeration_matches", JsonValue::boolean(brute == n_words));
  }
  if (per_trace) {
    JsonValue traces = JsonValue::object();
    for (const auto& trace : enumerate_traces(g)) {
      const BigInt count = count_for_trace(trace, p, g);
      traces.set(word_to_string(trace), count.fits_slong_p()
                                            ? JsonValue::integer(count.get_si())
                                            : JsonValue::string(count.get_str()));
    }
    json.set("per_trace", std::move(traces));
  }
  emit(out, json.dump(2));
  return 0;
}

struct SampleRow {
  JsonValue sample_json;
  std::string sample_text;
  SampleReport report;
};

int run_sample(const ModelOptions& opts, const std::string& policy_text,
               const std::string& algo, std::int64_t reps, std::uint64_t seed, int jobs,
               std::int64_t horizon_cap, const OutputOptions& out) {
  const CompatibilityGraph g = load_graph(opts.graph_spec);
  const ArrivalModel model = resolve_model(opts, g);
  const Policy policy = Policy::parse(policy_text, g.size());
  if (reps < 1) throw ConfigError("need --reps >= 1");

  SampleOptions sample_options{.initial_horizon = 0, .horizon_cap = horizon_cap};
  const bool profile_chain =
      algo == "algo2" && model.patience.kind == PatienceLaw::Kind::discrete;
  if (!profile_chain) (void)sampler_from_name(algo);  // validate the name

  std::vector<SampleRow> rows(static_cast<std::size_t>(reps));
  std::exception_ptr failure;
  std::mutex failure_mutex;
  parallel_replications(reps, jobs, [&](std::int64_t r) {
    try {
      InputTape tape(derive_replication_seed(seed, static_cast<std::uint64_t>(r)), model);
      auto& row = rows[static_cast<std::size_t>(r)];
      if (profile_chain) {
        auto run = sample_dominated_profile(g, model, policy, tape, sample_options);
        row.sample_json = profile_to_json(run.sample);
        row.sample_text = profile_to_string(run.sample);
        row.report = run.report;
      } else {
        auto run = run_word_sampler(sampler_from_name(algo), g, model, policy, tape,
                                    sample_options);
        row.sample_json = word_to_json(run.sample);
        row.sample_text = word_to_string(run.sample);
        row.report = run.report;
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  });
  if (failure) std::rethrow_exception(failure);

  JsonValue config = config_json("sample", opts, g, &model);
  config.set("policy", JsonValue::string(policy.name()));
  config.set("algo", JsonValue::string(algo));
  config.set("reps", JsonValue::integer(reps));
  config.set("seed", JsonValue::integer(static_cast<std::int64_t>(seed)));
  const std::string config_line = csv_config_line(config);

  JsonValue results = JsonValue::array();
  double mean_h = 0.0, mean_i = 0.0, mean_ops = 0.0;
  for (std::int64_t r = 0; r < reps; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    JsonValue item = JsonValue::object();
    item.set("replication", JsonValue::integer(r));
    item.set("sample", row.sample_json);
    item.set("iterations", JsonValue::integer(row.report.iterations));
    item.set("start_time", JsonValue::integer(row.report.start_time));
    item.set("detection_time", JsonValue::integer(row.report.detection_time));
    item.set("events", JsonValue::integer(static_cast<std::int64_t>(row.report.events_consumed)));
    item.set("operations", JsonValue::integer(static_cast<std::int64_t>(row.report.operations)));
    results.push(std::move(item));
    mean_h += static_cast<double>(-row.report.start_time);
    mean_i += static_cast<double>(row.report.iterations);
    mean_ops += static_cast<double>(row.report.operations);
  }
  JsonValue summary = JsonValue::object();
  summary.set("mean_horizon", JsonValue::real(mean_h / static_cast<double>(reps)));
  summary.set("mean_iterations", JsonValue::real(mean_i / static_cast<double>(reps)));
  summary.set("mean_operations", JsonValue::real(mean_ops / static_cast<double>(reps)));

  JsonValue json = JsonValue::object();
  json.set("config", std::move(config));
  json.set("results", std::move(results));
  json.set("summary", std::move(summary));

  std::ostringstream csv;
  csv << config_line
      << "\nreplication,sample,iterations,start_time,detection_time,events,operations\n";
  for (std::int64_t r = 0; r < reps; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    csv << r << ',' << row.sample_text << ',' << row.report.iterations << ','
        << row.report.start_time << ',' << row.report.detection_time << ','
        << row.report.events_consumed << ',' << row.report.operations << '\n';
  }
  emit_json_or_csv(out, json, csv.str());
  return 0;
}

int run_loss(const ModelOptions& opts, const std::string& policy_text, const std::string& algo,
             std::int64_t reps, std::uint64_t seed, int jobs, const OutputOptions& out) {
  const CompatibilityGraph g = load_graph(opts.graph_spec);
  const ArrivalModel model = resolve_model(opts, g);
  const Policy policy = Policy::parse(policy_text, g.size());
  const SamplerKind kind = sampler_from_name(algo);

  const LossEstimate estimate = estimate_loss(g, model, policy, seed, reps, kind, jobs);

  JsonValue config = config_json("loss", opts, g, &model);
  config.set("policy", JsonValue::string(policy.name()));
  config.set("algo", JsonValue::string(algo));
  config.set("reps", JsonValue::integer(reps));
  config.set("seed", JsonValue::integer(static_cast<std::int64_t>(seed)));
  const std::string config_line = csv_config_line(config);

  JsonValue results = JsonValue::array();
  for (int c = 1; c <= g.size(); ++c) {
    JsonValue row = JsonValue::object();
    row.set("class", JsonValue::integer(c));
    row.set("losses", JsonValue::integer(estimate.class_losses[static_cast<std::size_t>(c - 1)]));
    row.set("rate", JsonValue::real(estimate.rate(c)));
    row.set("se", JsonValue::real(estimate.rate_se(c)));
    results.push(std::move(row));
  }
  JsonValue summary = JsonValue::object();
  summary.set("total_rate", JsonValue::real(estimate.total_rate()));
  summary.set("total_se", JsonValue::real(estimate.total_se()));
  summary.set("replications", JsonValue::integer(estimate.replications));

  JsonValue json = JsonValue::object();
  json.set("config", std::move(config));
  json.set("results", std::move(results));
  json.set("summary", std::move(summary));

  std::ostringstream csv;
  csv << config_line << "\npolicy,class,losses,rate,se\n";
  for (int c = 1; c <= g.size(); ++c)
    csv << policy.name() << ',' << c << ',' << estimate.class_losses[static_cast<std::size_t>(c - 1)]
        << ',' << render_double(estimate.rate(c)) << ',' << render_double(estimate.rate_se(c))
        << '\n';
  csv << policy.name() << ",total,," << render_double(estimate.total_rate()) << ','
      << render_double(estimate.total_se()) << '\n';
  emit_json_or_csv(out, json, csv.str());
  return 0;
}

int run_compare(const ModelOptions& opts, const std::string& policies_text,
                const std::string& samplers_text, const std::string& policy_text,
                const std::string& algo, std::int64_t reps, std::uint64_t seed, int jobs,
                const OutputOptions& out) {
  const CompatibilityGraph g = load_graph(opts.graph_spec);
  const ArrivalModel model = resolve_model(opts, g);
  if (policies_text.empty() == samplers_text.empty())
    throw ConfigError("compare needs exactly one of --policies or --samplers");

  JsonValue config = config_json("compare", opts, g, &model);
  config.set("reps", JsonValue::integer(reps));
  config.set("seed", JsonValue::integer(static_cast<std::int64_t>(seed)));

  JsonValue json = JsonValue::object();
  std::ostringstream csv;
  std::string config_line;

  if (!policies_text.empty()) {
    std::vector<Policy> policies;
    std::istringstream in(policies_text);
    std::string item;
    while (std::getline(in, item, ';')) policies.push_back(Policy::parse(item, g.size()));
    if (policies.size() == 1) throw ConfigError("--policies needs at least two (';'-separated)");
    const SamplerKind kind = sampler_from_name(algo);
    config.set("algo", JsonValue::string(algo));
    config.set("policies", [&] {
      JsonValue arr = JsonValue::array();
      for (const auto& p : policies) arr.push(JsonValue::string(p.name()));
      return arr;
    }());
    config_line = csv_config_line(config);
    json.set("config", std::move(config));

    const PolicyComparison cmp = compare_policies(g, model, policies, seed, reps, kind, jobs);
    JsonValue results = JsonValue::array();
    csv << "policy,class,losses,rate,se,diff_vs_first,diff_se\n";
    for (std::size_t j = 0; j < policies.size(); ++j) {
      JsonValue row = JsonValue::object();
      row.set("policy", JsonValue::string(policies[j].name()));
      JsonValue per_class = JsonValue::array();
      for (int c = 1; c <= g.size(); ++c) {
        JsonValue cell = JsonValue::object();
        cell.set("class", JsonValue::integer(c));
        cell.set("losses",
                 JsonValue::integer(cmp.estimates[j].class_losses[static_cast<std::size_t>(c - 1)]));
        cell.set("rate", JsonValue::real(cmp.estimates[j].rate(c)));
        cell.set("se", JsonValue::real(cmp.estimates[j].rate_se(c)));
        cell.set("diff_vs_first", JsonValue::real(cmp.diff_class[j][static_cast<std::size_t>(c - 1)]));
        cell.set("diff_se", JsonValue::real(cmp.diff_class_se[j][static_cast<std::size_t>(c - 1)]));
        per_class.push(std::move(cell));
        csv << policies[j].name() << ',' << c << ','
            << cmp.estimates[j].class_losses[static_cast<std::size_t>(c - 1)] << ','
            << render_double(cmp.estimates[j].rate(c)) << ','
            << render_double(cmp.estimates[j].rate_se(c)) << ','
            << render_double(cmp.diff_class[j][static_cast<std::size_t>(c - 1)]) << ','
            << render_double(cmp.diff_class_se[j][static_cast<std::size_t>(c - 1)]) << '\n';
      }
      row.set("per_class", std::move(per_class));
      row.set("total_rate", JsonValue::real(cmp.estimates[j].total_rate()));
      row.set("total_se", JsonValue::real(cmp.estimates[j].total_se()));
      row.set("diff_total_vs_first", JsonValue::real(cmp.diff_total[j]));
      row.set("diff_total_se", JsonValue::real(cmp.diff_total_se[j]));
      results.push(std::move(row));
      csv << policies[j].name() << ",total,," << render_double(cmp.estimates[j].total_rate())
          << ',' << render_double(cmp.estimates[j].total_se()) << ','
          << render_double(cmp.diff_total[j]) << ',' << render_double(cmp.diff_total_se[j])
          << '\n';
    }
    json.set("results", std::move(results));
    JsonValue summary = JsonValue::object();
    summary.set("baseline", JsonValue::string(policies.front().name()));
    summary.set("replications", JsonValue::integer(reps));
    json.set("summary", std::move(summary));
  } else {
    std::vector<SamplerKind> samplers;
    std::istringstream in(samplers_text);
    std::string item;
    while (std::getline(in, item, ',')) samplers.push_back(sampler_from_name(item));
    const Policy policy = Policy::parse(policy_text, g.size());
    config.set("policy", JsonValue::string(policy.name()));
    config.set("samplers", JsonValue::string(samplers_text));
    config_line = csv_config_line(config);
    json.set("config", std::move(config));

    const OpsComparison cmp = compare_samplers_ops(g, model, policy, samplers, seed, reps, jobs);
    JsonValue results = JsonValue::array();
    csv << "sampler,mean_operations,mean_horizon\n";
    for (std::size_t j = 0; j < samplers.size(); ++j) {
      JsonValue row = JsonValue::object();
      row.set("sampler", JsonValue::string(sampler_name(samplers[j])));
      row.set("mean_operations", JsonValue::real(cmp.mean_operations[j]));
      row.set("mean_horizon", JsonValue::real(cmp.mean_horizon[j]));
      results.push(std::move(row));
      csv << sampler_name(samplers[j]) << ',' << render_double(cmp.mean_operations[j]) << ','
          << render_double(cmp.mean_horizon[j]) << '\n';
    }
    json.set("results", std::move(results));
    JsonValue summary = JsonValue::object();
    summary.set("replications", JsonValue::integer(reps));
    json.set("summary", std::move(summary));
  }

  const std::string csv_text = config_line + "\n" + csv.str();
  emit_json_or_csv(out, json, csv_text);
  return 0;
}

int run_validate(const ModelOptions& opts, const std::string& policy_text,
                 const std::string& algo, std::int64_t reps, std::int64_t forward_steps,
                 std::uint64_t seed, double significance, int jobs, const OutputOptions& out) {
  const CompatibilityGraph g = load_graph(opts.graph_spec);
  const ArrivalModel model = resolve_model(opts, g);
  const Policy policy = Policy::parse(policy_text, g.size());
  const SamplerKind kind = sampler_from_name(algo);

  const AgreementReport report = distribution_agreement(g, model, policy, kind, reps,
                                                        forward_steps, seed, significance, jobs);

  JsonValue config = config_json("validate", opts, g, &model);
  config.set("policy", JsonValue::string(policy.name()));
  config.set("algo", JsonValue::string(algo));
  config.set("reps", JsonValue::integer(reps));
  config.set("forward_steps", JsonValue::integer(forward_steps));
  config.set("seed", JsonValue::integer(static_cast<std::int64_t>(seed)));
  config.set("significance", JsonValue::real(significance));
  const std::string config_line = csv_config_line(config);

  JsonValue result = JsonValue::object();
  result.set("chi_square", JsonValue::real(report.chi_square));
  result.set("degrees_of_freedom", JsonValue::integer(report.degrees_of_freedom));
  result.set("p_value", JsonValue::real(report.p_value));
  result.set("tv_distance", JsonValue::real(report.tv_distance));
  result.set("cells", JsonValue::integer(report.cells));
  result.set("merged_states", JsonValue::integer(report.merged_states));
  result.set("pass", JsonValue::boolean(report.pass));

  JsonValue json = JsonValue::object();
  json.set("config", std::move(config));
  JsonValue results = JsonValue::array();
  results.push(std::move(result));
  json.set("results", std::move(results));
  JsonValue summary = JsonValue::object();
  summary.set("pass", JsonValue::boolean(report.pass));
  json.set("summary", std::move(summary));

  std::ostringstream csv;
  csv << config_line
      << "\nchi_square,degrees_of_freedom,p_value,tv_distance,cells,merged_states,pass\n"
      << render_double(report.chi_square) << ',' << report.degrees_of_freedom << ','
      << render_double(report.p_value) << ',' << render_double(report.tv_distance) << ','
      << report.cells << ',' << report.merged_states << ',' << (report.pass ? "true" : "false")
      << '\n';
  emit_json_or_csv(out, json, csv.str());
  return report.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perfect sampling of stochastic matching models with reneging"};
  app.require_subcommand(1);

  // gen-graph
  auto* gen = app.add_subcommand("gen-graph", "connected Erdos-Renyi graph");
  int gen_n = 0;
  double gen_q = 0.0;
  std::uint64_t gen_seed = 1;
  int gen_attempts = 100000;
  OutputOptions gen_out;
  gen->add_option("--n", gen_n, "classes")->required();
  gen->add_option("--q", gen_q, "edge probability")->required();
  gen->add_option("--seed", gen_seed, "seed");
  gen->add_option("--max-attempts", gen_attempts, "connectivity resample cap");
  gen->add_option("--out", gen_out.path, "output file (default stdout)");

  // count
  auto* count = app.add_subcommand("count", "count strongly synchronizing words and bounds");
  ModelOptions count_opts;
  bool count_enumerate = false, count_per_trace = false;
  std::string count_mu = "uniform";
  OutputOptions count_out;
  count->add_option("--graph", count_opts.graph_spec, "graph spec")->required();
  count->add_option("--p", count_opts.p, "word length p")->required();
  count->add_flag("--enumerate", count_enumerate, "cross-check by brute-force enumeration");
  count->add_flag("--per-trace", count_per_trace, "include per-trace counts");
  count->add_option("--mu", count_mu, "class distribution for the general bound");
  count->add_option("--out", count_out.path, "output file");

  // sample
  auto* sample = app.add_subcommand("sample", "draw perfect samples");
  ModelOptions sample_opts;
  std::string sample_policy = "fcfm", sample_algo = "algo3";
  std::int64_t sample_reps = 1;
  std::uint64_t sample_seed = 1;
  int sample_jobs = 1;
  std::int64_t sample_cap = std::int64_t{1} << 30;
  OutputOptions sample_out;
  add_model_options(sample, sample_opts);
  sample->add_option("--policy", sample_policy, "fcfm | ml | priority:<order> | random");
  sample->add_option("--algo", sample_algo, "algo2 | algo3 | cftp")->required();
  sample->add_option("--reps", sample_reps, "replications");
  sample->add_option("--seed", sample_seed, "master seed");
  sample->add_option("--jobs", sample_jobs, "parallel replications");
  sample->add_option("--horizon-cap", sample_cap, "non-termination cap on -T");
  sample->add_option("--out", sample_out.path, "output file");
  sample->add_option("--format", sample_out.format, "json | csv");

  // loss
  auto* loss = app.add_subcommand("loss", "Monte-Carlo loss rates from perfect samples");
  ModelOptions loss_opts;
  std::string loss_policy = "fcfm", loss_algo = "algo3";
  std::int64_t loss_reps = 10000;
  std::uint64_t loss_seed = 1;
  int loss_jobs = 1;
  OutputOptions loss_out;
  add_model_options(loss, loss_opts);
  loss->add_option("--policy", loss_policy, "matching policy");
  loss->add_option("--algo", loss_algo, "algo2 | algo3 | cftp");
  loss->add_option("--reps", loss_reps, "replications");
  loss->add_option("--seed", loss_seed, "master seed");
  loss->add_option("--jobs", loss_jobs, "parallel replications");
  loss->add_option("--out", loss_out.path, "output file");
  loss->add_option("--format", loss_out.format, "json | csv");

  // compare
  auto* compare = app.add_subcommand("compare", "compare policies or sampler costs");
  ModelOptions compare_opts;
  std::string compare_policies_text, compare_samplers_text, compare_policy = "fcfm",
              compare_algo = "algo3";
  std::int64_t compare_reps = 10000;
  std::uint64_t compare_seed = 1;
  int compare_jobs = 1;
  OutputOptions compare_out;
  add_model_options(compare, compare_opts);
  compare->add_option("--policies", compare_policies_text,
                      "';'-separated policies (common random numbers)");
  compare->add_option("--samplers", compare_samplers_text, "comma list for an ops comparison");
  compare->add_option("--policy", compare_policy, "policy for --samplers mode");
  compare->add_option("--algo", compare_algo, "sampler for --policies mode");
  compare->add_option("--reps", compare_reps, "replications");
  compare->add_option("--seed", compare_seed, "master seed");
  compare->add_option("--jobs", compare_jobs, "parallel replications");
  compare->add_option("--out", compare_out.path, "output file");
  compare->add_option("--format", compare_out.format, "json | csv");

  // validate
  auto* validate = app.add_subcommand("validate", "chi-square agreement with a forward run");
  ModelOptions validate_opts;
  std::string validate_policy = "fcfm", validate_algo = "algo3";
  std::int64_t validate_reps = 10000, validate_forward = 1000000;
  std::uint64_t validate_seed = 1;
  double validate_significance = 0.01;
  int validate_jobs = 1;
  OutputOptions validate_out;
  add_model_options(validate, validate_opts);
  validate->add_option("--policy", validate_policy, "matching policy");
  validate->add_option("--algo", validate_algo, "algo2 | algo3 | cftp");
  validate->add_option("--reps", validate_reps, "perfect samples");
  validate->add_option("--forward-steps", validate_forward, "forward-run length");
  validate->add_option("--seed", validate_seed, "master seed");
  validate->add_option("--significance", validate_significance, "rejection level");
  validate->add_option("--jobs", validate_jobs, "parallel replications");
  validate->add_option("--out", validate_out.path, "output file");
  validate->add_option("--format", validate_out.format, "json | csv");

  try {
    app.parse(argc, argv);
    if (gen->parsed()) return run_gen_graph(gen_n, gen_q, gen_seed, gen_attempts, gen_out);
    if (count->parsed())
      return run_count(count_opts, count_enumerate, count_per_trace, count_mu, count_out);
    if (sample->parsed())
      return run_sample(sample_opts, sample_policy, sample_algo, sample_reps, sample_seed,
                        sample_jobs, sample_cap, sample_out);
    if (loss->parsed())
      return run_loss(loss_opts, loss_policy, loss_algo, loss_reps, loss_seed, loss_jobs,
                      loss_out);
    if (compare->parsed())
      return run_compare(compare_opts, compare_policies_text, compare_samplers_text,
                         compare_policy, compare_algo, compare_reps, compare_seed, compare_jobs,
                         compare_out);
    if (validate->parsed())
      return run_validate(validate_opts, validate_policy, validate_algo, validate_reps,
                          validate_forward, validate_seed, validate_significance, validate_jobs,
                          validate_out);
    return 0;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const matchsim::ConfigError& e) {
    std::cerr << error_record(e.what(), "config") << std::endl;
    return 2;
  } catch (const matchsim::NonTerminationError& e) {
    std::cerr << error_record(e.what(), "non-termination") << std::endl;
    return 3;
  } catch (const std::exception& e) {
    std::cerr << error_record(e.what(), "internal") << std::endl;
    return 1;
  }
}
