#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "matchsim/counting.hpp"
#include "matchsim/dominated.hpp"
#include "matchsim/errors.hpp"
#include "matchsim/estimate.hpp"
#include "matchsim/graph.hpp"
#include "matchsim/model.hpp"
#include "matchsim/syncword.hpp"
#include "matchsim/tape.hpp"

namespace py = pybind11;
using namespace matchsim;

namespace {

ArrivalModel make_deterministic_model(std::vector<double> mu, int p, double gamma) {
  ArrivalModel model;
  model.mu = std::move(mu);
  model.patience = PatienceLaw::deterministic(p);
  model.gamma = gamma;
  return model;
}

ArrivalModel make_discrete_model(std::vector<double> mu,
                                 std::vector<std::pair<double, double>> support, double gamma) {
  ArrivalModel model;
  model.mu = std::move(mu);
  model.patience = PatienceLaw::discrete(std::move(support));
  model.gamma = gamma;
  return model;
}

py::dict report_dict(const SampleReport& report) {
  py::dict d;
  d["iterations"] = report.iterations;
  d["start_time"] = report.start_time;
  d["detection_time"] = report.detection_time;
  d["events"] = report.events_consumed;
  d["operations"] = report.operations;
  return d;
}

py::dict run_sampler(const CompatibilityGraph& g, const ArrivalModel& model,
                     const std::string& policy_name, const std::string& algo,
                     std::uint64_t seed, std::int64_t horizon_cap) {
  const Policy policy = Policy::parse(policy_name, g.size());
  InputTape tape(seed, model);
  const SampleOptions options{.initial_horizon = 0, .horizon_cap = horizon_cap};
  py::dict out;
  if (algo == "algo2" && model.patience.kind == PatienceLaw::Kind::discrete) {
    const auto run = sample_dominated_profile(g, model, policy, tape, options);
    py::list items;
    for (const auto& item : run.sample) items.append(py::make_tuple(item.remaining, item.cls));
    out["sample"] = items;
    out["report"] = report_dict(run.report);
    return out;
  }
  const auto run = run_word_sampler(sampler_from_name(algo), g, model, policy, tape, options);
  out["sample"] = run.sample;
  out["report"] = report_dict(run.report);
  return out;
}

py::dict loss_dict(const LossEstimate& estimate) {
  py::dict d;
  py::list rates, ses, losses;
  for (int c = 1; c <= static_cast<int>(estimate.class_losses.size()); ++c) {
    rates.append(estimate.rate(c));
    ses.append(estimate.rate_se(c));
    losses.append(estimate.class_losses[static_cast<std::size_t>(c - 1)]);
  }
  d["rates"] = rates;
  d["ses"] = ses;
  d["losses"] = losses;
  d["total_rate"] = estimate.total_rate();
  d["total_se"] = estimate.total_se();
  d["replications"] = estimate.replications;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Perfect sampling of stochastic matching models with reneging";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NonTerminationError>(m, "NonTerminationError", PyExc_RuntimeError);

  py::class_<CompatibilityGraph>(m, "CompatibilityGraph")
      .def(py::init<int, std::vector<std::pair<int, int>>>(), py::arg("n"), py::arg("edges"))
      .def_property_readonly("n", &CompatibilityGraph::size)
      .def_property_readonly("edges", &CompatibilityGraph::edges)
      .def("compatible", &CompatibilityGraph::compatible, py::arg("i"), py::arg("j"))
      .def("neighborhood",
           [](const CompatibilityGraph& g, std::vector<int> u) { return g.neighborhood(u); })
      .def("connected", &CompatibilityGraph::connected)
      .def("__eq__", [](const CompatibilityGraph& a, const CompatibilityGraph& b) { return a == b; })
      .def("__repr__", [](const CompatibilityGraph& g) {
        return "CompatibilityGraph(n=" + std::to_string(g.size()) + ", edges=" +
               std::to_string(g.edges().size()) + ")";
      });

  py::class_<ArrivalModel>(m, "ArrivalModel")
      .def_readonly("mu", &ArrivalModel::mu)
      .def_readonly("gamma", &ArrivalModel::gamma);

  m.def("named_graph", &named_graph, py::arg("name"),
        "paw, path:<n> or complete:<n>");
  m.def("random_connected_er", &random_connected_er, py::arg("n"), py::arg("q"), py::arg("seed"),
        py::arg("max_attempts") = 100000);

  m.def("deterministic_model", &make_deterministic_model, py::arg("mu"), py::arg("p"),
        py::arg("gamma") = 0.0, "Deterministic patience p (+eps), latency probability gamma");
  m.def("discrete_model", &make_discrete_model, py::arg("mu"), py::arg("support"),
        py::arg("gamma") = 0.0, "Bounded discrete patience law [(value, prob), ...]");

  m.def("sample", &run_sampler, py::arg("graph"), py::arg("model"), py::arg("policy"),
        py::arg("algo"), py::arg("seed"), py::arg("horizon_cap") = (std::int64_t{1} << 30),
        "One perfect sample; algo is algo2 | algo3 | cftp");

  m.def(
      "word_step",
      [](const CompatibilityGraph& g, const Word& state, int arrival,
         const std::string& policy_name, double draw) {
        return word_step(state, arrival, Policy::parse(policy_name, g.size()), g, draw);
      },
      py::arg("graph"), py::arg("state"), py::arg("arrival"), py::arg("policy"),
      py::arg("draw") = 0.0);

  m.def(
      "is_strongly_synchronizing",
      [](const CompatibilityGraph& g, const Word& w) { return is_strongly_synchronizing(w, g); },
      py::arg("graph"), py::arg("word"));

  m.def(
      "count_strongly_synchronizing",
      [](const CompatibilityGraph& g, int p) {
        return py::cast(count_strongly_synchronizing(g, p).get_str());
      },
      py::arg("graph"), py::arg("p"),
      "Exact N(G,p) as a decimal string (arbitrary precision)");

  m.def(
      "coalescence_bounds",
      [](int n, int p, const std::string& count) -> py::object {
        const auto bounds = coalescence_bounds(n, p, BigInt(count));
        if (!bounds) return py::none();
        py::dict d;
        d["iterations"] = bounds->iterations;
        d["horizon"] = bounds->horizon;
        return d;
      },
      py::arg("n"), py::arg("p"), py::arg("count"));

  m.def(
      "sync_probability",
      [](const CompatibilityGraph& g, int p, std::vector<double> mu) {
        return sync_probability(g, p, mu);
      },
      py::arg("graph"), py::arg("p"), py::arg("mu"));

  m.def(
      "enumerate_traces",
      [](const CompatibilityGraph& g) { return enumerate_traces(g); }, py::arg("graph"));

  m.def(
      "trace_of", [](const Word& w) { return trace_of(w); }, py::arg("word"));

  m.def(
      "beta", [](const CompatibilityGraph& g, const Word& z) { return beta(z, g); },
      py::arg("graph"), py::arg("z"));

  m.def(
      "estimate_loss",
      [](const CompatibilityGraph& g, const ArrivalModel& model, const std::string& policy_name,
         std::uint64_t seed, std::int64_t reps, const std::string& algo, int jobs) {
        return loss_dict(estimate_loss(g, model, Policy::parse(policy_name, g.size()), seed, reps,
                                       sampler_from_name(algo), jobs));
      },
      py::arg("graph"), py::arg("model"), py::arg("policy"), py::arg("seed"), py::arg("reps"),
      py::arg("algo") = "algo3", py::arg("jobs") = 1);

  m.def(
      "compare_policies",
      [](const CompatibilityGraph& g, const ArrivalModel& model,
         const std::vector<std::string>& policy_names, std::uint64_t seed, std::int64_t reps,
         const std::string& algo, int jobs) {
        std::vector<Policy> policies;
        for (const auto& name : policy_names) policies.push_back(Policy::parse(name, g.size()));
        const PolicyComparison cmp = compare_policies(g, model, policies, seed, reps,
                                                      sampler_from_name(algo), jobs);
        py::list rows;
        for (std::size_t j = 0; j < policies.size(); ++j) {
          py::dict row = loss_dict(cmp.estimates[j]);
          row["policy"] = policies[j].name();
          row["diff_total_vs_first"] = cmp.diff_total[j];
          row["diff_total_se"] = cmp.diff_total_se[j];
          rows.append(row);
        }
        return rows;
      },
      py::arg("graph"), py::arg("model"), py::arg("policies"), py::arg("seed"), py::arg("reps"),
      py::arg("algo") = "algo3", py::arg("jobs") = 1);

  m.def(
      "compare_samplers_ops",
      [](const CompatibilityGraph& g, const ArrivalModel& model, const std::string& policy_name,
         const std::vector<std::string>& samplers, std::uint64_t seed, std::int64_t reps,
         int jobs) {
        std::vector<SamplerKind> kinds;
        for (const auto& name : samplers) kinds.push_back(sampler_from_name(name));
        const OpsComparison cmp = compare_samplers_ops(
            g, model, Policy::parse(policy_name, g.size()), kinds, seed, reps, jobs);
        py::dict d;
        for (std::size_t j = 0; j < kinds.size(); ++j) {
          py::dict cell;
          cell["mean_operations"] = cmp.mean_operations[j];
          cell["mean_horizon"] = cmp.mean_horizon[j];
          d[py::str(sampler_name(kinds[j]))] = cell;
        }
        return d;
      },
      py::arg("graph"), py::arg("model"), py::arg("policy"), py::arg("samplers"), py::arg("seed"),
      py::arg("reps"), py::arg("jobs") = 1);

  m.def(
      "distribution_agreement",
      [](const CompatibilityGraph& g, const ArrivalModel& model, const std::string& policy_name,
         const std::string& algo, std::int64_t reps, std::int64_t forward_steps,
         std::uint64_t seed, double significance, int jobs) {
        const AgreementReport report = distribution_agreement(
            g, model, Policy::parse(policy_name, g.size()), sampler_from_name(algo), reps,
            forward_steps, seed, significance, jobs);
        py::dict d;
        d["chi_square"] = report.chi_square;
        d["degrees_of_freedom"] = report.degrees_of_freedom;
        d["p_value"] = report.p_value;
        d["tv_distance"] = report.tv_distance;
        d["cells"] = report.cells;
        d["merged_states"] = report.merged_states;
        d["pass"] = report.pass;
        return d;
      },
      py::arg("graph"), py::arg("model"), py::arg("policy"), py::arg("algo"), py::arg("reps"),
      py::arg("forward_steps"), py::arg("seed"), py::arg("significance") = 0.01,
      py::arg("jobs") = 1);

  m.def("derive_replication_seed", &derive_replication_seed, py::arg("master"),
        py::arg("replication"));

  m.attr("LATENCY") = kLatency;
  m.attr("__version__") = "0.1.0";
}
