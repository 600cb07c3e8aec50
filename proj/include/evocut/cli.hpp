#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "evocut/batch.hpp"
#include "evocut/esp_reference.hpp"
#include "evocut/graph.hpp"
#include "evocut/graph_io.hpp"
#include "evocut/invariants.hpp"
#include "evocut/partition.hpp"
#include "evocut/sampler.hpp"

/// Command-line front end. Exit codes: 0 success, 1 usage error, 2 input or
/// parse error, 3 runtime error (including a failed `verify`).
///
/// JSON field order is fixed. Every report is an object whose keys come in
/// this order: command, graph {n, m, volume}, parameters, then either
/// result (one run) or runs + aggregate (--runs > 1), then wall_time_ms.
/// `kernel` and `walk` print a bare array. Run i of a batch uses seed
/// derive_seed(--seed, i).
namespace evocut::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kUsage = 1, kInput = 2, kRuntime = 3 };

/// Parameter outside its documented domain.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Options {
  std::string command;
  std::string graph_path;
  std::string format = "edgelist";
  std::optional<double> phi;
  std::optional<std::uint64_t> start;
  std::optional<std::uint64_t> steps;
  std::string budget = "inf";
  std::uint64_t seed = 0;
  std::uint64_t runs = 1;
  unsigned threads = 1;
  std::optional<std::uint64_t> iterations;
  double stop_fraction = 0.25;
  std::string set;
  bool biased = false;
  bool tsv = false;
};

inline Json big_number(const Rational& r, bool numerator) {
  const BigInt v = numerator ? boost::multiprecision::numerator(r) : boost::multiprecision::denominator(r);
  if (v >= 0 && v <= std::numeric_limits<std::uint64_t>::max()) return v.convert_to<std::uint64_t>();
  return v.str();
}

inline Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

inline Json labels_of(const Graph& g, const VertexSet& s) {
  Json out = Json::array();
  for (Vertex v : s) out.push_back(g.label(v));
  return out;
}

inline std::string joined_labels(const Graph& g, const VertexSet& s) {
  std::string out;
  for (Vertex v : s) out += (out.empty() ? "" : ",") + std::to_string(g.label(v));
  return out;
}

inline Json graph_summary(const Graph& g) {
  return Json{{"n", g.vertex_count()}, {"m", g.edge_count()}, {"volume", g.total_volume()}};
}

inline Json conductance_json(const Rational& phi) {
  return Json{{"num", big_number(phi, true)}, {"den", big_number(phi, false)}, {"value", to_double(phi)}};
}

inline Budget parse_budget(const std::string& text) {
  if (text == "inf") return Budget::unbounded();
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw UsageError("--budget must be a nonnegative integer or \"inf\"");
  return Budget::of(value);
}

inline VertexSet parse_label_set(const Graph& g, const std::string& text) {
  std::vector<Vertex> ids;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto body = evocut::detail::trim(item);
    if (body.empty()) continue;
    ids.push_back(g.vertex_of_label(evocut::detail::parse_id(body, 0)));
  }
  try {
    return VertexSet(std::move(ids));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("--set: ") + e.what());
  }
}

inline double require_phi(const Options& o) {
  if (!o.phi) throw UsageError("--phi is required");
  if (!(*o.phi > 0.0 && *o.phi < 1.0)) throw UsageError("--phi must lie in (0,1)");
  return *o.phi;
}

inline double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t mid = xs.size() / 2;
  return xs.size() % 2 ? xs[mid] : 0.5 * (xs[mid - 1] + xs[mid]);
}

struct CutRun {
  Vertex start = 0;
  CutResult cut;
  double theta = 0.0;
};

inline Json cut_result_json(const Graph& g, const CutRun& r) {
  const auto& s = r.cut.stats;
  return Json{{"seed", r.cut.rng_seed},
              {"start", g.label(r.start)},
              {"set", labels_of(g, r.cut.set)},
              {"conductance", conductance_json(r.cut.conductance)},
              {"volume", r.cut.volume},
              {"tau", s.tau},
              {"stop_reason", std::string(to_string(s.stop_reason))},
              {"total_cost", s.total_cost},
              {"work_ops", s.work_ops}};
}

inline Json run_cut(const Graph& g, const Options& o, std::ostream& tsv_out) {
  const double phi = require_phi(o);
  const Budget budget = parse_budget(o.budget);
  std::optional<Vertex> start;
  if (o.start) start = g.vertex_of_label(*o.start);
  if (o.steps && *o.steps == 0) throw UsageError("--steps must be at least 1");
  const std::uint64_t steps = o.steps ? *o.steps : evocut_steps(phi);
  const bool default_path = !o.steps && budget.bounded() == false;

  auto runs = run_batch(o.runs, o.seed, o.threads, [&](std::size_t, Rng& rng) {
    CutRun r;
    r.start = start ? *start : sample_start_vertex(g, rng);
    if (default_path || steps == 0) {
      r.cut = evo_cut(g, r.start, phi, rng);
    } else {
      r.cut = generate_sample(g, r.start, steps, budget, rng);
    }
    r.theta = steps == 0 ? std::numeric_limits<double>::infinity() : theta(steps, g.total_volume());
    return r;
  });

  Json report{{"command", "cut"},
              {"graph", graph_summary(g)},
              {"parameters",
               {{"phi", phi}, {"T", steps}, {"budget", budget.bounded() ? Json(budget.limit()) : Json("inf")},
                {"seed", o.seed}, {"runs", o.runs}}}};
  if (o.tsv) {
    tsv_out << "run\tseed\tstart\tset\tconductance\tvolume\ttau\tstop_reason\ttotal_cost\twork_ops\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const auto& r = runs[i];
      tsv_out << i << '\t' << r.cut.rng_seed << '\t' << g.label(r.start) << '\t' << joined_labels(g, r.cut.set)
              << '\t' << to_string(r.cut.conductance) << '\t' << r.cut.volume << '\t' << r.cut.stats.tau << '\t'
              << to_string(r.cut.stats.stop_reason) << '\t' << r.cut.stats.total_cost << '\t'
              << r.cut.stats.work_ops << '\n';
    }
    return report;
  }
  if (runs.size() == 1) {
    report["result"] = cut_result_json(g, runs.front());
    return report;
  }
  Json list = Json::array();
  std::vector<double> ratios;
  std::vector<double> phis;
  std::size_t within = 0;
  for (const auto& r : runs) {
    list.push_back(cut_result_json(g, r));
    ratios.push_back(static_cast<double>(r.cut.stats.total_cost) / static_cast<double>(r.cut.volume));
    phis.push_back(to_double(r.cut.conductance));
    if (phis.back() <= 3.0 * r.theta) ++within;
  }
  double mean = 0.0;
  for (double x : ratios) mean += x;
  mean /= static_cast<double>(ratios.size());
  report["runs"] = std::move(list);
  report["aggregate"] = Json{{"mean_cost_ratio", mean},
                             {"median_cost_ratio", median(ratios)},
                             {"median_conductance", median(phis)},
                             {"fraction_within_3theta", static_cast<double>(within) / static_cast<double>(runs.size())}};
  return report;
}

inline Json run_nibble(const Graph& g, const Options& o, std::ostream& tsv_out) {
  const double phi = require_phi(o);
  auto runs = run_batch(o.runs, o.seed, o.threads,
                        [&](std::size_t, Rng& rng) { return evo_nibble_detailed(g, phi, rng); });
  const NibbleConfig config = NibbleConfig::make(phi, g.total_volume());
  Json report{{"command", "nibble"},
              {"graph", graph_summary(g)},
              {"parameters",
               {{"phi", phi}, {"T", config.steps}, {"theta", finite_or_null(config.theta)},
                {"gamma", config.gamma}, {"j_max", config.max_budget_index}, {"seed", o.seed}, {"runs", o.runs}}}};
  auto one = [&](const NibbleOutcome& n) {
    return Json{{"seed", n.sample.rng_seed},
                {"start", g.label(n.start)},
                {"budget_index", n.budget_index},
                {"budget", n.budget},
                {"accepted", n.accepted},
                {"set", labels_of(g, n.set)},
                {"sampled_set", labels_of(g, n.sample.set)},
                {"conductance", conductance_json(n.sample.conductance)},
                {"volume", n.sample.volume},
                {"tau", n.sample.stats.tau},
                {"stop_reason", std::string(to_string(n.sample.stats.stop_reason))},
                {"total_cost", n.sample.stats.total_cost},
                {"work_ops", n.sample.stats.work_ops}};
  };
  if (o.tsv) {
    tsv_out << "run\tseed\tstart\tbudget\taccepted\tset\tconductance\tvolume\ttau\tstop_reason\ttotal_cost\twork_ops\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const auto& n = runs[i];
      tsv_out << i << '\t' << n.sample.rng_seed << '\t' << g.label(n.start) << '\t' << n.budget << '\t'
              << (n.accepted ? 1 : 0) << '\t' << joined_labels(g, n.set) << '\t'
              << to_string(n.sample.conductance) << '\t' << n.sample.volume << '\t' << n.sample.stats.tau << '\t'
              << to_string(n.sample.stats.stop_reason) << '\t' << n.sample.stats.total_cost << '\t'
              << n.sample.stats.work_ops << '\n';
    }
    return report;
  }
  if (runs.size() == 1) {
    report["result"] = one(runs.front());
    return report;
  }
  Json list = Json::array();
  std::size_t accepted = 0;
  for (const auto& n : runs) {
    list.push_back(one(n));
    accepted += n.accepted ? 1 : 0;
  }
  report["runs"] = std::move(list);
  report["aggregate"] = Json{{"accept_fraction", static_cast<double>(accepted) / static_cast<double>(runs.size())}};
  return report;
}

inline Json run_partition(const Graph& g, const Options& o, std::ostream& tsv_out) {
  const double phi = require_phi(o);
  if (!(o.stop_fraction > 0.0 && o.stop_fraction < 1.0)) throw UsageError("--stop-fraction must lie in (0,1)");
  PartitionOptions popts;
  popts.iterations = o.iterations;
  popts.stop_fraction = o.stop_fraction;
  auto runs = run_batch(o.runs, o.seed, o.threads,
                        [&](std::size_t, Rng& rng) { return evo_partition(g, phi, popts, rng); });
  Json report{{"command", "partition"},
              {"graph", graph_summary(g)},
              {"parameters",
               {{"phi", phi},
                {"iterations", o.iterations ? Json(*o.iterations) : Json(40 * g.total_volume())},
                {"stop_fraction", o.stop_fraction},
                {"seed", o.seed},
                {"runs", o.runs}}}};
  auto one = [&](const PartitionResult& p, std::uint64_t seed) {
    Json rounds = Json::array();
    for (const auto& r : p.rounds)
      rounds.push_back(Json{{"iteration", r.iteration},
                            {"set", labels_of(g, r.set)},
                            {"residual_volume_before", r.residual_volume_before},
                            {"residual_volume_after", r.residual_volume_after},
                            {"theta", finite_or_null(r.theta)},
                            {"dropped", labels_of(g, r.dropped)}});
    return Json{{"seed", seed},
                {"set", labels_of(g, p.cut_set)},
                {"conductance", conductance_json(p.original_conductance)},
                {"volume", p.removed_volume},
                {"iterations_run", p.iterations_run},
                {"within_seven_eighths", p.within_seven_eighths},
                {"total_work", p.total_work},
                {"rounds", std::move(rounds)}};
  };
  if (o.tsv) {
    tsv_out << "run\tseed\tset\tconductance\tvolume\trounds\titerations_run\ttotal_work\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const auto& p = runs[i];
      tsv_out << i << '\t' << derive_seed(o.seed, i) << '\t' << joined_labels(g, p.cut_set) << '\t'
              << to_string(p.original_conductance) << '\t' << p.removed_volume << '\t' << p.rounds.size() << '\t'
              << p.iterations_run << '\t' << p.total_work << '\n';
    }
    return report;
  }
  if (runs.size() == 1) {
    report["result"] = one(runs.front(), derive_seed(o.seed, 0));
    return report;
  }
  Json list = Json::array();
  for (std::size_t i = 0; i < runs.size(); ++i) list.push_back(one(runs[i], derive_seed(o.seed, i)));
  report["runs"] = std::move(list);
  return report;
}

inline Json run_kernel(const Graph& g, const Options& o, std::ostream& tsv_out) {
  const VertexSet s = parse_label_set(g, o.set);
  if (o.biased && s.empty()) throw UsageError("--biased needs a nonempty --set");
  const auto kernel = o.biased ? reference::vbesp_kernel(g, s) : reference::esp_kernel(g, s);
  Json out = Json::array();
  if (o.tsv) tsv_out << "set\tnum\tden\n";
  for (const auto& e : kernel) {
    if (o.tsv) {
      tsv_out << joined_labels(g, e.set) << '\t' << numerator_string(e.prob) << '\t'
              << denominator_string(e.prob) << '\n';
    }
    out.push_back(Json{{"set", labels_of(g, e.set)}, {"num", big_number(e.prob, true)}, {"den", big_number(e.prob, false)}});
  }
  return out;
}

inline Json run_walk(const Graph& g, const Options& o, std::ostream& tsv_out) {
  if (!o.start) throw UsageError("--start is required");
  const Vertex x = g.vertex_of_label(*o.start);
  const auto dist = reference::walk_distribution(g, x, o.steps.value_or(1));
  Json out = Json::array();
  if (o.tsv) tsv_out << "vertex\tnum\tden\n";
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (o.tsv) {
      tsv_out << g.label(v) << '\t' << numerator_string(dist.probs[v]) << '\t'
              << denominator_string(dist.probs[v]) << '\n';
    }
    out.push_back(Json{{"vertex", g.label(v)},
                       {"num", big_number(dist.probs[v], true)},
                       {"den", big_number(dist.probs[v], false)}});
  }
  return out;
}

inline Json run_verify(const Graph& g, const Options& o, std::ostream& tsv_out, bool& all_passed) {
  const auto checks = reference::verify_reference_invariants(g, 12);
  Json list = Json::array();
  all_passed = true;
  if (o.tsv) tsv_out << "invariant\tpassed\tchecked\tdetail\n";
  for (const auto& c : checks) {
    all_passed = all_passed && c.passed;
    if (o.tsv) tsv_out << c.name << '\t' << (c.passed ? "pass" : "FAIL") << '\t' << c.checked << '\t' << c.detail << '\n';
    list.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"checked", c.checked}, {"detail", c.detail}});
  }
  return Json{{"command", "verify"}, {"graph", graph_summary(g)}, {"invariants", std::move(list)}, {"passed", all_passed}};
}

inline void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--graph", o.graph_path, "Graph file")->required();
  sub->add_option("--format", o.format, "edgelist or metis")->check(CLI::IsMember({"edgelist", "metis"}));
  sub->add_option("--seed", o.seed, "Base random seed");
  sub->add_option("--runs", o.runs, "Independent runs")->check(CLI::PositiveNumber);
  sub->add_option("--threads", o.threads, "Worker threads for --runs")->check(CLI::PositiveNumber);
  auto* json = sub->add_flag("--json", "JSON output (default)");
  sub->add_flag("--tsv", o.tsv, "Tab-separated output")->excludes(json);
}

/// Parses `args` (args[0] is the program name) and runs one subcommand.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Local graph partitioning by evolving set simulation", "evocut"};
  app.require_subcommand(1);

  auto* cut = app.add_subcommand("cut", "Local cut around a start vertex");
  add_common(cut, o);
  cut->add_option("--phi", o.phi, "Target conductance in (0,1)");
  cut->add_option("--start", o.start, "Start vertex id (sampled by degree when omitted)");
  cut->add_option("--steps", o.steps, "Override the step limit T");
  cut->add_option("--budget", o.budget, "Cost budget or inf");

  auto* nibble = app.add_subcommand("nibble", "Randomized nibble");
  add_common(nibble, o);
  nibble->add_option("--phi", o.phi, "Target conductance in (0,1)");

  auto* partition = app.add_subcommand("partition", "Repeated nibbling toward a balanced cut");
  add_common(partition, o);
  partition->add_option("--phi", o.phi, "Target conductance in (0,1)");
  partition->add_option("--iterations", o.iterations, "Nibble calls (default 40 vol(V))");
  partition->add_option("--stop-fraction", o.stop_fraction, "Stop once this fraction of vol(V) is removed");

  auto* kernel = app.add_subcommand("kernel", "Exact one-step set kernel");
  add_common(kernel, o);
  kernel->add_option("--set", o.set, "Comma-separated vertex ids");
  kernel->add_flag("--biased", o.biased, "Volume-biased kernel");

  auto* walk = app.add_subcommand("walk", "Exact lazy-walk distribution");
  add_common(walk, o);
  walk->add_option("--start", o.start, "Start vertex id");
  walk->add_option("--steps", o.steps, "Number of steps (default 1)");

  auto* verify = app.add_subcommand("verify", "Exhaustive exact invariant sweep (n <= 12)");
  add_common(verify, o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }
  o.command = app.get_subcommands().front()->get_name();

  const auto started = std::chrono::steady_clock::now();
  try {
    const Graph g = load_graph_file(o.graph_path, o.format == "metis" ? GraphFormat::Metis : GraphFormat::EdgeList);
    std::ostringstream tsv;
    Json report;
    bool verified = true;
    if (o.command == "cut") report = run_cut(g, o, tsv);
    else if (o.command == "nibble") report = run_nibble(g, o, tsv);
    else if (o.command == "partition") report = run_partition(g, o, tsv);
    else if (o.command == "kernel") report = run_kernel(g, o, tsv);
    else if (o.command == "walk") report = run_walk(g, o, tsv);
    else report = run_verify(g, o, tsv, verified);

    if (o.tsv) {
      out << tsv.str();
    } else {
      if (report.is_object()) {
        const auto elapsed = std::chrono::steady_clock::now() - started;
        report["wall_time_ms"] = std::chrono::duration<double, std::milli>(elapsed).count();
      }
      out << report.dump(2) << '\n';
    }
    return verified ? kOk : kRuntime;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const std::out_of_range& e) {
    err << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kRuntime;
  }
}

}  // namespace evocut::cli
