#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "sparkdet/cli.hpp"
#include "sparkdet/error.hpp"
#include "sparkdet/registry.hpp"

namespace sparkdet::cli {

namespace {

using Clock = std::chrono::steady_clock;

struct Globals {
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  std::size_t partitions = 0;
  std::size_t cap = kDefaultEnumerationCap;
  std::string json_path;
  std::string domain = "-2..2";
};

struct OperatorFlags {
  std::string zero;
  std::string seq;
  std::string comb;
};

void add_operator_flags(CLI::App* sub, OperatorFlags& f) {
  sub->add_option("--z", f.zero, "zero value (JSON literal, or none)");
  sub->add_option("--seq", f.seq, "seq operator name");
  sub->add_option("--comb", f.comb, "comb / merge operator name");
}

Combinator combinator_of(const std::string& name) {
  auto c = parse_combinator(name);
  if (!c) throw Error(Errc::invalid_argument, "unknown combinator \"" + name + "\"");
  return *c;
}

Subject subject_of(Combinator c, const OperatorFlags& f) {
  if (f.comb.empty()) throw Error(Errc::invalid_argument, "--comb is required");
  if (is_reduce_family(c) || c == Combinator::aggregate_messages) return Subject::of(c, resolve(f.comb));
  if (f.zero.empty() || f.seq.empty()) {
    throw Error(Errc::invalid_argument, std::string(to_string(c)) + " needs --z, --seq and --comb");
  }
  OperatorTriple t{parse_value_literal(f.zero), resolve(f.seq), resolve(f.comb)};
  return Subject::of(c, t);
}

CheckOptions check_options(const Globals& g) {
  CheckOptions o;
  o.seed = g.seed;
  o.cap = g.cap;
  return o;
}

Value lookup_table(const PairRdd& prdd) {
  std::vector<Value> pairs;
  for (const auto& p : prdd) {
    for (const auto& [k, v] : p) pairs.push_back(Value::pair(k, v));
  }
  std::sort(pairs.begin(), pairs.end());
  return Value::list(std::move(pairs));
}

template <class T>
std::vector<std::vector<T>> trial_partitions(ChaosSource& chaos, const std::vector<std::vector<T>>& given,
                                             bool explicit_parts, std::size_t partitions) {
  if (explicit_parts) return given;
  const auto& xs = given.front();
  if (partitions > 0) return random_partitioning_into(chaos, xs.size(), partitions).apply(xs);
  return random_partitioning(chaos, xs.size()).apply(xs);
}

std::string execution_text(const Execution& e) {
  if (e.sequential) return "sequential";
  std::string out = "partitions ";
  out += "[";
  for (std::size_t i = 0; i < e.rdd.size(); ++i) {
    if (i) out += ", ";
    out += to_string(std::span<const Value>(e.rdd[i]));
  }
  out += "]";
  if (e.plan) {
    out += " plan [";
    for (std::size_t i = 0; i < e.plan->merges.size(); ++i) {
      if (i) out += ", ";
      out += std::to_string(e.plan->merges[i]);
    }
    out += "]";
  }
  return out;
}

void print_verdict(std::ostream& out, const Verdict& v) {
  out << to_string(v.combinator) << ": " << to_string(v.kind) << " (" << to_string(v.method) << ")";
  if (v.delegated_to) out << " via " << to_string(*v.delegated_to);
  if (!v.cause.empty()) out << ", cause " << v.cause;
  out << "\n";
  for (const auto& l : v.laws) {
    out << "  " << to_string(l.law) << ": " << to_string(l.status);
    if (l.status == LawStatus::violated) {
      out << " at " << to_string(std::span<const Value>(l.witness)) << " -> "
          << to_string(std::span<const Value>(l.sides));
      if (l.source == Approximation::sort_sample) out << " (sort sample)";
    }
    out << "\n";
  }
  if (v.method != Method::conditions) {
    out << "  executions: " << v.executions << ", observed " << to_string(std::span<const Value>(v.observed))
        << "\n";
  }
  if (v.counterexample) {
    const auto& cx = *v.counterexample;
    out << "  input " << to_string(std::span<const Value>(cx.input));
    if (cx.key) out << ", key " << cx.key->to_string();
    out << "\n    " << execution_text(cx.left) << " -> " << cx.left_output.to_string() << "\n    "
        << execution_text(cx.right) << " -> " << cx.right_output.to_string() << "\n";
  }
  for (const auto& w : v.warnings) out << "  warning: " << w << "\n";
}

void print_census(std::ostream& out, const TrialRun& run) {
  const auto cs = census(run.outputs);
  out << run.outputs.size() << " trials, " << cs.size() << " distinct output" << (cs.size() == 1 ? "" : "s")
      << "\n";
  for (const auto& [v, n] : cs) out << "  " << v.to_string() << "  x" << n << "\n";
}

RunReport cmd_simulate(const Globals& g, Combinator c, const OperatorFlags& f, const std::string& input) {
  const Subject s = subject_of(c, f);
  const std::string text = load_text(input);
  RunReport r;
  r.seed = g.seed;
  if (c == Combinator::aggregate_messages) {
    throw Error(Errc::invalid_argument, "simulate does not run aggregateMessages; use the graph command");
  }
  if (is_by_key(c)) {
    const PairInput in = parse_pairs(text);
    r.trials = run_trials(g.seed, g.trials, [&](ChaosSource& chaos, std::size_t) {
      const PairRdd prdd = trial_partitions(chaos, in.rdd, in.explicit_partitions, g.partitions);
      if (c == Combinator::aggregate_by_key) return lookup_table(aggregate_by_key(chaos, s.triple(), prdd));
      return lookup_table(reduce_by_key(chaos, s.comb, prdd));
    });
  } else {
    const RddInput in = parse_rdd(text);
    r.trials = run_trials(g.seed, g.trials, [&](ChaosSource& chaos, std::size_t) {
      const Rdd rdd = trial_partitions(chaos, in.rdd, in.explicit_partitions, g.partitions);
      switch (c) {
        case Combinator::aggregate:
          return aggregate(chaos, s.triple(), rdd);
        case Combinator::reduce:
          return reduce(chaos, s.comb, rdd);
        case Combinator::tree_aggregate:
          return tree_aggregate(chaos, s.triple(), rdd);
        default:
          return tree_reduce(chaos, s.comb, rdd);
      }
    });
  }
  return r;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  CLI::App app{"Determinism checker and simulator for Spark-style aggregations", "sparkdet"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "master seed");
  app.add_option("--trials", g.trials, "number of chaotic trials");
  app.add_option("--partitions", g.partitions, "repartition flat inputs into this many partitions");
  app.add_option("--cap", g.cap, "longest input the oracle enumerates");
  app.add_option("--json", g.json_path, "write the JSON report here (- for stdout)");
  app.add_option("--domain", g.domain, "lo..hi, JSON array, or file holding one");

  OperatorFlags ops;
  std::string combinator;
  std::string input;

  auto* simulate = app.add_subcommand("simulate", "run a chaotic combinator repeatedly");
  simulate->add_option("combinator", combinator)->required();
  add_operator_flags(simulate, ops);
  simulate->add_option("--input", input, "JSON literal or file")->required();

  auto* check_cmd = app.add_subcommand("check", "decide determinism from algebraic conditions");
  check_cmd->add_option("combinator", combinator)->required();
  add_operator_flags(check_cmd, ops);

  auto* oracle_cmd = app.add_subcommand("oracle", "enumerate every execution on one input");
  oracle_cmd->add_option("combinator", combinator)->required();
  add_operator_flags(oracle_cmd, ops);
  oracle_cmd->add_option("--input", input, "JSON literal or file")->required();

  CaseStudyOptions cs;
  auto* case_cmd = app.add_subcommand("case-study", "reproduce a numerical or graph case study");
  case_cmd->add_option("name", cs.name)->required()->check(CLI::IsMember(case_study_names()));
  case_cmd->add_option("--points", cs.points, "odd-integral sample points");
  case_cmd->add_option("--n", cs.n, "standard-scaler copies of the three values");

  std::string algorithm;
  std::string edges_path;
  std::string vertices_path;
  CaseStudyOptions gopts;
  auto* graph_cmd = app.add_subcommand("graph", "run a graph algorithm on TSV files");
  graph_cmd->add_option("algorithm", algorithm)
      ->required()
      ->check(CLI::IsMember({"triangle", "components", "indegrees", "cfl"}));
  graph_cmd->add_option("--edges", edges_path, "TSV edge list")->required();
  graph_cmd->add_option("--vertices", vertices_path, "TSV vertex list");
  graph_cmd->add_option("--k", gopts.k, "cfl colours (default max degree + 1)");
  graph_cmd->add_option("--beta", gopts.beta, "cfl damping");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return exit_ok;
    }
    err << "sparkdet: " << e.what() << "\n";
    return exit_usage;
  }

  RunReport report;
  int code = exit_ok;
  std::ostringstream text;
  try {
    if (simulate->parsed()) {
      const Combinator c = combinator_of(combinator);
      report = cmd_simulate(g, c, ops, input);
      text << to_string(c) << ", seed " << g.seed << "\n";
      print_census(text, report.trials);
    } else if (check_cmd->parsed()) {
      const Subject s = subject_of(combinator_of(combinator), ops);
      const Domain dom = parse_domain(g.domain);
      report.seed = g.seed;
      report.verdicts.push_back(check(s, dom, check_options(g)));
      code = exit_code_for(report.verdicts.back().kind);
      text << "domain " << dom.label << "\n";
      print_verdict(text, report.verdicts.back());
    } else if (oracle_cmd->parsed()) {
      const Combinator c = combinator_of(combinator);
      const Subject s = subject_of(c, ops);
      const std::string raw = load_text(input);
      const std::vector<Value> xs = is_by_key(c) ? parse_pairs(raw).flat_pairs() : parse_rdd(raw).flat();
      if (xs.size() > g.cap) {
        throw Error(Errc::cap_exceeded, "input has " + std::to_string(xs.size()) + " elements, above --cap " +
                                            std::to_string(g.cap));
      }
      const CheckOptions o = check_options(g);
      report.seed = g.seed;
      report.verdicts.push_back(oracle(s, xs, o));
      const Verdict& v = report.verdicts.back();
      code = exit_code_for(v.kind);
      print_verdict(text, v);
      if (v.kind == VerdictKind::non_deterministic) {
        const auto small = shrink_input(s, xs, o);
        Json shrunk = Json::array();
        for (const auto& x : small) shrunk.push_back(to_json(x));
        report.details["shrunk_input"] = std::move(shrunk);
        text << "  shrunk input " << to_string(std::span<const Value>(small)) << "\n";
      }
    } else if (case_cmd->parsed()) {
      cs.seed = g.seed;
      cs.trials = g.trials;
      cs.partitions = g.partitions;
      report = run_case_study(cs);
      text << "case study " << cs.name << ", seed " << g.seed << "\n";
      print_census(text, report.trials);
      text << "details " << report.details.dump() << "\n";
    } else if (graph_cmd->parsed()) {
      const std::string edges = load_text(edges_path);
      std::optional<std::string> vertices;
      if (!vertices_path.empty()) vertices = load_text(vertices_path);
      gopts.name = algorithm;
      gopts.seed = g.seed;
      gopts.trials = g.trials;
      std::optional<std::string_view> vview;
      if (vertices) vview = *vertices;
      report = run_graph_study({{edges_path, parse_graph(edges, vview)}}, gopts);
      text << algorithm << " on " << edges_path << ", seed " << g.seed << "\n";
      print_census(text, report.trials);
      text << "details " << report.details.dump() << "\n";
    }
  } catch (const Error& e) {
    err << "sparkdet: " << e.what() << "\n";
    return exit_usage;
  }

  // The report location is not part of the command.
  std::vector<std::string> echo;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--json") {
      ++i;
      continue;
    }
    if (args[i].rfind("--json=", 0) == 0) continue;
    echo.push_back(args[i]);
  }
  Json command;
  command["argv"] = echo;
  command["subcommand"] = app.get_subcommands().front()->get_name();
  report.command = std::move(command);
  report.wall_time_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();

  if (g.json_path == "-") {
    out << render(report);
  } else {
    out << text.str();
    if (!g.json_path.empty()) {
      std::ofstream f(g.json_path, std::ios::binary);
      if (!f) {
        err << "sparkdet: cannot write " << g.json_path << "\n";
        return exit_usage;
      }
      f << render(report);
    }
  }
  return code;
}

}  // namespace sparkdet::cli
