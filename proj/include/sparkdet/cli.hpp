#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sparkdet/detcheck.hpp"
#include "sparkdet/graphx.hpp"

namespace sparkdet::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int {
  exit_ok = 0,
  exit_nondeterministic = 1,
  exit_usage = 2,
  exit_inconclusive = 3,
};

int exit_code_for(VerdictKind k);

// ---------------------------------------------------------------------------
// JSON encoding of values
//
//   Int, Float, Bool, Str   JSON scalars (integers without a fraction are Int)
//   List                    array
//   Set                     {"set": [...]}
//   Pair                    {"pair": [a, b]}
//   none / some(x)          null / {"some": x}
//   non-finite Float        {"float": "inf" | "-inf" | "nan"}

Json to_json(const Value& v);
/// Throws ParseError naming `where` for shapes outside the encoding above.
Value value_from_json(const Json& j, const std::string& where = "value");

Json to_json(const Verdict& v);
Json to_json(const LawReport& r);
Json to_json(const Counterexample& cx);
Json to_json(const Execution& e);

/// JSON text parse; syntax errors become ParseError with line and column.
Json parse_json_text(std::string_view text, std::string_view origin = "input");

// ---------------------------------------------------------------------------
// Input

/// A literal starting with '[' is used as is, anything else is read as a file.
std::string load_text(const std::string& path_or_literal);

struct RddInput {
  Rdd rdd;  // one partition per explicit block, or the flat list as one block
  bool explicit_partitions = false;
  std::vector<Value> flat() const;
};

/// A flat JSON array, or an array of arrays taken as explicit partitions.
RddInput parse_rdd(std::string_view text);

struct PairInput {
  PairRdd rdd;
  bool explicit_partitions = false;
  std::vector<Value> flat_pairs() const;  // Pair values
};

/// [[k, v], ...] or partitions of such lists.
PairInput parse_pairs(std::string_view text);

/// TSV edge list `src<TAB>dst<TAB>attr?` and optional vertex list
/// `id<TAB>attr`. Blank lines and lines starting with '#' are skipped.
/// Attributes are JSON values when they parse as such, strings otherwise.
ValueGraph parse_graph(std::string_view edges_tsv, std::optional<std::string_view> vertices_tsv = {});

/// "lo..hi" integer range, a JSON array literal, or a file with a JSON array.
Domain parse_domain(const std::string& spec);

/// A flag value such as --z: JSON scalar or value encoding above.
Value parse_value_literal(std::string_view text);

// ---------------------------------------------------------------------------
// Trials

struct TrialRun {
  std::vector<std::uint64_t> seeds;
  std::vector<Value> outputs;  // by trial index
};

/// Trial i gets ChaosSource(seeds[i]), the seeds being successive splits of
/// ChaosSource(master). Trials run on a worker pool; the result does not
/// depend on the pool size.
TrialRun run_trials(std::uint64_t master, std::size_t trials,
                    const std::function<Value(ChaosSource&, std::size_t)>& trial,
                    std::size_t workers = 0);

/// Distinct outputs with counts, ascending by value.
std::vector<std::pair<Value, std::size_t>> census(const std::vector<Value>& outputs);

// ---------------------------------------------------------------------------
// Reports

struct RunReport {
  Json command = Json::object();
  std::uint64_t seed = 0;
  TrialRun trials;
  std::vector<Verdict> verdicts;
  Json details = Json::object();
  double wall_time_ms = 0.0;
};

inline constexpr int kReportSchema = 1;
inline constexpr const char* kTimingField = "wall_time_ms";

Json to_json(const RunReport& r);
/// Same document without the timing field.
Json stable_json(const RunReport& r);
std::string render(const RunReport& r);

// ---------------------------------------------------------------------------
// Case studies

/// Midpoint Riemann terms x^73 * dx on [-2, 2].
std::vector<Value> odd_integral_terms(std::size_t points);
/// n copies of {-1e20, 600, 1e20}.
std::vector<Value> scaler_data(std::size_t n);
/// Fixed subgradient components summed by the gradient study.
std::vector<Value> gradient_values();

struct Rational {
  __int128 num = 0;
  __int128 den = 1;
  friend bool operator==(const Rational&, const Rational&) = default;
};
/// Exact mean of integral Float values (throws InvalidArgument otherwise).
Rational exact_mean(const std::vector<Value>& xs);

struct CaseStudyOptions {
  std::string name;
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  /// 0 picks the study's default (20, or 100 for standard-scaler).
  std::size_t partitions = 0;
  std::size_t points = 1'000'000;  // odd-integral
  std::size_t n = 5;               // standard-scaler
  std::size_t workers = 0;
  int k = 0;  // cfl colours, 0 = max degree + 1
  double beta = 0.5;
};

struct NamedGraph {
  std::string name;
  ValueGraph graph;
};

/// Runs one graph algorithm (triangle, components, indegrees or cfl, taken
/// from opts.name) on every graph per trial and compares against the
/// reference answers.
RunReport run_graph_study(const std::vector<NamedGraph>& graphs, const CaseStudyOptions& opts);

std::vector<std::string> case_study_names();
/// Throws InvalidArgument for an unknown name.
RunReport run_case_study(const CaseStudyOptions& opts);

// ---------------------------------------------------------------------------
// Command line

/// Runs `sparkdet <args...>` writing the human summary to `out` and
/// diagnostics to `err`; returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sparkdet::cli
