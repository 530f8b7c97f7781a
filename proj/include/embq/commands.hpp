#pragma once

// Command implementations behind the embq executable. Each returns the JSON
// report envelope; the executable only parses flags, prints and maps errors
// to exit codes.
//
// Envelope:
//   {"schema_version": "1", "kind": <command>, "input": {...},
//    "options": {...}, "payload": {...}}

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "embq/graph.hpp"
#include "embq/io.hpp"
#include "embq/json_writer.hpp"

namespace embq {

inline constexpr const char* kSchemaVersion = "1";

struct MatrixInput {
  std::filesystem::path path;
  std::optional<MatrixFormat> format;  // inferred from the extension when empty
  bool csv_header = false;
};

struct MetricsArgs {
  MatrixInput input;
  bool center = true;
  bool normalize_rows = false;
  bool partial = false;
};

Json cmd_metrics(const MetricsArgs& args);

inline const std::vector<double> kFactorThresholds{0.5, 0.7, 0.9, 0.95};

struct StabilityArgs {
  MatrixInput input;
  std::string metric;
  std::vector<std::size_t> batches;
  std::size_t trials = 10;
  std::uint64_t seed = 0;
  bool center = true;
  bool normalize_rows = false;
};

Json cmd_stability(const StabilityArgs& args);

struct CorrelateArgs {
  std::filesystem::path metric_values;
  std::filesystem::path accuracies;
  std::string metric_name = "metric";
};

Json cmd_correlate(const CorrelateArgs& args);

enum class SparsifyMode { naive, connected };

const char* to_string(SparsifyMode m);
std::optional<SparsifyMode> parse_sparsify_mode(std::string_view name);

struct SparsifyArgs {
  std::filesystem::path graph;
  SparsifyMode mode = SparsifyMode::naive;
  double target_degree = 0.0;
  std::uint64_t seed = 0;
};

struct SparsifyResult {
  Graph graph;
  Json report;
};

SparsifyResult cmd_sparsify(const SparsifyArgs& args);

struct DegreeSchedule {
  double start = 1.1;
  double stop = 10.0;
  double step = 1.0;
};

/// "start:stop:step"; stop is included when reached within 1e-9.
DegreeSchedule parse_degree_schedule(std::string_view text);
std::vector<double> expand_schedule(const DegreeSchedule& s);

/// "blocks,p_in,p_out" with blocks either "KxS" (K blocks of S nodes) or
/// colon-separated sizes, e.g. "4x250,0.3,0.02" or "100:150,0.2,0.01".
SbmParams parse_sbm(std::string_view text);

struct ExperimentArgs {
  SbmParams sbm;  // sbm.seed is ignored; the graph is drawn from `seed`
  DegreeSchedule degrees;
  std::size_t embeds = 10;
  std::size_t probes = 10;
  std::size_t dim = 16;
  std::uint64_t seed = 0;
};

/// Seed streams (derive_seed tags): the graph uses tag 0 of `seed`; cell
/// (mode, degree k, embedding r) uses
///   derive_seed(derive_seed(derive_seed(seed, 1 + mode), k), r)
/// for sparsification, and probe split p uses derive_seed(that, p).
///
/// Degrees above the graph's own average degree are dropped and replaced by
/// that degree. In connected mode a budget below n - 1 is raised to the
/// spanning tree alone; the cell records its effective degree.
Json cmd_experiment(const ExperimentArgs& args);

}  // namespace embq
