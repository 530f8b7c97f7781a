// embq: label-free embedding quality reports.
//
// Reports go to stdout (or --json FILE); diagnostics go to stderr.
// Exit codes: 0 ok, 1 usage, 2 data, 3 numerical domain.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "embq/commands.hpp"
#include "embq/error.hpp"
#include "embq/metrics.hpp"

namespace {

using namespace embq;

void add_matrix_input(CLI::App* cmd, MatrixInput& in, std::string& format) {
  cmd->add_option("--input", in.path, "Embedding matrix file")->required();
  cmd->add_option("--format", format, "npy, csv or raw (default: from the extension)")
      ->check(CLI::IsMember({"npy", "csv", "raw"}));
  cmd->add_flag("--csv-header", in.csv_header, "CSV input starts with a header line");
}

void resolve_format(MatrixInput& in, const std::string& format) {
  if (!format.empty()) in.format = parse_matrix_format(format);
}

void emit(const Json& report, const std::string& json_path) {
  const std::string text = write_json(report);
  if (json_path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
  } else {
    write_file(json_path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Label-free embedding quality metrics, stability and degradation experiments", "embq"};
  app.set_version_flag("--version", EMBQ_VERSION);
  app.require_subcommand(1);
  std::string json_path;

  MetricsArgs metrics;
  std::string metrics_format;
  bool no_center = false;
  auto* m = app.add_subcommand("metrics", "All quality metrics of one matrix");
  add_matrix_input(m, metrics.input, metrics_format);
  m->add_flag("--normalize-rows", metrics.normalize_rows, "L2-normalise rows first (enables self_cluster)");
  m->add_flag("--no-center", no_center, "Do not centre columns for the NESum covariance (centred by default)");
  m->add_flag("--partial", metrics.partial, "Report undefined metrics as null instead of failing");
  m->add_option("--json", json_path, "Write the report here instead of stdout");

  StabilityArgs stability;
  std::string stability_format;
  bool stability_no_center = false;
  auto* s = app.add_subcommand("stability", "Subsampling stability of one metric");
  add_matrix_input(s, stability.input, stability_format);
  std::string metric_help = "One of:";
  for (const auto& name : metric_names()) metric_help += " " + name;
  s->add_option("--metric", stability.metric, metric_help)->required()->check(CLI::IsMember(metric_names()));
  s->add_option("--batches", stability.batches, "Strictly increasing batch sizes, comma separated")
      ->required()
      ->delimiter(',');
  s->add_option("--trials", stability.trials, "Subsamples per batch size")->default_val(10);
  s->add_option("--seed", stability.seed, "Master seed")->default_val(0);
  s->add_flag("--normalize-rows", stability.normalize_rows, "L2-normalise rows first");
  s->add_flag("--no-center", stability_no_center, "Do not centre columns for NESum");
  s->add_option("--json", json_path, "Write the report here instead of stdout");

  CorrelateArgs correlate;
  auto* c = app.add_subcommand("correlate", "Spearman correlation of metric values against accuracies");
  c->add_option("--metric-values", correlate.metric_values, "Whitespace-separated values")->required();
  c->add_option("--accuracies", correlate.accuracies, "Whitespace-separated accuracies")->required();
  c->add_option("--metric-name", correlate.metric_name, "Label for the report")->default_val("metric");
  c->add_option("--json", json_path, "Write the report here instead of stdout");

  SparsifyArgs sparsify;
  std::string mode = "naive";
  std::string out_path;
  auto* sp = app.add_subcommand("sparsify", "Sparsify a graph to a target average degree");
  sp->add_option("--graph", sparsify.graph, "Graph text file")->required();
  sp->add_option("--mode", mode, "naive or connected")->check(CLI::IsMember({"naive", "connected"}));
  sp->add_option("--target-degree", sparsify.target_degree, "Target average degree")->required();
  sp->add_option("--seed", sparsify.seed, "Seed")->default_val(0);
  sp->add_option("--out", out_path, "Output graph file (stdout when omitted)");
  sp->add_option("--json", json_path, "Write the summary report here (only with --out)");

  ExperimentArgs experiment;
  std::string sbm_text = "4x250,0.3,0.02";
  std::string degrees_text = "1.1:10:1";
  auto* e = app.add_subcommand("experiment", "Sparsify, embed and probe an SBM graph over a degree schedule");
  e->add_option("--sbm", sbm_text, "blocks,p_in,p_out; blocks as KxS or colon-separated sizes")
      ->default_val(sbm_text);
  e->add_option("--degrees", degrees_text, "start:stop:step target degrees")->default_val(degrees_text);
  e->add_option("--embeds", experiment.embeds, "Embeddings per cell")->default_val(10);
  e->add_option("--probes", experiment.probes, "Probe splits per embedding")->default_val(10);
  e->add_option("--dim", experiment.dim, "Embedding dimension")->default_val(16);
  e->add_option("--seed", experiment.seed, "Master seed")->default_val(0);
  e->add_option("--json", json_path, "Write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : static_cast<int>(ErrorKind::usage);
  }

  if (*m) {
    resolve_format(metrics.input, metrics_format);
    metrics.center = !no_center;
    emit(cmd_metrics(metrics), json_path);
  } else if (*s) {
    resolve_format(stability.input, stability_format);
    stability.center = !stability_no_center;
    emit(cmd_stability(stability), json_path);
  } else if (*c) {
    emit(cmd_correlate(correlate), json_path);
  } else if (*sp) {
    sparsify.mode = *parse_sparsify_mode(mode);
    const SparsifyResult result = cmd_sparsify(sparsify);
    if (out_path.empty()) {
      std::cout << format_graph(result.graph) << std::flush;
    } else {
      write_graph(out_path, result.graph);
      emit(result.report, json_path);
    }
  } else if (*e) {
    experiment.sbm = parse_sbm(sbm_text);
    experiment.degrees = parse_degree_schedule(degrees_text);
    emit(cmd_experiment(experiment), json_path);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const embq::Error& err) {
    std::cerr << "embq: " << err.what() << '\n';
    return static_cast<int>(err.kind());
  } catch (const std::exception& err) {
    std::cerr << "embq: " << err.what() << '\n';
    return static_cast<int>(embq::ErrorKind::data);
  }
}
