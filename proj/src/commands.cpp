#include "embq/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "embq/analysis.hpp"
#include "embq/datagen.hpp"
#include "embq/error.hpp"
#include "embq/metrics.hpp"
#include "embq/probe.hpp"
#include "embq/random.hpp"

namespace embq {
namespace {

Json envelope(const char* kind, Json input, Json options, Json payload) {
  Json out;
  out["schema_version"] = kSchemaVersion;
  out["kind"] = kind;
  out["input"] = std::move(input);
  out["options"] = std::move(options);
  out["payload"] = std::move(payload);
  return out;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

struct LoadedMatrix {
  EmbeddingMatrix matrix;
  MatrixFormat format;
};

LoadedMatrix load(const MatrixInput& in) {
  const MatrixFormat format = in.format.value_or(infer_matrix_format(in.path));
  return {read_matrix(in.path, format, in.csv_header), format};
}

Json input_json(const MatrixInput& in, const LoadedMatrix& loaded) {
  return {{"path", in.path.string()},
          {"n", loaded.matrix.n()},
          {"d", loaded.matrix.d()},
          {"format", to_string(loaded.format)}};
}

Json report_json(const MetricReport& r) {
  Json metrics = Json::object();
  for (const auto& name : metric_names()) metrics[name] = nullptr;
  for (const auto& [name, value] : r.named_values()) metrics[name] = value;
  Json undefined = Json::array();
  for (const auto& u : r.undefined) undefined.push_back({{"metric", u.metric}, {"reason", u.reason}});
  return {{"n", r.n},
          {"d", r.d},
          {"rank", r.rank},
          {"metrics", std::move(metrics)},
          {"cond_number_truncated", r.cond_number ? Json(r.cond_number->truncated) : Json(nullptr)},
          {"undefined", std::move(undefined)}};
}

double parse_real(std::string_view text, const char* what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || !std::isfinite(v)) {
    throw UsageError(std::string("cannot parse ") + what + " '" + std::string(text) + "'");
  }
  return v;
}

std::size_t parse_count(std::string_view text, const char* what) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw UsageError(std::string("cannot parse ") + what + " '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto at = text.find(sep);
    out.push_back(text.substr(0, at));
    if (at == std::string_view::npos) return out;
    text.remove_prefix(at + 1);
  }
}

Graph sparsify(const Graph& g, SparsifyMode mode, double target_degree, std::uint64_t seed) {
  return mode == SparsifyMode::naive ? sparsify_naive(g, target_degree, seed)
                                     : sparsify_connected(g, target_degree, seed);
}

// Spearman over the cells where both values are defined; null when fewer
// than two remain or either side is constant.
Json rho_or_null(const std::vector<std::optional<double>>& metric, const std::vector<double>& other) {
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < metric.size(); ++i) {
    if (metric[i]) {
      x.push_back(*metric[i]);
      y.push_back(other[i]);
    }
  }
  if (x.size() < 2) return nullptr;
  try {
    return spearman(x, y);
  } catch (const DomainError&) {
    return nullptr;
  }
}

}  // namespace

Json cmd_metrics(const MetricsArgs& args) {
  const LoadedMatrix loaded = load(args.input);
  ReportOptions options;
  options.center = args.center;
  options.normalize_rows = args.normalize_rows;
  options.allow_partial = args.partial;
  const MetricReport report = full_report(loaded.matrix, options);
  return envelope("metrics", input_json(args.input, loaded),
                  {{"center", args.center}, {"normalize_rows", args.normalize_rows}, {"partial", args.partial}},
                  report_json(report));
}

Json cmd_stability(const StabilityArgs& args) {
  const LoadedMatrix loaded = load(args.input);
  ReportOptions options;
  options.center = args.center;
  options.normalize_rows = args.normalize_rows;
  const StabilityProfile p =
      stability_profile(loaded.matrix, args.metric, args.batches, args.trials, args.seed, options);

  Json points = Json::array();
  for (const auto& pt : p.points) {
    points.push_back({{"batch", pt.batch},
                      {"mean_factor", optional_number(pt.mean_factor)},
                      {"lower_bound_rate", pt.lower_bound_rate},
                      {"approx_lower_bound_rate", pt.approx_lower_bound_rate},
                      {"failures", pt.failures},
                      {"failure_reasons", pt.failure_reasons}});
  }
  Json min_batch = Json::array();
  for (double threshold : kFactorThresholds) {
    const auto b = min_batch_for_factor(p, threshold);
    min_batch.push_back({{"factor", threshold}, {"batch", b ? Json(*b) : Json(nullptr)}});
  }
  Json payload = {{"metric", p.metric_name},
                  {"full_value", p.full_value},
                  {"n", p.n},
                  {"trials", p.trials},
                  {"seed", p.seed},
                  {"points", std::move(points)},
                  {"min_batch", std::move(min_batch)},
                  {"lower_bound", to_string(p.verdict)}};
  return envelope("stability", input_json(args.input, loaded),
                  {{"center", args.center},
                   {"normalize_rows", args.normalize_rows},
                   {"seed", args.seed},
                   {"trials", args.trials},
                   {"batches", args.batches}},
                  std::move(payload));
}

Json cmd_correlate(const CorrelateArgs& args) {
  const auto values = read_values(args.metric_values);
  const auto accuracies = read_values(args.accuracies);
  const CorrelationReport r = correlate_experiment(args.metric_name, values, accuracies);
  return envelope("correlate",
                  {{"path", args.metric_values.string()},
                   {"accuracies_path", args.accuracies.string()},
                   {"n", values.size()},
                   {"d", 1},
                   {"format", "values"}},
                  {{"metric_name", args.metric_name}},
                  {{"metric", r.metric_name}, {"rho", r.rho}, {"pairs", r.pairs}});
}

const char* to_string(SparsifyMode m) { return m == SparsifyMode::naive ? "naive" : "connected"; }

std::optional<SparsifyMode> parse_sparsify_mode(std::string_view name) {
  if (name == "naive") return SparsifyMode::naive;
  if (name == "connected") return SparsifyMode::connected;
  return std::nullopt;
}

SparsifyResult cmd_sparsify(const SparsifyArgs& args) {
  const Graph g = read_graph(args.graph);
  Graph out = sparsify(g, args.mode, args.target_degree, args.seed);
  const Components c = connected_components(out);
  Json report = envelope("sparsify",
                         {{"path", args.graph.string()},
                          {"n", g.node_count()},
                          {"d", nullptr},
                          {"edges", g.edge_count()},
                          {"format", "graph"}},
                         {{"mode", to_string(args.mode)}, {"target_degree", args.target_degree}, {"seed", args.seed}},
                         {{"nodes", out.node_count()},
                          {"edges", out.edge_count()},
                          {"budget", edge_budget(g.node_count(), args.target_degree)},
                          {"average_degree", out.average_degree()},
                          {"components", c.count()}});
  return {std::move(out), std::move(report)};
}

DegreeSchedule parse_degree_schedule(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw UsageError("degree schedule must be start:stop:step, got '" + std::string(text) + "'");
  DegreeSchedule s{parse_real(parts[0], "degree"), parse_real(parts[1], "degree"), parse_real(parts[2], "degree step")};
  if (!(s.start > 0.0) || s.stop < s.start || !(s.step > 0.0)) {
    throw UsageError("degree schedule needs 0 < start <= stop and step > 0");
  }
  return s;
}

std::vector<double> expand_schedule(const DegreeSchedule& s) {
  std::vector<double> out;
  for (std::size_t k = 0;; ++k) {
    const double t = s.start + static_cast<double>(k) * s.step;
    if (t > s.stop + 1e-9) break;
    out.push_back(std::min(t, s.stop));
  }
  return out;
}

SbmParams parse_sbm(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw UsageError("--sbm must be blocks,p_in,p_out, got '" + std::string(text) + "'");
  SbmParams p;
  const auto x = parts[0].find('x');
  if (x != std::string_view::npos) {
    const std::size_t count = parse_count(parts[0].substr(0, x), "block count");
    const std::size_t size = parse_count(parts[0].substr(x + 1), "block size");
    p.blocks.assign(count, size);
  } else {
    for (auto b : split(parts[0], ':')) p.blocks.push_back(parse_count(b, "block size"));
  }
  p.p_in = parse_real(parts[1], "p_in");
  p.p_out = parse_real(parts[2], "p_out");
  return p;
}

Json cmd_experiment(const ExperimentArgs& args) {
  if (args.embeds == 0 || args.probes == 0) throw UsageError("--embeds and --probes must be at least 1");
  SbmParams sbm = args.sbm;
  sbm.seed = derive_seed(args.seed, 0);
  const LabeledGraph lg = sbm_generate(sbm);
  const Graph& g = lg.graph;
  const std::size_t n = g.node_count();
  if (args.dim == 0 || args.dim > n) {
    throw UsageError("--dim must be in [1, " + std::to_string(n) + "]");
  }
  const LabelMatrix labels(lg.labels, lg.classes);

  const double natural = g.average_degree();
  std::vector<double> degrees;
  bool clipped = false;
  for (double t : expand_schedule(args.degrees)) {
    if (t <= natural + 1e-9) {
      degrees.push_back(t);
    } else {
      clipped = true;
    }
  }
  if (clipped && (degrees.empty() || degrees.back() < natural)) degrees.push_back(natural);
  if (degrees.empty()) throw DataError("no target degree at or below the graph's average degree");

  const auto& names = metric_names();
  Json cells = Json::array();
  Json correlations = Json::object();
  for (SparsifyMode mode : {SparsifyMode::naive, SparsifyMode::connected}) {
    const std::uint64_t mode_seed = derive_seed(args.seed, 1 + static_cast<std::uint64_t>(mode));
    std::vector<double> cell_accuracy;
    std::vector<double> cell_degree;
    std::vector<std::vector<std::optional<double>>> cell_metric(names.size());
    for (std::size_t k = 0; k < degrees.size(); ++k) {
      double target = degrees[k];
      if (mode == SparsifyMode::connected && edge_budget(n, target) + 1 < n) {
        target = 2.0 * static_cast<double>(n - 1) / static_cast<double>(n);
      }
      const std::uint64_t degree_seed = derive_seed(mode_seed, k);
      double accuracy_sum = 0.0;
      double effective_sum = 0.0;
      double components_sum = 0.0;
      std::vector<double> metric_sum(names.size(), 0.0);
      std::vector<std::size_t> metric_count(names.size(), 0);
      for (std::size_t r = 0; r < args.embeds; ++r) {
        const std::uint64_t cell_seed = derive_seed(degree_seed, r);
        const Graph sparse = sparsify(g, mode, target, cell_seed);
        effective_sum += sparse.average_degree();
        components_sum += static_cast<double>(connected_components(sparse).count());
        const EmbeddingMatrix x = spectral_embed(sparse, args.dim).embedding;

        for (std::size_t p = 0; p < args.probes; ++p) {
          const Split s = train_test_split(n, derive_seed(cell_seed, p));
          const ProbeModel model = fit_probe(select_rows(x, s.train), labels.subset(s.train));
          accuracy_sum += predict_accuracy(model, select_rows(x, s.test), labels.subset(s.test));
        }

        ReportOptions options;
        options.allow_partial = true;
        MetricReport report = full_report(x, options);
        try {
          report.self_cluster = self_cluster(normalize_rows(x));
        } catch (const DomainError&) {
        }
        for (const auto& [name, value] : report.named_values()) {
          const auto at = static_cast<std::size_t>(std::find(names.begin(), names.end(), name) - names.begin());
          metric_sum[at] += value;
          ++metric_count[at];
        }
      }
      const double runs = static_cast<double>(args.embeds);
      const double accuracy = accuracy_sum / (runs * static_cast<double>(args.probes));
      Json metrics = Json::object();
      for (std::size_t i = 0; i < names.size(); ++i) {
        std::optional<double> mean;
        if (metric_count[i] > 0) mean = metric_sum[i] / static_cast<double>(metric_count[i]);
        cell_metric[i].push_back(mean);
        metrics[names[i]] = optional_number(mean);
      }
      cell_accuracy.push_back(accuracy);
      cell_degree.push_back(degrees[k]);
      cells.push_back({{"mode", to_string(mode)},
                       {"target_degree", degrees[k]},
                       {"effective_degree", effective_sum / runs},
                       {"mean_components", components_sum / runs},
                       {"accuracy", accuracy},
                       {"metrics", std::move(metrics)}});
    }
    Json rho = Json::object();
    for (std::size_t i = 0; i < names.size(); ++i) rho[names[i]] = rho_or_null(cell_metric[i], cell_accuracy);
    std::vector<std::optional<double>> accuracy_opt(cell_accuracy.begin(), cell_accuracy.end());
    correlations[to_string(mode)] = {{"accuracy_vs_degree", rho_or_null(accuracy_opt, cell_degree)},
                                     {"metric_vs_accuracy", std::move(rho)}};
  }

  Json blocks = sbm.blocks;
  return envelope("experiment",
                  {{"path", nullptr}, {"n", n}, {"d", args.dim}, {"format", "sbm"}},
                  {{"blocks", blocks},
                   {"p_in", sbm.p_in},
                   {"p_out", sbm.p_out},
                   {"degrees", {{"start", args.degrees.start}, {"stop", args.degrees.stop}, {"step", args.degrees.step}}},
                   {"embeds", args.embeds},
                   {"probes", args.probes},
                   {"dim", args.dim},
                   {"seed", args.seed}},
                  {{"graph", {{"nodes", n}, {"edges", g.edge_count()}, {"average_degree", natural}, {"classes", lg.classes}}},
                   {"degrees", degrees},
                   {"cells", std::move(cells)},
                   {"correlations", std::move(correlations)}});
}

}  // namespace embq
