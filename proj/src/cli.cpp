#include "pcc/cli.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "pcc/graph.hpp"
#include "pcc/harness.hpp"
#include "pcc/io.hpp"
#include "pcc/parallel.hpp"
#include "pcc/pca.hpp"
#include "pcc/synth.hpp"

namespace pcc {
namespace {

struct EngineFlags {
  double p_grd = PccConfig{}.p_grd;
  double delta_v = PccConfig{}.delta_v;
  double dist_exponent = PccConfig{}.dist_exponent;
  std::size_t max_sweeps = 0;
  double conv_epsilon = PccConfig{}.conv_epsilon;
  std::size_t conv_interval = PccConfig{}.conv_check_interval;

  void attach(CLI::App& app) {
    app.add_option("--pgrd", p_grd, "Probability of the greedy movement rule")->check(CLI::Range(0.0, 1.0));
    app.add_option("--deltav", delta_v, "Domination change rate")->check(CLI::Range(0.0, 1.0));
    app.add_option("--dist-exponent", dist_exponent, "Exponent of the greedy inverse-distance factor")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--max-sweeps", max_sweeps, "Sweep cap (0: ceil(500000/particles), at least 10000)");
    app.add_option("--conv-eps", conv_epsilon, "Convergence threshold on mean max domination change")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--conv-interval", conv_interval, "Sweeps between convergence checks")
        ->check(CLI::PositiveNumber);
  }

  PccConfig config(std::uint64_t seed) const {
    PccConfig c;
    c.p_grd = p_grd;
    c.delta_v = delta_v;
    c.dist_exponent = dist_exponent;
    if (max_sweeps > 0) c.max_sweeps = max_sweeps;
    c.conv_epsilon = conv_epsilon;
    c.conv_check_interval = conv_interval;
    c.seed = seed;
    c.validate();
    return c;
  }
};

LabeledDataset load_inputs(const std::string& features, const std::string& labels_from) {
  LabeledDataset ds = load_feature_table(features);
  if (!labels_from.empty()) ds = relabel(ds, load_label_map(labels_from));
  return ds;
}

void print_config(std::ostream& out) {
  const PccConfig c;
  const TrialSpec t;
  out << "p_grd=" << c.p_grd << '\n'
      << "delta_v=" << c.delta_v << '\n'
      << "dist_exponent=" << c.dist_exponent << '\n'
      << "max_sweeps=auto (ceil(500000/particles), min 10000)\n"
      << "conv_epsilon=" << c.conv_epsilon << '\n'
      << "conv_check_interval=" << c.conv_check_interval << '\n'
      << "seed=" << c.seed << '\n'
      << "labeled_fraction=" << t.labeled_fraction << '\n'
      << "repetitions=" << t.repetitions << '\n'
      << "p_range=" << t.p_range.lo << ".." << t.p_range.hi << '\n'
      << "k_range=" << t.k_range.lo << ".." << t.k_range.hi << '\n'
      << "threads=" << default_thread_count() << '\n';
}

std::string stem_of(const std::string& path) { return std::filesystem::path(path).stem().string(); }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semi-supervised classification with particle competition and cooperation", "pcc"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(0, 1);

  bool show_config = false;
  app.add_flag("--print-config", show_config, "Print all default settings and exit");

  // pca
  std::string features, labels_from, out_path;
  std::size_t p = 10, k = 7;
  std::uint64_t seed = 0;
  auto* pca_cmd = app.add_subcommand("pca", "Fit PCA on all items and write the projected feature table");
  pca_cmd->add_option("--features", features, "Feature CSV")->required()->check(CLI::ExistingFile);
  pca_cmd->add_option("--p", p, "Principal components to keep")->check(CLI::PositiveNumber);
  pca_cmd->add_option("--out", out_path, "Output feature CSV")->required();

  // graph
  std::size_t graph_p = 0;
  auto* graph_cmd = app.add_subcommand("graph", "Build the k-NN graph and print its diagnostics");
  graph_cmd->add_option("--features", features, "Feature CSV")->required()->check(CLI::ExistingFile);
  graph_cmd->add_option("--p", graph_p, "Principal components (0: use the raw features)");
  graph_cmd->add_option("--k", k, "Nearest neighbors per node")->check(CLI::PositiveNumber);
  graph_cmd->add_option("--out", out_path, "Optional adjacency dump");

  // classify
  EngineFlags engine;
  double fraction = 0.0;
  std::string trace_path;
  auto* classify_cmd = app.add_subcommand("classify", "Label the unlabeled items of a feature table");
  classify_cmd->add_option("--features", features, "Feature CSV")->required()->check(CLI::ExistingFile);
  classify_cmd->add_option("--labels-from", labels_from, "Label CSV `id,label` replacing the table's labels")
      ->check(CLI::ExistingFile);
  classify_cmd->add_option("--p", p, "Principal components")->check(CLI::PositiveNumber);
  classify_cmd->add_option("--k", k, "Nearest neighbors per node")->check(CLI::PositiveNumber);
  classify_cmd->add_option("--fraction", fraction,
                           "Hide all but this stratified fraction of labels and report accuracy on the rest "
                           "(fully labeled input only; 0: 0.1 when every item is labeled)")
      ->check(CLI::Range(0.0, 1.0));
  classify_cmd->add_option("--seed", seed, "Random seed");
  classify_cmd->add_option("--trace", trace_path, "Write one JSON record per sweep to this file");
  classify_cmd->add_option("--out", out_path, "Prediction CSV")->required();
  engine.attach(*classify_cmd);

  // grid-search
  TrialSpec spec;
  std::size_t pmin = 1, pmax = 20, kmin = 1, kmax = 20;
  unsigned threads = default_thread_count();
  std::string tag, stddev_path;
  auto* grid_cmd = app.add_subcommand("grid-search", "Repeated-trial accuracy over a (p, k) grid");
  grid_cmd->add_option("--features", features, "Feature CSV (every item labeled)")->required()->check(CLI::ExistingFile);
  grid_cmd->add_option("--labels-from", labels_from, "Label CSV `id,label` replacing the table's labels")
      ->check(CLI::ExistingFile);
  grid_cmd->add_option("--fraction", spec.labeled_fraction, "Labeled fraction per trial")
      ->check(CLI::Range(0.0, 1.0));
  grid_cmd->add_option("--reps", spec.repetitions, "Trials per cell")->check(CLI::PositiveNumber);
  grid_cmd->add_option("--pmin", pmin, "Smallest p")->check(CLI::PositiveNumber);
  grid_cmd->add_option("--pmax", pmax, "Largest p")->check(CLI::PositiveNumber);
  grid_cmd->add_option("--kmin", kmin, "Smallest k")->check(CLI::PositiveNumber);
  grid_cmd->add_option("--kmax", kmax, "Largest k")->check(CLI::PositiveNumber);
  grid_cmd->add_option("--seed", seed, "Base seed for per-trial seeds");
  grid_cmd->add_option("--threads", threads, "Worker threads")->envname("PCC_THREADS")->check(CLI::PositiveNumber);
  grid_cmd->add_option("--tag", tag, "Feature tag for the summary line (default: features file stem)");
  grid_cmd->add_option("--stddev-out", stddev_path, "Optional heatmap CSV of per-cell standard deviations");
  grid_cmd->add_option("--out", out_path, "Heatmap CSV of mean accuracies")->required();
  engine.attach(*grid_cmd);

  // synth
  std::string kind;
  std::size_t n = 200, classes = 2, dim = 2;
  double separation = 6.0, sigma = 1.0, noise = 0.05;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic labeled feature table");
  synth_cmd->add_option("kind", kind, "blobs or moons")->required()->check(CLI::IsMember({"blobs", "moons"}));
  synth_cmd->add_option("--n", n, "Item count");
  synth_cmd->add_option("--classes", classes, "Class count (blobs)");
  synth_cmd->add_option("--dim", dim, "Dimensionality (blobs)");
  synth_cmd->add_option("--separation", separation, "Center distance in sigma units (blobs)");
  synth_cmd->add_option("--sigma", sigma, "Cluster standard deviation (blobs)");
  synth_cmd->add_option("--noise", noise, "Noise standard deviation (moons)");
  synth_cmd->add_option("--seed", seed, "Random seed");
  synth_cmd->add_option("--out", out_path, "Output feature CSV")->required();

  // report
  std::string heatmap_path, predictions_path;
  auto* report_cmd = app.add_subcommand("report", "Summarize a heatmap or a prediction file");
  report_cmd->add_option("--heatmap", heatmap_path, "Heatmap CSV")->check(CLI::ExistingFile);
  report_cmd->add_option("--predictions", predictions_path, "Prediction CSV")->check(CLI::ExistingFile);
  report_cmd->add_option("--features", features, "Feature CSV whose labels serve as ground truth")
      ->check(CLI::ExistingFile);
  report_cmd->add_option("--labels-from", labels_from, "Label CSV `id,label` used as ground truth")
      ->check(CLI::ExistingFile);

  const std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    std::vector<std::string> parse_args = reversed;
    app.parse(parse_args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  std::string context = "pcc";
  try {
    if (show_config) {
      print_config(out);
      return 0;
    }

    if (*pca_cmd) {
      context = "pcc pca";
      const LabeledDataset ds = load_feature_table(features);
      const PcaModel model = pca_fit(ds.features, p);
      const std::size_t kept = model.max_components();
      LabeledDataset reduced{pca_transform(model, ds.features, kept), ds.labels, ds.classes};
      write_feature_table(reduced, out_path);
      out << "components=" << kept << '\n';
      for (std::size_t i = 0; i < kept; ++i)
        out << "pc" << i << " explained_variance=" << format_number(model.explained_variance[static_cast<Eigen::Index>(i)])
            << '\n';
      return 0;
    }

    if (*graph_cmd) {
      context = "pcc graph";
      const LabeledDataset ds = load_feature_table(features);
      FeatureMatrix points = ds.features;
      if (graph_p > 0) points = pca_transform(pca_fit(ds.features, graph_p), ds.features, graph_p);
      const Graph g = build_knn_graph(points, k, default_thread_count());
      const GraphReport r = graph_diagnostics(g);
      out << "nodes=" << r.nodes << " edges=" << r.edges << '\n'
          << "degree min=" << r.min_degree << " mean=" << fmt::format("{:.4f}", r.mean_degree)
          << " max=" << r.max_degree << '\n'
          << "components=" << r.component_count() << " sizes=";
      for (std::size_t i = 0; i < r.component_sizes.size(); ++i) out << (i ? "," : "") << r.component_sizes[i];
      out << '\n';
      if (!out_path.empty()) {
        std::ofstream f(out_path);
        if (!f) throw std::runtime_error("cannot open '" + out_path + "' for writing");
        write_adjacency(g, f);
      }
      return 0;
    }

    if (*classify_cmd) {
      context = "pcc classify";
      const PccConfig config = engine.config(seed);
      const LabeledDataset ds = load_inputs(features, labels_from);
      const bool fully_labeled = ds.labeled_count() == ds.size();
      if (fraction > 0.0 && !fully_labeled)
        throw std::invalid_argument("--fraction needs every item labeled to hold out ground truth");

      const PcaModel model = pca_fit(ds.features, p);
      if (model.max_components() < p)
        throw std::invalid_argument(fmt::format("data supports at most {} components", model.max_components()));
      const Graph g = build_knn_graph(pca_transform(model, ds.features, p), k);

      std::unique_ptr<std::ofstream> trace;
      if (!trace_path.empty()) {
        trace = std::make_unique<std::ofstream>(trace_path);
        if (!*trace) throw std::runtime_error("cannot open '" + trace_path + "' for writing");
      }

      Prediction pred;
      if (fully_labeled) {
        const double f = fraction > 0.0 ? fraction : 0.1;
        const auto truth = require_truth(ds);
        const auto mask = sample_labeled_mask(truth, ds.class_count(), f, derive_seed(seed, 0));
        pred = pcc_run(g, masked_labels(truth, mask), ds.class_count(), config, trace.get());
        write_predictions(ds, pred, out_path);
        out << "labeled=" << std::count(mask.begin(), mask.end(), true) << '/' << ds.size()
            << " accuracy=" << fmt::format("{:.6f}", accuracy(pred.labels, truth, mask)) << '\n';
      } else {
        pred = pcc_run(g, ds.labels, ds.class_count(), config, trace.get());
        write_predictions(ds, pred, out_path);
        out << "labeled=" << ds.labeled_count() << '/' << ds.size() << '\n';
      }
      out << "sweeps=" << pred.sweeps << " converged=" << (pred.converged ? "yes" : "no") << '\n';
      return 0;
    }

    if (*grid_cmd) {
      context = "pcc grid-search";
      const PccConfig config = engine.config(seed);
      spec.p_range = {pmin, pmax};
      spec.k_range = {kmin, kmax};
      spec.base_seed = seed;
      const LabeledDataset ds = load_inputs(features, labels_from);
      const GridResult result = grid_search(ds, spec, config, threads);
      write_heatmap(result, out_path);
      if (!stddev_path.empty()) {
        Heatmap h = to_heatmap(result);
        for (std::size_t r = 0; r < h.p_values.size(); ++r)
          for (std::size_t c = 0; c < h.k_values.size(); ++c)
            h.cells[r][c] = result.at(h.p_values[r], h.k_values[c]).stddev;
        write_heatmap(h, stddev_path);
      }
      out << summary_line(spec, tag.empty() ? stem_of(features) : tag, result) << '\n';
      return 0;
    }

    if (*synth_cmd) {
      context = "pcc synth";
      const LabeledDataset ds =
          kind == "blobs" ? gen_blobs(n, classes, dim, separation, sigma, seed) : gen_moons(n, noise, seed);
      write_feature_table(ds, out_path);
      out << "wrote " << ds.size() << " items, " << ds.class_count() << " classes, dim " << ds.features.dim()
          << '\n';
      return 0;
    }

    if (*report_cmd) {
      context = "pcc report";
      if (heatmap_path.empty() && predictions_path.empty())
        throw std::invalid_argument("give --heatmap and/or --predictions");
      if (!heatmap_path.empty()) {
        const Heatmap h = load_heatmap(heatmap_path);
        std::size_t br = 0, bc = 0;
        for (std::size_t r = 0; r < h.cells.size(); ++r)
          for (std::size_t c = 0; c < h.cells[r].size(); ++c)
            if (h.cells[r][c] > h.cells[br][bc]) br = r, bc = c;
        out << "grid=" << h.p_values.size() << 'x' << h.k_values.size() << " best p=" << h.p_values[br]
            << " k=" << h.k_values[bc] << " accuracy=" << format_cell(h.cells[br][bc]) << '\n';
      }
      if (!predictions_path.empty()) {
        const PredictionTable t = load_predictions(predictions_path);
        std::vector<std::size_t> counts(static_cast<std::size_t>(t.domination.cols()), 0);
        for (ClassId l : t.labels)
          if (l >= 0 && static_cast<std::size_t>(l) < counts.size()) ++counts[static_cast<std::size_t>(l)];
        out << "predictions=" << t.ids.size();
        for (std::size_t c = 0; c < counts.size(); ++c) out << " class" << c << '=' << counts[c];
        out << '\n';
        if (!features.empty()) {
          const LabeledDataset truth = load_inputs(features, labels_from);
          std::map<std::string, std::size_t> row_of;
          for (std::size_t i = 0; i < truth.size(); ++i) row_of[truth.features.ids[i]] = i;
          std::size_t scored = 0, correct = 0;
          for (std::size_t i = 0; i < t.ids.size(); ++i) {
            auto it = row_of.find(t.ids[i]);
            if (it == row_of.end() || !truth.labels[it->second]) continue;
            ++scored;
            if (*truth.labels[it->second] == t.labels[i]) ++correct;
          }
          if (scored == 0) throw std::invalid_argument("no prediction ids carry a ground-truth label");
          out << "scored=" << scored << " accuracy="
              << fmt::format("{:.6f}", static_cast<double>(correct) / static_cast<double>(scored)) << '\n';
        }
      }
      return 0;
    }

    out << app.help();
    return 0;
  } catch (const std::exception& e) {
    err << context << ": error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace pcc
