// relviz: fits a two-view embedding (a primary similarity view plus a user
// feedback view) and exports 2-D visualizations with k-NN separability
// reports. Subcommands: fit, synth, eval, plot.

#include "relviz/data.hpp"
#include "relviz/eval.hpp"
#include "relviz/io.hpp"
#include "relviz/model.hpp"
#include "relviz/optim.hpp"
#include "relviz/svg.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <iostream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitData = 2;
constexpr int kExitOptim = 3;

struct FitOptions {
  std::string features_path;
  std::string labels_path;
  std::string counts_path;
  std::string out_dir;
  std::string sigma = "median";
  relviz::ModelConfig model;
  relviz::OptimConfig optim;
  int restarts = 1;
  int threads = 1;
};

double resolve_sigma(const std::string& sigma, const relviz::FeatureMatrix& features) {
  if (sigma == "median") return relviz::median_sigma(features);
  double value = 0.0;
  try {
    value = relviz::parse_double_field(sigma, "--sigma");
  } catch (const relviz::input_error&) {
    throw relviz::config_error("--sigma must be a positive number or 'median'");
  }
  if (!(value > 0.0)) throw relviz::config_error("--sigma must be positive");
  return value;
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw relviz::input_error("cannot create output directory: " + dir);
}

int run_fit(const FitOptions& opt) {
  if (opt.labels_path.empty() == opt.counts_path.empty())
    throw relviz::config_error("fit needs exactly one of --labels or --counts");
  opt.model.validate();
  opt.optim.validate();
  if (opt.restarts < 1) throw relviz::config_error("--restarts must be >= 1");
  if (opt.threads < 1) throw relviz::config_error("--threads must be >= 1");

  const auto features = relviz::load_features(opt.features_path);
  const double sigma = resolve_sigma(opt.sigma, features);
  const auto d = relviz::gaussian_similarity(features, sigma);
  const auto f = opt.counts_path.empty()
                     ? relviz::labels_to_counts(
                           relviz::load_labels(opt.labels_path, features.ids),
                           features.n_items())
                     : relviz::load_counts(opt.counts_path, features.ids);

  const auto result =
      relviz::fit_restarts(d, f, opt.model, opt.optim, opt.restarts, opt.threads);

  ensure_out_dir(opt.out_dir);
  const fs::path out(opt.out_dir);
  relviz::atomic_write_file((out / "coords_shared.csv").string(),
                            relviz::coords_csv(features.ids,
                                               relviz::shared_coordinates(result.state)));
  if (opt.model.K >= 4) {
    relviz::atomic_write_file(
        (out / "coords_view_D.csv").string(),
        relviz::coords_csv(features.ids, relviz::view_specific_coordinates(
                                             result.state, relviz::View::primary)));
    relviz::atomic_write_file(
        (out / "coords_view_F.csv").string(),
        relviz::coords_csv(features.ids, relviz::view_specific_coordinates(
                                             result.state, relviz::View::user)));
  }
  relviz::atomic_write_file((out / "weights.csv").string(),
                            relviz::weights_csv(result.state.wD, result.state.wF));

  json report{{"sigma", sigma},
              {"converged", result.report.converged},
              {"iterations_run", result.report.iterations_run},
              {"final_grad_norm", result.report.final_grad_norm},
              {"initial_cost", result.report.cost_trace.front()},
              {"final_cost", result.report.cost_trace.back()},
              {"cost_trace", result.report.cost_trace},
              {"restart_final_costs", result.final_costs},
              {"selected_restart", result.selected}};
  relviz::atomic_write_file((out / "fit_report.json").string(), report.dump(2) + "\n");
  return kExitOk;
}

int run_synth(const relviz::SyntheticSpec& spec, const std::string& out_dir) {
  try {
    spec.validate();
  } catch (const relviz::input_error& e) {
    throw relviz::config_error(e.what());
  }
  const auto data = relviz::synth_generate(spec);

  ensure_out_dir(out_dir);
  const fs::path out(out_dir);
  relviz::atomic_write_file((out / "features.csv").string(),
                            relviz::features_csv(data.features));
  relviz::atomic_write_file((out / "labels_relevant.csv").string(),
                            relviz::labels_csv(data.relevant, data.features.ids));
  relviz::atomic_write_file((out / "labels_irrelevant.csv").string(),
                            relviz::labels_csv(data.irrelevant, data.features.ids));
  relviz::atomic_write_file((out / "user_counts.csv").string(),
                            relviz::counts_csv(data.user_view, data.features.ids));
  return kExitOk;
}

int run_eval(const std::string& coords_path, const std::string& labels_path, int k) {
  if (k < 1) throw relviz::config_error("--k must be >= 1");
  const auto coords = relviz::load_features(coords_path);
  if (coords.dim() != 2)
    throw relviz::input_error(coords_path + ": expected 2-D coordinates (id,x,y)");
  const auto labels = relviz::load_labels(labels_path, coords.ids);
  const auto report = relviz::loo_knn_accuracy(coords.X, labels, k);
  std::cout << relviz::to_json(report).dump(2) << "\n";
  return kExitOk;
}

int run_plot(const std::string& coords_path, const std::string& labels_path,
             const std::string& out_path) {
  const auto coords = relviz::load_features(coords_path);
  if (coords.dim() != 2)
    throw relviz::input_error(coords_path + ": expected 2-D coordinates (id,x,y)");
  const auto labels = relviz::load_labels(labels_path, coords.ids);
  relviz::atomic_write_file(out_path, relviz::svg_scatter(coords.X, labels));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-view embedding for user-steered visualization"};
  app.require_subcommand(1);

  FitOptions fit_opt;
  auto* fit_cmd = app.add_subcommand("fit", "fit the embedding and export coordinates");
  fit_cmd->set_config("--config", "", "flat key=value config file; flags override");
  fit_cmd->add_option("--features", fit_opt.features_path, "features CSV (id,f1,...,fD)")
      ->required();
  fit_cmd->add_option("--labels", fit_opt.labels_path, "user labels CSV (id,label)");
  fit_cmd->add_option("--counts", fit_opt.counts_path, "user counts CSV (i,j,count)");
  fit_cmd->add_option("--out", fit_opt.out_dir, "output directory")->required();
  fit_cmd->add_option("--sigma", fit_opt.sigma, "kernel bandwidth, or 'median'");
  fit_cmd->add_option("--K", fit_opt.model.K, "total latent dimensions (>= 2)");
  fit_cmd->add_option("--view-balance", fit_opt.model.view_balance,
                      "weight of the user-view term");
  fit_cmd->add_option("--sparsity", fit_opt.model.sparsity_coeff,
                      "L1 penalty on free diagonal weights");
  fit_cmd->add_option("--max-iters", fit_opt.optim.max_iters, "iteration cap");
  fit_cmd->add_option("--step-size", fit_opt.optim.step_size, "optimizer step size");
  fit_cmd->add_option("--moment-decay1", fit_opt.optim.moment_decay_1,
                      "first-moment decay");
  fit_cmd->add_option("--moment-decay2", fit_opt.optim.moment_decay_2,
                      "second-moment decay");
  fit_cmd->add_option("--grad-tol", fit_opt.optim.grad_tol,
                      "stop when the max-abs gradient entry drops below this");
  fit_cmd->add_option("--init-scale", fit_opt.optim.init_scale,
                      "stddev of the random initialization");
  fit_cmd->add_option("--seed", fit_opt.optim.seed, "random seed");
  fit_cmd->add_option("--restarts", fit_opt.restarts, "optimization restarts, best kept");
  fit_cmd->add_option("--threads", fit_opt.threads, "worker threads for restarts");

  relviz::SyntheticSpec spec;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "generate a two-view synthetic dataset");
  synth_cmd->set_config("--config", "", "flat key=value config file; flags override");
  synth_cmd->add_option("--n-items", spec.n_items, "number of items")->required();
  synth_cmd->add_option("--relevant-classes", spec.n_relevant_classes,
                        "round-robin classes driving the feature clusters");
  synth_cmd->add_option("--irrelevant-classes", spec.n_irrelevant_classes,
                        "shuffled classes present only in the user view");
  synth_cmd->add_option("--feature-dim", spec.feature_dim, "feature dimensionality");
  synth_cmd->add_option("--separation", spec.cluster_separation, "cluster mean separation");
  synth_cmd->add_option("--noise-rate", spec.noise_rate,
                        "fraction of user-view mass re-dealt at random");
  synth_cmd->add_option("--seed", spec.seed, "random seed");
  synth_cmd->add_option("--out", synth_out, "output directory")->required();

  std::string eval_coords, eval_labels;
  int eval_k = 5;
  auto* eval_cmd = app.add_subcommand("eval", "leave-one-out k-NN separability of labels");
  eval_cmd->set_config("--config", "", "flat key=value config file; flags override");
  eval_cmd->add_option("--coords", eval_coords, "coordinates CSV (id,x,y)")->required();
  eval_cmd->add_option("--labels", eval_labels, "labels CSV (id,label)")->required();
  eval_cmd->add_option("--k", eval_k, "number of neighbors");

  std::string plot_coords, plot_labels, plot_out;
  auto* plot_cmd = app.add_subcommand("plot", "scatterplot of coordinates as SVG");
  plot_cmd->set_config("--config", "", "flat key=value config file; flags override");
  plot_cmd->add_option("--coords", plot_coords, "coordinates CSV (id,x,y)")->required();
  plot_cmd->add_option("--labels", plot_labels, "labels CSV (id,label)")->required();
  plot_cmd->add_option("--out", plot_out, "output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (fit_cmd->parsed()) return run_fit(fit_opt);
    if (synth_cmd->parsed()) return run_synth(spec, synth_out);
    if (eval_cmd->parsed()) return run_eval(eval_coords, eval_labels, eval_k);
    if (plot_cmd->parsed()) return run_plot(plot_coords, plot_labels, plot_out);
  } catch (const relviz::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const relviz::optim_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOptim;
  } catch (const relviz::input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
