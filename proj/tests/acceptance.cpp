// Acceptance suite: exercises every shipping criterion at its stated
// tolerance and prints one pass/fail line per criterion. Exit code is the
// number of failed criteria.

#include "relviz/data.hpp"
#include "relviz/eval.hpp"
#include "relviz/io.hpp"
#include "relviz/model.hpp"
#include "relviz/optim.hpp"
#include "relviz/svg.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace relviz;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  std::string name;
  bool pass = true;
  double seconds = 0.0;
  double time_limit = 0.0;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
};

std::vector<Criterion> g_results;

template <typename Fn>
void run_criterion(const std::string& name, double time_limit_s, Fn&& body) {
  Criterion c;
  c.name = name;
  c.time_limit = time_limit_s;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (c.seconds >= time_limit_s)
    c.require(false, "runtime " + std::to_string(c.seconds) + "s exceeds limit");
  g_results.push_back(std::move(c));
}

bool close_abs(double a, double b, double tol) { return std::abs(a - b) <= tol; }

bool grad_entry_ok(double analytic, double fd) {
  const double tol = std::max(1e-8, 1e-4 * std::max(std::abs(analytic), std::abs(fd)));
  return std::abs(analytic - fd) <= tol;
}

// --- CLI helpers (criterion 9) -------------------------------------------

const std::string kCli = RELVIZ_CLI_PATH;

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = kCli + " " + args + " >" + log.string() + " 2>&1";
  return WEXITSTATUS(std::system(cmd.c_str()));
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p);
  out << content;
}

// --- criteria --------------------------------------------------------------

void criterion_gradients(Criterion& c) {
  std::mt19937_64 rng(2024);
  const int ks[3] = {2, 4, 6};
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 5 + static_cast<int>(rng() % 11);  // 5..15
    const int k = ks[rep % 3];
    auto state = oracle::random_state(n, k, rng);
    auto d = normalize(oracle::random_dense_counts(n, rng));
    auto f = normalize(oracle::random_sparse_counts(n, rng));
    ModelConfig cfg{.K = k,
                    .view_balance = rep % 4 == 1 ? 0.6 : 1.0,
                    .sparsity_coeff = rep % 5 == 2 ? 0.04 : 0.0};

    const auto analytic = gradient(state, d, f, cfg);
    const auto fd = finite_diff_gradient(state, d, f, cfg, 1e-5);
    for (int i = 0; i < n && c.pass; ++i)
      for (int kk = 0; kk < k; ++kk)
        c.require(grad_entry_ok(analytic.Y(i, kk), fd.Y(i, kk)),
                  "Y gradient mismatch at rep " + std::to_string(rep));
    for (int kk = 2; kk < k && c.pass; ++kk) {
      c.require(grad_entry_ok(analytic.wD[kk], fd.wD[kk]),
                "wD gradient mismatch at rep " + std::to_string(rep));
      c.require(grad_entry_ok(analytic.wF[kk], fd.wF[kk]),
                "wF gradient mismatch at rep " + std::to_string(rep));
    }
  }
}

void criterion_invariances(Criterion& c) {
  std::mt19937_64 rng(777);

  // normalization to 1 within 1e-12
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 6 + static_cast<int>(rng() % 30);
    auto state = oracle::random_state(n, 4, rng, 1.5);
    auto support = oracle::random_sparse_counts(n, rng).observed;
    for (View v : {View::primary, View::user}) {
      auto dist = model_distribution(state, v, support);
      double sum = 0.0;
      for (double p : dist.probs) sum += p;
      c.require(close_abs(sum, 1.0, 1e-12), "distribution does not sum to 1");
    }
  }

  for (int rep = 0; rep < 10; ++rep) {
    const int n = 5 + static_cast<int>(rng() % 10);
    const int k = 4;
    auto state = oracle::random_state(n, k, rng);
    auto d = normalize(oracle::random_dense_counts(n, rng));
    auto f = normalize(oracle::random_sparse_counts(n, rng));
    ModelConfig cfg{.K = k};
    const double base = cost(state, d, f, cfg);

    // translation invariance, 1e-12
    LatentState shifted = state;
    std::normal_distribution<double> gauss(0.0, 2.0);
    for (int kk = 0; kk < k; ++kk) {
      const double offset = gauss(rng);
      shifted.Y.col(kk).array() += offset;
    }
    c.require(close_abs(cost(shifted, d, f, cfg), base, 1e-12), "translation changed cost");

    // shared 2-D rotation invariance, 1e-10
    LatentState rotated = state;
    const double theta = 0.31 + 0.61 * rep;
    Eigen::Matrix2d rot;
    rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    rotated.Y.leftCols(2) = (state.Y.leftCols(2) * rot.transpose()).eval();
    c.require(close_abs(cost(rotated, d, f, cfg), base, 1e-10), "rotation changed cost");

    // sign flips of a column and of a free weight, 1e-12
    LatentState flipped = state;
    flipped.Y.col(static_cast<int>(rng() % k)) *= -1.0;
    c.require(close_abs(cost(flipped, d, f, cfg), base, 1e-12), "column flip changed cost");
    LatentState wflip = state;
    wflip.wF[2 + static_cast<int>(rng() % (k - 2))] *= -1.0;
    c.require(close_abs(cost(wflip, d, f, cfg), base, 1e-12), "weight flip changed cost");
  }

  // pinned weights exactly 1 after 500 optimizer steps
  auto d = oracle::random_dense_counts(20, rng);
  auto f = oracle::random_sparse_counts(20, rng);
  OptimConfig opt;
  opt.max_iters = 500;
  opt.grad_tol = 1e-15;
  auto [state, report] = fit(d, f, ModelConfig{.K = 6}, opt);
  c.require(report.iterations_run == 500, "expected the full 500 iterations");
  c.require(state.wD[0] == 1.0 && state.wD[1] == 1.0, "wD pinned entries moved");
  c.require(state.wF[0] == 1.0 && state.wF[1] == 1.0, "wF pinned entries moved");
}

void criterion_sne_reduction(Criterion& c) {
  std::mt19937_64 rng(4242);
  PairDistribution absent;

  for (int rep = 0; rep < 8; ++rep) {
    const int n = 5 + static_cast<int>(rng() % 10);
    auto state = oracle::random_state(n, 2, rng);
    auto counts = oracle::random_dense_counts(n, rng);
    auto d = normalize(counts);
    absent.n_items = n;

    Eigen::MatrixXd p_tilde = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t m = 0; m < d.support.size(); ++m) {
      p_tilde(d.support[m].i, d.support[m].j) = d.probs[m];
      p_tilde(d.support[m].j, d.support[m].i) = d.probs[m];
    }

    ModelConfig cfg{.K = 2, .view_balance = 0.0};
    const double got = cost(state, d, absent, cfg);
    const double want = oracle::sne_cost(state.Y, p_tilde);
    c.require(close_abs(got, want, 1e-12 * std::max(1.0, std::abs(want))),
              "cost differs from the plain SNE reference");

    const auto g = gradient(state, d, absent, cfg);
    const auto g_ref = oracle::sne_gradient(state.Y, p_tilde);
    for (int i = 0; i < n; ++i)
      for (int kk = 0; kk < 2; ++kk)
        c.require(close_abs(g.Y(i, kk), g_ref(i, kk),
                            1e-12 * std::max(1.0, std::abs(g_ref(i, kk)))),
                  "gradient differs from the plain SNE reference");
  }

  // fitted coordinates: dedicated baseline path is bitwise identical
  auto counts = oracle::random_dense_counts(16, rng);
  OptimConfig opt;
  opt.max_iters = 200;
  opt.seed = 5;
  auto [coords, report] = sne_baseline(counts, opt);
  auto [state, report2] =
      fit(counts, CountMatrix::none(16), ModelConfig{.K = 2, .view_balance = 0.0}, opt);
  c.require((coords - shared_coordinates(state)).cwiseAbs().maxCoeff() == 0.0,
            "baseline coordinates are not bitwise identical");
  c.require(report.cost_trace == report2.cost_trace, "baseline cost traces differ");
}

// Shared state for criteria 4 and 5, which evaluate one fitted model.
struct RelevanceRun {
  SyntheticData data;
  LatentState state;
  double shared_relevant_acc = 0.0;
  double shared_irrelevant_acc = 0.0;
  double user_specific_irrelevant_acc = 0.0;
  double sne_user_relevant_acc = 0.0;
  bool ready = false;
};
RelevanceRun g_rel;

void criterion_relevance_recovery(Criterion& c) {
  SyntheticSpec spec;
  spec.n_items = 200;
  spec.n_relevant_classes = 4;
  spec.n_irrelevant_classes = 4;
  spec.feature_dim = 10;
  spec.cluster_separation = 6.0;
  spec.noise_rate = 0.1;
  spec.seed = 20240915;
  g_rel.data = synth_generate(spec);

  const auto d = gaussian_similarity(g_rel.data.features, median_sigma(g_rel.data.features));
  OptimConfig opt;
  opt.seed = 31;
  const auto result = fit_restarts(d, g_rel.data.user_view, ModelConfig{.K = 6}, opt, 3, 3);
  g_rel.state = result.state;

  const auto shared = shared_coordinates(g_rel.state);
  g_rel.shared_relevant_acc = loo_knn_accuracy(shared, g_rel.data.relevant, 5).accuracy;
  g_rel.shared_irrelevant_acc = loo_knn_accuracy(shared, g_rel.data.irrelevant, 5).accuracy;
  g_rel.user_specific_irrelevant_acc =
      loo_knn_accuracy(view_specific_coordinates(g_rel.state, View::user), g_rel.data.irrelevant,
                       5)
          .accuracy;

  OptimConfig sne_opt;
  sne_opt.seed = 77;
  auto [sne_coords, sne_report] = sne_baseline(g_rel.data.user_view, sne_opt);
  g_rel.sne_user_relevant_acc = loo_knn_accuracy(sne_coords, g_rel.data.relevant, 5).accuracy;
  g_rel.ready = true;

  c.notes.push_back("relevant@shared=" + std::to_string(g_rel.shared_relevant_acc) +
                    " sne(user)=" + std::to_string(g_rel.sne_user_relevant_acc));
  c.require(g_rel.shared_relevant_acc >= 0.85, "relevant-class accuracy below 0.85");
  c.require(g_rel.shared_relevant_acc >= g_rel.sne_user_relevant_acc,
            "single-view baseline on the user view wins");
}

void criterion_explaining_away(Criterion& c) {
  c.require(g_rel.ready, "relevance run unavailable");
  if (!g_rel.ready) return;
  c.notes.push_back("irrelevant@user_specific=" +
                    std::to_string(g_rel.user_specific_irrelevant_acc) + " irrelevant@shared=" +
                    std::to_string(g_rel.shared_irrelevant_acc));
  c.require(g_rel.user_specific_irrelevant_acc >= g_rel.shared_irrelevant_acc + 0.10,
            "user-view-specific coordinates do not explain the structured noise away");
}

void criterion_dual_user(Criterion& c) {
  const int n = 150;
  const double sep = 5.0;
  std::mt19937_64 rng(606);

  LabelSet labels_a;
  for (int i = 0; i < n; ++i) labels_a.add(i, "a" + std::to_string(i % 3));
  std::vector<int> assign_b(n);
  for (int i = 0; i < n; ++i) assign_b[i] = i % 3;
  std::shuffle(assign_b.begin(), assign_b.end(), rng);
  LabelSet labels_b;
  for (int i = 0; i < n; ++i) labels_b.add(i, "b" + std::to_string(assign_b[i]));

  // one primary dataset carrying both class structures in disjoint blocks
  FeatureMatrix fm;
  fm.X = Matrix::Zero(n, 6);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    fm.ids.push_back(std::to_string(i));
    fm.X(i, i % 3) = sep;
    fm.X(i, 3 + assign_b[i]) = sep;
    for (int kk = 0; kk < 6; ++kk) fm.X(i, kk) += gauss(rng);
  }
  const auto d = gaussian_similarity(fm, median_sigma(fm));

  auto run_with = [&](const LabelSet& labels, std::uint64_t seed) {
    OptimConfig opt;
    opt.seed = seed;
    const auto result =
        fit_restarts(d, labels_to_counts(labels, n), ModelConfig{.K = 6}, opt, 2, 2);
    return shared_coordinates(result.state);
  };

  const auto coords_a = run_with(labels_a, 100);
  const auto coords_b = run_with(labels_b, 200);

  const double a_used = loo_knn_accuracy(coords_a, labels_a, 5).accuracy;
  const double a_unused = loo_knn_accuracy(coords_a, labels_b, 5).accuracy;
  const double b_used = loo_knn_accuracy(coords_b, labels_b, 5).accuracy;
  const double b_unused = loo_knn_accuracy(coords_b, labels_a, 5).accuracy;
  c.notes.push_back("userA: used=" + std::to_string(a_used) + " unused=" +
                    std::to_string(a_unused) + "; userB: used=" + std::to_string(b_used) +
                    " unused=" + std::to_string(b_unused));
  c.require(a_used > a_unused, "user A's labelling is not favored on their display");
  c.require(b_used > b_unused, "user B's labelling is not favored on their display");
}

void criterion_knn_oracle(Criterion& c) {
  std::mt19937_64 rng(909);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 10 + static_cast<int>(rng() % 191);  // 10..200
    const int classes = 2 + static_cast<int>(rng() % 4);
    Eigen::MatrixXd coords(n, 2);
    if (rep % 3 == 0) {
      // integer grid coordinates: plenty of exact distance ties
      std::uniform_int_distribution<int> grid(0, 4);
      for (int i = 0; i < n; ++i) {
        coords(i, 0) = grid(rng);
        coords(i, 1) = grid(rng);
      }
    } else {
      for (int i = 0; i < n; ++i) {
        coords(i, 0) = gauss(rng);
        coords(i, 1) = gauss(rng);
      }
      for (int dup = 0; dup < n / 5; ++dup)
        coords.row(static_cast<int>(rng() % n)) = coords.row(static_cast<int>(rng() % n));
    }
    std::vector<int> assign(n);
    for (int i = 0; i < n; ++i) assign[i] = i % classes;
    std::shuffle(assign.begin(), assign.end(), rng);
    LabelSet labels;
    for (int i = 0; i < n; ++i) labels.add(i, "c" + std::to_string(assign[i]));

    const int k = 1 + static_cast<int>(rng() % 7);
    const auto got = loo_knn_accuracy(coords, labels, k);
    const auto want = oracle::knn_reference(coords, labels, k);
    c.require(got.accuracy == want.accuracy, "accuracy differs at rep " + std::to_string(rep));
    c.require(got.n_evaluated == want.n_evaluated, "n_evaluated differs");
    c.require(got.per_class_accuracy == want.per_class, "per-class accuracy differs");
  }
}

void criterion_data_exactness(Criterion& c) {
  auto mk = [](std::vector<std::vector<double>> rows) {
    FeatureMatrix fm;
    const int dim = static_cast<int>(rows[0].size());
    fm.X = Matrix(rows.size(), dim);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      fm.ids.push_back(std::to_string(i));
      for (int cc = 0; cc < dim; ++cc) fm.X(static_cast<int>(i), cc) = rows[i][cc];
    }
    return fm;
  };

  // gaussian_similarity
  auto two = mk({{0, 0}, {3, 4}});
  c.require(close_abs(gaussian_similarity(two, 5.0).counts[0], std::exp(-1.0), 1e-12),
            "kernel at distance sigma");
  auto line = mk({{0}, {1}, {2}});
  auto k3 = gaussian_similarity(line, 1.0);
  c.require(close_abs(k3.counts[0], std::exp(-1.0), 1e-12) &&
                close_abs(k3.counts[1], std::exp(-4.0), 1e-12) &&
                close_abs(k3.counts[2], std::exp(-1.0), 1e-12),
            "kernel on collinear points");
  auto same = mk({{1, 1}, {1, 1}});
  c.require(gaussian_similarity(same, 2.0).counts[0] == 1.0, "kernel of identical points");

  // labels_to_counts
  LabelSet ls;
  ls.add(0, "A");
  ls.add(0, "B");
  ls.add(1, "A");
  ls.add(2, "A");
  ls.add(2, "B");
  auto cm = labels_to_counts(ls, 4);
  c.require(cm.counts.size() == 3 && cm.counts[0] == 1.0 && cm.counts[1] == 2.0 &&
                cm.counts[2] == 1.0,
            "co-membership counts");
  c.require(cm.observed.size() == 3, "unlabeled items stay outside the observed set");

  // normalize
  CountMatrix raw;
  raw.n_items = 3;
  raw.observed = {{0, 1}, {0, 2}};
  raw.counts = {2.0, 2.0};
  auto nd = normalize(raw);
  c.require(nd.probs[0] == 0.5 && nd.probs[1] == 0.5, "normalize splits evenly");
  CountMatrix single;
  single.n_items = 2;
  single.observed = {{0, 1}};
  single.counts = {4.25};
  c.require(normalize(single).probs[0] == 1.0, "single pair normalizes to 1");
  std::mt19937_64 rng(55);
  auto rand_cm = oracle::random_sparse_counts(12, rng);
  double sum = 0.0;
  for (double p : normalize(rand_cm).probs) sum += p;
  c.require(close_abs(sum, 1.0, 1e-12), "random normalization sums to 1");

  // median_sigma
  c.require(median_sigma(mk({{0}, {3}})) == 3.0, "median of one distance");
  c.require(median_sigma(mk({{0}, {1}, {3}})) == 2.0, "odd median");
  c.require(median_sigma(mk({{0}, {1}, {4}, {5}})) == 3.5, "even count averages middle two");
}

void criterion_cli_contract(Criterion& c) {
  const fs::path dir = "acceptance_cli_scratch";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path log = dir / "log.txt";

  const std::string synth_flags =
      "synth --n-items 24 --relevant-classes 3 --irrelevant-classes 0 --feature-dim 4 "
      "--separation 6 --noise-rate 0 --seed 12 --out ";
  c.require(run_cli(synth_flags + (dir / "data").string(), log) == 0, "synth failed");

  const std::string fit_flags = "fit --features " + (dir / "data" / "features.csv").string() +
                                " --labels " +
                                (dir / "data" / "labels_relevant.csv").string() +
                                " --max-iters 150 --seed 7 --out ";
  c.require(run_cli(fit_flags + (dir / "run1").string(), log) == 0, "fit run 1 failed");
  c.require(run_cli(fit_flags + (dir / "run2").string(), log) == 0, "fit run 2 failed");
  for (const char* name :
       {"coords_shared.csv", "coords_view_D.csv", "coords_view_F.csv", "weights.csv"})
    c.require(read_file(dir / "run1" / name) == read_file(dir / "run2" / name),
              std::string("fit output differs across reruns: ") + name);

  const std::string plot_flags = "plot --coords " +
                                 (dir / "run1" / "coords_shared.csv").string() + " --labels " +
                                 (dir / "data" / "labels_relevant.csv").string() + " --out ";
  c.require(run_cli(plot_flags + (dir / "p1.svg").string(), log) == 0, "plot 1 failed");
  c.require(run_cli(plot_flags + (dir / "p2.svg").string(), log) == 0, "plot 2 failed");
  const auto svg = read_file(dir / "p1.svg");
  c.require(!svg.empty() && svg == read_file(dir / "p2.svg"), "SVG bytes differ across reruns");

  // malformed-input fixtures
  write_file(dir / "truncated.csv", "id,f1,f2\na,1,2\nb,3\n");
  c.require(run_cli("fit --features " + (dir / "truncated.csv").string() + " --labels " +
                        (dir / "data" / "labels_relevant.csv").string() + " --out " +
                        (dir / "bad1").string(),
                    log) == 2,
            "truncated features row should exit 2");
  write_file(dir / "unknown_labels.csv", "id,label\nnosuch,there\nother,one\n");
  c.require(run_cli("fit --features " + (dir / "data" / "features.csv").string() +
                        " --labels " + (dir / "unknown_labels.csv").string() + " --out " +
                        (dir / "bad2").string(),
                    log) == 2,
            "unknown label id should exit 2");
  c.require(run_cli("fit --features " + (dir / "no_file.csv").string() + " --labels " +
                        (dir / "data" / "labels_relevant.csv").string() + " --out " +
                        (dir / "bad3").string(),
                    log) == 2,
            "missing features file should exit 2");
}

}  // namespace

int main() {
  run_criterion("1 gradient correctness (finite differences)", 30.0, criterion_gradients);
  run_criterion("2 invariance suite", 10.0, criterion_invariances);
  run_criterion("3 single-view reduction", 30.0, criterion_sne_reduction);
  run_criterion("4 relevance recovery on synthetic data", 300.0, criterion_relevance_recovery);
  run_criterion("5 explaining away of structured noise", 300.0, criterion_explaining_away);
  run_criterion("6 dual-user divergence", 300.0, criterion_dual_user);
  run_criterion("7 k-NN oracle equivalence", 20.0, criterion_knn_oracle);
  run_criterion("8 data-path exactness", 10.0, criterion_data_exactness);
  run_criterion("9 CLI determinism and exit codes", 120.0, criterion_cli_contract);

  int failures = 0;
  for (const auto& c : g_results) {
    failures += c.pass ? 0 : 1;
    std::cout << (c.pass ? "PASS" : "FAIL") << "  criterion " << c.name << "  ["
              << c.seconds << "s / limit " << c.time_limit << "s]\n";
    for (const auto& note : c.notes) std::cout << "      " << note << "\n";
  }
  std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES: " + std::to_string(failures))
            << "\n";
  return failures;
}
