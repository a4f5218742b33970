#include "astroknn/cli.hpp"

#include <omp.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "astroknn/coordination.hpp"
#include "astroknn/dataset.hpp"
#include "astroknn/evaluation.hpp"
#include "astroknn/layout_io.hpp"
#include "astroknn/predictor.hpp"
#include "json.hpp"

#ifndef ASTROKNN_VERSION
#define ASTROKNN_VERSION "0.0.0"
#endif

namespace astroknn {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

constexpr const char* kJobsEnv = "ASTROKNN_JOBS";

/// Accepts "a,b,c" and inclusive ranges "start:stop:step", mixed freely.
std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) throw Error("bad number '" + s + "' in value list");
    return v;
  };
  while (std::getline(ss, item, ',')) {
    if (item.find(':') == std::string::npos) {
      values.push_back(number(item));
      continue;
    }
    std::stringstream rs(item);
    std::string a, b, c;
    std::getline(rs, a, ':');
    std::getline(rs, b, ':');
    std::getline(rs, c, ':');
    const double start = number(a), stop = number(b), step = number(c);
    if (!(step > 0.0) || stop < start) throw Error("bad range '" + item + "'");
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < n; ++i) values.push_back(std::round((start + step * i) * 1e12) / 1e12);
  }
  if (values.empty()) throw Error("empty value list");
  return values;
}

struct Manifest {
  ojson doc;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  Manifest(const std::string& command, int argc, const char* const* argv) {
    doc["command"] = command;
    ojson line = ojson::array();
    for (int i = 0; i < argc; ++i) line.push_back(argv[i]);
    doc["command_line"] = std::move(line);
    doc["tool_version"] = ASTROKNN_VERSION;
    doc["flags"] = ojson::object();
    doc["seeds"] = ojson::object();
    doc["inputs"] = ojson::object();
    doc["outputs"] = ojson::array();
  }

  void write(const fs::path& path) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    doc["wall_clock_seconds"] = secs;
    write_text_file(path, doc.dump(1) + "\n");
  }
};

fs::path sibling_manifest(const fs::path& out) { return fs::path(out.string() + ".manifest.json"); }

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error("cannot create output directory " + dir.string());
}

void write_stream_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ostringstream ss;
  body(ss);
  write_text_file(path, ss.str());
}

struct HpFlags {
  std::size_t k = 13;
  double alpha = 1.0;
  double beta = 1.0;
  double q = 0.5;

  void add(CLI::App* cmd) {
    cmd->add_option("--k", k, "Number of nearest train configurations")->capture_default_str();
    cmd->add_option("--alpha", alpha, "Corrector for astrobots with 6 neighbors")->capture_default_str();
    cmd->add_option("--beta", beta, "Corrector for astrobots with fewer neighbors")->capture_default_str();
    cmd->add_option("--q", q, "Decision filter")->capture_default_str();
  }
  Hyperparameters get() const { return {k, alpha, beta, q}; }
  void record(ojson& flags) const {
    flags["k"] = k;
    flags["alpha"] = alpha;
    flags["beta"] = beta;
    flags["q"] = q;
  }
};

struct SplitFlags {
  std::size_t iterations = 15;
  std::size_t test_count = 51;
  std::uint64_t seed = 0;

  void add(CLI::App* cmd) {
    cmd->add_option("--iterations", iterations, "Monte Carlo iterations")->capture_default_str();
    cmd->add_option("--test-count", test_count, "Test configurations per iteration")->capture_default_str();
    cmd->add_option("--split-seed", seed, "Seed of the split stream")->capture_default_str();
  }
  SplitPlan get() const { return {iterations, test_count, seed}; }
  void record(Manifest& m) const {
    m.doc["flags"]["iterations"] = iterations;
    m.doc["flags"]["test_count"] = test_count;
    m.doc["seeds"]["split_seed"] = seed;
  }
};

struct Inputs {
  std::string layout_path;
  std::string dataset_path;

  void add(CLI::App* cmd) {
    cmd->add_option("--layout", layout_path, "Layout file (*.layout.json)")->required();
    cmd->add_option("--dataset", dataset_path, "Dataset file (*.dataset.jsonl)")->required();
  }
  std::pair<SwarmLayout, Dataset> load(Manifest& m) const {
    SwarmLayout layout = load_layout(layout_path);
    const std::string fp = layout_fingerprint(layout);
    Dataset ds = load_dataset(dataset_path, fp);
    m.doc["inputs"]["layout"] = layout_path;
    m.doc["inputs"]["dataset"] = dataset_path;
    m.doc["inputs"]["layout_fingerprint"] = fp;
    m.doc["seeds"]["generation_seed"] = ds.seed;
    return {std::move(layout), std::move(ds)};
  }
};

void print_summary(std::ostream& out, const MetricsReport& m) {
  auto pct = [](const Rate& r) {
    if (!r.has_value()) return std::string("NA (") + r.reason() + ")";
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(2);
    s << 100.0 * r.value() << "%";
    return s.str();
  };
  out << "TPR " << pct(m.rates.tpr) << "  TNR " << pct(m.rates.tnr) << "  balanced " << pct(m.rates.balanced_accuracy)
      << "  precision " << pct(m.rates.precision) << "  F1 " << pct(m.rates.f1) << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted k-NN convergence prediction for hexagonal astrobot swarms"};
  app.require_subcommand(1);
  app.fallthrough();  // --jobs may follow the subcommand
  int jobs = 0;
  app.add_option("--jobs", jobs, std::string("Worker threads (default: $") + kJobsEnv + " or all cores)");

  // layout
  auto* layout_cmd = app.add_subcommand("layout", "Build a hexagonal swarm layout");
  int rings = 0;
  std::optional<std::size_t> layout_count;
  double pitch = 22.4, l1 = 11.2, l2 = 11.2;
  std::string layout_out;
  layout_cmd->add_option("--rings", rings, "Hexagon rings around the center")->required()->check(CLI::NonNegativeNumber);
  layout_cmd->add_option("--count", layout_count, "Trim to this many astrobots");
  layout_cmd->add_option("--pitch", pitch, "Center-to-center spacing (mm)")->capture_default_str();
  layout_cmd->add_option("--l1", l1, "First arm length (mm)")->capture_default_str();
  layout_cmd->add_option("--l2", l2, "Second arm length (mm)")->capture_default_str();
  layout_cmd->add_option("--out", layout_out, "Output *.layout.json")->required();

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "Simulate coordinations into a labeled dataset");
  std::string gen_layout, gen_out;
  std::size_t gen_count = 0;
  std::uint64_t gen_seed = 1;
  SimParams sim;
  std::string priority = std::string(to_string(sim.priority_rule));
  std::optional<double> min_sep;
  gen_cmd->add_option("--layout", gen_layout, "Layout file")->required();
  gen_cmd->add_option("--count", gen_count, "Number of configurations")->required();
  gen_cmd->add_option("--seed", gen_seed, "Generation seed")->capture_default_str();
  gen_cmd->add_option("--omega-max", sim.omega_max, "Max joint step per tick (rad)")->capture_default_str();
  gen_cmd->add_option("--eps-safety", sim.eps_safety, "Min chain clearance (mm)")->capture_default_str();
  gen_cmd->add_option("--tol-converge", sim.tol_converge, "Convergence tolerance (mm)")->capture_default_str();
  gen_cmd->add_option("--max-ticks", sim.max_ticks, "Tick budget")->capture_default_str();
  gen_cmd->add_option("--deadlock-window", sim.deadlock_window, "Idle ticks before stopping")->capture_default_str();
  gen_cmd->add_option("--priority", priority, "random_fixed | farthest_first")->capture_default_str();
  gen_cmd->add_option("--min-target-sep", min_sep, "Neighbor target separation (default: eps-safety)");
  gen_cmd->add_option("--out", gen_out, "Output *.dataset.jsonl")->required();

  // predict
  auto* pred_cmd = app.add_subcommand("predict", "Predict per-astrobot convergence of one configuration");
  Inputs pred_in;
  HpFlags pred_hp;
  std::string test_config, pred_out;
  pred_in.add(pred_cmd);
  pred_cmd->add_option("--test-config", test_config, "JSON file with a \"targets\" array")->required();
  pred_hp.add(pred_cmd);
  pred_cmd->add_option("--out", pred_out, "Output CSV (id,gamma,label,eta)")->required();

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "Monte Carlo cross-validation of one setting");
  Inputs eval_in;
  HpFlags eval_hp;
  SplitFlags eval_split;
  std::string eval_out;
  eval_in.add(eval_cmd);
  eval_hp.add(eval_cmd);
  eval_split.add(eval_cmd);
  eval_cmd->add_option("--out", eval_out, "Output directory")->required();

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate a hyperparameter sweep");
  Inputs sweep_in;
  HpFlags sweep_hp;
  SplitFlags sweep_split;
  std::string axis_name, values_text, sweep_out;
  sweep_in.add(sweep_cmd);
  sweep_hp.add(sweep_cmd);
  sweep_split.add(sweep_cmd);
  sweep_cmd->add_option("--axis", axis_name, "k | correctors | alpha | beta")->required();
  sweep_cmd->add_option("--values", values_text, "List (3,13,25) or range (0.85:1.05:0.05)")->required();
  sweep_cmd->add_option("--out", sweep_out, "Output directory")->required();

  // roc
  auto* roc_cmd = app.add_subcommand("roc", "ROC points over alpha = beta");
  Inputs roc_in;
  SplitFlags roc_split;
  std::size_t roc_k = 13;
  double roc_q = 0.5;
  std::string alphas_text, roc_out;
  roc_in.add(roc_cmd);
  roc_split.add(roc_cmd);
  roc_cmd->add_option("--k", roc_k, "Number of nearest train configurations")->capture_default_str();
  roc_cmd->add_option("--q", roc_q, "Decision filter")->capture_default_str();
  roc_cmd->add_option("--alphas", alphas_text, "Corrector values, list or range")->required();
  roc_cmd->add_option("--out", roc_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) return app.exit(e, out, err);  // --help
    err << "astroknn: error: " << e.what() << '\n';
    return e.get_exit_code();
  }

  try {
    if (jobs <= 0) {
      if (const char* env = std::getenv(kJobsEnv)) jobs = std::atoi(env);
    }
    if (jobs > 0) omp_set_num_threads(jobs);

    if (*layout_cmd) {
      Manifest m("layout", argc, argv);
      const SwarmLayout layout = build_hex_swarm(rings, layout_count, pitch, l1, l2);
      save_layout(layout, layout_out);
      m.doc["flags"] = {{"rings", rings}, {"pitch", pitch}, {"l1", l1}, {"l2", l2}};
      if (layout_count) m.doc["flags"]["count"] = *layout_count;
      m.doc["layout_fingerprint"] = layout_fingerprint(layout);
      m.doc["outputs"].push_back(fs::path(layout_out).filename().string());
      m.write(sibling_manifest(layout_out));
      out << "wrote " << layout.size() << " astrobots to " << layout_out << '\n';
    } else if (*gen_cmd) {
      Manifest m("generate", argc, argv);
      sim.priority_rule = priority_rule_from_string(priority);
      const SwarmLayout layout = load_layout(gen_layout);
      const Dataset ds = generate_dataset(layout, gen_count, sim, gen_seed, min_sep);
      save_dataset(ds, gen_out);
      const double rate = mean_convergence_rate(ds);
      m.doc["inputs"]["layout"] = gen_layout;
      m.doc["inputs"]["layout_fingerprint"] = ds.layout_fingerprint;
      m.doc["seeds"]["generation_seed"] = gen_seed;
      m.doc["flags"] = {{"count", gen_count},
                        {"omega_max", sim.omega_max},
                        {"eps_safety", sim.eps_safety},
                        {"tol_converge", sim.tol_converge},
                        {"max_ticks", sim.max_ticks},
                        {"deadlock_window", sim.deadlock_window},
                        {"priority", priority},
                        {"min_target_sep", min_sep.value_or(sim.eps_safety)}};
      m.doc["mean_convergence_rate"] = rate;
      m.doc["outputs"].push_back(fs::path(gen_out).filename().string());
      m.write(sibling_manifest(gen_out));
      out << "wrote " << ds.size() << " configurations to " << gen_out << "; mean convergence rate " << rate << '\n';
    } else if (*pred_cmd) {
      Manifest m("predict", argc, argv);
      auto [layout, ds] = pred_in.load(m);
      const Configuration test = configuration_from_json(read_text_file(test_config));
      if (test.population() != layout.size()) throw Error("test configuration population does not match the layout");
      for (std::size_t i = 0; i < layout.size(); ++i) {
        if (!reachable(layout.astrobots()[i], test.targets[i]))
          throw Error("test target of astrobot " + std::to_string(i) + " is out of workspace");
      }
      std::vector<std::size_t> all(ds.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
      const ConvergencePredictor model(layout, TrainingSet(ds, all));
      const Hyperparameters hp = pred_hp.get();
      const WeightVector w = model.weights(hp.alpha, hp.beta);
      if (!w.clamped.empty()) {
        err << "astroknn: warning: " << w.clamped.size()
            << " astrobot(s) never converged in training; their weight was clamped to " << kMinWeight << '\n';
      }
      const PredictionResult res = localized_predict(layout, model.train(), w, test, hp);
      write_stream_file(pred_out, [&](std::ostream& os) {
        os << "id,gamma,label,eta\n";
        for (std::size_t i = 0; i < layout.size(); ++i) {
          char buf[32];
          const auto r = std::to_chars(buf, buf + sizeof buf, res.probabilities[i]);
          os << i << ',' << std::string(buf, r.ptr) << ',' << int(res.labels[i]) << ',' << res.eta[i] << '\n';
        }
      });
      pred_hp.record(m.doc["flags"]);
      m.doc["inputs"]["test_config"] = test_config;
      m.doc["outputs"].push_back(fs::path(pred_out).filename().string());
      m.write(sibling_manifest(pred_out));
      std::size_t ones = 0;
      for (Label y : res.labels) ones += y;
      out << "predicted " << ones << " of " << layout.size() << " astrobots to converge\n";
    } else if (*eval_cmd) {
      Manifest m("evaluate", argc, argv);
      auto [layout, ds] = eval_in.load(m);
      const EvaluationResult result = monte_carlo_evaluate(ds, layout, eval_hp.get(), eval_split.get());
      ensure_directory(eval_out);
      write_stream_file(fs::path(eval_out) / "metrics.csv", [&](std::ostream& os) { write_metrics_csv(os, result); });
      write_stream_file(fs::path(eval_out) / "neighbor_breakdown.csv",
                        [&](std::ostream& os) { write_breakdown_csv(os, result.pooled); });
      eval_hp.record(m.doc["flags"]);
      eval_split.record(m);
      m.doc["outputs"] = ojson::array({"metrics.csv", "neighbor_breakdown.csv"});
      m.write(fs::path(eval_out) / "manifest.json");
      print_summary(out, result.pooled);
    } else if (*sweep_cmd) {
      Manifest m("sweep", argc, argv);
      auto [layout, ds] = sweep_in.load(m);
      const SweepAxis axis = sweep_axis_from_string(axis_name);
      const std::vector<double> values = parse_values(values_text);
      const auto rows = sweep(ds, layout, sweep_split.get(), sweep_hp.get(), axis, values);
      ensure_directory(sweep_out);
      const std::string name = "sweep_" + std::string(to_string(axis)) + ".csv";
      write_stream_file(fs::path(sweep_out) / name, [&](std::ostream& os) { write_sweep_csv(os, axis, rows); });
      sweep_hp.record(m.doc["flags"]);
      sweep_split.record(m);
      m.doc["flags"]["axis"] = axis_name;
      m.doc["flags"]["values"] = values;
      m.doc["outputs"] = ojson::array({name});
      m.write(fs::path(sweep_out) / "manifest.json");
      for (const auto& row : rows) {
        out << to_string(axis) << '=' << row.value << ": ";
        print_summary(out, row.result.pooled);
      }
    } else if (*roc_cmd) {
      Manifest m("roc", argc, argv);
      auto [layout, ds] = roc_in.load(m);
      const std::vector<double> alphas = parse_values(alphas_text);
      const auto points = roc_sweep(ds, layout, roc_split.get(), roc_k, alphas, roc_q);
      ensure_directory(roc_out);
      write_stream_file(fs::path(roc_out) / "roc.csv", [&](std::ostream& os) { write_roc_csv(os, points); });
      m.doc["flags"]["k"] = roc_k;
      m.doc["flags"]["q"] = roc_q;
      m.doc["flags"]["alphas"] = alphas;
      roc_split.record(m);
      m.doc["reference"] = "random-guess diagonal: tpr = fpr";
      m.doc["outputs"] = ojson::array({"roc.csv"});
      m.write(fs::path(roc_out) / "manifest.json");
      out << "wrote " << points.size() << " ROC points to " << (fs::path(roc_out) / "roc.csv").string() << '\n';
    }
  } catch (const std::exception& e) {
    err << "astroknn: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace astroknn
