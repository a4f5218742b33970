#include "astroknn/dataset.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "astroknn/layout_io.hpp"
#include "json.hpp"

namespace astroknn {

using ojson = nlohmann::ordered_json;

namespace {

ojson sim_params_json(const SimParams& p) {
  ojson j;
  j["omega_max"] = p.omega_max;
  j["eps_safety"] = p.eps_safety;
  j["tol_converge"] = p.tol_converge;
  j["max_ticks"] = p.max_ticks;
  j["deadlock_window"] = p.deadlock_window;
  j["priority_rule"] = std::string(to_string(p.priority_rule));
  return j;
}

SimParams sim_params_from(const ojson& j) {
  SimParams p;
  p.omega_max = j.at("omega_max").get<double>();
  p.eps_safety = j.at("eps_safety").get<double>();
  p.tol_converge = j.at("tol_converge").get<double>();
  p.max_ticks = j.at("max_ticks").get<int>();
  p.deadlock_window = j.at("deadlock_window").get<int>();
  p.priority_rule = priority_rule_from_string(j.at("priority_rule").get<std::string>());
  return p;
}

ojson configuration_json(const Configuration& cfg, std::size_t id) {
  ojson j;
  j["id"] = id;
  ojson targets = ojson::array();
  for (const auto& t : cfg.targets) targets.push_back({t.x, t.y});
  j["targets"] = std::move(targets);
  if (cfg.ground_truth) {
    ojson g = ojson::array();
    for (Label b : *cfg.ground_truth) g.push_back(static_cast<int>(b));
    j["g"] = std::move(g);
  }
  return j;
}

Configuration configuration_from(const ojson& j) {
  Configuration cfg;
  for (const auto& t : j.at("targets")) {
    if (!t.is_array() || t.size() != 2) throw Error("target must be an [x, y] pair");
    cfg.targets.push_back({t[0].get<double>(), t[1].get<double>()});
  }
  if (j.contains("g")) {
    Labels g;
    for (const auto& b : j.at("g")) {
      const int v = b.get<int>();
      if (v != 0 && v != 1) throw Error("ground truth entries must be 0 or 1");
      g.push_back(static_cast<Label>(v));
    }
    cfg.ground_truth = std::move(g);
  }
  return cfg;
}

}  // namespace

std::string configuration_to_json(const Configuration& cfg, std::size_t id) {
  return configuration_json(cfg, id).dump();
}

Configuration configuration_from_json(const std::string& text) {
  try {
    return configuration_from(ojson::parse(text));
  } catch (const ojson::exception& e) {
    throw Error(std::string("configuration: malformed JSON: ") + e.what());
  }
}

std::string dataset_to_jsonl(const Dataset& ds) {
  ojson header;
  header["layout_fingerprint"] = ds.layout_fingerprint;
  header["sim_params"] = sim_params_json(ds.sim_params);
  header["seed"] = ds.seed;
  header["n"] = ds.population;
  header["count"] = ds.size();
  std::string out = header.dump();
  out += '\n';
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out += configuration_json(ds.configurations[i], i).dump();
    out += '\n';
  }
  return out;
}

Dataset dataset_from_jsonl(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  Dataset ds;
  std::size_t declared = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::string where = "dataset line " + std::to_string(line_no) + ": ";
    ojson j;
    try {
      j = ojson::parse(line);
    } catch (const ojson::exception& e) {
      throw Error(where + "malformed JSON (" + e.what() + ")");
    }
    try {
      if (!have_header) {
        ds.layout_fingerprint = j.at("layout_fingerprint").get<std::string>();
        ds.sim_params = sim_params_from(j.at("sim_params"));
        ds.seed = j.at("seed").get<std::uint64_t>();
        ds.population = j.at("n").get<std::size_t>();
        declared = j.at("count").get<std::size_t>();
        have_header = true;
        continue;
      }
      if (j.contains("layout_fingerprint")) {
        if (j["layout_fingerprint"].get<std::string>() != ds.layout_fingerprint)
          throw Error("fingerprint mismatch (mixed files)");
        throw Error("unexpected second header record");
      }
      const auto id = j.at("id").get<std::size_t>();
      if (id != ds.size()) throw Error("expected id " + std::to_string(ds.size()) + ", got " + std::to_string(id));
      Configuration cfg = configuration_from(j);
      if (cfg.population() != ds.population) throw Error("population differs from header n");
      if (!cfg.ground_truth) throw Error("missing ground truth");
      if (cfg.ground_truth->size() != ds.population) throw Error("ground truth length differs from header n");
      ds.configurations.push_back(std::move(cfg));
    } catch (const Error& e) {
      throw Error(where + e.what());
    } catch (const ojson::exception& e) {
      throw Error(where + "malformed record (" + e.what() + ")");
    }
  }
  if (!have_header) throw Error("dataset: missing header record");
  if (declared != ds.size())
    throw Error("dataset: header count " + std::to_string(declared) + " but " + std::to_string(ds.size()) +
                " configuration records");
  return ds;
}

void save_dataset(const Dataset& ds, const std::filesystem::path& path) {
  ds.validate();
  write_text_file(path, dataset_to_jsonl(ds));
}

Dataset load_dataset(const std::filesystem::path& path, const std::optional<std::string>& expected_fingerprint) {
  Dataset ds = dataset_from_jsonl(read_text_file(path));
  if (expected_fingerprint && *expected_fingerprint != ds.layout_fingerprint)
    throw Error("dataset " + path.string() + ": layout fingerprint mismatch (dataset " + ds.layout_fingerprint +
                ", layout " + *expected_fingerprint + ")");
  return ds;
}

void SplitPlan::validate(std::size_t dataset_size) const {
  if (iterations < 1) throw Error("split plan: iterations must be at least 1");
  if (test_count < 1 || test_count >= dataset_size)
    throw Error("split plan: test count " + std::to_string(test_count) + " must lie in [1, " +
                std::to_string(dataset_size) + ")");
}

std::vector<Split> monte_carlo_splits(std::size_t dataset_size, const SplitPlan& plan) {
  plan.validate(dataset_size);
  Rng rng(mix_seed(plan.seed));
  std::vector<Split> splits;
  splits.reserve(plan.iterations);
  std::vector<std::size_t> ids(dataset_size);
  std::vector<char> in_test(dataset_size);
  for (std::size_t it = 0; it < plan.iterations; ++it) {
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    // Partial Fisher-Yates: the first test_count slots are the draw.
    for (std::size_t i = 0; i < plan.test_count; ++i) {
      const auto j = i + static_cast<std::size_t>(uniform_index(rng, dataset_size - i));
      std::swap(ids[i], ids[j]);
    }
    Split s;
    s.test.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(plan.test_count));
    std::sort(s.test.begin(), s.test.end());
    std::fill(in_test.begin(), in_test.end(), 0);
    for (std::size_t id : s.test) in_test[id] = 1;
    s.train.reserve(dataset_size - plan.test_count);
    for (std::size_t id = 0; id < dataset_size; ++id) {
      if (!in_test[id]) s.train.push_back(id);
    }
    splits.push_back(std::move(s));
  }
  return splits;
}

}  // namespace astroknn
