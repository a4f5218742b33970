#include "astroknn/layout_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace astroknn {

using nlohmann::json;

std::string layout_to_json(const SwarmLayout& layout, int indent) {
  json j;
  j["pitch"] = layout.pitch();
  json bots = json::array();
  json neighbors = json::object();
  for (const auto& a : layout.astrobots()) {
    bots.push_back({{"id", a.id}, {"x", a.center.x}, {"y", a.center.y}, {"l1", a.l1}, {"l2", a.l2}});
    neighbors[std::to_string(a.id)] = layout.neighbors(a.id);
  }
  j["astrobots"] = std::move(bots);
  j["neighbors"] = std::move(neighbors);
  return j.dump(indent);
}

SwarmLayout layout_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
    std::vector<AstrobotSpec> bots;
    for (const auto& b : j.at("astrobots")) {
      bots.push_back({b.at("id").get<int>(), {b.at("x").get<double>(), b.at("y").get<double>()},
                      b.at("l1").get<double>(), b.at("l2").get<double>()});
    }
    std::vector<std::vector<int>> neighbors(bots.size());
    for (const auto& [key, ids] : j.at("neighbors").items()) {
      const int id = std::stoi(key);
      if (id < 0 || static_cast<std::size_t>(id) >= bots.size())
        throw Error("layout: neighbor entry for unknown id " + key);
      neighbors[id] = ids.get<std::vector<int>>();
    }
    return SwarmLayout(j.at("pitch").get<double>(), std::move(bots), std::move(neighbors));
  } catch (const json::exception& e) {
    throw Error(std::string("layout: malformed JSON: ") + e.what());
  }
}

void save_layout(const SwarmLayout& layout, const std::filesystem::path& path) {
  write_text_file(path, layout_to_json(layout, 1) + "\n");
}

SwarmLayout load_layout(const std::filesystem::path& path) { return layout_from_json(read_text_file(path)); }

std::string layout_fingerprint(const SwarmLayout& layout) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : layout_to_json(layout)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace astroknn
