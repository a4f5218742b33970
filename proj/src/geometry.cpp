#include "astroknn/geometry.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace astroknn {

namespace {

constexpr double kNeighborRelTol = 1e-6;

double angle_ccw(Vec2 p) {
  double a = std::atan2(p.y, p.x);
  if (a < 0.0) a += 2.0 * M_PI;
  return a;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
  if (bound == 0) throw Error("uniform_index: empty range");
  const std::uint64_t limit = Rng::max() - Rng::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SwarmLayout::SwarmLayout(double pitch, std::vector<AstrobotSpec> astrobots,
                         std::vector<std::vector<int>> neighbors)
    : pitch_(pitch), astrobots_(std::move(astrobots)), neighbors_(std::move(neighbors)) {
  if (!(pitch_ > 0.0)) throw Error("layout: pitch must be positive");
  if (neighbors_.size() != astrobots_.size()) throw Error("layout: neighbor table size mismatch");
  const int n = static_cast<int>(astrobots_.size());
  for (int i = 0; i < n; ++i) {
    const auto& a = astrobots_[i];
    if (a.id != i) throw Error("layout: astrobot ids must be 0..n-1 in order");
    if (!(a.l1 > 0.0) || !(a.l2 > 0.0)) throw Error("layout: arm lengths must be positive");
    if (a.l1 + a.l2 < pitch_) throw Error("layout: arms cannot reach a neighbor's centroid");
    auto& nb = neighbors_[i];
    std::sort(nb.begin(), nb.end());
    if (std::adjacent_find(nb.begin(), nb.end()) != nb.end())
      throw Error("layout: duplicate neighbor of astrobot " + std::to_string(i));
    if (nb.size() > 6) throw Error("layout: astrobot " + std::to_string(i) + " has more than 6 neighbors");
    for (int j : nb) {
      if (j < 0 || j >= n || j == i) throw Error("layout: bad neighbor id for astrobot " + std::to_string(i));
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j : neighbors_[i]) {
      if (!std::binary_search(neighbors_[j].begin(), neighbors_[j].end(), i))
        throw Error("layout: neighbor graph is not symmetric");
    }
  }
}

SwarmLayout SwarmLayout::from_centers(double pitch, std::vector<AstrobotSpec> astrobots) {
  const std::size_t n = astrobots.size();
  std::vector<std::vector<int>> neighbors(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = norm(astrobots[i].center - astrobots[j].center);
      if (std::abs(d - pitch) <= pitch * kNeighborRelTol) {
        neighbors[i].push_back(static_cast<int>(j));
        neighbors[j].push_back(static_cast<int>(i));
      }
    }
  }
  return SwarmLayout(pitch, std::move(astrobots), std::move(neighbors));
}

const AstrobotSpec& SwarmLayout::astrobot(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= astrobots_.size())
    throw Error("unknown astrobot id " + std::to_string(id));
  return astrobots_[id];
}

const std::vector<int>& SwarmLayout::neighbors(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= neighbors_.size())
    throw Error("unknown astrobot id " + std::to_string(id));
  return neighbors_[id];
}

std::size_t hex_size(int rings) {
  if (rings < 0) throw Error("rings must be non-negative");
  const auto r = static_cast<std::size_t>(rings);
  return 1 + 3 * r * (r + 1);
}

SwarmLayout build_hex_swarm(int rings, std::optional<std::size_t> count, double pitch, double l1,
                            double l2) {
  if (!(pitch > 0.0)) throw Error("pitch must be positive");
  const std::size_t full = hex_size(rings);
  const std::size_t target = count.value_or(full);
  if (target > full) throw Error("insufficient rings");
  if (target == 0) throw Error("count must be at least 1");

  struct Site {
    int ring;
    double angle;
    Vec2 pos;
  };
  std::vector<Site> sites;
  sites.reserve(full);
  const double h = std::sqrt(3.0) / 2.0;
  for (int q = -rings; q <= rings; ++q) {
    for (int r = -rings; r <= rings; ++r) {
      const int ring = std::max({std::abs(q), std::abs(r), std::abs(q + r)});
      if (ring > rings) continue;
      const Vec2 pos{pitch * (q + 0.5 * r), pitch * h * r};
      sites.push_back({ring, ring == 0 ? 0.0 : angle_ccw(pos), pos});
    }
  }

  // Trim order: outermost ring first, clockwise from angle 0.
  auto clockwise = [](double a) { return a == 0.0 ? 0.0 : 2.0 * M_PI - a; };
  std::sort(sites.begin(), sites.end(), [&](const Site& a, const Site& b) {
    if (a.ring != b.ring) return a.ring > b.ring;
    return clockwise(a.angle) < clockwise(b.angle);
  });
  sites.erase(sites.begin(), sites.begin() + static_cast<std::ptrdiff_t>(full - target));

  std::sort(sites.begin(), sites.end(), [](const Site& a, const Site& b) {
    if (a.ring != b.ring) return a.ring < b.ring;
    return a.angle < b.angle;
  });
  std::vector<AstrobotSpec> bots;
  bots.reserve(sites.size());
  for (const auto& s : sites) {
    bots.push_back({static_cast<int>(bots.size()), s.pos, l1, l2});
  }
  return SwarmLayout::from_centers(pitch, std::move(bots));
}

Neighborhood neighborhood_of(const SwarmLayout& layout, int id) {
  Neighborhood nb;
  nb.center_id = id;
  const auto& adj = layout.neighbors(id);
  nb.member_ids.reserve(adj.size() + 1);
  nb.member_ids.push_back(id);
  nb.member_ids.insert(nb.member_ids.end(), adj.begin(), adj.end());
  return nb;
}

Vec2 sample_target(const AstrobotSpec& spec, Rng& rng) {
  const double r0 = spec.inner_radius();
  const double r1 = spec.outer_radius();
  const double u = uniform01(rng);
  const double a = 2.0 * M_PI * uniform01(rng);
  const double r = std::sqrt(r0 * r0 + u * (r1 * r1 - r0 * r0));
  return spec.center + Vec2{r * std::cos(a), r * std::sin(a)};
}

bool reachable(const AstrobotSpec& spec, Vec2 target, double tol) {
  const double d = norm(target - spec.center);
  return d >= spec.inner_radius() - tol && d <= spec.outer_radius() + tol;
}

ArmPose inverse_kinematics(const AstrobotSpec& spec, Vec2 target) {
  if (!reachable(spec, target)) throw Error("out of workspace");
  const Vec2 rel = target - spec.center;
  const double d = norm(rel);
  const double c = std::clamp((d * d - spec.l1 * spec.l1 - spec.l2 * spec.l2) / (2.0 * spec.l1 * spec.l2),
                              -1.0, 1.0);
  ArmPose pose;
  pose.phi = std::acos(c);
  if (d < 1e-12) {
    pose.theta = 0.0;
    return pose;
  }
  pose.theta = std::atan2(rel.y, rel.x) -
               std::atan2(spec.l2 * std::sin(pose.phi), spec.l1 + spec.l2 * std::cos(pose.phi));
  if (pose.theta <= -M_PI) pose.theta += 2.0 * M_PI;
  if (pose.theta > M_PI) pose.theta -= 2.0 * M_PI;
  return pose;
}

ArmChain arm_chain(const AstrobotSpec& spec, const ArmPose& pose) {
  const Vec2 elbow = spec.center + Vec2{spec.l1 * std::cos(pose.theta), spec.l1 * std::sin(pose.theta)};
  const double tip = pose.theta + pose.phi;
  const Vec2 ferrule = elbow + Vec2{spec.l2 * std::cos(tip), spec.l2 * std::sin(tip)};
  return {spec.center, elbow, ferrule};
}

double segment_distance(Vec2 p0, Vec2 p1, Vec2 q0, Vec2 q1) {
  const int o1 = sign(cross(p1 - p0, q0 - p0));
  const int o2 = sign(cross(p1 - p0, q1 - p0));
  const int o3 = sign(cross(q1 - q0, p0 - q0));
  const int o4 = sign(cross(q1 - q0, p1 - q0));
  if (o1 * o2 < 0 && o3 * o4 < 0) return 0.0;
  return std::min({point_segment_distance(p0, q0, q1), point_segment_distance(p1, q0, q1),
                   point_segment_distance(q0, p0, p1), point_segment_distance(q1, p0, p1)});
}

double min_chain_distance(const ArmChain& a, const ArmChain& b) {
  double best = segment_distance(a[0], a[1], b[0], b[1]);
  best = std::min(best, segment_distance(a[0], a[1], b[1], b[2]));
  best = std::min(best, segment_distance(a[1], a[2], b[0], b[1]));
  best = std::min(best, segment_distance(a[1], a[2], b[1], b[2]));
  return best;
}

}  // namespace astroknn
