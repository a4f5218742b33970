#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace astroknn {

/// Base error for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::sqrt(a.x * a.x + a.y * a.y); }

/// Seeded random source shared by the simulator and the split planner.
/// mt19937_64 output is fixed by the standard; the helpers below avoid the
/// implementation-defined std distributions so datasets are portable.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits of one draw.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, bound) by rejection (bound > 0).
std::uint64_t uniform_index(Rng& rng, std::uint64_t bound);

/// splitmix64 finalizer, used to decorrelate derived seeds.
std::uint64_t mix_seed(std::uint64_t x);

struct AstrobotSpec {
  int id = 0;
  Vec2 center;
  double l1 = 0.0;
  double l2 = 0.0;

  double inner_radius() const { return std::abs(l1 - l2); }
  double outer_radius() const { return l1 + l2; }
  friend bool operator==(const AstrobotSpec&, const AstrobotSpec&) = default;
};

/// theta is absolute, phi is relative to the first arm. Folded: theta = 0, phi = pi.
struct ArmPose {
  double theta = 0.0;
  double phi = 0.0;

  static ArmPose folded() { return {0.0, M_PI}; }
};

/// Center, elbow, ferrule.
using ArmChain = std::array<Vec2, 3>;

struct Neighborhood {
  int center_id = 0;
  std::vector<int> member_ids;  // center first, then neighbors ascending
};

/// Immutable hexagonal placement of astrobots plus the adjacency graph.
class SwarmLayout {
 public:
  SwarmLayout() = default;
  /// Validates ids (0..n-1 in order), arm lengths and graph symmetry.
  SwarmLayout(double pitch, std::vector<AstrobotSpec> astrobots,
              std::vector<std::vector<int>> neighbors);

  /// Computes the neighbor graph from center distances.
  static SwarmLayout from_centers(double pitch, std::vector<AstrobotSpec> astrobots);

  double pitch() const { return pitch_; }
  std::size_t size() const { return astrobots_.size(); }
  const std::vector<AstrobotSpec>& astrobots() const { return astrobots_; }
  const AstrobotSpec& astrobot(int id) const;
  const std::vector<int>& neighbors(int id) const;
  int degree(int id) const { return static_cast<int>(neighbors(id).size()); }

  friend bool operator==(const SwarmLayout&, const SwarmLayout&) = default;

 private:
  double pitch_ = 0.0;
  std::vector<AstrobotSpec> astrobots_;
  std::vector<std::vector<int>> neighbors_;
};

/// Number of sites in a full hexagon with the given number of rings.
std::size_t hex_size(int rings);

/// Centered hexagonal swarm, optionally trimmed clockwise from angle 0 on
/// the outermost ring down to `count` astrobots.
SwarmLayout build_hex_swarm(int rings, std::optional<std::size_t> count, double pitch, double l1,
                            double l2);

Neighborhood neighborhood_of(const SwarmLayout& layout, int id);

/// Uniform by area over the reachable annulus of `spec`.
Vec2 sample_target(const AstrobotSpec& spec, Rng& rng);

bool reachable(const AstrobotSpec& spec, Vec2 target, double tol = 1e-9);

/// Elbow-positive solution (phi in [0, pi]). Throws "out of workspace".
ArmPose inverse_kinematics(const AstrobotSpec& spec, Vec2 target);

ArmChain arm_chain(const AstrobotSpec& spec, const ArmPose& pose);

double segment_distance(Vec2 p0, Vec2 p1, Vec2 q0, Vec2 q1);

/// Minimum Euclidean distance between two polylines (all segment pairs).
double min_chain_distance(const ArmChain& a, const ArmChain& b);

}  // namespace astroknn
