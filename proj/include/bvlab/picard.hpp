#pragma once

#include "bvlab/scalar.hpp"
#include "bvlab/space.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace bvlab {

struct FixedPointReached {
  Point point;
  std::size_t index = 0;
};

/// points[entry + period] repeats points[entry].
struct CycleDetected {
  std::size_t entry = 0;
  std::size_t period = 0;
};

struct BudgetExhausted {
  std::size_t steps = 0;
};

using OrbitStatus = std::variant<FixedPointReached, CycleDetected, BudgetExhausted>;

struct OrbitRecord {
  Point start;
  std::vector<Point> points;   // u_0 .. u_K
  std::vector<Scalar> s_seq;   // s_n = rho(u_n, u_{n+1}), one per recorded step
  std::optional<std::vector<Scalar>> t_seq;  // t_n = rho(u_n, z)
  OrbitStatus status;
  std::size_t budget = 0;

  bool absorbed() const noexcept { return !std::holds_alternative<BudgetExhausted>(status); }
};

std::string describe(const OrbitStatus& status);

/// Picard iteration u_{n+1} = T u_n for at most `budget` steps. A fixed point
/// or a repeated point ends the run early; T is applied once more to the last
/// recorded point so that an orbit landing on a fixed point at step K reports it.
OrbitRecord iterate(const Space& space, const SelfMap& map, const Point& start, std::size_t budget,
                    const std::optional<Point>& candidate_limit = std::nullopt);

/// u_n of the orbit, continuing an absorbed orbit periodically past its record.
const Point& orbit_point(const OrbitRecord& orbit, std::size_t n);

struct DecreaseVerdict {
  bool passed = true;
  bool vacuous = false;
  /// First n with s_{n+1} >= s_n.
  std::optional<std::size_t> first_failure;
};

/// Strict decrease of s_n up to absorption; cycles also compare the value
/// that wraps around to the cycle entry.
DecreaseVerdict verify_sn_strict_decrease(const OrbitRecord& orbit);

std::vector<Point> detect_fixed_points(const FiniteSpace& space, const SelfMap& map);
std::vector<Point> detect_fixed_points(std::span<const Point> sample, const SelfMap& map);

struct SuzukiWitness {
  Scalar delta;
  std::size_t start_index = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  Scalar premise;     // rho(u_n, u_m)
  Scalar conclusion;  // rho(u_{n+1}, u_{m+1})
};

struct SuzukiFinding {
  Scalar epsilon;
  bool supported = false;
  /// The first grid candidate (delta, N) that survived every pair.
  std::optional<Scalar> delta;
  std::optional<std::size_t> start_index;
  /// One violating pair per candidate when refuted.
  std::vector<SuzukiWitness> witnesses;
  std::size_t horizon = 0;
};

struct SuzukiOptions {
  Scalar factor = 1;
  std::vector<Scalar> epsilons;
  /// Empty means eps * 2^-k for k = 0..6.
  std::vector<Scalar> deltas;
  std::vector<std::size_t> start_indices;
  /// Zero means the orbit's budget.
  std::size_t horizon = 0;

  static std::vector<Scalar> default_epsilons();
  static std::vector<std::size_t> default_start_indices();
  static std::vector<Scalar> default_deltas(const Scalar& epsilon);
};

/// For each epsilon, scans (delta, N) with delta outer and N inner and tests
/// rho(u_n,u_m) < factor*eps + delta  =>  rho(u_{n+1},u_{m+1}) <= eps
/// over N <= n < m < horizon. Throws OrbitTooShort for unabsorbed orbits
/// shorter than max(N) + 2 or horizon.
std::vector<SuzukiFinding> check_suzuki(const Space& space, const OrbitRecord& orbit, const SuzukiOptions& options);

/// (N, max rho(u_n, u_m) over n != m >= N within the recorded window).
std::vector<std::pair<std::size_t, Scalar>> cauchy_profile(const Space& space, const OrbitRecord& orbit,
                                                           std::span<const std::size_t> tail_starts);

}  // namespace bvlab
