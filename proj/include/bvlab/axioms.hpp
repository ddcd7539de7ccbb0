#pragma once

#include "bvlab/scalar.hpp"
#include "bvlab/space.hpp"

#include <optional>
#include <vector>

namespace bvlab {

/// v interior points, relaxation factor s.
struct BvsParams {
  int v = 1;
  Scalar s = 1;

  /// Throws InvalidArgument unless v >= 1 and s >= 1.
  static BvsParams make(int v, const Scalar& s);
};

enum class AxiomOutcome { Pass, PassVacuous, Fail };

const char* to_string(AxiomOutcome outcome);

/// x, y and the interior chain x -> u_1 -> ... -> u_v -> y.
struct PolygonWitness {
  Point x;
  Point y;
  std::vector<Point> interior;
  Scalar lhs;        // rho(x, y)
  Scalar chain_sum;  // rho(x, u_1) + ... + rho(u_v, y)
  Scalar rhs;        // s * chain_sum (for minimal_s: the chain sum itself)
};

struct AxiomVerdict {
  AxiomOutcome outcome = AxiomOutcome::Pass;
  std::optional<PolygonWitness> witness;
};

/// Polygon inequality rho(x,y) <= s * chain over every pair and every ordered
/// tuple of v distinct interior points. On failure the witness is the first
/// violation in (pair, lexicographic tuple) order.
AxiomVerdict check_bvs(const FiniteSpace& space, const BvsParams& params);

struct MinimalS {
  Scalar s_min;      // max(raw_ratio, 1)
  Scalar raw_ratio;  // max over pairs of rho(x,y) / shortest v-chain
  PolygonWitness witness;
};

/// Least admissible s for this v, or nullopt when fewer than v + 2 points exist.
std::optional<MinimalS> minimal_s(const FiniteSpace& space, int v);

struct ClassEntry {
  int v = 1;
  std::optional<MinimalS> result;  // nullopt = vacuous
};

std::vector<ClassEntry> classify(const FiniteSpace& space, int v_max);

}  // namespace bvlab
