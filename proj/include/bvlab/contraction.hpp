#pragma once

#include "bvlab/scalar.hpp"
#include "bvlab/space.hpp"

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace bvlab {

enum class ConditionKind { Banach, Reich, CiricMax, Kannan };

const char* to_string(ConditionKind kind);

/// Non-negative weights on rho(x,y), rho(x,Tx), rho(y,Ty).
struct ReichCoefficients {
  Scalar a = 0;
  Scalar b = 0;
  Scalar c = 0;

  /// a, b, c >= 0 with a + b + c = 1; throws InvalidArgument.
  static ReichCoefficients reich(const Scalar& a, const Scalar& b, const Scalar& c);
  /// a = 0, b + c = 1.
  static ReichCoefficients kannan(const Scalar& b, const Scalar& c);
};

struct ContractionWitness {
  Point x;
  Point y;
  Scalar lhs;  // rho(Tx, Ty)
  Scalar rhs;
};

struct ContractionVerdict {
  ConditionKind kind = ConditionKind::Banach;
  bool passed = true;
  std::optional<ContractionWitness> witness;  // first violation, lhs >= rhs
  std::size_t pairs_checked = 0;
  /// True when the space is generated and only a finite sample was checked.
  bool sample_relative = false;
};

// Every checker scans distinct pairs of the sample in sample order; ties
// (lhs == rhs) fail. The FiniteSpace overloads check the whole space and
// throw ImageEscapesSample when T leaves it. Reich and Kannan run over
// ordered pairs, Banach and Ciric-max over unordered ones.

ContractionVerdict check_banach_contractive(const FiniteSpace& space, const SelfMap& map);
ContractionVerdict check_banach_contractive(const Space& space, const SelfMap& map, std::span<const Point> sample);

ContractionVerdict check_reich(const FiniteSpace& space, const SelfMap& map, const ReichCoefficients& coeffs);
ContractionVerdict check_reich(const Space& space, const SelfMap& map, std::span<const Point> sample,
                               const ReichCoefficients& coeffs);

ContractionVerdict check_ciric_max(const FiniteSpace& space, const SelfMap& map);
ContractionVerdict check_ciric_max(const Space& space, const SelfMap& map, std::span<const Point> sample);

ContractionVerdict check_kannan(const FiniteSpace& space, const SelfMap& map, const Scalar& b, const Scalar& c);
ContractionVerdict check_kannan(const Space& space, const SelfMap& map, std::span<const Point> sample,
                                const Scalar& b, const Scalar& c);

struct ReichSearchResult {
  bool feasible = false;
  /// Maximiser of the minimum slack over the closed simplex.
  ReichCoefficients coefficients;
  /// Minimum slack at `coefficients`; nullopt when the sample has no pairs.
  std::optional<Scalar> min_slack;
  /// Ordered pairs whose slack is tight at the optimum (the infeasibility certificate).
  std::vector<std::pair<Point, Point>> tight_pairs;
};

/// Decides whether some (a, b, c) on the simplex makes every ordered-pair
/// Reich inequality strict, by exact max-min slack over the simplex.
ReichSearchResult find_reich_coefficients(const FiniteSpace& space, const SelfMap& map);
ReichSearchResult find_reich_coefficients(const Space& space, const SelfMap& map, std::span<const Point> sample);

}  // namespace bvlab
