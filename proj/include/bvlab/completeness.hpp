#pragma once

#include "bvlab/contraction.hpp"
#include "bvlab/scalar.hpp"
#include "bvlab/space.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bvlab {

/// Bounds that discharge the "for all m" quantifiers beyond the recorded prefix.
struct TailCertificate {
  /// Strict bound: rho(u_m, u_j) < tail_upper(j, u_j) for every m > j.
  std::function<Scalar(std::size_t, const Point&)> tail_upper;
  /// Lower bound on inf over the whole range of rho(x, a); nullopt when not certified.
  std::function<std::optional<Scalar>(const Point&)> range_gap;
};

struct CauchySeed {
  std::string name;
  Space space;
  std::vector<Point> sequence;  // u_0 .. u_M, pairwise distinct
  std::optional<TailCertificate> certificate;
  /// Defaults carried by a seed file.
  Scalar b = Scalar(1) / 2;
  std::size_t member_count = 0;
  std::vector<Point> outsiders;

  std::optional<std::size_t> index_of(const Point& p) const;
  /// First `member_count` sequence points followed by the outsiders.
  std::vector<Point> default_sample() const;
};

/// One verified instance of the two index-selection inequalities.
struct BoundInstance {
  Point x;
  std::size_t chosen = 0;
  Scalar target;              // b*rho(u_{n0}, u_j) or b*D(x, A)
  std::optional<Scalar> tail;  // certified bound, when a certificate is present
  Scalar prefix_max;          // max over recorded m > j of rho(u_m, u_j)
};

struct OutsiderChoice {
  Point x;
  Scalar gap;  // D(x, A)
  bool gap_certified = false;
  std::size_t chosen = 0;
};

struct EscapeConstruction {
  SelfMap map = SelfMap::identity();
  std::vector<Point> sample;
  std::vector<std::pair<std::size_t, std::size_t>> member_choice;  // n0 -> n'0
  std::vector<OutsiderChoice> outsider_choice;
  std::vector<BoundInstance> bounds_used;
  /// True when some quantifier was only checked on the recorded prefix.
  bool prefix_relative = false;
};

/// Chooses the smallest admissible index for every sample point and assembles
/// the fixed-point-free map. Throws InvalidArgument unless 0 < b < 1,
/// NoAdmissibleIndex, ZeroDistanceToRange, or InvalidCertificate.
EscapeConstruction build_escape_map(const CauchySeed& seed, std::span<const Point> sample, const Scalar& b);

enum class PairClass { MemberMember, OutsiderOutsider, Mixed };

const char* to_string(PairClass kind);

struct EscapeVerdict {
  bool passed = true;
  std::optional<Point> fixed_point;
  ContractionVerdict kannan;
  /// Ordered pairs checked in each class of the case analysis.
  std::map<PairClass, std::size_t> coverage;
  std::map<PairClass, bool> class_passed;
};

/// Kannan condition with (b, 1 - b) on every ordered sample pair, plus absence of fixed points.
EscapeVerdict verify_escape_map(const EscapeConstruction& construction, const CauchySeed& seed, const Scalar& b);

/// Seed file: `name:`, `space:`, `b:`, `members:`, `outsiders: {..}` headers, a
/// `sequence:` line followed by one rational per line, then optional
/// `tail_upper: <expr in x, n>` and `range_gap: <point> <bound>` lines.
/// `resolve_space` maps the `space:` value to space-file text.
CauchySeed parse_seed(std::string_view source, const std::function<std::string(const std::string&)>& resolve_space);

/// inf over n >= 2 of |x - 1/n|.
Scalar harmonic_gap(const Scalar& x);

}  // namespace bvlab
