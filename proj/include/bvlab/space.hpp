#pragma once

#include "bvlab/scalar.hpp"

#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace bvlab {

using DistanceMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// A carrier element. Two points are the same point iff their labels agree;
/// for numeric carriers the label is the canonical text of the value.
struct Point {
  std::string label;
  std::optional<Scalar> value;
  std::optional<std::int64_t> index;

  static Point of_value(const Scalar& value);
  static Point of_index(std::int64_t index, const Scalar& value);
  /// Label-only point; the label is parsed as a value when it is a rational.
  static Point named(std::string label);

  friend bool operator==(const Point& a, const Point& b) { return a.label == b.label; }
};

std::string describe(std::span<const Point> points);

/// Validated finite distance table with labelled points.
class FiniteSpace {
 public:
  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<Point>& points() const noexcept { return points_; }
  const Point& point(std::size_t i) const { return points_.at(i); }
  const DistanceMatrix& table() const noexcept { return table_; }
  const Scalar& at(std::size_t i, std::size_t j) const { return table_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)); }

  std::optional<std::size_t> index_of(const Point& p) const;
  bool contains(const Point& p) const { return index_of(p).has_value(); }
  /// Throws PointNotInCarrier.
  Scalar distance(const Point& p, const Point& q) const;

 private:
  friend FiniteSpace make_finite_space(std::vector<Point> points, DistanceMatrix table);
  FiniteSpace() = default;

  std::vector<Point> points_;
  DistanceMatrix table_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

/// Validates diagonal-zero, non-negativity, zero-only-on-diagonal and symmetry,
/// scanning cells in row-major order and throwing the first violation.
FiniteSpace make_finite_space(std::vector<Point> points, DistanceMatrix table);
FiniteSpace make_finite_space(const std::vector<std::string>& labels, DistanceMatrix table);

/// Rows given as nested lists; convenience for tests and fixtures.
DistanceMatrix table_from_rows(const std::vector<std::vector<Scalar>>& rows);

/// Countable carrier: either an index family n -> value(n) for n in [first, last],
/// or the set of rationals satisfying a membership predicate.
class Carrier {
 public:
  using ValueRule = std::function<Scalar(std::int64_t)>;
  using Membership = std::function<bool(const Scalar&)>;

  static Carrier indexed(std::int64_t first, std::optional<std::int64_t> last, ValueRule rule);
  static Carrier valued(Membership membership);

  bool is_indexed() const noexcept { return indexed_; }
  std::int64_t first_index() const noexcept { return first_; }
  std::optional<std::int64_t> last_index() const noexcept { return last_; }

  Point at_index(std::int64_t index) const;
  bool contains(const Point& p) const;
  /// Point carrying `value`; indexed carriers are scanned from the first index.
  Point resolve(const Scalar& value) const;

  static constexpr std::int64_t kResolveScanLimit = 1 << 16;

 private:
  bool indexed_ = false;
  std::int64_t first_ = 0;
  std::optional<std::int64_t> last_;
  ValueRule rule_;
  Membership membership_;
};

/// Countable space with a rule-defined distance. Axioms are only checked on
/// the pairs actually evaluated.
class GeneratedSpace {
 public:
  using Rule = std::function<Scalar(const Point&, const Point&)>;

  GeneratedSpace(std::string name, Carrier carrier, Rule rule, std::string completeness_note = "unknown");

  const std::string& name() const noexcept { return name_; }
  const Carrier& carrier() const noexcept { return carrier_; }
  const std::string& completeness_note() const noexcept { return completeness_note_; }

  bool contains(const Point& p) const { return carrier_.contains(p); }
  /// Throws PointNotInCarrier or LazyAxiomViolation.
  Scalar distance(const Point& p, const Point& q) const;

 private:
  std::string name_;
  Carrier carrier_;
  Rule rule_;
  std::string completeness_note_;
};

using Space = std::variant<FiniteSpace, GeneratedSpace>;

Scalar distance(const Space& space, const Point& p, const Point& q);
bool contains(const Space& space, const Point& p);

struct IndexRange {
  std::int64_t first = 0;
  std::int64_t last = -1;
};

/// Window onto a generated carrier: an inclusive index range or explicit values.
using Selector = std::variant<IndexRange, std::vector<Scalar>>;

/// "2..9" or "{0, 1/4, 1/2}"; throws InvalidArgument.
Selector parse_selector(std::string_view text);
std::string to_string(const Selector& selector);

std::vector<Point> select_points(const GeneratedSpace& space, const Selector& selector);
FiniteSpace truncate(const GeneratedSpace& space, const Selector& selector);
FiniteSpace truncate(const GeneratedSpace& space, std::span<const Point> points);

/// Total self-map, given as a lookup table or a rule.
class SelfMap {
 public:
  using Rule = std::function<Point(const Point&)>;

  static SelfMap table(std::string name, const std::vector<std::pair<Point, Point>>& entries);
  /// images[i] is the index of the image of space.point(i).
  static SelfMap from_indices(const FiniteSpace& space, const std::vector<std::size_t>& images,
                              std::string name = "T");
  static SelfMap piecewise(std::string name, Rule rule);
  static SelfMap identity();
  static SelfMap constant(Point target);

  const std::string& name() const noexcept { return name_; }
  /// Throws PointNotInCarrier for points outside a table's domain.
  Point apply(const Point& p) const;

 private:
  SelfMap(std::string name, Rule rule) : name_(std::move(name)), rule_(std::move(rule)) {}
  std::string name_;
  Rule rule_;
};

inline Point apply(const SelfMap& map, const Point& p) { return map.apply(p); }

}  // namespace bvlab
