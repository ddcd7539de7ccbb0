#include "bvlab/space.hpp"

#include "bvlab/errors.hpp"

#include <memory>
#include <sstream>

namespace bvlab {

Point Point::of_value(const Scalar& value) { return Point{to_string(value), value, std::nullopt}; }

Point Point::of_index(std::int64_t index, const Scalar& value) { return Point{to_string(value), value, index}; }

Point Point::named(std::string label) {
  auto value = parse_scalar(label);
  if (value) return Point{to_string(*value), value, std::nullopt};
  return Point{std::move(label), std::nullopt, std::nullopt};
}

std::string describe(std::span<const Point> points) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) out << ", ";
    out << points[i].label;
  }
  out << '}';
  return out.str();
}

std::optional<std::size_t> FiniteSpace::index_of(const Point& p) const {
  auto it = lookup_.find(p.label);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

Scalar FiniteSpace::distance(const Point& p, const Point& q) const {
  auto i = index_of(p);
  if (!i) throw PointNotInCarrier(p.label);
  auto j = index_of(q);
  if (!j) throw PointNotInCarrier(q.label);
  return at(*i, *j);
}

FiniteSpace make_finite_space(std::vector<Point> points, DistanceMatrix table) {
  const auto n = points.size();
  if (n == 0) throw InvalidArgument("a space needs at least one point");
  if (static_cast<std::size_t>(table.rows()) != n || static_cast<std::size_t>(table.cols()) != n) {
    throw InvalidArgument("table shape does not match the number of labels");
  }
  FiniteSpace space;
  for (std::size_t i = 0; i < n; ++i) {
    if (!space.lookup_.emplace(points[i].label, i).second) {
      throw InvalidArgument("duplicate point label: " + points[i].label);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (table(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) != 0) throw NonzeroDiagonal(i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Scalar& upper = table(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      const Scalar& lower = table(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
      if (upper < 0) throw NegativeDistance(i, j);
      if (lower < 0) throw NegativeDistance(j, i);
      if (upper == 0) throw ZeroOffDiagonal(i, j);
      if (lower == 0) throw ZeroOffDiagonal(j, i);
      if (upper != lower) throw AsymmetricTable(i, j);
    }
  }
  space.points_ = std::move(points);
  space.table_ = std::move(table);
  return space;
}

FiniteSpace make_finite_space(const std::vector<std::string>& labels, DistanceMatrix table) {
  std::vector<Point> points;
  points.reserve(labels.size());
  for (const auto& label : labels) points.push_back(Point::named(label));
  return make_finite_space(std::move(points), std::move(table));
}

DistanceMatrix table_from_rows(const std::vector<std::vector<Scalar>>& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  DistanceMatrix table(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != n) {
      throw InvalidArgument("distance table must be square");
    }
    for (Eigen::Index j = 0; j < n; ++j) table(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return table;
}

// Carrier

Carrier Carrier::indexed(std::int64_t first, std::optional<std::int64_t> last, ValueRule rule) {
  if (last && *last < first) throw InvalidArgument("empty index family");
  Carrier c;
  c.indexed_ = true;
  c.first_ = first;
  c.last_ = last;
  c.rule_ = std::move(rule);
  return c;
}

Carrier Carrier::valued(Membership membership) {
  Carrier c;
  c.membership_ = std::move(membership);
  return c;
}

Point Carrier::at_index(std::int64_t index) const {
  if (!indexed_) throw InvalidArgument("carrier is not an indexed family");
  if (index < first_ || (last_ && index > *last_)) throw PointNotInCarrier("#" + std::to_string(index));
  return Point::of_index(index, rule_(index));
}

bool Carrier::contains(const Point& p) const {
  if (indexed_) {
    if (!p.index || *p.index < first_ || (last_ && *p.index > *last_)) return false;
    return to_string(rule_(*p.index)) == p.label;
  }
  return p.value.has_value() && membership_(*p.value);
}

Point Carrier::resolve(const Scalar& value) const {
  if (!indexed_) {
    if (!membership_(value)) throw PointNotInCarrier(to_string(value));
    return Point::of_value(value);
  }
  const std::int64_t stop = last_ ? *last_ : first_ + kResolveScanLimit;
  for (std::int64_t n = first_; n <= stop; ++n) {
    if (rule_(n) == value) return Point::of_index(n, value);
  }
  throw PointNotInCarrier(to_string(value));
}

// GeneratedSpace

GeneratedSpace::GeneratedSpace(std::string name, Carrier carrier, Rule rule, std::string completeness_note)
    : name_(std::move(name)),
      carrier_(std::move(carrier)),
      rule_(std::move(rule)),
      completeness_note_(std::move(completeness_note)) {}

Scalar GeneratedSpace::distance(const Point& p, const Point& q) const {
  if (!contains(p)) throw PointNotInCarrier(p.label);
  if (!contains(q)) throw PointNotInCarrier(q.label);
  Scalar forward = rule_(p, q);
  if (p == q) {
    if (forward != 0) throw LazyAxiomViolation(p.label, q.label, "nonzero self-distance " + to_string(forward));
    return forward;
  }
  if (forward < 0) throw LazyAxiomViolation(p.label, q.label, "negative value " + to_string(forward));
  if (forward == 0) throw LazyAxiomViolation(p.label, q.label, "zero between distinct points");
  Scalar backward = rule_(q, p);
  if (backward != forward) {
    throw LazyAxiomViolation(p.label, q.label, "asymmetric: " + to_string(forward) + " vs " + to_string(backward));
  }
  return forward;
}

Scalar distance(const Space& space, const Point& p, const Point& q) {
  return std::visit([&](const auto& s) { return s.distance(p, q); }, space);
}

bool contains(const Space& space, const Point& p) {
  return std::visit([&](const auto& s) { return s.contains(p); }, space);
}

// Selectors

Selector parse_selector(std::string_view text) {
  auto trimmed = std::string(text);
  auto strip = [](std::string s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  trimmed = strip(trimmed);
  if (trimmed.empty()) throw EmptySelector();
  if (trimmed.front() == '{') {
    if (trimmed.back() != '}') throw InvalidArgument("unterminated selector: " + trimmed);
    std::vector<Scalar> values;
    std::string body = trimmed.substr(1, trimmed.size() - 2);
    std::stringstream items(body);
    std::string item;
    while (std::getline(items, item, ',')) {
      item = strip(item);
      if (item.empty()) continue;
      values.push_back(parse_scalar_or_throw(item));
    }
    return values;
  }
  auto dots = trimmed.find("..");
  if (dots == std::string::npos) throw InvalidArgument("selector must be 'a..b' or '{...}': " + trimmed);
  auto first = to_int64(parse_scalar_or_throw(trimmed.substr(0, dots)));
  auto last = to_int64(parse_scalar_or_throw(trimmed.substr(dots + 2)));
  if (!first || !last) throw InvalidArgument("index range bounds must be integers: " + trimmed);
  return IndexRange{*first, *last};
}

std::string to_string(const Selector& selector) {
  if (const auto* range = std::get_if<IndexRange>(&selector)) {
    return std::to_string(range->first) + ".." + std::to_string(range->last);
  }
  std::string out = "{";
  const auto& values = std::get<std::vector<Scalar>>(selector);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += to_string(values[i]);
  }
  return out + "}";
}

std::vector<Point> select_points(const GeneratedSpace& space, const Selector& selector) {
  std::vector<Point> points;
  if (const auto* range = std::get_if<IndexRange>(&selector)) {
    if (range->last < range->first) throw EmptySelector();
    for (std::int64_t n = range->first; n <= range->last; ++n) points.push_back(space.carrier().at_index(n));
  } else {
    const auto& values = std::get<std::vector<Scalar>>(selector);
    if (values.empty()) throw EmptySelector();
    for (const auto& v : values) points.push_back(space.carrier().resolve(v));
  }
  return points;
}

FiniteSpace truncate(const GeneratedSpace& space, std::span<const Point> points) {
  if (points.empty()) throw EmptySelector();
  const auto n = static_cast<Eigen::Index>(points.size());
  DistanceMatrix table(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    table(i, i) = space.distance(points[static_cast<std::size_t>(i)], points[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      table(i, j) = space.distance(points[static_cast<std::size_t>(i)], points[static_cast<std::size_t>(j)]);
      table(j, i) = table(i, j);
    }
  }
  return make_finite_space(std::vector<Point>(points.begin(), points.end()), std::move(table));
}

FiniteSpace truncate(const GeneratedSpace& space, const Selector& selector) {
  auto points = select_points(space, selector);
  return truncate(space, std::span<const Point>(points));
}

// SelfMap

SelfMap SelfMap::table(std::string name, const std::vector<std::pair<Point, Point>>& entries) {
  auto lookup = std::make_shared<std::unordered_map<std::string, Point>>();
  for (const auto& [from, to] : entries) {
    if (!lookup->emplace(from.label, to).second) throw InvalidArgument("map assigns two images to " + from.label);
  }
  return SelfMap(std::move(name), [lookup](const Point& p) {
    auto it = lookup->find(p.label);
    if (it == lookup->end()) throw PointNotInCarrier(p.label);
    return it->second;
  });
}

SelfMap SelfMap::from_indices(const FiniteSpace& space, const std::vector<std::size_t>& images, std::string name) {
  if (images.size() != space.size()) throw InvalidArgument("image list must cover every point");
  std::vector<std::pair<Point, Point>> entries;
  entries.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i] >= space.size()) throw InvalidArgument("image index out of range");
    entries.emplace_back(space.point(i), space.point(images[i]));
  }
  return table(std::move(name), entries);
}

SelfMap SelfMap::piecewise(std::string name, Rule rule) { return SelfMap(std::move(name), std::move(rule)); }

SelfMap SelfMap::identity() {
  return SelfMap("identity", [](const Point& p) { return p; });
}

SelfMap SelfMap::constant(Point target) {
  return SelfMap("constant " + target.label, [target = std::move(target)](const Point&) { return target; });
}

Point SelfMap::apply(const Point& p) const { return rule_(p); }

}  // namespace bvlab
