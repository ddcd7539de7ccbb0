#include "bvlab/completeness.hpp"

#include "bvlab/dsl.hpp"
#include "bvlab/errors.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace bvlab {
namespace {

struct Choice {
  std::size_t index;
  BoundInstance bound;
  bool prefix_only;
};

// Smallest j >= lowest whose tail stays strictly below target(j).
Choice smallest_admissible(const CauchySeed& seed, const Point& x, std::size_t lowest,
                           const std::function<Scalar(std::size_t)>& target) {
  const auto& u = seed.sequence;
  const auto last = u.size();
  for (std::size_t j = lowest; j < last; ++j) {
    const Scalar goal = target(j);
    std::optional<Scalar> tail;
    if (seed.certificate) {
      tail = seed.certificate->tail_upper(j, u[j]);
      if (*tail > goal) continue;
    } else if (j + 1 == last) {
      break;
    }
    Scalar prefix_max = 0;
    bool ok = true;
    for (std::size_t m = j + 1; m < last && ok; ++m) {
      Scalar d = distance(seed.space, u[m], u[j]);
      if (!(d < goal)) ok = false;
      if (tail && !(d < *tail)) {
        throw InvalidCertificate("tail bound at index " + std::to_string(j) + " is exceeded by index " +
                                 std::to_string(m));
      }
      prefix_max = std::max(prefix_max, d);
    }
    if (!ok) continue;
    return Choice{j, BoundInstance{x, j, goal, tail, prefix_max}, !tail.has_value()};
  }
  throw NoAdmissibleIndex(x.label);
}

std::string strip(std::string_view text) {
  const auto b = text.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = text.find_last_not_of(" \t\r");
  return std::string(text.substr(b, e - b + 1));
}

}  // namespace

std::optional<std::size_t> CauchySeed::index_of(const Point& p) const {
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    if (sequence[i] == p) return i;
  }
  return std::nullopt;
}

std::vector<Point> CauchySeed::default_sample() const {
  std::vector<Point> sample(sequence.begin(), sequence.begin() + static_cast<std::ptrdiff_t>(
                                                                     std::min(member_count, sequence.size())));
  sample.insert(sample.end(), outsiders.begin(), outsiders.end());
  return sample;
}

const char* to_string(PairClass kind) {
  switch (kind) {
    case PairClass::MemberMember: return "member/member";
    case PairClass::OutsiderOutsider: return "outsider/outsider";
    case PairClass::Mixed: return "outsider/member";
  }
  return "?";
}

EscapeConstruction build_escape_map(const CauchySeed& seed, std::span<const Point> sample, const Scalar& b) {
  if (!(b > 0 && b < 1)) throw InvalidArgument("b must lie strictly between 0 and 1");
  if (sample.empty()) throw EmptySelector();
  const auto& u = seed.sequence;

  EscapeConstruction out;
  out.sample.assign(sample.begin(), sample.end());
  std::vector<std::pair<Point, Point>> table;
  for (const auto& x : sample) {
    if (!contains(seed.space, x)) throw PointNotInCarrier(x.label);
    if (auto n0 = seed.index_of(x)) {
      auto choice = smallest_admissible(seed, x, *n0 + 1, [&](std::size_t j) {
        return b * distance(seed.space, u[*n0], u[j]);
      });
      out.member_choice.emplace_back(*n0, choice.index);
      out.prefix_relative = out.prefix_relative || choice.prefix_only;
      out.bounds_used.push_back(std::move(choice.bound));
      table.emplace_back(x, u[choice.index]);
      continue;
    }

    Scalar prefix_min = distance(seed.space, x, u.front());
    for (const auto& a : u) prefix_min = std::min(prefix_min, distance(seed.space, x, a));
    std::optional<Scalar> certified;
    if (seed.certificate && seed.certificate->range_gap) certified = seed.certificate->range_gap(x);
    if (certified && *certified > prefix_min) {
      throw InvalidCertificate("range gap " + to_string(*certified) + " at " + x.label +
                               " exceeds the recorded distance " + to_string(prefix_min));
    }
    Scalar gap = certified ? *certified : prefix_min;
    if (gap <= 0) throw ZeroDistanceToRange(x.label);
    const Scalar goal = b * gap;
    auto choice = smallest_admissible(seed, x, 0, [&](std::size_t) { return goal; });
    out.outsider_choice.push_back(OutsiderChoice{x, gap, certified.has_value(), choice.index});
    out.prefix_relative = out.prefix_relative || choice.prefix_only || !certified;
    out.bounds_used.push_back(std::move(choice.bound));
    table.emplace_back(x, u[choice.index]);
  }
  out.map = SelfMap::table("escape", table);
  return out;
}

EscapeVerdict verify_escape_map(const EscapeConstruction& construction, const CauchySeed& seed, const Scalar& b) {
  EscapeVerdict verdict;
  const auto& sample = construction.sample;
  for (const auto& p : sample) {
    if (construction.map.apply(p) == p) {
      verdict.fixed_point = p;
      verdict.passed = false;
      break;
    }
  }
  const Scalar c = 1 - b;
  verdict.kannan = check_kannan(seed.space, construction.map, sample, b, c);
  if (!verdict.kannan.passed) verdict.passed = false;

  std::vector<bool> member(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) member[i] = seed.index_of(sample[i]).has_value();
  std::vector<Point> images;
  std::vector<Scalar> self;
  for (const auto& p : sample) {
    images.push_back(construction.map.apply(p));
    self.push_back(distance(seed.space, p, images.back()));
  }
  for (auto kind : {PairClass::MemberMember, PairClass::OutsiderOutsider, PairClass::Mixed}) {
    verdict.coverage[kind] = 0;
    verdict.class_passed[kind] = true;
  }
  for (std::size_t i = 0; i < sample.size(); ++i) {
    for (std::size_t j = 0; j < sample.size(); ++j) {
      if (i == j) continue;
      const PairClass kind = member[i] && member[j]     ? PairClass::MemberMember
                             : !member[i] && !member[j] ? PairClass::OutsiderOutsider
                                                        : PairClass::Mixed;
      ++verdict.coverage[kind];
      const Scalar lhs = distance(seed.space, images[i], images[j]);
      if (!(lhs < b * self[i] + c * self[j])) verdict.class_passed[kind] = false;
    }
  }
  return verdict;
}

CauchySeed parse_seed(std::string_view source, const std::function<std::string(const std::string&)>& resolve_space) {
  std::optional<GeneratedSpace> space;
  CauchySeed seed{"seed", make_finite_space(std::vector<std::string>{"0"}, DistanceMatrix::Zero(1, 1)),
                  {}, std::nullopt, Scalar(1) / 2, 0, {}};
  std::optional<dsl::MapSpec> tail_rule;
  std::unordered_map<std::string, Scalar> gaps;
  std::vector<Scalar> outsider_values;
  bool in_sequence = false;

  std::istringstream lines{std::string(source)};
  std::string raw;
  int line_no = 0;
  auto fail = [&](const std::string& message) -> InvalidArgument {
    return InvalidArgument("seed line " + std::to_string(line_no) + ": " + message);
  };
  while (std::getline(lines, raw)) {
    ++line_no;
    auto hash = raw.find('#');
    std::string line = strip(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon != std::string::npos) {
      const std::string key = strip(std::string_view(line).substr(0, colon));
      const std::string value = strip(std::string_view(line).substr(colon + 1));
      in_sequence = false;
      if (key == "name") {
        seed.name = value;
      } else if (key == "space") {
        space = dsl::build_space(dsl::load_space_spec(resolve_space(value)));
      } else if (key == "b") {
        seed.b = parse_scalar_or_throw(value);
      } else if (key == "members") {
        auto count = to_int64(parse_scalar_or_throw(value));
        if (!count || *count < 0) throw fail("members must be a non-negative integer");
        seed.member_count = static_cast<std::size_t>(*count);
      } else if (key == "outsiders") {
        auto selector = parse_selector(value);
        if (!std::holds_alternative<std::vector<Scalar>>(selector)) throw fail("outsiders must be a {..} list");
        outsider_values = std::get<std::vector<Scalar>>(selector);
      } else if (key == "sequence") {
        in_sequence = true;
      } else if (key == "tail_upper") {
        tail_rule = dsl::load_map_spec("otherwise => " + value);
      } else if (key == "range_gap") {
        std::istringstream parts(value);
        std::string point, bound;
        if (!(parts >> point >> bound)) throw fail("range_gap needs a point and a bound");
        gaps[to_string(parse_scalar_or_throw(point))] = parse_scalar_or_throw(bound);
      } else {
        throw fail("unknown header '" + key + "'");
      }
      continue;
    }
    if (!in_sequence) throw fail("sequence values must follow a 'sequence:' line");
    seed.sequence.push_back(Point::of_value(parse_scalar_or_throw(line)));
  }
  if (!space) throw InvalidArgument("seed declares no space");
  if (seed.sequence.empty()) throw InvalidArgument("seed has an empty sequence");
  for (std::size_t i = 0; i < seed.sequence.size(); ++i) {
    for (std::size_t j = i + 1; j < seed.sequence.size(); ++j) {
      if (seed.sequence[i] == seed.sequence[j]) {
        throw InvalidArgument("seed entries must be pairwise distinct: " + seed.sequence[i].label);
      }
    }
  }
  for (const auto& v : outsider_values) seed.outsiders.push_back(Point::of_value(v));
  for (const auto& p : seed.outsiders) {
    if (seed.index_of(p)) throw InvalidArgument("outsider " + p.label + " lies on the sequence");
  }
  if (tail_rule || !gaps.empty()) {
    TailCertificate cert;
    if (tail_rule) {
      auto rule = std::make_shared<const dsl::MapSpec>(*tail_rule);
      cert.tail_upper = [rule](std::size_t j, const Point& uj) {
        Point at{uj.label, uj.value, static_cast<std::int64_t>(j)};
        return dsl::eval_map(*rule, at);
      };
    } else {
      cert.tail_upper = [](std::size_t, const Point&) -> Scalar {
        throw InvalidCertificate("certificate lacks a tail_upper bound");
      };
    }
    cert.range_gap = [gaps](const Point& x) -> std::optional<Scalar> {
      auto it = gaps.find(x.label);
      if (it == gaps.end()) return std::nullopt;
      return it->second;
    };
    seed.certificate = std::move(cert);
  }
  seed.space = std::move(*space);
  return seed;
}

Scalar harmonic_gap(const Scalar& x) {
  const Scalar half = Scalar(1) / 2;
  if (x >= half) return x - half;
  if (x <= 0) return -x;
  const Integer n = boost::multiprecision::numerator(Scalar(1) / x) / boost::multiprecision::denominator(Scalar(1) / x);
  const Scalar above = Scalar(1) / Scalar(n);
  const Scalar below = Scalar(1) / Scalar(n + 1);
  return std::min(abs_value(x - above), abs_value(x - below));
}

}  // namespace bvlab
