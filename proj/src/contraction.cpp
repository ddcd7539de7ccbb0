#include "bvlab/contraction.hpp"

#include "bvlab/errors.hpp"

#include <algorithm>
#include <array>
#include <functional>

namespace bvlab {
namespace {

// Images and self-distances of every sample point, plus lazily queried pair distances.
class SampledMap {
 public:
  SampledMap(const Space& space, const SelfMap& map, std::span<const Point> sample)
      : space_(space), points_(sample.begin(), sample.end()) {
    const bool finite = std::holds_alternative<FiniteSpace>(space);
    images_.reserve(points_.size());
    self_.reserve(points_.size());
    for (const auto& p : points_) {
      if (!contains(space, p)) throw PointNotInCarrier(p.label);
      Point image = map.apply(p);
      if (finite && !contains(space, image)) throw ImageEscapesSample(p.label);
      self_.push_back(distance(space, p, image));
      images_.push_back(std::move(image));
    }
  }

  std::size_t size() const { return points_.size(); }
  const Point& point(std::size_t i) const { return points_[i]; }
  const Point& image(std::size_t i) const { return images_[i]; }
  const Scalar& self(std::size_t i) const { return self_[i]; }
  Scalar between(std::size_t i, std::size_t j) const { return distance(space_, points_[i], points_[j]); }
  Scalar between_images(std::size_t i, std::size_t j) const { return distance(space_, images_[i], images_[j]); }
  bool sample_relative() const { return std::holds_alternative<GeneratedSpace>(space_); }

 private:
  const Space& space_;
  std::vector<Point> points_;
  std::vector<Point> images_;
  std::vector<Scalar> self_;
};

using RhsFn = std::function<Scalar(const SampledMap&, std::size_t, std::size_t)>;

ContractionVerdict scan(const SampledMap& sm, ConditionKind kind, bool ordered, const RhsFn& rhs_of) {
  ContractionVerdict verdict;
  verdict.kind = kind;
  verdict.sample_relative = sm.sample_relative();
  const auto n = sm.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = ordered ? 0 : i + 1; j < n; ++j) {
      if (i == j) continue;
      ++verdict.pairs_checked;
      Scalar lhs = sm.between_images(i, j);
      Scalar rhs = rhs_of(sm, i, j);
      if (lhs >= rhs) {
        verdict.passed = false;
        verdict.witness = ContractionWitness{sm.point(i), sm.point(j), std::move(lhs), std::move(rhs)};
        return verdict;
      }
    }
  }
  return verdict;
}

Space as_space(const FiniteSpace& space) { return Space(space); }

std::vector<Point> all_points(const FiniteSpace& space) { return space.points(); }

// Slack of one ordered pair as an affine function of (a, b) with c = 1 - a - b.
struct Affine {
  Scalar ka, kb, k0;
  Scalar at(const Scalar& a, const Scalar& b) const { return ka * a + kb * b + k0; }
  bool operator==(const Affine& o) const { return ka == o.ka && kb == o.kb && k0 == o.k0; }
};

struct Candidate {
  Scalar a, b;
};

bool in_simplex(const Scalar& a, const Scalar& b) { return a >= 0 && b >= 0 && a + b <= 1; }

}  // namespace

const char* to_string(ConditionKind kind) {
  switch (kind) {
    case ConditionKind::Banach: return "banach";
    case ConditionKind::Reich: return "reich";
    case ConditionKind::CiricMax: return "ciric";
    case ConditionKind::Kannan: return "kannan";
  }
  return "?";
}

ReichCoefficients ReichCoefficients::reich(const Scalar& a, const Scalar& b, const Scalar& c) {
  if (a < 0 || b < 0 || c < 0) throw InvalidArgument("Reich coefficients must be non-negative");
  if (a + b + c != 1) throw InvalidArgument("Reich coefficients must sum to 1");
  return ReichCoefficients{a, b, c};
}

ReichCoefficients ReichCoefficients::kannan(const Scalar& b, const Scalar& c) { return reich(0, b, c); }

ContractionVerdict check_banach_contractive(const Space& space, const SelfMap& map, std::span<const Point> sample) {
  SampledMap sm(space, map, sample);
  return scan(sm, ConditionKind::Banach, false,
              [](const SampledMap& s, std::size_t i, std::size_t j) { return s.between(i, j); });
}

ContractionVerdict check_banach_contractive(const FiniteSpace& space, const SelfMap& map) {
  auto points = all_points(space);
  return check_banach_contractive(as_space(space), map, points);
}

ContractionVerdict check_reich(const Space& space, const SelfMap& map, std::span<const Point> sample,
                               const ReichCoefficients& coeffs) {
  ReichCoefficients::reich(coeffs.a, coeffs.b, coeffs.c);
  SampledMap sm(space, map, sample);
  const bool kannan = coeffs.a == 0;
  return scan(sm, kannan ? ConditionKind::Kannan : ConditionKind::Reich, true,
              [&coeffs](const SampledMap& s, std::size_t i, std::size_t j) {
                Scalar rhs = coeffs.b * s.self(i) + coeffs.c * s.self(j);
                if (coeffs.a != 0) rhs += coeffs.a * s.between(i, j);
                return rhs;
              });
}

ContractionVerdict check_reich(const FiniteSpace& space, const SelfMap& map, const ReichCoefficients& coeffs) {
  auto points = all_points(space);
  auto verdict = check_reich(as_space(space), map, points, coeffs);
  return verdict;
}

ContractionVerdict check_ciric_max(const Space& space, const SelfMap& map, std::span<const Point> sample) {
  SampledMap sm(space, map, sample);
  return scan(sm, ConditionKind::CiricMax, false, [](const SampledMap& s, std::size_t i, std::size_t j) {
    return std::max({s.between(i, j), s.self(i), s.self(j)});
  });
}

ContractionVerdict check_ciric_max(const FiniteSpace& space, const SelfMap& map) {
  auto points = all_points(space);
  return check_ciric_max(as_space(space), map, points);
}

ContractionVerdict check_kannan(const Space& space, const SelfMap& map, std::span<const Point> sample,
                                const Scalar& b, const Scalar& c) {
  auto verdict = check_reich(space, map, sample, ReichCoefficients::kannan(b, c));
  verdict.kind = ConditionKind::Kannan;
  return verdict;
}

ContractionVerdict check_kannan(const FiniteSpace& space, const SelfMap& map, const Scalar& b, const Scalar& c) {
  auto points = all_points(space);
  return check_kannan(as_space(space), map, points, b, c);
}

ReichSearchResult find_reich_coefficients(const Space& space, const SelfMap& map, std::span<const Point> sample) {
  SampledMap sm(space, map, sample);
  const auto n = sm.size();

  std::vector<Affine> constraints;
  // Every ordered pair, duplicates included, for the tight-pair report.
  std::vector<std::pair<Affine, std::pair<std::size_t, std::size_t>>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const Scalar d = sm.between(i, j);
      const Scalar& dx = sm.self(i);
      const Scalar& dy = sm.self(j);
      Affine f{d - dy, dx - dy, dy - sm.between_images(i, j)};
      pairs.emplace_back(f, std::make_pair(i, j));
      if (std::find(constraints.begin(), constraints.end(), f) != constraints.end()) continue;
      constraints.push_back(std::move(f));
    }
  }

  ReichSearchResult result;
  if (constraints.empty()) {
    result.feasible = true;
    result.coefficients = ReichCoefficients{1, 0, 0};
    return result;
  }

  // Affine functions attain their extremes at the simplex vertices, so one
  // constraint dominates another iff it is no larger at all three vertices.
  const std::array<Candidate, 3> vertices{Candidate{0, 0}, Candidate{1, 0}, Candidate{0, 1}};
  std::vector<std::size_t> active;
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    bool dominated = false;
    for (std::size_t j = 0; j < constraints.size() && !dominated; ++j) {
      if (j == k) continue;
      bool below = true;
      bool strictly = false;
      for (const auto& v : vertices) {
        const Scalar fj = constraints[j].at(v.a, v.b);
        const Scalar fk = constraints[k].at(v.a, v.b);
        if (fj > fk) below = false;
        if (fj < fk) strictly = true;
      }
      dominated = below && (strictly || j < k);
    }
    if (!dominated) active.push_back(k);
  }

  auto envelope = [&](const Scalar& a, const Scalar& b) {
    Scalar low = constraints[active.front()].at(a, b);
    for (auto k : active) low = std::min(low, constraints[k].at(a, b));
    return low;
  };

  std::vector<Candidate> candidates(vertices.begin(), vertices.end());
  // Simplex edges parametrised as origin + t * direction, t in [0, 1].
  const std::array<std::array<Scalar, 4>, 3> edges{{{0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, -1, 1}}};
  for (std::size_t p = 0; p < active.size(); ++p) {
    for (std::size_t q = p + 1; q < active.size(); ++q) {
      const Affine& f = constraints[active[p]];
      const Affine& g = constraints[active[q]];
      const Scalar da = f.ka - g.ka, db = f.kb - g.kb, d0 = f.k0 - g.k0;
      for (const auto& e : edges) {
        const Scalar slope = da * e[2] + db * e[3];
        if (slope == 0) continue;
        const Scalar t = -(da * e[0] + db * e[1] + d0) / slope;
        if (t < 0 || t > 1) continue;
        candidates.push_back({e[0] + t * e[2], e[1] + t * e[3]});
      }
      for (std::size_t r = q + 1; r < active.size(); ++r) {
        const Affine& h = constraints[active[r]];
        const Scalar ea = f.ka - h.ka, eb = f.kb - h.kb, e0 = f.k0 - h.k0;
        const Scalar det = da * eb - db * ea;
        if (det == 0) continue;
        const Scalar a = (-d0 * eb + db * e0) / det;
        const Scalar b = (-da * e0 + d0 * ea) / det;
        if (in_simplex(a, b)) candidates.push_back({a, b});
      }
    }
  }

  std::optional<Scalar> best;
  Candidate argmax{0, 0};
  for (const auto& cand : candidates) {
    Scalar value = envelope(cand.a, cand.b);
    if (!best || value > *best) {
      best = value;
      argmax = cand;
    }
  }

  result.min_slack = *best;
  result.feasible = *best > 0;
  result.coefficients = ReichCoefficients{argmax.a, argmax.b, 1 - argmax.a - argmax.b};
  for (const auto& [f, ij] : pairs) {
    if (f.at(argmax.a, argmax.b) == *best) result.tight_pairs.emplace_back(sm.point(ij.first), sm.point(ij.second));
  }
  return result;
}

ReichSearchResult find_reich_coefficients(const FiniteSpace& space, const SelfMap& map) {
  auto points = all_points(space);
  return find_reich_coefficients(as_space(space), map, points);
}

}  // namespace bvlab
