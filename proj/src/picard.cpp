#include "bvlab/picard.hpp"

#include "bvlab/errors.hpp"

#include <algorithm>
#include <unordered_map>

namespace bvlab {
namespace {

// Distances between orbit positions, memoised by label pair.
class OrbitDistances {
 public:
  OrbitDistances(const Space& space, const OrbitRecord& orbit) : space_(space), orbit_(orbit) {}

  Scalar operator()(std::size_t n, std::size_t m) {
    const Point& p = orbit_point(orbit_, n);
    const Point& q = orbit_point(orbit_, m);
    if (p == q) return Scalar(0);
    const std::string key = p.label < q.label ? p.label + '\x1f' + q.label : q.label + '\x1f' + p.label;
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Scalar d = distance(space_, p, q);
    cache_.emplace(key, d);
    return d;
  }

 private:
  const Space& space_;
  const OrbitRecord& orbit_;
  std::unordered_map<std::string, Scalar> cache_;
};

}  // namespace

std::string describe(const OrbitStatus& status) {
  if (const auto* f = std::get_if<FixedPointReached>(&status)) {
    return "FixedPoint(" + f->point.label + ", " + std::to_string(f->index) + ")";
  }
  if (const auto* c = std::get_if<CycleDetected>(&status)) {
    return "Cycle(" + std::to_string(c->entry) + ", " + std::to_string(c->period) + ")";
  }
  return "BudgetExhausted(" + std::to_string(std::get<BudgetExhausted>(status).steps) + ")";
}

OrbitRecord iterate(const Space& space, const SelfMap& map, const Point& start, std::size_t budget,
                    const std::optional<Point>& candidate_limit) {
  if (budget < 1) throw InvalidArgument("budget must be at least 1");
  if (!contains(space, start)) throw PointNotInCarrier(start.label);
  OrbitRecord orbit{start, {start}, {}, std::nullopt, BudgetExhausted{budget}, budget};
  std::unordered_map<std::string, std::size_t> seen{{start.label, 0}};
  for (std::size_t k = 0;; ++k) {
    const Point& current = orbit.points.back();
    Point next = map.apply(current);
    if (!contains(space, next)) throw PointNotInCarrier(next.label);
    if (next == current) {
      orbit.status = FixedPointReached{current, k};
      break;
    }
    if (k == budget) break;
    orbit.s_seq.push_back(distance(space, current, next));
    auto [it, fresh] = seen.emplace(next.label, k + 1);
    orbit.points.push_back(std::move(next));
    if (!fresh) {
      orbit.status = CycleDetected{it->second, k + 1 - it->second};
      break;
    }
  }
  if (candidate_limit) {
    std::vector<Scalar> t;
    t.reserve(orbit.points.size());
    for (const auto& u : orbit.points) t.push_back(distance(space, u, *candidate_limit));
    orbit.t_seq = std::move(t);
  }
  return orbit;
}

const Point& orbit_point(const OrbitRecord& orbit, std::size_t n) {
  if (n < orbit.points.size()) return orbit.points[n];
  if (std::holds_alternative<FixedPointReached>(orbit.status)) return orbit.points.back();
  if (const auto* c = std::get_if<CycleDetected>(&orbit.status)) {
    return orbit.points[c->entry + (n - c->entry) % c->period];
  }
  throw OrbitTooShort("orbit index " + std::to_string(n) + " beyond the recorded " +
                      std::to_string(orbit.points.size()) + " points");
}

DecreaseVerdict verify_sn_strict_decrease(const OrbitRecord& orbit) {
  std::vector<Scalar> s = orbit.s_seq;
  if (const auto* c = std::get_if<CycleDetected>(&orbit.status)) s.push_back(orbit.s_seq[c->entry]);
  DecreaseVerdict verdict;
  if (s.size() < 2) {
    verdict.vacuous = true;
    return verdict;
  }
  for (std::size_t n = 0; n + 1 < s.size(); ++n) {
    if (!(s[n + 1] < s[n])) {
      verdict.passed = false;
      verdict.first_failure = n;
      break;
    }
  }
  return verdict;
}

std::vector<Point> detect_fixed_points(std::span<const Point> sample, const SelfMap& map) {
  std::vector<Point> fixed;
  for (const auto& p : sample) {
    if (map.apply(p) == p) fixed.push_back(p);
  }
  return fixed;
}

std::vector<Point> detect_fixed_points(const FiniteSpace& space, const SelfMap& map) {
  return detect_fixed_points(std::span<const Point>(space.points()), map);
}

std::vector<Scalar> SuzukiOptions::default_epsilons() {
  return {Scalar(1), Scalar(1) / 2, Scalar(1) / 4, Scalar(1) / 8, Scalar(1) / 16};
}

std::vector<std::size_t> SuzukiOptions::default_start_indices() { return {0, 1, 2, 4, 8, 16}; }

std::vector<Scalar> SuzukiOptions::default_deltas(const Scalar& epsilon) {
  std::vector<Scalar> deltas;
  Scalar d = epsilon;
  for (int k = 0; k <= 6; ++k, d /= 2) deltas.push_back(d);
  return deltas;
}

std::vector<SuzukiFinding> check_suzuki(const Space& space, const OrbitRecord& orbit, const SuzukiOptions& options) {
  if (options.factor <= 0) throw InvalidArgument("Suzuki factor must be positive");
  const auto epsilons = options.epsilons.empty() ? SuzukiOptions::default_epsilons() : options.epsilons;
  const auto starts = options.start_indices.empty() ? SuzukiOptions::default_start_indices() : options.start_indices;
  for (const auto& e : epsilons) {
    if (e <= 0) throw InvalidArgument("epsilon values must be positive");
  }
  for (const auto& d : options.deltas) {
    if (d <= 0) throw InvalidArgument("delta values must be positive");
  }
  const std::size_t horizon = options.horizon ? options.horizon : orbit.budget;
  const std::size_t max_start = *std::max_element(starts.begin(), starts.end());
  if (!orbit.absorbed()) {
    const std::size_t length = orbit.points.size();
    if (length < max_start + 2 || length < horizon + 1) {
      throw OrbitTooShort("orbit has " + std::to_string(length) + " points; the probe needs " +
                          std::to_string(std::max(max_start + 2, horizon + 1)));
    }
  }

  OrbitDistances rho(space, orbit);
  std::vector<SuzukiFinding> findings;
  for (const auto& eps : epsilons) {
    SuzukiFinding finding;
    finding.epsilon = eps;
    finding.horizon = horizon;
    const auto deltas = options.deltas.empty() ? SuzukiOptions::default_deltas(eps) : options.deltas;
    for (const auto& delta : deltas) {
      const Scalar threshold = options.factor * eps + delta;
      for (auto start : starts) {
        std::optional<SuzukiWitness> violation;
        for (std::size_t n = start; n < horizon && !violation; ++n) {
          for (std::size_t m = n + 1; m < horizon; ++m) {
            Scalar premise = rho(n, m);
            if (!(premise < threshold)) continue;
            Scalar conclusion = rho(n + 1, m + 1);
            if (conclusion > eps) {
              violation = SuzukiWitness{delta, start, n, m, std::move(premise), std::move(conclusion)};
              break;
            }
          }
        }
        if (!violation) {
          finding.supported = true;
          finding.delta = delta;
          finding.start_index = start;
          finding.witnesses.clear();
          break;
        }
        finding.witnesses.push_back(std::move(*violation));
      }
      if (finding.supported) break;
    }
    findings.push_back(std::move(finding));
  }
  return findings;
}

std::vector<std::pair<std::size_t, Scalar>> cauchy_profile(const Space& space, const OrbitRecord& orbit,
                                                           std::span<const std::size_t> tail_starts) {
  std::size_t window = orbit.points.size();
  if (const auto* c = std::get_if<CycleDetected>(&orbit.status)) {
    for (auto N : tail_starts) window = std::max(window, N + c->period + 1);
  } else if (orbit.absorbed()) {
    for (auto N : tail_starts) window = std::max(window, N + 1);
  }
  OrbitDistances rho(space, orbit);
  std::vector<std::pair<std::size_t, Scalar>> profile;
  for (auto N : tail_starts) {
    if (N >= window) {
      throw OrbitTooShort("tail start " + std::to_string(N) + " beyond the recorded " + std::to_string(window) +
                          " points");
    }
    Scalar diameter = 0;
    for (std::size_t n = N; n < window; ++n) {
      for (std::size_t m = n + 1; m < window; ++m) diameter = std::max(diameter, rho(n, m));
    }
    profile.emplace_back(N, std::move(diameter));
  }
  return profile;
}

}  // namespace bvlab
