#include "bvlab/axioms.hpp"

#include "bvlab/errors.hpp"

namespace bvlab {
namespace {

// Depth-first walk over ordered tuples of distinct interior points in
// lexicographic index order. `visit` sees each complete chain; `prune`
// receives a partial sum and may cut the subtree.
class ChainWalker {
 public:
  ChainWalker(const FiniteSpace& space, std::size_t x, std::size_t y, int v)
      : space_(space), x_(x), y_(y), v_(static_cast<std::size_t>(v)), used_(space.size(), false) {
    used_[x] = used_[y] = true;
    tuple_.reserve(v_);
  }

  template <class Prune, class Visit>
  bool run(Prune&& prune, Visit&& visit) {
    return step(x_, Scalar(0), prune, visit);
  }

  const std::vector<std::size_t>& tuple() const { return tuple_; }

 private:
  template <class Prune, class Visit>
  bool step(std::size_t last, const Scalar& partial, Prune& prune, Visit& visit) {
    if (tuple_.size() == v_) {
      return visit(partial + space_.at(last, y_));
    }
    for (std::size_t u = 0; u < space_.size(); ++u) {
      if (used_[u]) continue;
      Scalar next = partial + space_.at(last, u);
      if (prune(next)) continue;
      used_[u] = true;
      tuple_.push_back(u);
      // A stopping walk keeps its tuple so the caller can read the witness.
      if (step(u, next, prune, visit)) return true;
      tuple_.pop_back();
      used_[u] = false;
    }
    return false;
  }

  const FiniteSpace& space_;
  std::size_t x_;
  std::size_t y_;
  std::size_t v_;
  std::vector<bool> used_;
  std::vector<std::size_t> tuple_;
};

std::vector<Point> to_points(const FiniteSpace& space, const std::vector<std::size_t>& indices) {
  std::vector<Point> out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(space.point(i));
  return out;
}

bool vacuous(const FiniteSpace& space, int v) { return space.size() < static_cast<std::size_t>(v) + 2; }

}  // namespace

BvsParams BvsParams::make(int v, const Scalar& s) {
  if (v < 1) throw InvalidArgument("v must be a positive integer");
  if (s < 1) throw InvalidArgument("s must be at least 1");
  return BvsParams{v, s};
}

const char* to_string(AxiomOutcome outcome) {
  switch (outcome) {
    case AxiomOutcome::Pass: return "pass";
    case AxiomOutcome::PassVacuous: return "pass-vacuous";
    case AxiomOutcome::Fail: return "fail";
  }
  return "?";
}

AxiomVerdict check_bvs(const FiniteSpace& space, const BvsParams& params) {
  BvsParams::make(params.v, params.s);
  if (vacuous(space, params.v)) return {AxiomOutcome::PassVacuous, std::nullopt};
  const auto n = space.size();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      // Violation iff chain < rho(x, y) / s; partial sums only grow.
      const Scalar threshold = space.at(x, y) / params.s;
      ChainWalker walker(space, x, y, params.v);
      std::optional<Scalar> violating;
      walker.run([&](const Scalar& partial) { return partial >= threshold; },
                 [&](const Scalar& chain) {
                   if (chain < threshold) {
                     violating = chain;
                     return true;
                   }
                   return false;
                 });
      if (violating) {
        PolygonWitness w{space.point(x), space.point(y), to_points(space, walker.tuple()), space.at(x, y),
                         *violating, params.s * *violating};
        return {AxiomOutcome::Fail, std::move(w)};
      }
    }
  }
  return {AxiomOutcome::Pass, std::nullopt};
}

std::optional<MinimalS> minimal_s(const FiniteSpace& space, int v) {
  if (v < 1) throw InvalidArgument("v must be a positive integer");
  if (vacuous(space, v)) return std::nullopt;
  const auto n = space.size();
  std::optional<MinimalS> best;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      ChainWalker walker(space, x, y, v);
      std::optional<Scalar> shortest;
      std::vector<std::size_t> shortest_tuple;
      walker.run([&](const Scalar& partial) { return shortest && partial >= *shortest; },
                 [&](const Scalar& chain) {
                   if (!shortest || chain < *shortest) {
                     shortest = chain;
                     shortest_tuple = walker.tuple();
                   }
                   return false;
                 });
      const Scalar ratio = space.at(x, y) / *shortest;
      if (!best || ratio > best->raw_ratio) {
        PolygonWitness w{space.point(x), space.point(y), to_points(space, shortest_tuple), space.at(x, y),
                         *shortest, *shortest};
        best = MinimalS{ratio < 1 ? Scalar(1) : ratio, ratio, std::move(w)};
      }
    }
  }
  return best;
}

std::vector<ClassEntry> classify(const FiniteSpace& space, int v_max) {
  if (v_max < 1) throw InvalidArgument("v_max must be a positive integer");
  std::vector<ClassEntry> entries;
  for (int v = 1; v <= v_max; ++v) entries.push_back({v, minimal_s(space, v)});
  return entries;
}

}  // namespace bvlab
