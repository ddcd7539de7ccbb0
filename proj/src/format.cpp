#include "bvlab/format.hpp"

namespace bvlab {

std::string pair_text(const Point& x, const Point& y) { return "(" + x.label + ", " + y.label + ")"; }

std::string witness_text(const PolygonWitness& w, bool scaled) {
  std::string out = "pair " + pair_text(w.x, w.y) + " via " + points_text(w.interior) + ": lhs " + to_string(w.lhs) +
                    ", chain " + to_string(w.chain_sum);
  if (scaled) out += ", rhs " + to_string(w.rhs);
  return out;
}

std::string witness_text(const ContractionWitness& w) {
  return "pair " + pair_text(w.x, w.y) + ": lhs " + to_string(w.lhs) + ", rhs " + to_string(w.rhs);
}

std::string points_text(std::span<const Point> points) { return describe(points); }

std::string scalars_text(std::span<const Scalar> values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += to_string(values[i]);
  }
  return out + "]";
}

std::string coefficients_text(const ReichCoefficients& c) {
  return "(" + to_string(c.a) + ", " + to_string(c.b) + ", " + to_string(c.c) + ")";
}

}  // namespace bvlab
