#pragma once

#include "bvlab/axioms.hpp"
#include "bvlab/contraction.hpp"
#include "bvlab/picard.hpp"

#include <span>
#include <string>

namespace bvlab {

std::string pair_text(const Point& x, const Point& y);
std::string witness_text(const PolygonWitness& w, bool scaled);
std::string witness_text(const ContractionWitness& w);
std::string points_text(std::span<const Point> points);
std::string scalars_text(std::span<const Scalar> values);
std::string coefficients_text(const ReichCoefficients& c);

}  // namespace bvlab
