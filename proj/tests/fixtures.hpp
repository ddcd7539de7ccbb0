#pragma once

#include "bvlab/corpus.hpp"
#include "bvlab/scalar.hpp"
#include "bvlab/space.hpp"

#include <string>
#include <vector>

namespace fixtures {

inline bvlab::Scalar q(const char* text) { return bvlab::parse_scalar_or_throw(text); }

inline const bvlab::CorpusEntry& entry(const std::string& name) {
  static std::vector<bvlab::CorpusEntry> cache;
  for (const auto& e : cache) {
    if (e.name == name) return e;
  }
  cache.push_back(bvlab::load_corpus(name));
  return cache.back();
}

inline std::vector<bvlab::Point> sample(const std::string& name, const char* selector) {
  return entry(name).sample(bvlab::parse_selector(selector));
}

inline bvlab::Point pt(const std::string& name, const char* value) {
  return entry(name).space.carrier().resolve(q(value));
}

inline std::vector<std::string> labels(const std::vector<bvlab::Point>& points) {
  std::vector<std::string> out;
  for (const auto& p : points) out.push_back(p.label);
  return out;
}

}  // namespace fixtures
