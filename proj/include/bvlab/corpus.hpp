#pragma once

#include "bvlab/dsl.hpp"
#include "bvlab/report.hpp"
#include "bvlab/space.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bvlab {

/// One checkable statement from a `.claims` file:
///   claim: <kind> key=value ... [@ <selector>]
struct Claim {
  std::string kind;
  std::map<std::string, std::string> params;
  std::optional<Selector> scope;
  std::string text;
  int line = 0;
};

/// Claim kinds understood by evaluate_claims.
const std::vector<std::string>& claim_kinds();

struct CorpusEntry {
  std::string name;
  std::string space_source;
  std::string map_source;
  dsl::SpaceSpec space_spec;
  dsl::MapSpec map_spec;
  GeneratedSpace space;
  SelfMap map;
  Selector default_truncation;
  std::vector<Claim> claims;

  std::vector<Point> sample(const std::optional<Selector>& scope = std::nullopt) const;
};

/// Names of the shipped entries, in lexicographic order.
std::vector<std::string> corpus_names();

/// Text of a shipped corpus file such as "e2.space"; nullopt when absent.
std::optional<std::string> corpus_file(std::string_view file_name);

/// A shipped name ("e2") or a path to a `.claims` file. Throws UnknownExample
/// or dsl::ParseFailure.
CorpusEntry load_corpus(const std::string& name);

/// Parses a `.claims` file; `resolve` returns the text of referenced space/map files.
CorpusEntry parse_corpus_entry(std::string_view claims_source,
                               const std::function<std::string(const std::string&)>& resolve);

/// Runs every claim on its scope; failures are report content, never exceptions.
Report evaluate_claims(const CorpusEntry& entry);

}  // namespace bvlab
