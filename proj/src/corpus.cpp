#include "bvlab/corpus.hpp"

#include "bvlab/axioms.hpp"
#include "bvlab/contraction.hpp"
#include "bvlab/errors.hpp"
#include "bvlab/format.hpp"
#include "bvlab/picard.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace bvlab {
namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& corpus_files();
}

namespace {

std::string strip(std::string_view text) {
  const auto b = text.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = text.find_last_not_of(" \t\r");
  return std::string(text.substr(b, e - b + 1));
}

// Whitespace-separated tokens; a `{...}` group is kept whole.
std::vector<std::string> tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  int depth = 0;
  for (char ch : text) {
    if (ch == '{') ++depth;
    if (ch == '}') --depth;
    if ((ch == ' ' || ch == '\t') && depth == 0) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      current += ch;
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

Claim parse_claim(const std::string& body, int line) {
  Claim claim;
  claim.text = body;
  claim.line = line;
  std::string head = body;
  if (auto at = body.find('@'); at != std::string::npos) {
    head = strip(std::string_view(body).substr(0, at));
    claim.scope = parse_selector(std::string_view(body).substr(at + 1));
  }
  auto parts = tokens(head);
  if (parts.empty()) throw InvalidArgument("claims line " + std::to_string(line) + ": empty claim");
  claim.kind = parts.front();
  const auto& kinds = claim_kinds();
  if (std::find(kinds.begin(), kinds.end(), claim.kind) == kinds.end()) {
    throw InvalidArgument("claims line " + std::to_string(line) + ": unknown claim kind '" + claim.kind + "'");
  }
  for (std::size_t i = 1; i < parts.size(); ++i) {
    auto eq = parts[i].find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument("claims line " + std::to_string(line) + ": expected key=value, got '" + parts[i] + "'");
    }
    claim.params[parts[i].substr(0, eq)] = parts[i].substr(eq + 1);
  }
  return claim;
}

class Params {
 public:
  explicit Params(const Claim& claim) : claim_(claim) {}

  bool has(const std::string& key) const { return claim_.params.count(key) != 0; }

  const std::string& text(const std::string& key) const {
    auto it = claim_.params.find(key);
    if (it == claim_.params.end()) throw InvalidArgument("claim '" + claim_.kind + "' needs " + key + "=");
    return it->second;
  }

  Scalar scalar(const std::string& key) const { return parse_scalar_or_throw(text(key)); }

  std::size_t count(const std::string& key) const {
    auto v = to_int64(scalar(key));
    if (!v || *v < 0) throw InvalidArgument(key + " must be a non-negative integer");
    return static_cast<std::size_t>(*v);
  }

  std::vector<Scalar> scalars(const std::string& key) const {
    auto selector = parse_selector(text(key));
    if (!std::holds_alternative<std::vector<Scalar>>(selector)) throw InvalidArgument(key + " must be a {..} list");
    return std::get<std::vector<Scalar>>(selector);
  }

  std::vector<std::string> labels(const std::string& key) const {
    std::vector<std::string> out;
    for (const auto& v : scalars(key)) out.push_back(to_string(v));
    return out;
  }

  Scalar factor() const {
    const auto& f = text("factor");
    if (f == "s2") {
      Scalar s = scalar("s");
      return s * s;
    }
    if (f == "one") return 1;
    return parse_scalar_or_throw(f);
  }

 private:
  const Claim& claim_;
};

struct Outcome {
  bool passed = false;
  std::string outcome;
  std::vector<std::string> details;
  std::vector<std::pair<std::string, std::string>> machine;
};

bool witness_matches(const ContractionWitness& w, const Params& p) {
  const auto expected = p.labels("witness");
  if (expected.size() != 2 || w.x.label != expected[0] || w.y.label != expected[1]) return false;
  if (p.has("lhs") && w.lhs != p.scalar("lhs")) return false;
  if (p.has("rhs") && w.rhs != p.scalar("rhs")) return false;
  return true;
}

void record(Outcome& out, const ContractionVerdict& v) {
  out.outcome = v.passed ? "Pass" : "Fail";
  if (v.sample_relative) out.outcome += " on sample";
  out.machine.emplace_back("pairs", std::to_string(v.pairs_checked));
  if (v.witness) {
    out.details.push_back("witness " + witness_text(*v.witness));
    out.machine.emplace_back("witness", pair_text(v.witness->x, v.witness->y));
    out.machine.emplace_back("lhs", to_string(v.witness->lhs));
    out.machine.emplace_back("rhs", to_string(v.witness->rhs));
  }
}

Outcome expect_pass(const ContractionVerdict& v) {
  Outcome out;
  record(out, v);
  out.passed = v.passed;
  return out;
}

Outcome expect_refuted(const ContractionVerdict& v, const Params& p) {
  Outcome out;
  record(out, v);
  out.passed = !v.passed && v.witness && witness_matches(*v.witness, p);
  if (!v.passed && !out.passed) out.details.push_back("expected witness " + p.text("witness"));
  return out;
}

ReichCoefficients reich_params(const Params& p) {
  return ReichCoefficients::reich(p.scalar("a"), p.scalar("b"), p.scalar("c"));
}

Point start_point(const CorpusEntry& entry, const Params& p) {
  const auto& text = p.text("start");
  if (!text.empty() && text.front() == '#') {
    return entry.space.carrier().at_index(*to_int64(parse_scalar_or_throw(text.substr(1))));
  }
  return entry.space.carrier().resolve(parse_scalar_or_throw(text));
}

SuzukiOptions suzuki_options(const Params& p) {
  SuzukiOptions options;
  options.factor = p.factor();
  if (p.has("eps")) options.epsilons = p.scalars("eps");
  return options;
}

Outcome evaluate(const CorpusEntry& entry, const Claim& claim) {
  const Params p(claim);
  const Space space = entry.space;
  const auto sample = entry.sample(claim.scope);
  Outcome out;
  const auto& k = claim.kind;

  if (k == "axiom-class") {
    const auto params = BvsParams::make(static_cast<int>(p.count("v")), p.scalar("s"));
    const auto verdict = check_bvs(truncate(entry.space, std::span<const Point>(sample)), params);
    out.passed = verdict.outcome != AxiomOutcome::Fail;
    out.outcome = std::string(to_string(verdict.outcome)) + " on sample";
    if (verdict.witness) {
      out.details.push_back("witness " + witness_text(*verdict.witness, true));
      out.machine.emplace_back("witness", pair_text(verdict.witness->x, verdict.witness->y));
    }
  } else if (k == "not-banach") {
    out = expect_refuted(check_banach_contractive(space, entry.map, sample), p);
  } else if (k == "reich") {
    out = expect_pass(check_reich(space, entry.map, sample, reich_params(p)));
  } else if (k == "reich-refuted") {
    out = expect_refuted(check_reich(space, entry.map, sample, reich_params(p)), p);
  } else if (k == "ciric") {
    out = expect_pass(check_ciric_max(space, entry.map, sample));
  } else if (k == "ciric-refuted") {
    out = expect_refuted(check_ciric_max(space, entry.map, sample), p);
  } else if (k == "kannan") {
    out = expect_pass(check_kannan(space, entry.map, sample, p.scalar("b"), p.scalar("c")));
  } else if (k == "reich-feasible" || k == "reich-infeasible") {
    const auto result = find_reich_coefficients(space, entry.map, sample);
    out.outcome = result.feasible ? "Feasible" : "Infeasible";
    out.passed = result.feasible == (k == "reich-feasible");
    out.machine.emplace_back("coefficients", coefficients_text(result.coefficients));
    if (result.min_slack) out.machine.emplace_back("slack", to_string(*result.min_slack));
    out.details.push_back("best " + coefficients_text(result.coefficients) +
                          (result.min_slack ? " with min slack " + to_string(*result.min_slack) : ""));
    if (!result.feasible) {
      std::string tight;
      for (const auto& [x, y] : result.tight_pairs) tight += (tight.empty() ? "" : " ") + pair_text(x, y);
      out.details.push_back("tight pairs " + tight);
      out.machine.emplace_back("tight", tight);
    }
  } else if (k == "fixed-points" || k == "no-fixed-point") {
    const auto fixed = detect_fixed_points(std::span<const Point>(sample), entry.map);
    std::vector<std::string> got;
    for (const auto& f : fixed) got.push_back(f.label);
    std::vector<std::string> want = k == "fixed-points" ? p.labels("set") : std::vector<std::string>{};
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    out.passed = got == want;
    out.outcome = points_text(fixed) + " on sample";
    out.machine.emplace_back("fixed", points_text(fixed));
  } else if (k == "orbit-fixed" || k == "orbit-exhausted" || k == "sn-decreasing") {
    const auto orbit = iterate(space, entry.map, start_point(entry, p), p.count("budget"));
    out.outcome = describe(orbit.status);
    out.details.push_back("points " + points_text(orbit.points));
    out.details.push_back("s_n " + scalars_text(orbit.s_seq));
    out.machine.emplace_back("orbit", describe(orbit.status));
    out.machine.emplace_back("points", points_text(orbit.points));
    if (k == "orbit-fixed") {
      const auto* f = std::get_if<FixedPointReached>(&orbit.status);
      out.passed = f && (!p.has("point") || f->point.label == to_string(p.scalar("point"))) &&
                   (!p.has("index") || f->index == p.count("index"));
      if (out.passed && p.has("points")) {
        std::vector<std::string> got;
        for (const auto& u : orbit.points) got.push_back(u.label);
        out.passed = got == p.labels("points");
      }
    } else if (k == "orbit-exhausted") {
      out.passed = std::holds_alternative<BudgetExhausted>(orbit.status);
    } else {
      const auto verdict = verify_sn_strict_decrease(orbit);
      out.passed = verdict.passed;
      out.outcome += verdict.passed ? (verdict.vacuous ? ", s_n decrease vacuous" : ", s_n strictly decreasing")
                                    : ", s_n not decreasing at " + std::to_string(*verdict.first_failure);
    }
  } else if (k == "suzuki-supported" || k == "suzuki-refuted") {
    const auto orbit = iterate(space, entry.map, start_point(entry, p), p.count("budget"));
    const auto options = suzuki_options(p);
    const auto findings = check_suzuki(space, orbit, options);
    out.passed = true;
    std::string summary;
    for (const auto& f : findings) {
      const std::string eps = to_string(f.epsilon);
      if (f.supported) {
        out.details.push_back("eps " + eps + ": SupportedUpToHorizon(" + std::to_string(f.horizon) + ") delta " +
                              to_string(*f.delta) + ", N " + std::to_string(*f.start_index));
        out.machine.emplace_back("eps." + eps, "supported delta=" + to_string(*f.delta) +
                                                   " N=" + std::to_string(*f.start_index));
      } else {
        const auto& w = f.witnesses.front();
        out.details.push_back("eps " + eps + ": RefutedUpToGrid, " + std::to_string(f.witnesses.size()) +
                              " candidates, first (n, m) = (" + std::to_string(w.n) + ", " + std::to_string(w.m) +
                              ") premise " + to_string(w.premise) + ", conclusion " + to_string(w.conclusion));
        out.machine.emplace_back("eps." + eps, "refuted candidates=" + std::to_string(f.witnesses.size()));
      }
      if (k == "suzuki-supported") {
        if (!f.supported) out.passed = false;
        if (f.supported && p.has("delta") && p.text("delta") == "eps" && *f.delta != f.epsilon) out.passed = false;
      } else {
        if (f.supported) out.passed = false;
        if (!f.supported && p.has("conclusion-above")) {
          const Scalar above = p.scalar("conclusion-above");
          for (const auto& w : f.witnesses) {
            if (!(w.conclusion > above)) out.passed = false;
          }
        }
      }
    }
    out.outcome = k == "suzuki-supported" ? (out.passed ? "SupportedUpToHorizon" : "not supported")
                                          : (out.passed ? "RefutedUpToGrid" : "not refuted");
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

}  // namespace

const std::vector<std::string>& claim_kinds() {
  static const std::vector<std::string> kinds = {
      "axiom-class",    "not-banach",      "reich",          "reich-refuted",    "ciric",
      "ciric-refuted",  "kannan",          "reich-feasible", "reich-infeasible", "fixed-points",
      "no-fixed-point", "orbit-fixed",     "orbit-exhausted", "sn-decreasing",   "suzuki-supported",
      "suzuki-refuted",
  };
  return kinds;
}

std::vector<Point> CorpusEntry::sample(const std::optional<Selector>& scope) const {
  return select_points(space, scope ? *scope : default_truncation);
}

std::vector<std::string> corpus_names() {
  std::vector<std::string> names;
  for (const auto& [file, text] : detail::corpus_files()) {
    const std::string_view suffix = ".claims";
    if (file.size() > suffix.size() && file.substr(file.size() - suffix.size()) == suffix) {
      names.emplace_back(file.substr(0, file.size() - suffix.size()));
    }
  }
  std::sort(names.begin(), names.end());
  return names;
}

std::optional<std::string> corpus_file(std::string_view file_name) {
  for (const auto& [file, text] : detail::corpus_files()) {
    if (file == file_name) return std::string(text);
  }
  return std::nullopt;
}

CorpusEntry parse_corpus_entry(std::string_view claims_source,
                               const std::function<std::string(const std::string&)>& resolve) {
  std::string name, space_file, map_file;
  std::optional<Selector> sample;
  std::vector<Claim> claims;
  std::istringstream lines{std::string(claims_source)};
  std::string raw;
  int line_no = 0;
  while (std::getline(lines, raw)) {
    ++line_no;
    std::string line = strip(std::string_view(raw).substr(0, raw.find('#')));
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) {
      throw InvalidArgument("claims line " + std::to_string(line_no) + ": expected 'key: value'");
    }
    const std::string key = strip(std::string_view(line).substr(0, colon));
    const std::string value = strip(std::string_view(line).substr(colon + 1));
    if (key == "name") name = value;
    else if (key == "space") space_file = value;
    else if (key == "map") map_file = value;
    else if (key == "sample") sample = parse_selector(value);
    else if (key == "claim") claims.push_back(parse_claim(value, line_no));
    else throw InvalidArgument("claims line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  if (space_file.empty() || map_file.empty() || !sample) {
    throw InvalidArgument("claims file must declare space:, map: and sample:");
  }
  std::string space_source = resolve(space_file);
  std::string map_source = resolve(map_file);
  auto space_spec = dsl::load_space_spec(space_source);
  auto map_spec = dsl::load_map_spec(map_source);
  auto space = dsl::build_space(space_spec);
  auto map = dsl::build_map(map_spec, space.carrier());
  CorpusEntry entry{name.empty() ? space_spec.name : name,
                    std::move(space_source),
                    std::move(map_source),
                    std::move(space_spec),
                    std::move(map_spec),
                    std::move(space),
                    std::move(map),
                    *sample,
                    std::move(claims)};
  const auto points = entry.sample();
  dsl::require_exhaustive(entry.space_spec, points);
  dsl::require_exhaustive(entry.map_spec, points);
  return entry;
}

CorpusEntry load_corpus(const std::string& name) {
  if (auto text = corpus_file(name + ".claims")) {
    return parse_corpus_entry(*text, [](const std::string& file) {
      auto body = corpus_file(file);
      if (!body) throw UnknownExample(file);
      return *body;
    });
  }
  const std::filesystem::path path(name);
  if (path.extension() == ".claims" && std::filesystem::exists(path)) {
    const auto dir = path.parent_path();
    return parse_corpus_entry(read_file(path), [dir](const std::string& file) {
      const auto local = dir / file;
      if (std::filesystem::exists(local)) return read_file(local);
      if (auto body = corpus_file(file)) return *body;
      throw InvalidArgument("cannot find " + file);
    });
  }
  throw UnknownExample(name);
}

Report evaluate_claims(const CorpusEntry& entry) {
  Report report;
  for (std::size_t i = 0; i < entry.claims.size(); ++i) {
    const auto& claim = entry.claims[i];
    ReportLine line;
    line.key = entry.name + "." + std::to_string(i + 1);
    line.title = entry.name + " " + claim.text;
    const auto begin = std::chrono::steady_clock::now();
    try {
      auto out = evaluate(entry, claim);
      line.passed = out.passed;
      line.outcome = std::move(out.outcome);
      line.details = std::move(out.details);
      line.machine = {{"kind", claim.kind},
                      {"scope", to_string(claim.scope ? *claim.scope : entry.default_truncation)}};
      line.machine.insert(line.machine.end(), out.machine.begin(), out.machine.end());
    } catch (const Error& e) {
      line.passed = false;
      line.outcome = std::string("error: ") + e.what();
    }
    line.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
    report.add(std::move(line));
  }
  return report;
}

}  // namespace bvlab
