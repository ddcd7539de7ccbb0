#include "bvlab/cli.hpp"

#include "bvlab/axioms.hpp"
#include "bvlab/completeness.hpp"
#include "bvlab/contraction.hpp"
#include "bvlab/corpus.hpp"
#include "bvlab/dsl.hpp"
#include "bvlab/errors.hpp"
#include "bvlab/format.hpp"
#include "bvlab/picard.hpp"
#include "bvlab/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace bvlab {
namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

struct ResolvedSpace {
  std::string spelling;
  GeneratedSpace space;
  std::optional<SelfMap> corpus_map;
  std::vector<Point> sample;
};

// NAME, NAME@SELECTOR, FILE.space or FILE.space@SELECTOR.
ResolvedSpace resolve_space(const std::string& spec) {
  const auto at = spec.find('@');
  const std::string base = spec.substr(0, at);
  std::optional<Selector> selector;
  if (at != std::string::npos) selector = parse_selector(spec.substr(at + 1));

  if (corpus_file(base + ".claims")) {
    auto entry = load_corpus(base);
    auto sample = entry.sample(selector);
    return ResolvedSpace{spec, std::move(entry.space), std::move(entry.map), std::move(sample)};
  }
  std::string text;
  if (auto shipped = corpus_file(base)) text = *shipped;
  else if (std::filesystem::exists(base)) text = read_text(base);
  else throw UsageError("unknown space '" + base + "' (expected a corpus name or a .space file)");

  auto space = dsl::build_space(dsl::load_space_spec(text));
  if (!selector) {
    const auto& carrier = space.carrier();
    if (!carrier.is_indexed() || !carrier.last_index()) {
      throw UsageError("space '" + base + "' is infinite; add a sample, e.g. " + base + "@{0, 1, 2}");
    }
    selector = IndexRange{carrier.first_index(), *carrier.last_index()};
  }
  auto sample = select_points(space, *selector);
  dsl::require_exhaustive(dsl::load_space_spec(text), sample);
  return ResolvedSpace{spec, std::move(space), std::nullopt, std::move(sample)};
}

SelfMap resolve_map(const ResolvedSpace& space, const std::string& name) {
  if (name.empty()) {
    if (!space.corpus_map) throw UsageError("--map is required for spaces outside the corpus");
    return *space.corpus_map;
  }
  if (corpus_file(name + ".claims")) return load_corpus(name).map;
  std::string text;
  if (auto shipped = corpus_file(name)) text = *shipped;
  else if (std::filesystem::exists(name)) text = read_text(name);
  else throw UsageError("unknown map '" + name + "'");
  return dsl::build_map(dsl::load_map_spec(text), space.space.carrier());
}

Point resolve_point(const ResolvedSpace& space, const std::string& text) {
  if (!text.empty() && text.front() == '#') {
    auto index = to_int64(parse_scalar_or_throw(text.substr(1)));
    if (!index) throw UsageError("point index must be an integer: " + text);
    return space.space.carrier().at_index(*index);
  }
  return space.space.carrier().resolve(parse_scalar_or_throw(text));
}

std::vector<Scalar> scalar_list(const std::string& text) {
  std::vector<Scalar> values;
  std::stringstream items(text);
  std::string item;
  while (std::getline(items, item, ',')) values.push_back(parse_scalar_or_throw(item));
  if (values.empty()) throw UsageError("empty list: '" + text + "'");
  return values;
}

std::vector<std::size_t> index_list(const std::string& text) {
  std::vector<std::size_t> values;
  for (const auto& v : scalar_list(text)) {
    auto n = to_int64(v);
    if (!n || *n < 0) throw UsageError("indices must be non-negative integers: " + text);
    values.push_back(static_cast<std::size_t>(*n));
  }
  return values;
}

using Clock = std::chrono::steady_clock;

double since(Clock::time_point begin) { return std::chrono::duration<double>(Clock::now() - begin).count(); }

std::string where(const ResolvedSpace& s) { return s.spelling + " (" + std::to_string(s.sample.size()) + " points)"; }

Report cmd_verify(const std::string& space_arg, int v, const std::string& s) {
  const auto begin = Clock::now();
  auto rs = resolve_space(space_arg);
  const auto params = BvsParams::make(v, parse_scalar_or_throw(s));
  auto verdict = check_bvs(truncate(rs.space, std::span<const Point>(rs.sample)), params);
  ReportLine line{"verify", "b_" + std::to_string(v) + "(" + to_string(params.s) + ") on " + where(rs),
                  verdict.outcome != AxiomOutcome::Fail, to_string(verdict.outcome), {}, {}, 0};
  line.machine.emplace_back("v", std::to_string(v));
  line.machine.emplace_back("s", to_string(params.s));
  if (verdict.witness) {
    line.details.push_back("witness " + witness_text(*verdict.witness, true));
    line.machine.emplace_back("witness", pair_text(verdict.witness->x, verdict.witness->y));
    line.machine.emplace_back("interior", points_text(verdict.witness->interior));
    line.machine.emplace_back("lhs", to_string(verdict.witness->lhs));
    line.machine.emplace_back("rhs", to_string(verdict.witness->rhs));
  }
  line.seconds = since(begin);
  Report report;
  report.add(std::move(line));
  return report;
}

ReportLine minimal_line(const std::string& key, const std::string& title, int v, const std::optional<MinimalS>& m) {
  ReportLine line{key, title, true, m ? "s_min = " + to_string(m->s_min) : "s_min = vacuous", {}, {}, 0};
  line.machine.emplace_back("v", std::to_string(v));
  if (m) {
    line.details.push_back("raw ratio " + to_string(m->raw_ratio));
    line.details.push_back("witness " + witness_text(m->witness, false));
    line.machine.emplace_back("s_min", to_string(m->s_min));
    line.machine.emplace_back("raw_ratio", to_string(m->raw_ratio));
    line.machine.emplace_back("witness", pair_text(m->witness.x, m->witness.y));
    line.machine.emplace_back("interior", points_text(m->witness.interior));
  } else {
    line.machine.emplace_back("s_min", "vacuous");
  }
  return line;
}

Report cmd_minimal_s(const std::string& space_arg, int v) {
  if (v < 1) throw UsageError("--v must be at least 1");
  const auto begin = Clock::now();
  auto rs = resolve_space(space_arg);
  auto m = minimal_s(truncate(rs.space, std::span<const Point>(rs.sample)), v);
  auto line = minimal_line("minimal_s", "minimal s for v=" + std::to_string(v) + " on " + where(rs), v, m);
  line.seconds = since(begin);
  Report report;
  report.add(std::move(line));
  return report;
}

Report cmd_classify(const std::string& space_arg, int v_max) {
  if (v_max < 1) throw UsageError("--v-max must be at least 1");
  auto rs = resolve_space(space_arg);
  const auto finite = truncate(rs.space, std::span<const Point>(rs.sample));
  Report report;
  for (int v = 1; v <= v_max; ++v) {
    const auto begin = Clock::now();
    auto line = minimal_line("classify.v" + std::to_string(v),
                             "v=" + std::to_string(v) + " on " + where(rs), v, minimal_s(finite, v));
    line.seconds = since(begin);
    report.add(std::move(line));
  }
  return report;
}

Report cmd_contraction(const std::string& space_arg, const std::string& map_arg, const std::string& kind,
                       const std::string& a, const std::string& b, const std::string& c) {
  const auto begin = Clock::now();
  auto rs = resolve_space(space_arg);
  auto map = resolve_map(rs, map_arg);
  const Space space = rs.space;
  ContractionVerdict verdict;
  std::string title = kind;
  if (kind == "banach") {
    verdict = check_banach_contractive(space, map, rs.sample);
  } else if (kind == "ciric") {
    verdict = check_ciric_max(space, map, rs.sample);
  } else if (kind == "reich") {
    auto coeffs = ReichCoefficients::reich(parse_scalar_or_throw(a.empty() ? "1/3" : a),
                                           parse_scalar_or_throw(b.empty() ? "1/3" : b),
                                           parse_scalar_or_throw(c.empty() ? "1/3" : c));
    title += " " + coefficients_text(coeffs);
    verdict = check_reich(space, map, rs.sample, coeffs);
  } else if (kind == "kannan") {
    auto bb = parse_scalar_or_throw(b.empty() ? "1/2" : b);
    auto cc = c.empty() ? Scalar(1 - bb) : parse_scalar_or_throw(c);
    title += " (" + to_string(bb) + ", " + to_string(cc) + ")";
    verdict = check_kannan(space, map, rs.sample, bb, cc);
  } else {
    throw UsageError("--kind must be banach, reich, ciric or kannan");
  }
  ReportLine line{"contraction", title + " for " + map.name() + " on " + where(rs), verdict.passed,
                  std::string(verdict.passed ? "Pass" : "Fail") + (verdict.sample_relative ? " on sample" : ""),
                  {}, {}, 0};
  line.machine.emplace_back("kind", to_string(verdict.kind));
  line.machine.emplace_back("pairs", std::to_string(verdict.pairs_checked));
  if (verdict.witness) {
    line.details.push_back("witness " + witness_text(*verdict.witness));
    line.machine.emplace_back("witness", pair_text(verdict.witness->x, verdict.witness->y));
    line.machine.emplace_back("lhs", to_string(verdict.witness->lhs));
    line.machine.emplace_back("rhs", to_string(verdict.witness->rhs));
  }
  line.seconds = since(begin);
  Report report;
  report.add(std::move(line));
  return report;
}

Report cmd_reich_search(const std::string& space_arg, const std::string& map_arg) {
  const auto begin = Clock::now();
  auto rs = resolve_space(space_arg);
  auto map = resolve_map(rs, map_arg);
  auto result = find_reich_coefficients(Space(rs.space), map, rs.sample);
  ReportLine line{"reich_search", "Reich coefficients for " + map.name() + " on " + where(rs), true,
                  result.feasible ? "Feasible" : "Infeasible", {}, {}, 0};
  line.machine.emplace_back("feasible", result.feasible ? "true" : "false");
  line.machine.emplace_back("coefficients", coefficients_text(result.coefficients));
  line.details.push_back("max-min slack point " + coefficients_text(result.coefficients));
  if (result.min_slack) {
    line.details.push_back("min slack " + to_string(*result.min_slack));
    line.machine.emplace_back("slack", to_string(*result.min_slack));
  }
  if (!result.feasible) {
    std::string tight;
    for (const auto& [x, y] : result.tight_pairs) tight += (tight.empty() ? "" : " ") + pair_text(x, y);
    line.details.push_back("certificate (tight ordered pairs) " + tight);
    line.machine.emplace_back("tight", tight);
  }
  line.seconds = since(begin);
  Report report;
  report.add(std::move(line));
  return report;
}

Report cmd_iterate(const std::string& space_arg, const std::string& map_arg, const std::string& start, int budget,
                   const std::string& limit) {
  if (budget < 1) throw UsageError("--budget must be at least 1");
  const auto begin = Clock::now();
  auto rs = resolve_space(space_arg);
  auto map = resolve_map(rs, map_arg);
  std::optional<Point> z;
  if (!limit.empty()) z = resolve_point(rs, limit);
  auto orbit = iterate(Space(rs.space), map, resolve_point(rs, start), static_cast<std::size_t>(budget), z);
  auto decrease = verify_sn_strict_decrease(orbit);
  ReportLine line{"iterate", "orbit of " + orbit.start.label + " under " + map.name() + " on " + rs.spelling, true,
                  describe(orbit.status), {}, {}, 0};
  line.details.push_back("points " + points_text(orbit.points));
  line.details.push_back("s_n " + scalars_text(orbit.s_seq));
  if (orbit.t_seq) line.details.push_back("t_n " + scalars_text(*orbit.t_seq));
  std::string dec = decrease.passed ? (decrease.vacuous ? "vacuous" : "strict") : "fails at " + std::to_string(*decrease.first_failure);
  line.details.push_back("s_n decrease " + dec);
  line.machine.emplace_back("orbit", describe(orbit.status));
  line.machine.emplace_back("points", points_text(orbit.points));
  line.machine.emplace_back("s_seq", scalars_text(orbit.s_seq));
  if (orbit.t_seq) line.machine.emplace_back("t_seq", scalars_text(*orbit.t_seq));
  line.machine.emplace_back("s_decrease", dec);
  line.seconds = since(begin);
  Report report;
  report.add(std::move(line));
  return report;
}

Report cmd_suzuki(const std::string& space_arg, const std::string& map_arg, const std::string& start,
                  const std::string& factor, const std::string& s, const std::string& eps, int budget,
                  const std::string& deltas, const std::string& starts) {
  if (budget < 1) throw UsageError("--budget must be at least 1");
  auto rs = resolve_space(space_arg);
  auto map = resolve_map(rs, map_arg);
  SuzukiOptions options;
  if (factor == "one") {
    options.factor = 1;
  } else if (factor == "s2") {
    if (s.empty()) throw UsageError("--factor s2 needs --s");
    const Scalar sv = parse_scalar_or_throw(s);
    if (sv < 1) throw UsageError("--s must be at least 1");
    options.factor = sv * sv;
  } else {
    throw UsageError("--factor must be 'one' or 's2'");
  }
  if (!eps.empty()) options.epsilons = scalar_list(eps);
  if (!deltas.empty()) options.deltas = scalar_list(deltas);
  if (!starts.empty()) options.start_indices = index_list(starts);
  const auto space = Space(rs.space);
  auto orbit = iterate(space, map, resolve_point(rs, start), static_cast<std::size_t>(budget));
  Report report;
  for (const auto& f : check_suzuki(space, orbit, options)) {
    const std::string e = to_string(f.epsilon);
    ReportLine line{"suzuki.eps." + e, "Suzuki probe, factor " + to_string(options.factor) + ", eps " + e, true,
                    f.supported ? "SupportedUpToHorizon" : "RefutedUpToGrid", {}, {}, 0};
    line.machine.emplace_back("horizon", std::to_string(f.horizon));
    if (f.supported) {
      line.details.push_back("delta " + to_string(*f.delta) + ", N " + std::to_string(*f.start_index) +
                             ", horizon " + std::to_string(f.horizon));
      line.machine.emplace_back("delta", to_string(*f.delta));
      line.machine.emplace_back("N", std::to_string(*f.start_index));
    } else {
      for (std::size_t i = 0; i < f.witnesses.size(); ++i) {
        const auto& w = f.witnesses[i];
        const std::string text = "delta=" + to_string(w.delta) + " N=" + std::to_string(w.start_index) + " n=" +
                                 std::to_string(w.n) + " m=" + std::to_string(w.m) + " premise=" +
                                 to_string(w.premise) + " conclusion=" + to_string(w.conclusion);
        line.details.push_back(text);
        line.machine.emplace_back("witness." + std::to_string(i), text);
      }
    }
    report.add(std::move(line));
  }
  return report;
}

Report cmd_corpus_run(const std::string& name) {
  Report report;
  const std::vector<std::string> names = name == "all" ? corpus_names() : std::vector<std::string>{name};
  for (const auto& n : names) report.append(evaluate_claims(load_corpus(n)));
  return report;
}

std::function<std::string(const std::string&)> seed_resolver(const std::string& seed_path) {
  const auto dir = std::filesystem::path(seed_path).parent_path();
  return [dir](const std::string& file) {
    if (auto shipped = corpus_file(file)) return *shipped;
    const auto local = dir / file;
    if (std::filesystem::exists(local)) return read_text(local.string());
    throw UsageError("cannot find space file " + file);
  };
}

CauchySeed load_seed(const std::string& path) {
  if (auto shipped = corpus_file(path)) return parse_seed(*shipped, seed_resolver(""));
  if (!std::filesystem::exists(path)) throw UsageError("cannot read seed " + path);
  return parse_seed(read_text(path), seed_resolver(path));
}

ReportLine escape_run(const std::string& key, const CauchySeed& seed, const Scalar& b) {
  const auto begin = Clock::now();
  auto sample = seed.default_sample();
  ReportLine line{key, "escape map for seed " + seed.name + " (b = " + to_string(b) + ", " +
                           std::to_string(sample.size()) + " sample points)",
                  false, "", {}, {}, 0};
  try {
    auto construction = build_escape_map(seed, sample, b);
    auto verdict = verify_escape_map(construction, seed, b);
    line.passed = verdict.passed;
    line.outcome = verdict.passed ? "Pass" : "Fail";
    if (construction.prefix_relative) line.outcome += " (prefix-relative)";
    std::string members, outsiders;
    for (const auto& [n0, n1] : construction.member_choice) {
      members += (members.empty() ? "" : " ") + std::to_string(n0) + "->" + std::to_string(n1);
    }
    for (const auto& o : construction.outsider_choice) {
      outsiders += (outsiders.empty() ? "" : " ") + o.x.label + "->" + std::to_string(o.chosen) + "(D=" +
                   to_string(o.gap) + ")";
    }
    line.details.push_back("member choices " + members);
    line.details.push_back("outsider choices " + outsiders);
    line.details.push_back("kannan " + std::string(verdict.kannan.passed ? "Pass" : "Fail") + " over " +
                           std::to_string(verdict.kannan.pairs_checked) + " ordered pairs");
    if (verdict.kannan.witness) line.details.push_back("witness " + witness_text(*verdict.kannan.witness));
    if (verdict.fixed_point) line.details.push_back("fixed point " + verdict.fixed_point->label);
    for (const auto& [kind, count] : verdict.coverage) {
      line.details.push_back(std::string(to_string(kind)) + ": " + std::to_string(count) + " pairs, " +
                             (verdict.class_passed.at(kind) ? "pass" : "fail"));
      line.machine.emplace_back(std::string("coverage.") + to_string(kind), std::to_string(count));
    }
    line.machine.emplace_back("members", members);
    line.machine.emplace_back("outsiders", outsiders);
  } catch (const ZeroDistanceToRange& e) {
    line.outcome = std::string("ZeroDistanceToRange: ") + e.label();
    line.machine.emplace_back("error", "ZeroDistanceToRange");
  }
  line.seconds = since(begin);
  return line;
}

Report cmd_completeness(const std::string& seed_path, const std::string& b_text, bool with_control) {
  Report report;
  auto seed = load_seed(seed_path.empty() ? "harmonic.seed" : seed_path);
  const Scalar b = b_text.empty() ? seed.b : parse_scalar_or_throw(b_text);
  if (!(b > 0 && b < 1)) throw UsageError("--b must lie strictly between 0 and 1");
  report.add(escape_run("demo", seed, b));
  if (with_control) {
    auto control = load_seed("harmonic-control.seed");
    auto line = escape_run("control", control, b);
    // The control seed converges inside its carrier, so the construction must be rejected.
    const bool rejected = line.outcome.rfind("ZeroDistanceToRange", 0) == 0;
    line.title = "control: " + line.title + " expects ZeroDistanceToRange";
    line.passed = rejected;
    report.add(std::move(line));
  }
  return report;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact-arithmetic laboratory for b_v(s)-metric spaces", "bvlab"};
  app.require_subcommand(1);
  std::function<Report()> action;

  std::string space, map, s, kind, a, b, c, start, limit, factor, eps, deltas, starts, seed, b_seed, corpus_name = "all";
  int v = 1, v_max = 4, budget = 100;
  bool control = true;

  auto* verify = app.add_subcommand("verify", "check the b_v(s) polygon inequality");
  verify->add_option("--space", space, "space: NAME[@SEL] or FILE.space@SEL")->required();
  verify->add_option("--v", v, "interior points")->required();
  verify->add_option("--s", s, "relaxation factor")->required();
  verify->callback([&] { action = [&] { return cmd_verify(space, v, s); }; });

  auto* mins = app.add_subcommand("minimal-s", "least s for which the b_v inequality holds");
  mins->add_option("--space", space)->required();
  mins->add_option("--v", v)->required();
  mins->callback([&] { action = [&] { return cmd_minimal_s(space, v); }; });

  auto* cls = app.add_subcommand("classify", "minimal s for v = 1..K");
  cls->add_option("--space", space)->required();
  cls->add_option("--v-max", v_max)->required();
  cls->callback([&] { action = [&] { return cmd_classify(space, v_max); }; });

  auto* con = app.add_subcommand("contraction", "check a contractive condition");
  con->add_option("--space", space)->required();
  con->add_option("--map", map, "map: corpus name or FILE.map (default: the corpus map)");
  con->add_option("--kind", kind)->required()->check(CLI::IsMember({"banach", "reich", "ciric", "kannan"}));
  con->add_option("--a", a);
  con->add_option("--b", b);
  con->add_option("--c", c);
  con->callback([&] { action = [&] { return cmd_contraction(space, map, kind, a, b, c); }; });

  auto* rsearch = app.add_subcommand("reich-search", "search for strict Reich coefficients");
  rsearch->add_option("--space", space)->required();
  rsearch->add_option("--map", map);
  rsearch->callback([&] { action = [&] { return cmd_reich_search(space, map); }; });

  auto* it = app.add_subcommand("iterate", "run Picard iteration");
  it->add_option("--space", space)->required();
  it->add_option("--map", map);
  it->add_option("--start", start, "rational value or #index")->required();
  it->add_option("--budget", budget)->required();
  it->add_option("--limit", limit, "candidate limit for t_n");
  it->callback([&] { action = [&] { return cmd_iterate(space, map, start, budget, limit); }; });

  auto* suz = app.add_subcommand("suzuki", "probe the Suzuki-type condition along an orbit");
  suz->add_option("--space", space)->required();
  suz->add_option("--map", map);
  suz->add_option("--start", start)->required();
  suz->add_option("--factor", factor)->required()->check(CLI::IsMember({"one", "s2"}));
  suz->add_option("--s", s);
  suz->add_option("--eps", eps, "comma-separated epsilons");
  suz->add_option("--budget", budget)->required();
  suz->add_option("--delta", deltas, "comma-separated delta grid");
  suz->add_option("--n-grid", starts, "comma-separated start indices");
  suz->callback([&] {
    action = [&] { return cmd_suzuki(space, map, start, factor, s, eps, budget, deltas, starts); };
  });

  auto* corpus = app.add_subcommand("corpus", "shipped examples");
  corpus->require_subcommand(1);
  auto* run = corpus->add_subcommand("run", "evaluate claims");
  run->add_option("name", corpus_name, "entry name, .claims path, or all");
  run->callback([&] { action = [&] { return cmd_corpus_run(corpus_name); }; });
  auto* list = corpus->add_subcommand("list", "list entries");
  list->callback([&] {
    action = [&] {
      for (const auto& n : corpus_names()) out << n << '\n';
      return Report{};
    };
  });

  auto* demo = app.add_subcommand("completeness-demo", "build and verify the fixed-point-free escape map");
  demo->add_option("--seed", seed, "seed file (default: the shipped harmonic seed)");
  demo->add_option("--b", b_seed, "Kannan weight b, 0 < b < 1");
  demo->add_flag("!--no-control", control, "skip the control run");
  demo->callback([&] { action = [&] { return cmd_completeness(seed, b_seed, control); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* target = &app;
    while (!target->get_subcommands().empty()) target = target->get_subcommands().front();
    out << target->help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "bvlab: " << e.what() << '\n' << "run 'bvlab --help' for usage\n";
    return 2;
  }

  try {
    Report report = action();
    if (list->parsed()) return 0;
    out << report.render();
    return report.exit_status();
  } catch (const dsl::ParseFailure& e) {
    err << "bvlab: " << e.what() << '\n';
    for (const auto& d : e.diagnostics()) err << "  " << dsl::format(d) << '\n';
    return 2;
  } catch (const Error& e) {
    err << "bvlab: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace bvlab
