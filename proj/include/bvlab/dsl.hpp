#pragma once

// Piecewise-rule language for spaces and maps.
//
// A source file is a sequence of lines. Header lines are `key: value`
// (name, carrier, claims, completeness); every other non-blank line is a
// clause `<condition> => <expression>`, tried top to bottom. `otherwise`
// may stand in for the condition of the final clause. `#` starts a comment.
//
//   condition  := or
//   or         := and { "or" and }
//   and        := not { "and" not }
//   not        := "not" not | comparison
//   comparison := sum [ relop sum ]          relop: = == != ≠ < <= ≤ > >= ≥
//   sum        := product { (+|-|−) product }
//   product    := unary { (*|×|/|÷) unary }
//   unary      := (-|−) unary | primary
//   primary    := integer | variable | "(" or ")" | "|" sum "|"
//               | abs(sum) | even(sum) | odd(sum) | power(sum, sum) | true
//
// Variables: x, y (point values) and m, n (point indices) in space files;
// x and n in map files. `p/q` is an exact rational literal.
//
// Carrier declarations:
//   carrier: index n from 2 [to 9] value 1/n
//   carrier: value x where x >= 0

#include "bvlab/errors.hpp"
#include "bvlab/scalar.hpp"
#include "bvlab/space.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bvlab::dsl {

enum class Var { X, Y, M, N };

enum class Op {
  Literal,
  Variable,
  True,
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Abs,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  And,
  Or,
  Not,
  Even,
  Odd,
  Power,
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op = Op::Literal;
  Scalar literal;
  Var var = Var::X;
  std::vector<NodePtr> args;
  int line = 0;
  int column = 0;
};

bool is_boolean(const Node& node);
/// Structural equality, ignoring source positions.
bool same_tree(const Node& a, const Node& b);

struct Clause {
  NodePtr condition;  // null for `otherwise`
  NodePtr expression;
  int line = 0;
};

struct CarrierDecl {
  bool indexed = false;
  std::int64_t first = 0;
  std::optional<std::int64_t> last;
  NodePtr value;       // indexed: expression in n
  NodePtr membership;  // valued: condition in x
};

struct SpaceSpec {
  std::string name;
  std::optional<CarrierDecl> carrier;
  std::vector<Clause> clauses;
  std::optional<int> claimed_v;
  std::optional<Scalar> claimed_s;
  std::string completeness_note = "unknown";
};

struct MapSpec {
  std::string name;
  std::vector<Clause> clauses;
};

struct ParseDiagnostic {
  int line = 0;
  int column = 0;
  std::string message;
};

std::string format(const ParseDiagnostic& d);

template <class T>
struct ParseResult {
  std::optional<T> value;
  std::vector<ParseDiagnostic> diagnostics;
  bool ok() const noexcept { return value.has_value(); }
};

ParseResult<SpaceSpec> parse_space_spec(std::string_view source);
ParseResult<MapSpec> parse_map_spec(std::string_view source);

/// Parses or throws ParseFailure listing every diagnostic.
SpaceSpec load_space_spec(std::string_view source);
MapSpec load_map_spec(std::string_view source);

class ParseFailure : public Error {
 public:
  explicit ParseFailure(std::vector<ParseDiagnostic> diagnostics);
  const std::vector<ParseDiagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<ParseDiagnostic> diagnostics_;
};

/// Variable bindings for evaluation; unset variables are an error when read.
struct Env {
  std::optional<Scalar> x, y, m, n;
};

Scalar eval_number(const Node& node, const Env& env);
bool eval_condition(const Node& node, const Env& env);

/// Value of the first clause whose condition holds. Throws NoClauseMatches or DivisionByZero.
Scalar eval_distance(const SpaceSpec& spec, const Point& p, const Point& q);
Scalar eval_map(const MapSpec& spec, const Point& p);

Carrier build_carrier(const CarrierDecl& decl);
/// Throws InvalidArgument when no carrier is declared.
GeneratedSpace build_space(const SpaceSpec& spec);
SelfMap build_map(const MapSpec& spec, const Carrier& carrier);

/// Throws NoClauseMatches when some pair of `sample` (or point, for maps) falls through every clause.
void require_exhaustive(const SpaceSpec& spec, std::span<const Point> sample);
void require_exhaustive(const MapSpec& spec, std::span<const Point> sample);

/// One warning per pair of clauses whose conditions both hold somewhere on the sample.
std::vector<std::string> lint_overlaps(const SpaceSpec& spec, std::span<const Point> sample);
std::vector<std::string> lint_overlaps(const MapSpec& spec, std::span<const Point> sample);

std::string to_source(const Node& node);
std::string to_source(const SpaceSpec& spec);
std::string to_source(const MapSpec& spec);

bool same_spec(const SpaceSpec& a, const SpaceSpec& b);
bool same_spec(const MapSpec& a, const MapSpec& b);

}  // namespace bvlab::dsl
