#include "bvlab/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace bvlab::dsl {
namespace {

enum class Tok {
  End,
  Integer,
  Ident,
  Plus,
  Minus,
  Star,
  Slash,
  LParen,
  RParen,
  Comma,
  Bar,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  Arrow,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 0;
  int column = 0;
};

struct SyntaxError {
  int line;
  int column;
  std::string message;
};

const char* describe_token(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of line";
    case Tok::Arrow: return "'=>'";
    default: return nullptr;
  }
}

std::vector<Token> tokenize(std::string_view text, int line, int column_offset) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  int column = column_offset;
  auto push = [&](Tok kind, std::string spelled, int col) { tokens.push_back(Token{kind, std::move(spelled), line, col}); };
  while (i < text.size()) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    const int col = column;
    if (std::isspace(c)) {
      ++i;
      ++column;
      continue;
    }
    if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j < text.size() && text[j] == '.') throw SyntaxError{line, col, "decimal literals are not allowed; write p/q"};
      push(Tok::Integer, std::string(text.substr(i, j - i)), col);
      column += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      push(Tok::Ident, std::string(text.substr(i, j - i)), col);
      column += static_cast<int>(j - i);
      i = j;
      continue;
    }
    // Multi-byte operators written in their mathematical form.
    static const std::pair<std::string_view, Tok> kUnicode[] = {
        {"≠", Tok::Ne}, {"≤", Tok::Le}, {"≥", Tok::Ge},
        {"×", Tok::Star}, {"÷", Tok::Slash}, {"−", Tok::Minus},
    };
    bool matched = false;
    for (const auto& [spelling, kind] : kUnicode) {
      if (text.substr(i, spelling.size()) == spelling) {
        push(kind, std::string(spelling), col);
        i += spelling.size();
        ++column;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    auto two = text.substr(i, 2);
    Tok kind = Tok::End;
    std::size_t width = 1;
    if (two == "=>") kind = Tok::Arrow, width = 2;
    else if (two == "==") kind = Tok::Eq, width = 2;
    else if (two == "!=") kind = Tok::Ne, width = 2;
    else if (two == "<=") kind = Tok::Le, width = 2;
    else if (two == ">=") kind = Tok::Ge, width = 2;
    else {
      switch (c) {
        case '+': kind = Tok::Plus; break;
        case '-': kind = Tok::Minus; break;
        case '*': kind = Tok::Star; break;
        case '/': kind = Tok::Slash; break;
        case '(': kind = Tok::LParen; break;
        case ')': kind = Tok::RParen; break;
        case ',': kind = Tok::Comma; break;
        case '|': kind = Tok::Bar; break;
        case '=': kind = Tok::Eq; break;
        case '<': kind = Tok::Lt; break;
        case '>': kind = Tok::Gt; break;
        default: throw SyntaxError{line, col, std::string("unexpected character '") + static_cast<char>(c) + "'"};
      }
    }
    push(kind, std::string(text.substr(i, width)), col);
    i += width;
    column += static_cast<int>(width);
  }
  tokens.push_back(Token{Tok::End, "", line, column});
  return tokens;
}

NodePtr make(Op op, std::vector<NodePtr> args, const Token& at) {
  auto node = std::make_shared<Node>();
  node->op = op;
  node->args = std::move(args);
  node->line = at.line;
  node->column = at.column;
  return node;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::vector<Var> allowed) : tokens_(std::move(tokens)), allowed_(std::move(allowed)) {}

  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }
  bool at(Tok kind) const { return peek().kind == kind; }
  bool at_word(std::string_view word) const { return peek().kind == Tok::Ident && peek().text == word; }

  [[noreturn]] void fail(const Token& t, const std::string& message) const {
    throw SyntaxError{t.line, t.column, message};
  }

  void expect(Tok kind, const char* what) {
    if (!at(kind)) fail(peek(), std::string("expected ") + what + found());
    next();
  }

  std::string found() const {
    const auto& t = peek();
    if (const char* d = describe_token(t)) return std::string(", found ") + d;
    return ", found '" + t.text + "'";
  }

  NodePtr parse_condition() {
    auto node = parse_or();
    if (!is_boolean(*node)) fail(tokens_[start_of(node)], "expected a condition, found an arithmetic expression");
    return node;
  }

  NodePtr parse_expression() {
    if (at(Tok::End) || at(Tok::Arrow)) fail(peek(), "expected an expression" + found());
    auto node = parse_or();
    if (is_boolean(*node)) fail(tokens_[start_of(node)], "expected an arithmetic expression, found a condition");
    return node;
  }

  void expect_end() {
    if (!at(Tok::End)) fail(peek(), "unexpected " + std::string(describe_token(peek()) ? describe_token(peek()) : ("'" + peek().text + "'")));
  }

 private:
  std::size_t start_of(const NodePtr& node) const {
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      if (tokens_[i].line == node->line && tokens_[i].column == node->column) return i;
    }
    return 0;
  }

  NodePtr parse_or() {
    auto left = parse_and();
    while (at_word("or")) {
      const auto& op = next();
      auto right = parse_and();
      require_bool(left, op, "or");
      require_bool(right, op, "or");
      auto node = make(Op::Or, {left, right}, op);
      std::const_pointer_cast<Node>(node)->line = left->line;
      std::const_pointer_cast<Node>(node)->column = left->column;
      left = node;
    }
    return left;
  }

  NodePtr parse_and() {
    auto left = parse_not();
    while (at_word("and")) {
      const auto& op = next();
      auto right = parse_not();
      require_bool(left, op, "and");
      require_bool(right, op, "and");
      auto node = make(Op::And, {left, right}, op);
      std::const_pointer_cast<Node>(node)->line = left->line;
      std::const_pointer_cast<Node>(node)->column = left->column;
      left = node;
    }
    return left;
  }

  NodePtr parse_not() {
    if (at_word("not")) {
      const auto& op = next();
      auto operand = parse_not();
      require_bool(operand, op, "not");
      return make(Op::Not, {operand}, op);
    }
    return parse_comparison();
  }

  NodePtr parse_comparison() {
    auto left = parse_sum();
    Op op;
    switch (peek().kind) {
      case Tok::Eq: op = Op::Eq; break;
      case Tok::Ne: op = Op::Ne; break;
      case Tok::Lt: op = Op::Lt; break;
      case Tok::Le: op = Op::Le; break;
      case Tok::Gt: op = Op::Gt; break;
      case Tok::Ge: op = Op::Ge; break;
      default: return left;
    }
    const auto& tok = next();
    if (at(Tok::End) || at(Tok::Arrow)) fail(peek(), "expected an expression after '" + tok.text + "'" + found());
    auto right = parse_sum();
    require_number(left, tok, tok.text);
    require_number(right, tok, tok.text);
    switch (peek().kind) {
      case Tok::Eq: case Tok::Ne: case Tok::Lt: case Tok::Le: case Tok::Gt: case Tok::Ge:
        fail(peek(), "chained comparisons are not allowed; combine with 'and'");
      default: break;
    }
    auto node = make(op, {left, right}, tok);
    std::const_pointer_cast<Node>(node)->line = left->line;
    std::const_pointer_cast<Node>(node)->column = left->column;
    return node;
  }

  NodePtr parse_sum() {
    auto left = parse_product();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      const auto& tok = next();
      auto right = parse_product();
      require_number(left, tok, tok.text);
      require_number(right, tok, tok.text);
      auto node = make(tok.kind == Tok::Plus ? Op::Add : Op::Sub, {left, right}, tok);
      std::const_pointer_cast<Node>(node)->line = left->line;
      std::const_pointer_cast<Node>(node)->column = left->column;
      left = node;
    }
    return left;
  }

  NodePtr parse_product() {
    auto left = parse_unary();
    while (at(Tok::Star) || at(Tok::Slash)) {
      const auto& tok = next();
      auto right = parse_unary();
      require_number(left, tok, tok.text);
      require_number(right, tok, tok.text);
      if (tok.kind == Tok::Slash && right->op == Op::Literal && right->literal == 0) {
        fail(tok, "division by zero in literal");
      }
      auto node = make(tok.kind == Tok::Star ? Op::Mul : Op::Div, {left, right}, tok);
      std::const_pointer_cast<Node>(node)->line = left->line;
      std::const_pointer_cast<Node>(node)->column = left->column;
      left = node;
    }
    return left;
  }

  NodePtr parse_unary() {
    if (at(Tok::Minus)) {
      const auto& tok = next();
      auto operand = parse_unary();
      require_number(operand, tok, "-");
      return make(Op::Neg, {operand}, tok);
    }
    return parse_primary();
  }

  NodePtr parse_call(const Token& name, Op op, std::size_t arity) {
    expect(Tok::LParen, ("'(' after " + name.text).c_str());
    std::vector<NodePtr> args;
    for (std::size_t k = 0; k < arity; ++k) {
      if (k) expect(Tok::Comma, "','");
      auto arg = parse_sum();
      require_number(arg, name, name.text);
      args.push_back(arg);
    }
    expect(Tok::RParen, "')'");
    return make(op, std::move(args), name);
  }

  NodePtr parse_primary() {
    const Token& tok = peek();
    switch (tok.kind) {
      case Tok::Integer: {
        next();
        auto node = make(Op::Literal, {}, tok);
        std::const_pointer_cast<Node>(node)->literal = Scalar(Integer(tok.text));
        return node;
      }
      case Tok::LParen: {
        next();
        auto inner = parse_or();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Bar: {
        next();
        auto inner = parse_sum();
        require_number(inner, tok, "|...|");
        expect(Tok::Bar, "closing '|'");
        return make(Op::Abs, {inner}, tok);
      }
      case Tok::Ident: {
        next();
        if (tok.text == "abs") return parse_call(tok, Op::Abs, 1);
        if (tok.text == "even") return parse_call(tok, Op::Even, 1);
        if (tok.text == "odd") return parse_call(tok, Op::Odd, 1);
        if (tok.text == "power") return parse_call(tok, Op::Power, 2);
        if (tok.text == "true") return make(Op::True, {}, tok);
        std::optional<Var> var;
        if (tok.text == "x") var = Var::X;
        else if (tok.text == "y") var = Var::Y;
        else if (tok.text == "m") var = Var::M;
        else if (tok.text == "n") var = Var::N;
        if (!var) fail(tok, "unknown identifier '" + tok.text + "'");
        if (std::find(allowed_.begin(), allowed_.end(), *var) == allowed_.end()) {
          fail(tok, "variable '" + tok.text + "' is not available here");
        }
        auto node = make(Op::Variable, {}, tok);
        std::const_pointer_cast<Node>(node)->var = *var;
        return node;
      }
      default:
        fail(tok, "expected an expression" + found());
    }
  }

  void require_bool(const NodePtr& node, const Token& op, const std::string& what) const {
    if (!is_boolean(*node)) fail(op, "operands of '" + what + "' must be conditions");
  }
  void require_number(const NodePtr& node, const Token& op, const std::string& what) const {
    if (is_boolean(*node)) fail(op, "operands of '" + what + "' must be arithmetic expressions");
  }

  std::vector<Token> tokens_;
  std::vector<Var> allowed_;
  std::size_t pos_ = 0;
};

struct SourceLine {
  int number;
  std::string_view text;  // comment stripped
};

std::vector<SourceLine> split_lines(std::string_view source) {
  std::vector<SourceLine> lines;
  int number = 0;
  std::size_t start = 0;
  while (start <= source.size()) {
    auto end = source.find('\n', start);
    if (end == std::string_view::npos) end = source.size();
    ++number;
    auto text = source.substr(start, end - start);
    if (auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
    lines.push_back({number, text});
    if (end == source.size()) break;
    start = end + 1;
  }
  return lines;
}

bool blank(std::string_view text) {
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::string trim_copy(std::string_view text) {
  std::size_t b = 0, e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  return std::string(text.substr(b, e - b));
}

// Header key when the line looks like `key: value` (and is not a clause).
std::optional<std::pair<std::string, std::size_t>> header_key(std::string_view text) {
  if (text.find("=>") != std::string_view::npos) return std::nullopt;
  auto colon = text.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  auto key = trim_copy(text.substr(0, colon));
  if (key.empty()) return std::nullopt;
  for (char c : key) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return std::nullopt;
  }
  return std::make_pair(key, colon + 1);
}

int column_of(std::string_view line, std::size_t byte_offset) {
  int column = 1;
  for (std::size_t i = 0; i < byte_offset && i < line.size(); ++i) {
    if ((static_cast<unsigned char>(line[i]) & 0xC0) != 0x80) ++column;
  }
  return column;
}

std::optional<Clause> parse_clause(const SourceLine& line, const std::vector<Var>& allowed,
                                   std::vector<ParseDiagnostic>& diagnostics) {
  try {
    auto tokens = tokenize(line.text, line.number, 1);
    std::size_t arrow = tokens.size();
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (tokens[i].kind == Tok::Arrow) {
        arrow = i;
        break;
      }
    }
    if (arrow == tokens.size()) {
      const auto& last = tokens.back();
      throw SyntaxError{line.number, last.column, "expected '<condition> => <expression>'"};
    }
    Clause clause;
    clause.line = line.number;
    std::vector<Token> lhs(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(arrow));
    const Token arrow_tok = tokens[arrow];
    lhs.push_back(Token{Tok::End, "", arrow_tok.line, arrow_tok.column});
    if (lhs.size() == 2 && lhs[0].kind == Tok::Ident && lhs[0].text == "otherwise") {
      clause.condition = nullptr;
    } else {
      if (lhs.size() == 1) throw SyntaxError{arrow_tok.line, arrow_tok.column, "missing condition before '=>'"};
      Parser parser(lhs, allowed);
      clause.condition = parser.parse_condition();
      if (!parser.at(Tok::End)) {
        // Anything left over belongs before the arrow.
        parser.fail(parser.peek(), "unexpected '" + parser.peek().text + "' in condition");
      }
    }
    std::vector<Token> rhs(tokens.begin() + static_cast<std::ptrdiff_t>(arrow) + 1, tokens.end());
    Parser parser(rhs, allowed);
    if (parser.at(Tok::End)) throw SyntaxError{arrow_tok.line, arrow_tok.column, "dangling '=>': missing expression"};
    clause.expression = parser.parse_expression();
    parser.expect_end();
    return clause;
  } catch (const SyntaxError& e) {
    diagnostics.push_back({e.line, e.column, e.message});
    return std::nullopt;
  }
}

std::optional<CarrierDecl> parse_carrier(const SourceLine& line, std::size_t value_offset,
                                         std::vector<ParseDiagnostic>& diagnostics) {
  try {
    auto tokens = tokenize(line.text.substr(value_offset), line.number, column_of(line.text, value_offset));
    std::size_t pos = 0;
    auto word = [&](std::string_view w) {
      return tokens[pos].kind == Tok::Ident && tokens[pos].text == w;
    };
    auto need_word = [&](std::string_view w) {
      if (!word(w)) throw SyntaxError{tokens[pos].line, tokens[pos].column, "expected '" + std::string(w) + "' in carrier declaration"};
      ++pos;
    };
    auto integer = [&]() {
      bool negative = false;
      if (tokens[pos].kind == Tok::Minus) {
        negative = true;
        ++pos;
      }
      if (tokens[pos].kind != Tok::Integer) throw SyntaxError{tokens[pos].line, tokens[pos].column, "expected an integer"};
      auto v = std::stoll(tokens[pos++].text);
      return negative ? -v : v;
    };
    CarrierDecl decl;
    if (word("index")) {
      ++pos;
      need_word("n");
      need_word("from");
      decl.indexed = true;
      decl.first = integer();
      if (word("to")) {
        ++pos;
        decl.last = integer();
        if (*decl.last < decl.first) throw SyntaxError{line.number, tokens[pos - 1].column, "empty index range"};
      }
      need_word("value");
      std::vector<Token> rest(tokens.begin() + static_cast<std::ptrdiff_t>(pos), tokens.end());
      Parser parser(rest, {Var::N});
      decl.value = parser.parse_expression();
      parser.expect_end();
    } else if (word("value")) {
      ++pos;
      need_word("x");
      need_word("where");
      std::vector<Token> rest(tokens.begin() + static_cast<std::ptrdiff_t>(pos), tokens.end());
      Parser parser(rest, {Var::X});
      decl.membership = parser.parse_condition();
      parser.expect_end();
    } else {
      throw SyntaxError{tokens[pos].line, tokens[pos].column, "carrier must start with 'index' or 'value'"};
    }
    return decl;
  } catch (const SyntaxError& e) {
    diagnostics.push_back({e.line, e.column, e.message});
    return std::nullopt;
  }
}

void parse_claims(const SourceLine& line, std::size_t offset, SpaceSpec& spec, std::vector<ParseDiagnostic>& diagnostics) {
  std::string body(line.text.substr(offset));
  for (char& c : body) {
    if (c == ',') c = ' ';
  }
  std::istringstream words(body);
  std::string word;
  while (words >> word) {
    auto eq = word.find('=');
    const int column = column_of(line.text, offset + body.find(word));
    if (eq == std::string::npos) {
      diagnostics.push_back({line.number, column, "claims entries are v=<integer> or s=<rational>"});
      continue;
    }
    auto key = word.substr(0, eq);
    auto value = parse_scalar(word.substr(eq + 1));
    if (key == "v" && value && is_integer(*value) && *value >= 1) {
      spec.claimed_v = static_cast<int>(*to_int64(*value));
    } else if (key == "s" && value && *value >= 1) {
      spec.claimed_s = *value;
    } else {
      diagnostics.push_back({line.number, column, "invalid claims entry '" + word + "'"});
    }
  }
}

template <class Spec>
void check_clause_order(const Spec& spec, std::vector<ParseDiagnostic>& diagnostics) {
  for (std::size_t i = 0; i + 1 < spec.clauses.size(); ++i) {
    if (!spec.clauses[i].condition) {
      diagnostics.push_back({spec.clauses[i + 1].line, 1, "'otherwise' must be the final clause"});
      break;
    }
  }
}

bool is_int_value(const Scalar& v) { return is_integer(v); }

bool is_power_of(const Scalar& base, const Scalar& value) {
  if (!is_int_value(base) || base < 2 || !is_int_value(value) || value < base) return false;
  Integer b = boost::multiprecision::numerator(base);
  Integer v = boost::multiprecision::numerator(value);
  while (v % b == 0) v /= b;
  return v == 1;
}

const char* var_name(Var v) {
  switch (v) {
    case Var::X: return "x";
    case Var::Y: return "y";
    case Var::M: return "m";
    case Var::N: return "n";
  }
  return "?";
}

const Scalar& lookup(const Env& env, Var v) {
  const std::optional<Scalar>* slot = nullptr;
  switch (v) {
    case Var::X: slot = &env.x; break;
    case Var::Y: slot = &env.y; break;
    case Var::M: slot = &env.m; break;
    case Var::N: slot = &env.n; break;
  }
  if (!slot->has_value()) throw InvalidArgument(std::string("variable ") + var_name(v) + " is not defined for this point");
  return **slot;
}

int precedence(const Node& node) {
  switch (node.op) {
    case Op::Or: return 1;
    case Op::And: return 2;
    case Op::Not: return 3;
    case Op::Eq: case Op::Ne: case Op::Lt: case Op::Le: case Op::Gt: case Op::Ge: return 4;
    case Op::Add: case Op::Sub: return 5;
    case Op::Mul: case Op::Div: return 6;
    case Op::Neg: return 7;
    default: return 8;
  }
}

void print(const Node& node, std::ostringstream& out);

void print_child(const Node& child, int min_prec, std::ostringstream& out) {
  if (precedence(child) < min_prec) {
    out << '(';
    print(child, out);
    out << ')';
  } else {
    print(child, out);
  }
}

void print(const Node& node, std::ostringstream& out) {
  auto binary = [&](const char* symbol, bool tight_right) {
    const int p = precedence(node);
    print_child(*node.args[0], p, out);
    out << ' ' << symbol << ' ';
    print_child(*node.args[1], tight_right ? p + 1 : p, out);
  };
  switch (node.op) {
    case Op::Literal: out << to_string(node.literal); break;
    case Op::Variable: out << var_name(node.var); break;
    case Op::True: out << "true"; break;
    case Op::Neg: out << '-'; print_child(*node.args[0], 7, out); break;
    case Op::Add: binary("+", true); break;
    case Op::Sub: binary("-", true); break;
    case Op::Mul: binary("*", true); break;
    case Op::Div: binary("/", true); break;
    case Op::Abs: out << "abs("; print(*node.args[0], out); out << ')'; break;
    case Op::Eq: print_child(*node.args[0], 5, out); out << " = "; print_child(*node.args[1], 5, out); break;
    case Op::Ne: print_child(*node.args[0], 5, out); out << " != "; print_child(*node.args[1], 5, out); break;
    case Op::Lt: print_child(*node.args[0], 5, out); out << " < "; print_child(*node.args[1], 5, out); break;
    case Op::Le: print_child(*node.args[0], 5, out); out << " <= "; print_child(*node.args[1], 5, out); break;
    case Op::Gt: print_child(*node.args[0], 5, out); out << " > "; print_child(*node.args[1], 5, out); break;
    case Op::Ge: print_child(*node.args[0], 5, out); out << " >= "; print_child(*node.args[1], 5, out); break;
    case Op::And: binary("and", true); break;
    case Op::Or: binary("or", true); break;
    case Op::Not: out << "not "; print_child(*node.args[0], 3, out); break;
    case Op::Even: out << "even("; print(*node.args[0], out); out << ')'; break;
    case Op::Odd: out << "odd("; print(*node.args[0], out); out << ')'; break;
    case Op::Power:
      out << "power(";
      print(*node.args[0], out);
      out << ", ";
      print(*node.args[1], out);
      out << ')';
      break;
  }
}

void print_clauses(const std::vector<Clause>& clauses, std::ostringstream& out) {
  for (const auto& clause : clauses) {
    if (clause.condition) {
      print(*clause.condition, out);
    } else {
      out << "otherwise";
    }
    out << " => ";
    print(*clause.expression, out);
    out << '\n';
  }
}

bool same_clauses(const std::vector<Clause>& a, const std::vector<Clause>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (static_cast<bool>(a[i].condition) != static_cast<bool>(b[i].condition)) return false;
    if (a[i].condition && !same_tree(*a[i].condition, *b[i].condition)) return false;
    if (!same_tree(*a[i].expression, *b[i].expression)) return false;
  }
  return true;
}

bool same_node_ptr(const NodePtr& a, const NodePtr& b) {
  if (!a || !b) return !a && !b;
  return same_tree(*a, *b);
}

Env point_env(const Point& p) {
  Env env;
  env.x = p.value;
  if (p.index) env.n = Scalar(*p.index);
  return env;
}

Env pair_env(const Point& p, const Point& q) {
  Env env;
  env.x = p.value;
  env.y = q.value;
  if (p.index) env.m = Scalar(*p.index);
  if (q.index) env.n = Scalar(*q.index);
  return env;
}

Scalar first_match(const std::vector<Clause>& clauses, const Env& env, const std::string& where) {
  try {
    for (const auto& clause : clauses) {
      if (!clause.condition || eval_condition(*clause.condition, env)) return eval_number(*clause.expression, env);
    }
  } catch (const DivisionByZero&) {
    throw DivisionByZero(where);
  }
  throw NoClauseMatches(where);
}

std::vector<std::size_t> matching(const std::vector<Clause>& clauses, const Env& env) {
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    try {
      if (!clauses[i].condition || eval_condition(*clauses[i].condition, env)) hits.push_back(i);
    } catch (const Error&) {
      // A condition that cannot be evaluated here does not hold here.
    }
  }
  return hits;
}

void collect_overlaps(const std::vector<Clause>& clauses, const Env& env, const std::string& where,
                      std::vector<std::vector<bool>>& seen, std::vector<std::string>& warnings) {
  auto hits = matching(clauses, env);
  for (std::size_t a = 0; a < hits.size(); ++a) {
    for (std::size_t b = a + 1; b < hits.size(); ++b) {
      const auto i = hits[a], j = hits[b];
      if (!clauses[j].condition) continue;  // `otherwise` overlaps everything by construction
      if (seen[i][j]) continue;
      seen[i][j] = true;
      warnings.push_back("clauses on lines " + std::to_string(clauses[i].line) + " and " +
                         std::to_string(clauses[j].line) + " overlap at " + where);
    }
  }
}

}  // namespace

bool is_boolean(const Node& node) {
  switch (node.op) {
    case Op::True: case Op::Eq: case Op::Ne: case Op::Lt: case Op::Le: case Op::Gt: case Op::Ge:
    case Op::And: case Op::Or: case Op::Not: case Op::Even: case Op::Odd: case Op::Power:
      return true;
    default:
      return false;
  }
}

bool same_tree(const Node& a, const Node& b) {
  if (a.op != b.op || a.args.size() != b.args.size()) return false;
  if (a.op == Op::Literal && a.literal != b.literal) return false;
  if (a.op == Op::Variable && a.var != b.var) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!same_tree(*a.args[i], *b.args[i])) return false;
  }
  return true;
}

std::string format(const ParseDiagnostic& d) {
  return std::to_string(d.line) + ":" + std::to_string(d.column) + ": " + d.message;
}

ParseFailure::ParseFailure(std::vector<ParseDiagnostic> diagnostics)
    : Error([&] {
        std::string text = "parse failed";
        for (const auto& d : diagnostics) text += "\n  " + format(d);
        return text;
      }()),
      diagnostics_(std::move(diagnostics)) {}

ParseResult<SpaceSpec> parse_space_spec(std::string_view source) {
  ParseResult<SpaceSpec> result;
  SpaceSpec spec;
  auto& diagnostics = result.diagnostics;
  int last_line = 0;
  for (const auto& line : split_lines(source)) {
    last_line = line.number;
    if (blank(line.text)) continue;
    if (auto header = header_key(line.text)) {
      const auto& [key, offset] = *header;
      if (key == "name") spec.name = trim_copy(line.text.substr(offset));
      else if (key == "carrier") {
        if (auto decl = parse_carrier(line, offset, diagnostics)) spec.carrier = std::move(decl);
      } else if (key == "claims") parse_claims(line, offset, spec, diagnostics);
      else if (key == "completeness") spec.completeness_note = trim_copy(line.text.substr(offset));
      else diagnostics.push_back({line.number, 1, "unknown header '" + key + "'"});
      continue;
    }
    if (auto clause = parse_clause(line, {Var::X, Var::Y, Var::M, Var::N}, diagnostics)) {
      spec.clauses.push_back(std::move(*clause));
    }
  }
  check_clause_order(spec, diagnostics);
  if (spec.clauses.empty() && diagnostics.empty()) diagnostics.push_back({last_line, 1, "no clauses"});
  if (diagnostics.empty()) result.value = std::move(spec);
  return result;
}

ParseResult<MapSpec> parse_map_spec(std::string_view source) {
  ParseResult<MapSpec> result;
  MapSpec spec;
  auto& diagnostics = result.diagnostics;
  int last_line = 0;
  for (const auto& line : split_lines(source)) {
    last_line = line.number;
    if (blank(line.text)) continue;
    if (auto header = header_key(line.text)) {
      const auto& [key, offset] = *header;
      if (key == "name") spec.name = trim_copy(line.text.substr(offset));
      else diagnostics.push_back({line.number, 1, "unknown header '" + key + "' in a map file"});
      continue;
    }
    if (auto clause = parse_clause(line, {Var::X, Var::N}, diagnostics)) spec.clauses.push_back(std::move(*clause));
  }
  check_clause_order(spec, diagnostics);
  if (spec.clauses.empty() && diagnostics.empty()) diagnostics.push_back({last_line, 1, "no clauses"});
  if (diagnostics.empty()) result.value = std::move(spec);
  return result;
}

SpaceSpec load_space_spec(std::string_view source) {
  auto parsed = parse_space_spec(source);
  if (!parsed.ok()) throw ParseFailure(std::move(parsed.diagnostics));
  return std::move(*parsed.value);
}

MapSpec load_map_spec(std::string_view source) {
  auto parsed = parse_map_spec(source);
  if (!parsed.ok()) throw ParseFailure(std::move(parsed.diagnostics));
  return std::move(*parsed.value);
}

Scalar eval_number(const Node& node, const Env& env) {
  switch (node.op) {
    case Op::Literal: return node.literal;
    case Op::Variable: return lookup(env, node.var);
    case Op::Neg: return -eval_number(*node.args[0], env);
    case Op::Add: return eval_number(*node.args[0], env) + eval_number(*node.args[1], env);
    case Op::Sub: return eval_number(*node.args[0], env) - eval_number(*node.args[1], env);
    case Op::Mul: return eval_number(*node.args[0], env) * eval_number(*node.args[1], env);
    case Op::Div: {
      Scalar den = eval_number(*node.args[1], env);
      if (den == 0) throw DivisionByZero(to_source(node));
      return eval_number(*node.args[0], env) / den;
    }
    case Op::Abs: return abs_value(eval_number(*node.args[0], env));
    default: throw InvalidArgument("condition used where a number is required");
  }
}

bool eval_condition(const Node& node, const Env& env) {
  auto num = [&](std::size_t i) { return eval_number(*node.args[i], env); };
  switch (node.op) {
    case Op::True: return true;
    case Op::Eq: return num(0) == num(1);
    case Op::Ne: return num(0) != num(1);
    case Op::Lt: return num(0) < num(1);
    case Op::Le: return num(0) <= num(1);
    case Op::Gt: return num(0) > num(1);
    case Op::Ge: return num(0) >= num(1);
    case Op::And: return eval_condition(*node.args[0], env) && eval_condition(*node.args[1], env);
    case Op::Or: return eval_condition(*node.args[0], env) || eval_condition(*node.args[1], env);
    case Op::Not: return !eval_condition(*node.args[0], env);
    case Op::Even: {
      Scalar v = num(0);
      return is_integer(v) && boost::multiprecision::numerator(v) % 2 == 0;
    }
    case Op::Odd: {
      Scalar v = num(0);
      return is_integer(v) && boost::multiprecision::numerator(v) % 2 != 0;
    }
    case Op::Power: return is_power_of(num(0), num(1));
    default: throw InvalidArgument("number used where a condition is required");
  }
}

Scalar eval_distance(const SpaceSpec& spec, const Point& p, const Point& q) {
  return first_match(spec.clauses, pair_env(p, q), "rho(" + p.label + ", " + q.label + ")");
}

Scalar eval_map(const MapSpec& spec, const Point& p) {
  return first_match(spec.clauses, point_env(p), spec.name + "(" + p.label + ")");
}

Carrier build_carrier(const CarrierDecl& decl) {
  if (decl.indexed) {
    auto value = decl.value;
    return Carrier::indexed(decl.first, decl.last, [value](std::int64_t n) {
      Env env;
      env.n = Scalar(n);
      return eval_number(*value, env);
    });
  }
  auto membership = decl.membership;
  return Carrier::valued([membership](const Scalar& x) {
    Env env;
    env.x = x;
    try {
      return eval_condition(*membership, env);
    } catch (const DivisionByZero&) {
      return false;
    }
  });
}

GeneratedSpace build_space(const SpaceSpec& spec) {
  if (!spec.carrier) throw InvalidArgument("space '" + spec.name + "' declares no carrier");
  auto shared = std::make_shared<const SpaceSpec>(spec);
  return GeneratedSpace(spec.name, build_carrier(*spec.carrier),
                        [shared](const Point& p, const Point& q) { return eval_distance(*shared, p, q); },
                        spec.completeness_note);
}

SelfMap build_map(const MapSpec& spec, const Carrier& carrier) {
  auto shared = std::make_shared<const MapSpec>(spec);
  return SelfMap::piecewise(spec.name.empty() ? "T" : spec.name, [shared, carrier](const Point& p) {
    if (!carrier.contains(p)) throw PointNotInCarrier(p.label);
    return carrier.resolve(eval_map(*shared, p));
  });
}

void require_exhaustive(const SpaceSpec& spec, std::span<const Point> sample) {
  for (const auto& p : sample) {
    for (const auto& q : sample) eval_distance(spec, p, q);
  }
}

void require_exhaustive(const MapSpec& spec, std::span<const Point> sample) {
  for (const auto& p : sample) eval_map(spec, p);
}

std::vector<std::string> lint_overlaps(const SpaceSpec& spec, std::span<const Point> sample) {
  std::vector<std::string> warnings;
  std::vector<std::vector<bool>> seen(spec.clauses.size(), std::vector<bool>(spec.clauses.size(), false));
  for (const auto& p : sample) {
    for (const auto& q : sample) {
      collect_overlaps(spec.clauses, pair_env(p, q), "(" + p.label + ", " + q.label + ")", seen, warnings);
    }
  }
  return warnings;
}

std::vector<std::string> lint_overlaps(const MapSpec& spec, std::span<const Point> sample) {
  std::vector<std::string> warnings;
  std::vector<std::vector<bool>> seen(spec.clauses.size(), std::vector<bool>(spec.clauses.size(), false));
  for (const auto& p : sample) collect_overlaps(spec.clauses, point_env(p), p.label, seen, warnings);
  return warnings;
}

std::string to_source(const Node& node) {
  std::ostringstream out;
  print(node, out);
  return out.str();
}

std::string to_source(const SpaceSpec& spec) {
  std::ostringstream out;
  if (!spec.name.empty()) out << "name: " << spec.name << '\n';
  if (spec.carrier) {
    const auto& c = *spec.carrier;
    if (c.indexed) {
      out << "carrier: index n from " << c.first;
      if (c.last) out << " to " << *c.last;
      out << " value ";
      print(*c.value, out);
    } else {
      out << "carrier: value x where ";
      print(*c.membership, out);
    }
    out << '\n';
  }
  if (spec.claimed_v || spec.claimed_s) {
    out << "claims:";
    if (spec.claimed_v) out << " v=" << *spec.claimed_v;
    if (spec.claimed_s) out << " s=" << to_string(*spec.claimed_s);
    out << '\n';
  }
  out << "completeness: " << spec.completeness_note << '\n';
  print_clauses(spec.clauses, out);
  return out.str();
}

std::string to_source(const MapSpec& spec) {
  std::ostringstream out;
  if (!spec.name.empty()) out << "name: " << spec.name << '\n';
  print_clauses(spec.clauses, out);
  return out.str();
}

bool same_spec(const SpaceSpec& a, const SpaceSpec& b) {
  if (a.name != b.name || a.claimed_v != b.claimed_v || a.claimed_s != b.claimed_s ||
      a.completeness_note != b.completeness_note) {
    return false;
  }
  if (a.carrier.has_value() != b.carrier.has_value()) return false;
  if (a.carrier) {
    const auto& x = *a.carrier;
    const auto& y = *b.carrier;
    if (x.indexed != y.indexed || x.first != y.first || x.last != y.last) return false;
    if (!same_node_ptr(x.value, y.value) || !same_node_ptr(x.membership, y.membership)) return false;
  }
  return same_clauses(a.clauses, b.clauses);
}

bool same_spec(const MapSpec& a, const MapSpec& b) { return a.name == b.name && same_clauses(a.clauses, b.clauses); }

}  // namespace bvlab::dsl
