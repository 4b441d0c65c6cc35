#include "pathlogic/formula.hpp"

#include <functional>

namespace pathlogic {

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_atom(const Atom& a) {
  std::size_t h = std::hash<std::string>{}(a.predicate);
  for (const auto& arg : a.args) h = mix(h, std::hash<std::string>{}(arg));
  return mix(h, a.args.size());
}

}  // namespace

bool is_identifier(std::string_view text) {
  if (text.empty() || text.front() < 'a' || text.front() > 'z') return false;
  for (char c : text) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

Atom make_atom(std::string predicate, std::vector<std::string> args) {
  if (!is_identifier(predicate)) throw std::invalid_argument("bad predicate identifier: '" + predicate + "'");
  for (const auto& a : args) {
    if (!is_identifier(a)) throw std::invalid_argument("bad constant identifier: '" + a + "'");
  }
  return Atom{std::move(predicate), std::move(args)};
}

std::string to_string(const Atom& atom) {
  std::string out = atom.predicate;
  if (!atom.args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < atom.args.size(); ++i) {
      if (i) out += ',';
      out += atom.args[i];
    }
    out += ')';
  }
  return out;
}

Formula Formula::make_atom(Atom a) {
  auto node = std::make_shared<Node>();
  node->kind = Connective::atom;
  node->hash = mix(hash_atom(a), 1);
  node->atom = std::move(a);
  return Formula(std::move(node));
}

Formula Formula::make_not(Formula operand) {
  auto node = std::make_shared<Node>();
  node->kind = Connective::negation;
  node->size = operand.size() + 1;
  node->hash = mix(operand.hash(), 2);
  node->children.push_back(std::move(operand));
  return Formula(std::move(node));
}

Formula Formula::make_binary(Connective kind, Formula lhs, Formula rhs) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->size = lhs.size() + rhs.size() + 1;
  node->hash = mix(mix(lhs.hash(), rhs.hash()), static_cast<std::size_t>(kind) + 3);
  node->children.push_back(std::move(lhs));
  node->children.push_back(std::move(rhs));
  return Formula(std::move(node));
}

Formula Formula::make_implies(Formula a, Formula b) { return make_binary(Connective::implication, std::move(a), std::move(b)); }
Formula Formula::make_or(Formula a, Formula b) { return make_binary(Connective::disjunction, std::move(a), std::move(b)); }
Formula Formula::make_and(Formula a, Formula b) { return make_binary(Connective::conjunction, std::move(a), std::move(b)); }

bool Formula::is_literal() const {
  return is_atom() || (kind() == Connective::negation && operand().is_atom());
}

const Atom& Formula::atom() const {
  if (!is_atom()) throw std::logic_error("Formula::atom on a compound formula");
  return node_->atom;
}

const Formula& Formula::operand() const {
  if (kind() != Connective::negation) throw std::logic_error("Formula::operand on a non-negation");
  return node_->children[0];
}

const Formula& Formula::lhs() const {
  if (node_->children.size() != 2) throw std::logic_error("Formula::lhs on a non-binary formula");
  return node_->children[0];
}

const Formula& Formula::rhs() const {
  if (node_->children.size() != 2) throw std::logic_error("Formula::rhs on a non-binary formula");
  return node_->children[1];
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.size() != b.size()) return false;
  if (a.is_atom()) return a.node_->atom == b.node_->atom;
  const auto& ca = a.node_->children;
  const auto& cb = b.node_->children;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (!(ca[i] == cb[i])) return false;
  }
  return true;
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  if (a.is_atom()) return a.node_->atom <=> b.node_->atom;
  const auto& ca = a.node_->children;
  const auto& cb = b.node_->children;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (auto c = ca[i] <=> cb[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

Formula atom(std::string_view name) { return Formula::make_atom(make_atom(std::string(name))); }
Formula atom(Atom a) { return Formula::make_atom(std::move(a)); }
Formula neg(Formula f) { return Formula::make_not(std::move(f)); }
Formula implies(Formula a, Formula b) { return Formula::make_implies(std::move(a), std::move(b)); }
Formula lor(Formula a, Formula b) { return Formula::make_or(std::move(a), std::move(b)); }
Formula land(Formula a, Formula b) { return Formula::make_and(std::move(a), std::move(b)); }

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::string describe_expected(const std::vector<std::string>& expected) {
  std::string out;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) out += i + 1 == expected.size() ? " or " : ", ";
    out += expected[i];
  }
  return out;
}

enum class Tok { ident, minus, amp, bar, arrow, lparen, rparen, comma, period, end };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string_view text;
};

std::string_view tok_name(Tok t) {
  switch (t) {
    case Tok::ident: return "identifier";
    case Tok::minus: return "'-'";
    case Tok::amp: return "'&'";
    case Tok::bar: return "'|'";
    case Tok::arrow: return "'->'";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::comma: return "','";
    case Tok::period: return "'.'";
    case Tok::end: return "end of input";
  }
  return "?";
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) {
        out.push_back({Tok::end, pos_, {}});
        return out;
      }
      std::size_t start = pos_;
      char c = text_[pos_];
      if (c >= 'a' && c <= 'z') {
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
        out.push_back({Tok::ident, start, text_.substr(start, pos_ - start)});
        continue;
      }
      switch (c) {
        case '-':
          if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
            pos_ += 2;
            out.push_back({Tok::arrow, start, text_.substr(start, 2)});
          } else {
            ++pos_;
            out.push_back({Tok::minus, start, text_.substr(start, 1)});
          }
          continue;
        case '&': out.push_back(single(Tok::amp)); continue;
        case '|': out.push_back(single(Tok::bar)); continue;
        case '(': out.push_back(single(Tok::lparen)); continue;
        case ')': out.push_back(single(Tok::rparen)); continue;
        case ',': out.push_back(single(Tok::comma)); continue;
        case '.': out.push_back(single(Tok::period)); continue;
        default:
          throw ParseError(start, {"identifier", "'-'", "'('"}, std::string(1, c));
      }
    }
  }

 private:
  static bool is_ident_char(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_'; }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  Token single(Tok kind) {
    Token t{kind, pos_, text_.substr(pos_, 1)};
    ++pos_;
    return t;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Formula parse_all() {
    Formula f = parse_implication();
    if (peek().kind == Tok::period) ++pos_;
    if (peek().kind != Tok::end) fail({"'->'", "'|'", "'&'", "'.'", "end of input"});
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    throw ParseError(t.offset, std::move(expected), t.kind == Tok::end ? std::string(tok_name(t.kind)) : std::string(t.text));
  }

  Formula parse_implication() {
    Formula lhs = parse_disjunction();
    if (peek().kind == Tok::arrow) {
      ++pos_;
      return implies(std::move(lhs), parse_implication());
    }
    return lhs;
  }

  Formula parse_disjunction() {
    Formula lhs = parse_conjunction();
    if (peek().kind == Tok::bar) {
      ++pos_;
      return lor(std::move(lhs), parse_disjunction());
    }
    return lhs;
  }

  Formula parse_conjunction() {
    Formula lhs = parse_unary();
    if (peek().kind == Tok::amp) {
      ++pos_;
      return land(std::move(lhs), parse_conjunction());
    }
    return lhs;
  }

  Formula parse_unary() {
    if (peek().kind == Tok::minus) {
      ++pos_;
      return neg(parse_unary());
    }
    return parse_primary();
  }

  Formula parse_primary() {
    if (peek().kind == Tok::lparen) {
      ++pos_;
      Formula inner = parse_implication();
      if (peek().kind != Tok::rparen) fail({"')'", "'->'", "'|'", "'&'"});
      ++pos_;
      return inner;
    }
    if (peek().kind != Tok::ident) fail({"identifier", "'-'", "'('"});
    Atom a;
    a.predicate = std::string(peek().text);
    ++pos_;
    if (peek().kind == Tok::lparen) {
      ++pos_;
      while (true) {
        if (peek().kind != Tok::ident) fail({"identifier"});
        a.args.emplace_back(peek().text);
        ++pos_;
        if (peek().kind == Tok::comma) {
          ++pos_;
          continue;
        }
        if (peek().kind == Tok::rparen) {
          ++pos_;
          break;
        }
        fail({"','", "')'"});
      }
    }
    return atom(std::move(a));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

int precedence(const Formula& f) {
  switch (f.kind()) {
    case Connective::implication: return 1;
    case Connective::disjunction: return 2;
    case Connective::conjunction: return 3;
    case Connective::negation: return 4;
    case Connective::atom: return 5;
  }
  return 0;
}

void format_into(const Formula& f, std::string& out);

void format_operand(const Formula& f, bool parenthesize, std::string& out) {
  if (parenthesize) out += '(';
  format_into(f, out);
  if (parenthesize) out += ')';
}

void format_into(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Connective::atom:
      out += to_string(f.atom());
      return;
    case Connective::negation:
      // `-(-p)` rather than `--p`: Prover9 lexes runs of symbol characters as one token.
      out += '-';
      format_operand(f.operand(), !f.operand().is_atom(), out);
      return;
    default:
      break;
  }
  const int p = precedence(f);
  std::string_view op = f.kind() == Connective::implication ? " -> " : f.kind() == Connective::disjunction ? " | " : " & ";
  // Right-associative: a left operand at the same level needs parentheses.
  format_operand(f.lhs(), precedence(f.lhs()) <= p, out);
  out += op;
  format_operand(f.rhs(), precedence(f.rhs()) < p, out);
}

}  // namespace

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected, std::string found)
    : std::runtime_error("syntax error at byte " + std::to_string(offset) + ": expected " + describe_expected(expected) +
                         ", found '" + found + "'"),
      offset_(offset),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

Formula parse_formula(std::string_view text) {
  Lexer lexer(text);
  auto tokens = lexer.run();
  if (tokens.size() == 1 || (tokens.size() == 2 && tokens[0].kind == Tok::period)) {
    throw ParseError(tokens.front().offset, {"identifier", "'-'", "'('"}, "empty input");
  }
  return Parser(std::move(tokens)).parse_all();
}

std::string format_formula(const Formula& f) {
  std::string out;
  format_into(f, out);
  return out;
}

void collect_atoms(const Formula& f, std::set<Atom>& out) {
  switch (f.kind()) {
    case Connective::atom:
      out.insert(f.atom());
      return;
    case Connective::negation:
      collect_atoms(f.operand(), out);
      return;
    default:
      collect_atoms(f.lhs(), out);
      collect_atoms(f.rhs(), out);
  }
}

std::set<Atom> atoms_of(const Formula& f) {
  std::set<Atom> out;
  collect_atoms(f, out);
  return out;
}

bool same_shape(const Formula& a, const Formula& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Connective::atom: return true;
    case Connective::negation: return same_shape(a.operand(), b.operand());
    default: return same_shape(a.lhs(), b.lhs()) && same_shape(a.rhs(), b.rhs());
  }
}

}  // namespace pathlogic
