#include "parser/expression_parser.hpp"

#include <cctype>
#include <string>
#include <vector>

#include "common/error.hpp"

namespace fjkit {

namespace {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
  Tok kind;
  std::string_view text;
  std::size_t offset;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::end) return "end of input";
  return "'" + std::string(t.text) + "'";
}

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char ch = s[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      }
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
          i = j;
          while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        }
      }
      if (s.substr(start, i - start) == ".") {
        throw Error(ErrorCode::SyntaxError, "stray '.'", SourcePosition{start, 0, 0})
            .with_expected({"number", "identifier", "'('", "'-'"});
      }
      out.push_back({Tok::number, s.substr(start, i - start), start});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::ident, s.substr(start, i - start), start});
      continue;
    }
    Tok k;
    switch (ch) {
      case '+': k = Tok::plus; break;
      case '-': k = Tok::minus; break;
      case '*': k = Tok::star; break;
      case '/': k = Tok::slash; break;
      case '^': k = Tok::caret; break;
      case '(': k = Tok::lparen; break;
      case ')': k = Tok::rparen; break;
      default:
        throw Error(ErrorCode::SyntaxError, std::string("unexpected character '") + ch + "'",
                    SourcePosition{start, 0, 0})
            .with_expected({"number", "identifier", "operator", "'('", "')'"});
    }
    out.push_back({k, s.substr(start, 1), start});
    ++i;
  }
  out.push_back({Tok::end, {}, s.size()});
  return out;
}

Rational parse_number(std::string_view text) {
  std::string digits;
  long exp10 = 0;
  std::size_t i = 0;
  for (; i < text.size() && text[i] != 'e' && text[i] != 'E'; ++i) {
    if (text[i] == '.') continue;
    digits += text[i];
  }
  const auto dot = text.find('.');
  const std::size_t mantissa_end = i;
  if (dot != std::string_view::npos) exp10 -= static_cast<long>(mantissa_end - dot - 1);
  if (i < text.size()) exp10 += std::stol(std::string(text.substr(i + 1)));
  if (digits.empty()) digits = "0";
  Rational q{Integer(digits)};
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  if (exp10 < 0) {
    q /= scale;
  } else {
    q *= scale;
  }
  q.canonicalize();
  return q;
}

std::optional<Rational> fold_constant(const RawNode& n) {
  using Op = RawNode::Op;
  switch (n.op) {
    case Op::number: return n.value;
    case Op::neg: {
      auto a = fold_constant(*n.args[0]);
      if (!a) return std::nullopt;
      return Rational(-*a);
    }
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div: {
      auto a = fold_constant(*n.args[0]);
      auto b = fold_constant(*n.args[1]);
      if (!a || !b) return std::nullopt;
      if (n.op == Op::add) return Rational(*a + *b);
      if (n.op == Op::sub) return Rational(*a - *b);
      if (n.op == Op::mul) return Rational(*a * *b);
      if (*b == 0) return std::nullopt;
      return Rational(*a / *b);
    }
    case Op::pow: {
      auto a = fold_constant(*n.args[0]);
      if (!a || (*a == 0 && n.exponent < 0)) return std::nullopt;
      Rational r(1);
      const int e = n.exponent < 0 ? -n.exponent : n.exponent;
      for (int k = 0; k < e; ++k) r *= *a;
      if (n.exponent < 0) r = 1 / r;
      return r;
    }
    default: return std::nullopt;
  }
}

constexpr int kMaxExponent = 1000;

class Parser {
 public:
  Parser(std::string_view text, const Context& ctx) : tokens_(lex(text)), ctx_(ctx) {}

  RawExpr parse() {
    RawExpr e = sum();
    if (peek().kind != Tok::end) {
      fail(peek(), {"operator", "end of input"});
    }
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  [[noreturn]] void fail(const Token& t, std::vector<std::string> expected) {
    std::string msg = "unexpected " + describe(t) + ", expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
    throw Error(ErrorCode::SyntaxError, msg, SourcePosition{t.offset, 0, 0}).with_expected(std::move(expected));
  }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(peek(), {what});
    ++pos_;
  }

  static RawExpr node(RawNode::Op op, std::size_t offset, std::vector<RawExpr> args) {
    auto n = std::make_shared<RawNode>();
    n->op = op;
    n->offset = offset;
    n->args = std::move(args);
    return n;
  }

  RawExpr sum() {
    RawExpr lhs = product();
    while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
      const Token& op = next();
      RawExpr rhs = product();
      lhs = node(op.kind == Tok::plus ? RawNode::Op::add : RawNode::Op::sub, lhs->offset, {lhs, rhs});
    }
    return lhs;
  }

  RawExpr product() {
    RawExpr lhs = unary();
    while (peek().kind == Tok::star || peek().kind == Tok::slash) {
      const Token& op = next();
      RawExpr rhs = unary();
      lhs = node(op.kind == Tok::star ? RawNode::Op::mul : RawNode::Op::div, lhs->offset, {lhs, rhs});
    }
    return lhs;
  }

  RawExpr unary() {
    if (peek().kind == Tok::minus) {
      const Token& op = next();
      return node(RawNode::Op::neg, op.offset, {unary()});
    }
    return power();
  }

  RawExpr power() {
    RawExpr base = primary();
    if (peek().kind != Tok::caret) return base;
    next();
    const std::size_t at = peek().offset;
    RawExpr ex = unary();
    auto value = fold_constant(*ex);
    if (!value || value->get_den() != 1 || abs(*value) > kMaxExponent) {
      throw Error(ErrorCode::NonIntegerExponent, "exponent must be an integer constant of magnitude <= 1000",
                  SourcePosition{at, 0, 0});
    }
    auto n = std::make_shared<RawNode>();
    n->op = RawNode::Op::pow;
    n->offset = base->offset;
    n->exponent = static_cast<int>(value->get_num().get_si());
    n->args = {base};
    return n;
  }

  SymbolId lookup(const Token& t) {
    auto id = ctx_.find(t.text);
    if (!id) {
      throw Error(ErrorCode::UndeclaredIdentifier, "identifier '" + std::string(t.text) + "' is not declared",
                  SourcePosition{t.offset, 0, 0});
    }
    return *id;
  }

  RawExpr call(const Token& fn) {
    next();  // '('
    RawExpr out;
    if (fn.text == "sqrt") {
      out = node(RawNode::Op::sqrt, fn.offset, {sum()});
    } else {
      if (peek().kind != Tok::ident) fail(peek(), {"identifier"});
      const Token& arg = next();
      const bool nested = arg.text == "sin" || arg.text == "cos" || arg.text == "sqrt";
      if (nested || ctx_.kind(lookup(arg)) == SymbolKind::auxiliary) {
        throw Error(ErrorCode::SyntaxError, "argument of " + std::string(fn.text) + " must be a plain symbol",
                    SourcePosition{arg.offset, 0, 0})
            .with_expected({"identifier"});
      }
      auto n = std::make_shared<RawNode>();
      n->op = fn.text == "sin" ? RawNode::Op::sin : RawNode::Op::cos;
      n->symbol = lookup(arg);
      n->offset = fn.offset;
      out = n;
    }
    expect(Tok::rparen, "')'");
    return out;
  }

  RawExpr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::number: {
        next();
        auto n = std::make_shared<RawNode>();
        n->op = RawNode::Op::number;
        n->value = parse_number(t.text);
        n->offset = t.offset;
        return n;
      }
      case Tok::ident: {
        next();
        const bool builtin = t.text == "sin" || t.text == "cos" || t.text == "sqrt";
        if (builtin && peek().kind == Tok::lparen) return call(t);
        auto n = std::make_shared<RawNode>();
        n->op = RawNode::Op::symbol;
        n->symbol = lookup(t);
        n->offset = t.offset;
        return n;
      }
      case Tok::lparen: {
        next();
        RawExpr inner = sum();
        expect(Tok::rparen, "')'");
        return inner;
      }
      default: fail(t, {"number", "identifier", "'('", "'-'"});
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const Context& ctx_;
};

}  // namespace

RawExpr parse_raw_expression(std::string_view text, const Context& ctx) { return Parser(text, ctx).parse(); }

Expr parse_expression(std::string_view text, const ContextPtr& ctx) {
  return normalize(parse_raw_expression(text, *ctx), ctx);
}

}  // namespace fjkit
