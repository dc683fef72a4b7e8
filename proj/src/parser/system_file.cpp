#include "parser/system_file.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "common/error.hpp"
#include "parser/expression_parser.hpp"

namespace fjkit {

namespace {

// A piece of the file with the position of its first character.
struct Span {
  std::string text;
  std::size_t line = 0;
  std::size_t column = 1;
};

Span trim(Span s) {
  std::size_t b = 0;
  while (b < s.text.size() && std::isspace(static_cast<unsigned char>(s.text[b]))) ++b;
  std::size_t e = s.text.size();
  while (e > b && std::isspace(static_cast<unsigned char>(s.text[e - 1]))) --e;
  return {s.text.substr(b, e - b), s.line, s.column + b};
}

Span sub(const Span& s, std::size_t pos, std::size_t len = std::string::npos) {
  return trim({s.text.substr(pos, len), s.line, s.column + pos});
}

[[noreturn]] void fail_at(const Span& s, ErrorCode code, const std::string& msg) {
  throw Error(code, msg, SourcePosition{0, s.line, s.column});
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return s != "sin" && s != "cos" && s != "sqrt";
}

// Splits on `sep` outside parentheses.
std::vector<Span> split_top(const Span& s, char sep) {
  std::vector<Span> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.text.size(); ++i) {
    const char c = s.text[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(sub(s, start, i - start));
      start = i + 1;
    }
  }
  out.push_back(sub(s, start));
  return out;
}

std::vector<Span> split_words(const Span& s) {
  std::vector<Span> out;
  std::size_t i = 0;
  while (i < s.text.size()) {
    while (i < s.text.size() && (std::isspace(static_cast<unsigned char>(s.text[i])) || s.text[i] == ',')) ++i;
    const std::size_t start = i;
    while (i < s.text.size() && !std::isspace(static_cast<unsigned char>(s.text[i])) && s.text[i] != ',') ++i;
    if (i > start) out.push_back({s.text.substr(start, i - start), s.line, s.column + start});
  }
  return out;
}

// Segments joined into one expression; `starts` maps offsets back to lines.
struct Joined {
  std::string text;
  std::vector<std::pair<std::size_t, Span>> starts;

  SourcePosition locate(std::size_t offset) const {
    const Span* seg = &starts.front().second;
    std::size_t base = 0;
    for (const auto& [at, span] : starts) {
      if (at > offset) break;
      seg = &span;
      base = at;
    }
    const std::size_t within = std::min(offset - base, seg->text.size());
    return {offset, seg->line, seg->column + within};
  }
};

Joined join(const std::vector<Span>& parts) {
  Joined j;
  for (const auto& p : parts) {
    if (!j.text.empty()) j.text += ' ';
    j.starts.emplace_back(j.text.size(), p);
    j.text += p.text;
  }
  return j;
}

template <typename F>
auto located(const Joined& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (Error& e) {
    const std::size_t offset = e.position() ? e.position()->offset : 0;
    if (e.position() && e.position()->line > 0) throw;
    const SourcePosition p = where.locate(offset);
    e.at_line(p.line, p.column);
    throw;
  }
}

Expr parse_at(const Span& s, const ContextPtr& ctx) {
  const Joined j = join({s});
  return located(j, [&] { return parse_expression(s.text, ctx); });
}

RawExpr parse_raw_at(const Span& s, const Context& ctx) {
  const Joined j = join({s});
  return located(j, [&] { return parse_raw_expression(s.text, ctx); });
}

const std::set<std::string> kSections = {"variables", "parameters",       "relations", "one_form",
                                         "potential", "solve_hints",      "gauge_conditions", "options"};

// (label, body) when the line starts with "label:" outside parentheses.
std::pair<std::optional<std::string>, Span> split_label(const Span& s) {
  int depth = 0;
  for (std::size_t i = 0; i < s.text.size(); ++i) {
    const char c = s.text[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ':' && depth == 0) return {sub(s, 0, i).text, sub(s, i + 1)};
    if (c == '-' && i + 1 < s.text.size() && s.text[i + 1] == '>') break;
  }
  return {std::nullopt, s};
}

class SystemParser {
 public:
  explicit SystemParser(std::string_view contents) { split_sections(contents); }

  Problem run() {
    for (const char* required : {"variables", "one_form", "potential"}) {
      if (sections_.count(required) == 0) {
        throw Error(ErrorCode::SectionMissing, std::string("required section [") + required + "] is missing");
      }
    }
    problem_.system.ctx = ctx_;
    variables();
    parameters();
    relations();
    one_form();
    potential();
    solve_hints();
    gauge_conditions();
    options();
    return std::move(problem_);
  }

 private:
  void split_sections(std::string_view contents) {
    std::string current;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= contents.size()) {
      std::size_t end = contents.find('\n', pos);
      if (end == std::string_view::npos) end = contents.size();
      std::string line(contents.substr(pos, end - pos));
      ++line_no;
      pos = end + 1;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      Span s = trim({line, line_no, 1});
      if (s.text.empty()) {
        if (end == contents.size()) break;
        continue;
      }
      if (s.text.front() == '[' && s.text.back() == ']') {
        current = trim(sub(s, 1, s.text.size() - 2)).text;
        if (kSections.count(current) == 0) fail_at(s, ErrorCode::SyntaxError, "unknown section [" + current + "]");
        if (sections_.count(current) != 0) fail_at(s, ErrorCode::DuplicateSymbol, "section [" + current + "] repeated");
        sections_[current];
        continue;
      }
      if (current.empty()) fail_at(s, ErrorCode::SyntaxError, "content before the first section header");
      sections_[current].push_back(std::move(s));
      if (end == contents.size()) break;
    }
  }

  const std::vector<Span>& lines(const std::string& name) const {
    static const std::vector<Span> empty;
    auto it = sections_.find(name);
    return it == sections_.end() ? empty : it->second;
  }

  SymbolId declare(const Span& name, SymbolKind kind) {
    if (!is_identifier(name.text)) fail_at(name, ErrorCode::SyntaxError, "'" + name.text + "' is not a valid identifier");
    try {
      return ctx_->add_symbol(name.text, kind);
    } catch (Error& e) {
      e.at_line(name.line, name.column);
      throw;
    }
  }

  void variables() {
    for (const auto& l : lines("variables")) {
      auto words = split_words(l);
      SymbolKind kind = SymbolKind::dynamical;
      if (words.size() > 1) {
        const auto k = parse_symbol_kind(words.back().text);
        if (k && (*k == SymbolKind::dynamical || *k == SymbolKind::momentum)) {
          kind = *k;
          words.pop_back();
        }
      }
      for (const auto& w : words) {
        const SymbolId id = declare(w, kind);
        problem_.system.variables.push_back(id);
      }
    }
    if (problem_.system.variables.empty()) {
      throw Error(ErrorCode::SectionMissing, "section [variables] declares no variables");
    }
  }

  void parameters() {
    for (const auto& l : lines("parameters")) {
      for (const auto& w : split_words(l)) problem_.parameters.push_back(declare(w, SymbolKind::parameter));
    }
  }

  void relations() {
    for (const auto& l : lines("relations")) {
      auto [label, body] = split_label(l);
      if (!label) fail_at(l, ErrorCode::SyntaxError, "relation must start with 'name:'");
      const Span name{*label, l.line, l.column};
      const SymbolId id = declare(name, SymbolKind::auxiliary);
      const auto parts = split_top(body, ';');
      if (parts.size() > 2) fail_at(parts[2], ErrorCode::SyntaxError, "unexpected text after the sign condition");
      const auto sides = split_top(parts[0], '=');
      if (sides.size() != 2) fail_at(parts[0], ErrorCode::SyntaxError, "relation needs exactly one '='");
      const Expr identity = parse_at(sides[0], ctx_) - parse_at(sides[1], ctx_);
      if (!identity.is_polynomial()) fail_at(parts[0], ErrorCode::InvalidRelation, "relation must be polynomial");
      int sign = 0;
      if (parts.size() == 2) sign = parse_sign(parts[1], *label);
      try {
        ctx_->add_quadratic_relation(id, identity.numerator(), sign);
      } catch (Error& e) {
        e.at_line(l.line, l.column);
        throw;
      }
    }
  }

  int parse_sign(const Span& s, const std::string& name) {
    std::string compact;
    for (char c : s.text) {
      if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
    }
    if (compact == name + ">0") return +1;
    if (compact == name + "<0") return -1;
    fail_at(s, ErrorCode::SyntaxError, "sign condition must be '" + name + " > 0' or '" + name + " < 0'");
  }

  void one_form() {
    auto& sys = problem_.system;
    std::map<SymbolId, Expr> entries;
    for (const auto& l : lines("one_form")) {
      const auto sides = split_top(l, '=');
      if (sides.size() != 2) fail_at(l, ErrorCode::SyntaxError, "one-form entry must read 'variable = expression'");
      auto id = ctx_->find(sides[0].text);
      if (!id || !sys.index_of(*id)) {
        fail_at(sides[0], ErrorCode::UndeclaredIdentifier, "'" + sides[0].text + "' is not a declared variable");
      }
      if (entries.count(*id) != 0) {
        fail_at(sides[0], ErrorCode::DuplicateSymbol, "one-form entry for '" + sides[0].text + "' given twice");
      }
      entries[*id] = parse_at(sides[1], ctx_);
    }
    if (entries.size() != sys.variables.size()) {
      std::string missing;
      for (SymbolId v : sys.variables) {
        if (entries.count(v) == 0) missing += (missing.empty() ? "" : ", ") + ctx_->name(v);
      }
      throw Error(ErrorCode::CountMismatch, std::to_string(entries.size()) + " one-form entries for " +
                                                std::to_string(sys.variables.size()) + " variables (missing " +
                                                missing + ")");
    }
    for (SymbolId v : sys.variables) sys.one_form.push_back(entries[v].with_context(ctx_));
  }

  void potential() {
    const auto& ls = lines("potential");
    if (ls.empty()) throw Error(ErrorCode::SectionMissing, "section [potential] is empty");
    const Joined j = join(ls);
    problem_.system.potential = located(j, [&] { return parse_expression(j.text, ctx_); }).with_context(ctx_);
  }

  void solve_hints() {
    for (const auto& l : lines("solve_hints")) {
      auto [label, body] = split_label(l);
      SolveHint h;
      h.label = label;
      h.text = l.text;
      for (const auto& b : split_top(body, ',')) {
        const auto arrow = b.text.find("->");
        if (arrow == std::string::npos) fail_at(b, ErrorCode::SyntaxError, "solve hint binding must read 'symbol -> expression'");
        const Span lhs = sub(b, 0, arrow);
        const Span rhs = sub(b, arrow + 2);
        const RawExpr target = parse_raw_at(lhs, *ctx_);
        SymbolId id = 0;
        switch (target->op) {
          case RawNode::Op::symbol: id = target->symbol; break;
          case RawNode::Op::sin: id = ctx_->trig_pair(target->symbol).first; break;
          case RawNode::Op::cos: id = ctx_->trig_pair(target->symbol).second; break;
          default: fail_at(lhs, ErrorCode::SyntaxError, "solve hint target must be a single symbol");
        }
        h.bindings.emplace_back(id, parse_at(rhs, ctx_).with_context(ctx_));
      }
      problem_.hints.push_back(std::move(h));
    }
  }

  void gauge_conditions() {
    std::size_t k = 0;
    for (const auto& l : lines("gauge_conditions")) {
      auto [label, body] = split_label(l);
      GaugeConditionInput g;
      g.label = label.value_or("Phi_" + std::to_string(++k));
      if (label) ++k;
      g.text = body.text;
      g.expr = parse_at(body, ctx_).with_context(ctx_);
      if (g.expr.is_zero()) fail_at(body, ErrorCode::InvalidArgument, "gauge condition is identically zero");
      problem_.gauge_conditions.push_back(std::move(g));
    }
  }

  void options() {
    for (const auto& l : lines("options")) {
      const auto sides = split_top(l, '=');
      if (sides.size() != 2) fail_at(l, ErrorCode::SyntaxError, "option must read 'key = value'");
      const std::string& key = sides[0].text;
      const std::string& value = sides[1].text;
      if (key == "max_iterations") {
        int n = 0;
        try {
          std::size_t used = 0;
          n = std::stoi(value, &used);
          if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
          fail_at(sides[1], ErrorCode::SyntaxError, "max_iterations must be an integer");
        }
        if (n < 1) fail_at(sides[1], ErrorCode::InvalidArgument, "max_iterations must be at least 1");
        problem_.options.max_iterations = n;
      } else if (key == "verbose_multipliers") {
        if (value != "true" && value != "false") {
          fail_at(sides[1], ErrorCode::SyntaxError, "verbose_multipliers must be true or false");
        }
        problem_.options.verbose_multipliers = value == "true";
      } else {
        fail_at(sides[0], ErrorCode::SyntaxError, "unknown option '" + key + "'");
      }
    }
  }

  std::map<std::string, std::vector<Span>> sections_;
  ContextPtr ctx_ = std::make_shared<Context>();
  Problem problem_;
};

}  // namespace

Problem parse_system(std::string_view contents) { return SystemParser(contents).run(); }

Problem parse_system_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_system(ss.str());
}

}  // namespace fjkit
