#include "hhls/psm_text.hpp"

#include <set>

#include "hhls/error.hpp"
#include "hhls/io.hpp"
#include "hhls/numfmt.hpp"

namespace hhls {

std::string Diagnostic::to_string() const {
  return hhls::to_string(span) + (severity == Severity::Error ? ": error: " : ": warning: ") +
         message;
}

std::vector<Diagnostic> to_diagnostics(const ValidationReport& report) {
  std::vector<Diagnostic> out;
  for (const auto& f : report.findings)
    out.push_back({f.location,
                   f.severity == Finding::Severity::Error ? Diagnostic::Severity::Error
                                                          : Diagnostic::Severity::Warning,
                   f.message + " [" + f.code + "]"});
  return out;
}

namespace {

enum class Tok { Ident, Number, String, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
};

class Lexer {
 public:
  Lexer(std::string_view text, const std::string& file, std::vector<Diagnostic>& diags)
      : text_(text), file_(file), diags_(diags) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) break;
      const int line = line_, col = col_;
      const std::size_t start = pos_;
      char c = text_[pos_];
      Token t;
      if (is_alpha(c)) {
        while (pos_ < text_.size() && (is_alpha(text_[pos_]) || is_digit(text_[pos_]))) advance();
        t.kind = Tok::Ident;
      } else if (is_digit(c)) {
        while (pos_ < text_.size() && is_digit(text_[pos_])) advance();
        if (pos_ + 1 < text_.size() && text_[pos_] == '.' && is_digit(text_[pos_ + 1])) {
          advance();
          while (pos_ < text_.size() && is_digit(text_[pos_])) advance();
        }
        t.kind = Tok::Number;
      } else if (c == '"') {
        advance();
        while (pos_ < text_.size() && text_[pos_] != '"' && text_[pos_] != '\n') advance();
        if (pos_ >= text_.size() || text_[pos_] != '"') {
          error(line, col, static_cast<int>(pos_ - start), "unterminated string literal");
          continue;
        }
        advance();
        t.kind = Tok::String;
        t.text = std::string(text_.substr(start + 1, pos_ - start - 2));
        t.span = {file_, line, col, static_cast<int>(pos_ - start)};
        out.push_back(std::move(t));
        continue;
      } else {
        static const char* kTwo[] = {"->", "<-", "==", "!=", "<=", ">=", "<<", ">>", "&&", "||"};
        bool matched = false;
        for (const char* two : kTwo) {
          if (text_.substr(pos_, 2) == two) {
            advance();
            advance();
            matched = true;
            break;
          }
        }
        if (!matched) {
          if (std::string_view("{}();:,.=<>+-*/%&|^!~").find(c) == std::string_view::npos) {
            advance();
            error(line, col, 1, "unexpected character " + describe(c));
            continue;
          }
          advance();
        }
        t.kind = Tok::Punct;
      }
      t.text = std::string(text_.substr(start, pos_ - start));
      t.span = {file_, line, col, static_cast<int>(pos_ - start)};
      out.push_back(std::move(t));
    }
    Token end;
    end.kind = Tok::End;
    end.span = {file_, line_, col_, 1};
    out.push_back(end);
    return out;
  }

 private:
  static bool is_alpha(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  static std::string describe(char c) {
    auto u = static_cast<unsigned char>(c);
    if (u >= 0x20 && u < 0x7f) return std::string("'") + c + "'";
    static const char* hex = "0123456789abcdef";
    return std::string("byte 0x") + hex[u >> 4] + hex[u & 15];
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  void error(int line, int col, int len, std::string message) {
    diags_.push_back({{file_, line, col, std::max(len, 1)}, Diagnostic::Severity::Error, std::move(message)});
  }

  std::string_view text_;
  std::string file_;
  std::vector<Diagnostic>& diags_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

struct SyntaxError {};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::vector<Diagnostic>& diags)
      : toks_(std::move(tokens)), diags_(diags) {}

  PsmModule parse_module() {
    PsmModule module;
    std::set<std::string> components, systems;
    while (!at_end()) {
      const std::size_t start = pos_;
      try {
        if (is_word("component")) {
          auto c = parse_component();
          if (!components.insert(c.name).second)
            error(c.span, "duplicate declaration of component '" + c.name + "'");
          module.components.push_back(std::move(c));
        } else if (is_word("system")) {
          auto s = parse_system();
          if (!systems.insert(s.name).second)
            error(s.span, "duplicate declaration of system '" + s.name + "'");
          module.systems.push_back(std::move(s));
        } else {
          unexpected("'component' or 'system'");
        }
      } catch (const SyntaxError&) {
        recover_top_level(start);
      }
    }
    return module;
  }

 private:
  // --- token helpers -------------------------------------------------------
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at_end() const { return peek().kind == Tok::End; }
  bool is_word(std::string_view w, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Ident && peek(ahead).text == w;
  }
  bool is_punct(std::string_view p, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Punct && peek(ahead).text == p;
  }
  const Token& take() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool accept(std::string_view p) {
    if (is_punct(p)) {
      take();
      return true;
    }
    return false;
  }

  void error(const SourceSpan& at, std::string message) {
    diags_.push_back({at, Diagnostic::Severity::Error, std::move(message)});
  }

  [[noreturn]] void unexpected(const std::string& expected) {
    const Token& t = peek();
    std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    error(t.span, "unexpected " + got + ", expected " + expected);
    throw SyntaxError{};
  }

  void expect(std::string_view p) {
    if (!accept(p)) unexpected("'" + std::string(p) + "'");
  }
  void expect_word(std::string_view w) {
    if (!is_word(w)) unexpected("'" + std::string(w) + "'");
    take();
  }
  const Token& ident(const char* what) {
    if (peek().kind != Tok::Ident) unexpected(what);
    return take();
  }
  void end_statement() { accept(";"); }

  // Skips to the end of the enclosing top-level block.
  void recover_top_level(std::size_t start) {
    if (pos_ == start) take();
    int depth = 0;
    for (std::size_t i = start; i < pos_; ++i) {
      if (toks_[i].kind != Tok::Punct) continue;
      if (toks_[i].text == "{") ++depth;
      if (toks_[i].text == "}") --depth;
    }
    while (!at_end() && depth > 0) {
      const Token& t = take();
      if (t.kind == Tok::Punct && t.text == "{") ++depth;
      if (t.kind == Tok::Punct && t.text == "}") --depth;
    }
    while (!at_end() && !is_word("component") && !is_word("system")) {
      const Token& t = take();
      if (t.kind == Tok::Punct && t.text == "{") {
        int d = 1;
        while (!at_end() && d > 0) {
          const Token& u = take();
          if (u.kind == Tok::Punct && u.text == "{") ++d;
          if (u.kind == Tok::Punct && u.text == "}") --d;
        }
      }
    }
  }

  // --- literals ------------------------------------------------------------
  std::int64_t signed_integer() {
    bool negative = accept("-");
    if (peek().kind != Tok::Number) unexpected("integer literal");
    const Token& t = take();
    auto v = parse_decimal(t.text);
    if (!v || v->den() != 1) {
      error(t.span, "expected an integer, got '" + t.text + "'");
      throw SyntaxError{};
    }
    return negative ? -v->num() : v->num();
  }

  Rational duration() {
    const SourceSpan at = peek().span;
    bool negative = accept("-");
    if (peek().kind != Tok::Number) unexpected("duration");
    const Token& num = take();
    auto value = parse_decimal(num.text);
    if (peek().kind != Tok::Ident || !unit_seconds(peek().text)) unexpected("time unit (ns, us, ms, s)");
    auto scale = *unit_seconds(take().text);
    if (!value) {
      error(at, "duration literal out of range");
      throw SyntaxError{};
    }
    try {
      Rational r = *value * scale;
      return negative ? -r : r;
    } catch (const std::exception&) {
      error(at, "duration literal out of range");
      throw SyntaxError{};
    }
  }

  int int_type() {
    const Token& t = ident("integer type (e.g. int32)");
    if (t.text.size() > 3 && t.text.starts_with("int")) {
      std::uint64_t w = 0;
      if (parse_u64(std::string_view(t.text).substr(3), w) && w >= 1 && w <= 64)
        return static_cast<int>(w);
    }
    error(t.span, "unknown type '" + t.text + "', expected int<N>");
    throw SyntaxError{};
  }

  // --- expressions ---------------------------------------------------------
  static std::optional<BinaryOp> binary_op(const Token& t) {
    if (t.kind != Tok::Punct) return std::nullopt;
    static const std::pair<const char*, BinaryOp> kOps[] = {
        {"*", BinaryOp::Mul},     {"/", BinaryOp::Div},    {"%", BinaryOp::Mod},
        {"+", BinaryOp::Add},     {"-", BinaryOp::Sub},    {"<<", BinaryOp::Shl},
        {">>", BinaryOp::Shr},    {"<", BinaryOp::Lt},     {"<=", BinaryOp::Le},
        {">", BinaryOp::Gt},      {">=", BinaryOp::Ge},    {"==", BinaryOp::Eq},
        {"!=", BinaryOp::Ne},     {"&", BinaryOp::BitAnd}, {"^", BinaryOp::BitXor},
        {"|", BinaryOp::BitOr},   {"&&", BinaryOp::And},   {"||", BinaryOp::Or}};
    for (auto [s, op] : kOps)
      if (t.text == s) return op;
    return std::nullopt;
  }

  Expr expression(int min_prec = 1) {
    if (++depth_ > 200) {
      error(peek().span, "expression nested too deeply");
      throw SyntaxError{};
    }
    Expr lhs = unary();
    while (true) {
      auto op = binary_op(peek());
      if (!op || precedence(*op) < min_prec) break;
      take();
      Expr rhs = expression(precedence(*op) + 1);
      lhs = Expr::binary(*op, std::move(lhs), std::move(rhs));
    }
    --depth_;
    return lhs;
  }

  Expr unary() {
    if (++depth_ > 200) {
      error(peek().span, "expression nested too deeply");
      throw SyntaxError{};
    }
    Expr out;
    if (accept("-")) out = Expr::unary(UnaryOp::Neg, unary());
    else if (accept("!")) out = Expr::unary(UnaryOp::Not, unary());
    else if (accept("~")) out = Expr::unary(UnaryOp::BitNot, unary());
    else if (accept("(")) {
      out = expression();
      expect(")");
    } else if (peek().kind == Tok::Number) {
      const Token& t = take();
      auto v = parse_decimal(t.text);
      if (!v || v->den() != 1) {
        error(t.span, "expected an integer literal, got '" + t.text + "'");
        throw SyntaxError{};
      }
      out = Expr::literal(v->num());
    } else if (peek().kind == Tok::Ident) {
      out = Expr::name(take().text);
    } else {
      unexpected("expression");
    }
    --depth_;
    return out;
  }

  // --- component -----------------------------------------------------------
  PsmComponent parse_component() {
    PsmComponent c;
    const Token& kw = take();
    c.span = kw.span;
    c.name = ident("component name").text;
    expect("{");
    bool have_period = false;
    bool have_initial = false;
    std::set<std::string> names, states, mccs;
    auto declare = [&](std::set<std::string>& seen, const std::string& name, const SourceSpan& at,
                       const char* what) {
      if (!seen.insert(name).second)
        error(at, std::string("duplicate declaration of ") + what + " '" + name + "'");
    };
    while (!accept("}")) {
      const SourceSpan at = peek().span;
      if (is_word("period")) {
        take();
        if (have_period) error(at, "duplicate declaration of period");
        have_period = true;
        c.period = duration();
        end_statement();
      } else if (is_word("input") || is_word("output")) {
        EventDecl e;
        e.direction = take().text == "input" ? Direction::Input : Direction::Output;
        expect_word("event");
        const Token& n = ident("event name");
        e.name = n.text;
        e.span = n.span;
        if (accept(":")) e.payload_width = int_type();
        declare(names, e.name, e.span, "event");
        c.events.push_back(std::move(e));
        end_statement();
      } else if (is_word("var")) {
        take();
        Variable v;
        const Token& n = ident("variable name");
        v.name = n.text;
        v.span = n.span;
        if (accept(":")) v.width = int_type();
        if (accept("=")) v.initial = signed_integer();
        declare(names, v.name, v.span, "variable");
        c.variables.push_back(std::move(v));
        end_statement();
      } else if (is_word("const")) {
        take();
        Constant k;
        const Token& n = ident("constant name");
        k.name = n.text;
        k.span = n.span;
        expect("=");
        k.value = signed_integer();
        declare(names, k.name, k.span, "constant");
        c.constants.push_back(std::move(k));
        end_statement();
      } else if (is_word("mcc")) {
        take();
        MccSignature m;
        const Token& n = ident("mcc name");
        m.name = n.text;
        m.span = n.span;
        expect("(");
        m.arguments = static_cast<int>(signed_integer());
        expect(")");
        expect("->");
        expect("(");
        m.results = static_cast<int>(signed_integer());
        expect(")");
        if (is_word("dfg")) {
          take();
          if (peek().kind != Tok::String) unexpected("dfg path string");
          m.dfg = take().text;
        }
        declare(mccs, m.name, m.span, "mcc");
        c.mccs.push_back(std::move(m));
        end_statement();
      } else if (is_word("initial")) {
        take();
        if (have_initial) error(at, "duplicate declaration of initial state");
        have_initial = true;
        c.initial = ident("initial state name").text;
        end_statement();
      } else if (is_word("state")) {
        take();
        State s = parse_state();
        declare(states, s.name, s.span, "state");
        c.states.push_back(std::move(s));
      } else {
        unexpected("component item");
      }
    }
    return c;
  }

  State parse_state() {
    State s;
    const Token& n = ident("state name");
    s.name = n.text;
    s.span = n.span;
    expect("{");
    while (!accept("}")) {
      const SourceSpan at = peek().span;
      if (is_word("import") && peek(1).kind == Tok::Ident) {
        take();
        ExternalTransition t;
        t.event = take().text;
        expect("->");
        t.target = ident("target state").text;
        t.span = at;
        s.imports.push_back(std::move(t));
      } else if (is_word("ts") && is_punct("(", 1)) {
        take();
        take();
        TimedTransition t;
        t.span = at;
        if (is_word("inf")) {
          take();
          t.spec = TimingSpec::infinite();
        } else if (is_word("delta")) {
          take();
          t.spec = TimingSpec::delta();
        } else {
          t.spec = TimingSpec::finite(duration());
        }
        expect(")");
        if (accept("->")) t.target = ident("target state").text;
        if (s.timed) error(at, "duplicate timing specification in state '" + s.name + "'");
        s.timed = std::move(t);
      } else if (is_word("when") && is_punct("(", 1)) {
        take();
        take();
        GuardTransition g;
        g.span = at;
        g.condition = expression();
        expect(")");
        expect("->");
        g.target = ident("target state").text;
        s.guards.push_back(std::move(g));
      } else if (is_word("notify") && peek(1).kind == Tok::Ident) {
        take();
        s.entry.push_back({NotifyAction{take().text}, at});
      } else if (is_word("export") && peek(1).kind == Tok::Ident) {
        take();
        ExportAction x;
        x.event = take().text;
        expect("=");
        x.value = expression();
        s.entry.push_back({std::move(x), at});
      } else if (is_word("invoke") && peek(1).kind == Tok::Ident) {
        take();
        InvokeAction m;
        m.mcc = take().text;
        m.arguments = name_list();
        if (accept("->")) m.results = name_list();
        s.entry.push_back({std::move(m), at});
      } else if (peek().kind == Tok::Ident && is_punct("=", 1)) {
        AssignAction a;
        a.variable = take().text;
        take();
        a.value = expression();
        s.entry.push_back({std::move(a), at});
      } else {
        unexpected("state statement");
      }
      end_statement();
    }
    return s;
  }

  std::vector<std::string> name_list() {
    std::vector<std::string> out;
    expect("(");
    if (accept(")")) return out;
    do {
      out.push_back(ident("name").text);
    } while (accept(","));
    expect(")");
    return out;
  }

  // --- system --------------------------------------------------------------
  Endpoint endpoint(std::vector<std::pair<Endpoint, SourceSpan>>& uses) {
    const SourceSpan at = peek().span;
    Endpoint ep;
    ep.instance = ident("instance name").text;
    expect(".");
    ep.event = ident("event name").text;
    uses.push_back({ep, at});
    return ep;
  }

  PsmSystem parse_system() {
    PsmSystem s;
    s.span = take().span;
    s.name = ident("system name").text;
    expect("{");
    std::set<std::string> instances, ports;
    std::vector<std::pair<Endpoint, SourceSpan>> uses;
    while (!accept("}")) {
      const SourceSpan at = peek().span;
      if (is_word("instance")) {
        take();
        Instance inst;
        const Token& n = ident("instance name");
        inst.name = n.text;
        inst.span = n.span;
        expect(":");
        inst.component = ident("component name").text;
        if (is_word("period")) {
          take();
          inst.period = duration();
        }
        if (!instances.insert(inst.name).second)
          error(inst.span, "duplicate declaration of instance '" + inst.name + "'");
        s.instances.push_back(std::move(inst));
      } else if (is_word("connect")) {
        take();
        Connection c;
        c.span = at;
        c.source = endpoint(uses);
        expect("->");
        c.destination = endpoint(uses);
        s.connections.push_back(std::move(c));
      } else if ((is_word("input") || is_word("output")) && is_word("port", 1)) {
        Port p;
        p.direction = take().text == "input" ? Direction::Input : Direction::Output;
        take();
        const Token& n = ident("port name");
        p.name = n.text;
        p.span = n.span;
        expect(p.direction == Direction::Input ? "->" : "<-");
        p.binding = endpoint(uses);
        if (!ports.insert(p.name).second)
          error(p.span, "duplicate declaration of port '" + p.name + "'");
        s.ports.push_back(std::move(p));
      } else {
        unexpected("system item");
      }
      end_statement();
    }
    for (const auto& [ep, at] : uses)
      if (!instances.count(ep.instance))
        error(at, "connection endpoint names undeclared instance '" + ep.instance + "'");
    return s;
  }

  std::vector<Token> toks_;
  std::vector<Diagnostic>& diags_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

bool has_errors(const std::vector<Diagnostic>& d) {
  for (const auto& x : d)
    if (x.severity == Diagnostic::Severity::Error) return true;
  return false;
}

}  // namespace

ParseResult<PsmModule> parse_module(std::string_view text, const std::string& file) {
  ParseResult<PsmModule> result;
  try {
    Lexer lexer(text, file, result.diagnostics);
    auto tokens = lexer.run();
    Parser parser(std::move(tokens), result.diagnostics);
    PsmModule module = parser.parse_module();
    if (!has_errors(result.diagnostics)) result.value = std::move(module);
  } catch (const std::exception& e) {
    result.diagnostics.push_back({{file, 1, 1, 1}, Diagnostic::Severity::Error,
                                  std::string("internal parser failure: ") + e.what()});
  }
  return result;
}

ParseResult<PsmComponent> parse_component(std::string_view text, const std::string& file) {
  auto module = parse_module(text, file);
  ParseResult<PsmComponent> result;
  result.diagnostics = std::move(module.diagnostics);
  if (!module.value) return result;
  if (module.value->components.size() != 1 || !module.value->systems.empty()) {
    result.diagnostics.push_back({{file, 1, 1, 1}, Diagnostic::Severity::Error,
                                  "expected exactly one component declaration, found " +
                                      std::to_string(module.value->components.size())});
    return result;
  }
  result.value = std::move(module.value->components.front());
  return result;
}

ParseResult<PsmSystem> parse_system(std::string_view text, const std::string& file) {
  auto module = parse_module(text, file);
  ParseResult<PsmSystem> result;
  result.diagnostics = std::move(module.diagnostics);
  if (!module.value) return result;
  if (module.value->systems.size() != 1) {
    result.diagnostics.push_back({{file, 1, 1, 1}, Diagnostic::Severity::Error,
                                  "expected exactly one system declaration, found " +
                                      std::to_string(module.value->systems.size())});
    return result;
  }
  result.value = std::move(module.value->systems.front());
  return result;
}

namespace {

std::string type_name(int width) { return "int" + std::to_string(width); }

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out;
}

}  // namespace

std::string pretty(const PsmComponent& c) {
  std::string out = "component " + c.name + " {\n";
  out += "  period " + format_duration(c.period) + ";\n";
  for (const auto& e : c.events) {
    out += std::string("  ") + (e.direction == Direction::Input ? "input" : "output") + " event " +
           e.name;
    if (e.payload_width) out += " : " + type_name(*e.payload_width);
    out += ";\n";
  }
  for (const auto& v : c.variables)
    out += "  var " + v.name + " : " + type_name(v.width) + " = " + std::to_string(v.initial) + ";\n";
  for (const auto& k : c.constants)
    out += "  const " + k.name + " = " + std::to_string(k.value) + ";\n";
  for (const auto& m : c.mccs) {
    out += "  mcc " + m.name + "(" + std::to_string(m.arguments) + ") -> (" +
           std::to_string(m.results) + ")";
    if (m.dfg) out += " dfg \"" + *m.dfg + "\"";
    out += ";\n";
  }
  out += "  initial " + c.initial + ";\n";
  for (const auto& s : c.states) {
    out += "\n  state " + s.name + " {\n";
    for (const auto& a : s.entry) {
      out += "    ";
      std::visit(
          [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, NotifyAction>) {
              out += "notify " + x.event;
            } else if constexpr (std::is_same_v<T, ExportAction>) {
              out += "export " + x.event + " = " + x.value.render();
            } else if constexpr (std::is_same_v<T, AssignAction>) {
              out += x.variable + " = " + x.value.render();
            } else {
              out += "invoke " + x.mcc + "(" + join(x.arguments) + ")";
              if (!x.results.empty()) out += " -> (" + join(x.results) + ")";
            }
          },
          a.kind);
      out += ";\n";
    }
    for (const auto& i : s.imports) out += "    import " + i.event + " -> " + i.target + ";\n";
    for (const auto& g : s.guards)
      out += "    when (" + g.condition.render() + ") -> " + g.target + ";\n";
    if (s.timed) {
      const auto& t = *s.timed;
      out += "    ts(";
      if (t.spec.is_infinite()) out += "inf";
      else if (t.spec.is_delta()) out += "delta";
      else out += format_duration(t.spec.duration);
      out += ")";
      if (t.target) out += " -> " + *t.target;
      out += ";\n";
    }
    out += "  }\n";
  }
  out += "}\n";
  return out;
}

std::string pretty(const PsmSystem& s) {
  std::string out = "system " + s.name + " {\n";
  for (const auto& i : s.instances) {
    out += "  instance " + i.name + " : " + i.component;
    if (i.period) out += " period " + format_duration(*i.period);
    out += ";\n";
  }
  for (const auto& p : s.ports) {
    out += p.direction == Direction::Input ? "  input port " + p.name + " -> "
                                           : "  output port " + p.name + " <- ";
    out += p.binding.instance + "." + p.binding.event + ";\n";
  }
  for (const auto& c : s.connections)
    out += "  connect " + c.source.instance + "." + c.source.event + " -> " +
           c.destination.instance + "." + c.destination.event + ";\n";
  out += "}\n";
  return out;
}

std::string pretty(const PsmModule& module) {
  std::string out;
  for (const auto& c : module.components) out += (out.empty() ? "" : "\n") + pretty(c);
  for (const auto& s : module.systems) out += (out.empty() ? "" : "\n") + pretty(s);
  return out;
}

PsmModule load_module_files(const std::vector<std::string>& paths) {
  PsmModule module;
  for (const auto& path : paths) {
    auto parsed = parse_module(read_file(path), path);
    if (!parsed.ok()) {
      std::string message = "cannot parse " + path;
      for (const auto& d : parsed.diagnostics) message += "\n" + d.to_string();
      fail(message);
    }
    module.merge(std::move(*parsed.value));
  }
  return module;
}

}  // namespace hhls
