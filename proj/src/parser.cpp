#include "pisym/parser.hpp"

#include <cctype>
#include <sstream>
#include <vector>

#include "pisym/syntax.hpp"

namespace pisym {

namespace {

enum class Tok { Name, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  bool quoted = false;
  std::size_t line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip();
      Token t;
      t.line = line_;
      t.col = col_;
      if (i_ >= s_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = s_[i_];
      if (c == '\'') {
        advance();
        while (i_ < s_.size() && s_[i_] != '\'' && s_[i_] != '\n')
          t.text += advance();
        if (i_ >= s_.size() || s_[i_] != '\'')
          throw ParseError("unterminated quoted name", t.line, t.col);
        advance();
        if (t.text.empty()) throw ParseError("empty quoted name", t.line, t.col);
        while (i_ < s_.size() && s_[i_] == '\'') t.text += advance();
        t.kind = Tok::Name;
        t.quoted = true;
      } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
        while (i_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[i_])) ||
                s_[i_] == '_'))
          t.text += advance();
        while (i_ < s_.size() && s_[i_] == '\'') t.text += advance();
        t.kind = Tok::Name;
      } else if (std::string_view("!?.+|(),").find(c) != std::string_view::npos) {
        t.text = std::string(1, advance());
        t.kind = Tok::Sym;
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'",
                         t.line, t.col);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char advance() {
    const char c = s_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip() {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        advance();
      } else if (s_[i_] == '#') {
        while (i_ < s_.size() && s_[i_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string_view s_;
  std::size_t i_ = 0, line_ = 1, col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  Process file() {
    Process p = proc();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return p;
  }

 private:
  const Token& peek() const { return t_[i_]; }
  Token take() { return t_[i_ < t_.size() - 1 ? i_++ : i_]; }

  bool is_sym(const char* s) const {
    return peek().kind == Tok::Sym && peek().text == s;
  }
  bool is_kw(const char* s) const {
    return peek().kind == Tok::Name && !peek().quoted && peek().text == s;
  }
  bool is_name() const {
    if (peek().kind != Tok::Name) return false;
    if (peek().quoted) return true;
    const auto& x = peek().text;
    return !(x == "0" || x == "ok" || x == "rep" || x == "new" || x == "in" ||
             x == "tau");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    const auto& t = peek();
    throw ParseError(msg, t.line, t.col);
  }

  void expect(const char* s) {
    if (!is_sym(s) && !is_kw(s))
      fail(std::string("expected '") + s + "'" +
           (peek().kind == Tok::End ? " at end of input"
                                    : " but found '" + peek().text + "'"));
    take();
  }

  Name name() {
    if (!is_name())
      fail(peek().kind == Tok::End ? "expected a name at end of input"
                                   : "expected a name but found '" +
                                         peek().text + "'");
    return take().text;
  }

  Process proc() {
    Process l = sum();
    if (is_sym("|")) {
      take();
      return Process::par(l, proc());
    }
    return l;
  }

  Process sum() {
    const Token start = peek();
    Process first = prefixed();
    if (!is_sym("+")) return first;
    std::vector<Branch> branches;
    auto absorb = [&](const Process& p, const Token& at) {
      if (p.kind() != Process::Kind::Sum)
        throw ParseError("choice operands must be guarded", at.line, at.col);
      for (const auto& b : p.branches()) branches.push_back(b);
    };
    absorb(first, start);
    while (is_sym("+")) {
      take();
      const Token at = peek();
      absorb(prefixed(), at);
    }
    return Process::sum(std::move(branches));
  }

  Process continuation() {
    if (is_sym(".")) {
      take();
      return prefixed();
    }
    return Process::nil();
  }

  Process prefixed() {
    if (is_kw("0")) {
      take();
      return Process::nil();
    }
    if (is_kw("ok")) {
      take();
      return Process::success();
    }
    if (is_kw("rep")) {
      take();
      return Process::repl(prefixed());
    }
    if (is_kw("new")) {
      take();
      std::vector<Name> names{name()};
      while (is_sym(",")) {
        take();
        names.push_back(name());
      }
      expect("in");
      Process body = prefixed();
      for (auto it = names.rbegin(); it != names.rend(); ++it)
        body = Process::restrict(*it, body);
      return body;
    }
    if (is_kw("tau")) {
      take();
      return Process::prefix(Guard::tau(), continuation());
    }
    if (is_sym("(")) {
      take();
      Process p = proc();
      expect(")");
      return p;
    }
    if (!is_name())
      fail(peek().kind == Tok::End ? "unexpected end of input"
                                   : "unexpected '" + peek().text + "'");
    Name ch = name();
    if (is_sym("!")) {
      take();
      Name obj = is_name() ? name() : kUnit;
      return Process::prefix(Guard::output(ch, obj), continuation());
    }
    if (is_sym("?")) {
      take();
      Name binder = kUnit;
      if (is_sym("(")) {
        const Token open = peek();
        take();
        binder = name();
        if (!is_sym(")"))
          throw ParseError("unclosed binder '(" + binder + "'", open.line,
                           open.col);
        take();
      }
      return Process::prefix(Guard::input(ch, binder), continuation());
    }
    fail("expected '!' or '?' after channel " + ch);
  }

  std::vector<Token> t_;
  std::size_t i_ = 0;
};

// ---------------------------------------------------------------------------

void fmt_par(std::ostream& os, const Process& p);
void fmt_prefixed(std::ostream& os, const Process& p);

void fmt_branch(std::ostream& os, const Branch& b) {
  os << format_guard(b.guard);
  if (!b.cont.is_nil()) {
    os << '.';
    fmt_prefixed(os, b.cont);
  }
}

void fmt_sum(std::ostream& os, const Process& p) {
  if (p.kind() == Process::Kind::Sum && p.branches().size() > 1) {
    bool first = true;
    for (const auto& b : p.branches()) {
      if (!first) os << " + ";
      first = false;
      fmt_branch(os, b);
    }
    return;
  }
  fmt_prefixed(os, p);
}

void fmt_prefixed(std::ostream& os, const Process& p) {
  switch (p.kind()) {
    case Process::Kind::Success:
      os << "ok";
      return;
    case Process::Kind::Repl:
      os << "rep ";
      fmt_prefixed(os, p.body());
      return;
    case Process::Kind::Restrict: {
      auto [names, body] = split_restrictions(p);
      os << "new ";
      for (std::size_t i = 0; i < names.size(); ++i)
        os << (i ? "," : "") << quote_name(names[i]);
      os << " in ";
      fmt_prefixed(os, body);
      return;
    }
    case Process::Kind::Sum:
      if (p.is_nil()) {
        os << '0';
        return;
      }
      if (p.branches().size() == 1) {
        fmt_branch(os, p.branches()[0]);
        return;
      }
      break;
    case Process::Kind::Par:
      break;
  }
  os << '(';
  fmt_par(os, p);
  os << ')';
}

void fmt_par(std::ostream& os, const Process& p) {
  if (p.kind() != Process::Kind::Par) {
    fmt_sum(os, p);
    return;
  }
  if (p.left().kind() == Process::Kind::Par) {
    os << '(';
    fmt_par(os, p.left());
    os << ')';
  } else {
    fmt_sum(os, p.left());
  }
  os << " | ";
  fmt_par(os, p.right());
}

}  // namespace

Process parse(std::string_view text) {
  Process p = Parser(Lexer(text).run()).file();
  Name bad;
  if (!is_wellformed(p, &bad)) {
    if (free_names(p).count(bad))
      throw WellformednessError("name " + quote_name(bad) +
                                    " is both bound and free",
                                bad);
    throw WellformednessError(
        "name " + quote_name(bad) + " is bound inside its own scope", bad);
  }
  return p;
}

std::string format_guard(const Guard& g) {
  switch (g.kind) {
    case GuardKind::Tau:
      return "tau";
    case GuardKind::Output:
      return quote_name(g.channel) + "!" +
             (is_unit(g.object) ? "" : quote_name(g.object));
    case GuardKind::Input:
      return quote_name(g.channel) + "?" +
             (is_unit(g.object) ? "" : "(" + quote_name(g.object) + ")");
  }
  return {};
}

std::string format(const Process& p) {
  std::ostringstream os;
  fmt_par(os, p);
  return os.str();
}

}  // namespace pisym
