#include <cctype>
#include <cstdlib>
#include <set>

#include "s2p/ppddl.hpp"

namespace s2p::ppddl {

ParseError::ParseError(SourcePos pos, const std::string& message, bool semantic)
    : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " +
                         (semantic ? "semantic error: " : "parse error: ") + message),
      pos_(pos),
      semantic_(semantic) {}

namespace {

struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  SourcePos pos;

  bool is_atom(std::string_view s) const { return !is_list && atom == s; }
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  SExpr read_top() {
    skip_space();
    if (at_end()) throw ParseError(here(), "empty input");
    SExpr e = read();
    skip_space();
    if (!at_end()) throw ParseError(here(), "trailing content after top-level form");
    return e;
  }

 private:
  bool at_end() const { return i_ >= text_.size(); }
  SourcePos here() const { return {line_, col_}; }

  void advance() {
    if (text_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void skip_space() {
    while (!at_end()) {
      const char c = text_[i_];
      if (c == ';') {
        while (!at_end() && text_[i_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    skip_space();
    if (at_end()) throw ParseError(here(), "unexpected end of input");
    SExpr e;
    e.pos = here();
    const char c = text_[i_];
    if (c == ')') throw ParseError(here(), "unexpected ')'");
    if (c == '(') {
      e.is_list = true;
      advance();
      while (true) {
        skip_space();
        if (at_end()) throw ParseError(e.pos, "unterminated list");
        if (text_[i_] == ')') {
          advance();
          break;
        }
        e.items.push_back(read());
      }
      return e;
    }
    while (!at_end()) {
      const char d = text_[i_];
      if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d))) break;
      e.atom += static_cast<char>(std::tolower(static_cast<unsigned char>(d)));
      advance();
    }
    return e;
  }

  std::string_view text_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

[[noreturn]] void fail(const SExpr& at, const std::string& msg) { throw ParseError(at.pos, msg); }
[[noreturn]] void fail_semantic(SourcePos pos, const std::string& msg) { throw ParseError(pos, msg, true); }

const std::string& expect_name(const SExpr& e, const char* what) {
  if (e.is_list || e.atom.empty() || e.atom.front() == ':') fail(e, std::string("expected ") + what);
  return e.atom;
}

Literal parse_literal(const SExpr& e) {
  if (!e.is_list || e.items.empty()) fail(e, "expected a literal");
  if (e.items.front().is_atom("not")) {
    if (e.items.size() != 2) fail(e, "'not' takes exactly one atom");
    Literal l = parse_literal(e.items[1]);
    if (!l.positive) fail(e, "nested negation");
    l.positive = false;
    l.pos = e.pos;
    return l;
  }
  if (e.items.size() != 1) fail(e, "only 0-ary predicates are supported");
  return Literal{expect_name(e.items.front(), "predicate name"), true, e.pos};
}

std::vector<Literal> parse_conjunction(const SExpr& e) {
  if (e.is_list && !e.items.empty() && e.items.front().is_atom("and")) {
    std::vector<Literal> out;
    for (std::size_t i = 1; i < e.items.size(); ++i) out.push_back(parse_literal(e.items[i]));
    return out;
  }
  if (e.is_list && e.items.empty()) return {};
  return {parse_literal(e)};
}

double parse_probability(const SExpr& e) {
  if (e.is_list) fail(e, "expected a probability");
  char* end = nullptr;
  const double v = std::strtod(e.atom.c_str(), &end);
  if (end == e.atom.c_str() || *end != '\0') fail(e, "malformed number '" + e.atom + "'");
  return v;
}

std::vector<Branch> parse_effect(const SExpr& e) {
  if (e.is_list && !e.items.empty() && e.items.front().is_atom("probabilistic")) {
    if (e.items.size() % 2 != 1) fail(e, "'probabilistic' expects probability/effect pairs");
    std::vector<Branch> out;
    for (std::size_t i = 1; i + 1 < e.items.size(); i += 2) {
      Branch b;
      b.pos = e.items[i].pos;
      b.probability = parse_probability(e.items[i]);
      b.effects = parse_conjunction(e.items[i + 1]);
      out.push_back(std::move(b));
    }
    return out;
  }
  return {Branch{1.0, parse_conjunction(e), e.pos}};
}

void check_requirements(const SExpr& sec, Domain& d) {
  static const std::set<std::string> supported{":strips", ":probabilistic-effects", ":negative-preconditions"};
  d.requirements.clear();
  for (std::size_t i = 1; i < sec.items.size(); ++i) {
    const SExpr& r = sec.items[i];
    if (r.is_list || !supported.count(r.atom)) fail(r, "unsupported requirement '" + r.atom + "'");
    d.requirements.push_back(r.atom);
  }
}

Action parse_action(const SExpr& sec) {
  if (sec.items.size() < 2) fail(sec, "action without a name");
  Action a;
  a.pos = sec.pos;
  a.name = expect_name(sec.items[1], "action name");
  bool saw_effect = false;
  for (std::size_t i = 2; i < sec.items.size(); i += 2) {
    const SExpr& key = sec.items[i];
    if (i + 1 >= sec.items.size()) fail(key, "missing value for " + key.atom);
    const SExpr& value = sec.items[i + 1];
    if (key.is_atom(":parameters")) {
      if (!value.is_list || !value.items.empty()) fail(value, "only empty :parameters () are supported");
    } else if (key.is_atom(":precondition")) {
      a.precondition = parse_conjunction(value);
    } else if (key.is_atom(":effect")) {
      a.effect = parse_effect(value);
      saw_effect = true;
    } else {
      fail(key, "unexpected action field '" + key.atom + "'");
    }
  }
  if (!saw_effect) a.effect.clear();
  return a;
}

Domain interpret_domain(const SExpr& top) {
  Domain d;
  d.pos = top.pos;
  const SExpr& head = top.items[1];
  if (head.items.size() != 2) fail(head, "expected (domain <name>)");
  d.name = expect_name(head.items[1], "domain name");
  for (std::size_t i = 2; i < top.items.size(); ++i) {
    const SExpr& sec = top.items[i];
    if (!sec.is_list || sec.items.empty()) fail(sec, "expected a domain section");
    const SExpr& kw = sec.items.front();
    if (kw.is_atom(":requirements")) {
      check_requirements(sec, d);
    } else if (kw.is_atom(":predicates")) {
      for (std::size_t k = 1; k < sec.items.size(); ++k) {
        const SExpr& p = sec.items[k];
        if (!p.is_list || p.items.size() != 1) fail(p, "only 0-ary predicates are supported");
        d.predicates.push_back(expect_name(p.items.front(), "predicate name"));
        d.predicate_pos.push_back(p.pos);
      }
    } else if (kw.is_atom(":action")) {
      d.actions.push_back(parse_action(sec));
    } else {
      fail(kw, "unsupported domain section '" + kw.atom + "'");
    }
  }
  // Semantic checks that do not need a problem.
  for (const Diagnostic& diag : validate(d)) {
    if (diag.severity == Diagnostic::Severity::Error) fail_semantic(diag.pos, diag.message);
  }
  return d;
}

Problem interpret_problem(const SExpr& top) {
  Problem p;
  p.pos = top.pos;
  const SExpr& head = top.items[1];
  if (head.items.size() != 2) fail(head, "expected (problem <name>)");
  p.name = expect_name(head.items[1], "problem name");
  bool saw_domain = false, saw_goal = false;
  for (std::size_t i = 2; i < top.items.size(); ++i) {
    const SExpr& sec = top.items[i];
    if (!sec.is_list || sec.items.empty()) fail(sec, "expected a problem section");
    const SExpr& kw = sec.items.front();
    if (kw.is_atom(":domain")) {
      if (sec.items.size() != 2) fail(sec, "expected (:domain <name>)");
      p.domain = expect_name(sec.items[1], "domain name");
      saw_domain = true;
    } else if (kw.is_atom(":init")) {
      for (std::size_t k = 1; k < sec.items.size(); ++k) {
        const Literal l = parse_literal(sec.items[k]);
        if (!l.positive) fail(sec.items[k], "negative literals are not allowed in :init");
        p.init.push_back(l.predicate);
      }
    } else if (kw.is_atom(":goal")) {
      if (sec.items.size() != 2) fail(sec, "expected (:goal <formula>)");
      p.goal = parse_conjunction(sec.items[1]);
      saw_goal = true;
    } else {
      fail(kw, "unsupported problem section '" + kw.atom + "'");
    }
  }
  if (!saw_domain) fail(top, "problem without (:domain ...)");
  if (!saw_goal) fail(top, "problem without (:goal ...)");
  return p;
}

}  // namespace

std::variant<Domain, Problem> parse(std::string_view text) {
  const SExpr top = Reader(text).read_top();
  if (!top.is_list || top.items.size() < 2 || !top.items[0].is_atom("define")) fail(top, "expected (define ...)");
  const SExpr& head = top.items[1];
  if (!head.is_list || head.items.empty()) fail(head, "expected (domain <name>) or (problem <name>)");
  if (head.items[0].is_atom("domain")) return interpret_domain(top);
  if (head.items[0].is_atom("problem")) return interpret_problem(top);
  fail(head, "expected (domain <name>) or (problem <name>)");
}

Domain parse_domain(std::string_view text) {
  auto v = parse(text);
  if (auto* d = std::get_if<Domain>(&v)) return std::move(*d);
  throw ParseError({1, 1}, "expected a domain definition");
}

Problem parse_problem(std::string_view text) {
  auto v = parse(text);
  if (auto* p = std::get_if<Problem>(&v)) return std::move(*p);
  throw ParseError({1, 1}, "expected a problem definition");
}

}  // namespace s2p::ppddl
