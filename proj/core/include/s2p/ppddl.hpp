#pragma once

// Propositional PPDDL subset: 0-ary predicates, conjunctive preconditions and
// goals, probabilistic conjunctive effects. Emission is canonical: parse(emit(x))
// equals x, and emit(parse(emit(x))) == emit(x) byte for byte.

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace s2p::ppddl {

struct SourcePos {
  int line = 0;  // 0 for values not read from text
  int column = 0;

  // Positions are provenance, not structure: all positions compare equal.
  friend bool operator==(const SourcePos&, const SourcePos&) { return true; }
};

struct Literal {
  std::string predicate;
  bool positive = true;
  SourcePos pos;
  friend bool operator==(const Literal&, const Literal&) = default;
};

struct Branch {
  double probability = 1.0;
  std::vector<Literal> effects;
  SourcePos pos;
  friend bool operator==(const Branch&, const Branch&) = default;
};

struct Action {
  std::string name;
  std::vector<Literal> precondition;
  std::vector<Branch> effect;  // probabilities sum to <= 1; the deficit is a no-change branch
  SourcePos pos;
  friend bool operator==(const Action&, const Action&) = default;
};

struct Domain {
  std::string name;
  std::vector<std::string> requirements{":probabilistic-effects"};
  std::vector<std::string> predicates;
  std::vector<SourcePos> predicate_pos;  // parallel to predicates when parsed
  std::vector<Action> actions;
  SourcePos pos;
  friend bool operator==(const Domain& a, const Domain& b) {
    return a.name == b.name && a.requirements == b.requirements && a.predicates == b.predicates &&
           a.actions == b.actions;
  }
};

struct Problem {
  std::string name;
  std::string domain;
  std::vector<std::string> init;
  std::vector<Literal> goal;
  SourcePos pos;
  friend bool operator==(const Problem&, const Problem&) = default;
};

inline constexpr double kProbabilitySlack = 1e-9;

std::string emit(const Domain& domain);
std::string emit(const Problem& problem);

class ParseError : public std::runtime_error {
 public:
  ParseError(SourcePos pos, const std::string& message, bool semantic = false);
  SourcePos pos() const { return pos_; }
  bool semantic() const { return semantic_; }

 private:
  SourcePos pos_;
  bool semantic_;
};

/// Parses a domain or problem file. Domain files are checked for undeclared
/// predicates and probability range / sum; problems are checked by validate().
std::variant<Domain, Problem> parse(std::string_view text);
Domain parse_domain(std::string_view text);
Problem parse_problem(std::string_view text);

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  SourcePos pos;
  std::string message;
};

std::vector<Diagnostic> validate(const Domain& domain);
std::vector<Diagnostic> validate(const Domain& domain, const Problem& problem);

bool has_errors(const std::vector<Diagnostic>& diags);
std::string format(const Diagnostic& d);

}  // namespace s2p::ppddl
