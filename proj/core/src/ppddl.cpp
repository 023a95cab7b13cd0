#include <cstdio>
#include <set>

#include "s2p/ppddl.hpp"

namespace s2p::ppddl {

namespace {

std::string prob(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", p);
  return buf;
}

void emit_literal(std::string& out, const Literal& l) {
  if (l.positive) {
    out += "(" + l.predicate + ")";
  } else {
    out += "(not (" + l.predicate + "))";
  }
}

void emit_conjunction(std::string& out, const std::vector<Literal>& lits) {
  out += "(and";
  for (const Literal& l : lits) {
    out += ' ';
    emit_literal(out, l);
  }
  out += ")";
}

}  // namespace

std::string emit(const Domain& d) {
  std::string out;
  out += "(define (domain " + d.name + ")\n";
  out += "  (:requirements";
  for (const auto& r : d.requirements) out += " " + r;
  out += ")\n";
  out += "  (:predicates\n";
  for (const auto& p : d.predicates) out += "    (" + p + ")\n";
  out += "  )\n";
  for (const Action& a : d.actions) {
    out += "  (:action " + a.name + "\n";
    out += "    :parameters ()\n";
    out += "    :precondition ";
    emit_conjunction(out, a.precondition);
    out += "\n    :effect (probabilistic";
    for (const Branch& b : a.effect) {
      out += "\n      " + prob(b.probability) + " ";
      emit_conjunction(out, b.effects);
    }
    out += ")\n  )\n";
  }
  out += ")\n";
  return out;
}

std::string emit(const Problem& p) {
  std::string out;
  out += "(define (problem " + p.name + ")\n";
  out += "  (:domain " + p.domain + ")\n";
  out += "  (:init";
  for (const auto& s : p.init) out += " (" + s + ")";
  out += ")\n";
  out += "  (:goal ";
  emit_conjunction(out, p.goal);
  out += ")\n)\n";
  return out;
}

namespace {

void check_literals(const std::vector<Literal>& lits, const std::set<std::string>& preds, const std::string& where,
                    std::vector<Diagnostic>& out) {
  for (const Literal& l : lits) {
    if (!preds.count(l.predicate)) {
      out.push_back({Diagnostic::Severity::Error, l.pos, where + ": undeclared predicate '" + l.predicate + "'"});
    }
  }
}

}  // namespace

std::vector<Diagnostic> validate(const Domain& d) {
  std::vector<Diagnostic> out;
  std::set<std::string> preds;
  for (std::size_t i = 0; i < d.predicates.size(); ++i) {
    const SourcePos pos = i < d.predicate_pos.size() ? d.predicate_pos[i] : d.pos;
    if (!preds.insert(d.predicates[i]).second) {
      out.push_back({Diagnostic::Severity::Error, pos, "duplicate predicate '" + d.predicates[i] + "'"});
    }
  }
  std::set<std::string> names;
  for (const Action& a : d.actions) {
    const std::string where = "action " + a.name;
    if (!names.insert(a.name).second) {
      out.push_back({Diagnostic::Severity::Error, a.pos, "duplicate action name '" + a.name + "'"});
    }
    check_literals(a.precondition, preds, where + " precondition", out);
    double sum = 0.0;
    bool any_effect = false;
    for (const Branch& b : a.effect) {
      if (!(b.probability > 0.0 && b.probability <= 1.0)) {
        out.push_back({Diagnostic::Severity::Error, b.pos, where + ": probability " + prob(b.probability) +
                                                               " outside (0, 1]"});
      }
      sum += b.probability;
      any_effect = any_effect || !b.effects.empty();
      check_literals(b.effects, preds, where + " effect", out);
    }
    if (sum > 1.0 + kProbabilitySlack) {
      out.push_back({Diagnostic::Severity::Error, a.pos, where + ": branch probabilities sum to " + prob(sum)});
    }
    if (!any_effect) out.push_back({Diagnostic::Severity::Warning, a.pos, where + ": empty effect"});
  }
  return out;
}

std::vector<Diagnostic> validate(const Domain& d, const Problem& p) {
  std::vector<Diagnostic> out = validate(d);
  if (p.domain != d.name) {
    out.push_back({Diagnostic::Severity::Error, p.pos,
                   "problem refers to domain '" + p.domain + "' but domain is '" + d.name + "'"});
  }
  const std::set<std::string> preds(d.predicates.begin(), d.predicates.end());
  for (const std::string& s : p.init) {
    if (!preds.count(s)) out.push_back({Diagnostic::Severity::Error, p.pos, "init: undeclared predicate '" + s + "'"});
  }
  check_literals(p.goal, preds, "goal", out);
  return out;
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags) {
    if (d.severity == Diagnostic::Severity::Error) return true;
  }
  return false;
}

std::string format(const Diagnostic& d) {
  return std::to_string(d.pos.line) + ":" + std::to_string(d.pos.column) + ": " +
         (d.severity == Diagnostic::Severity::Error ? "error: " : "warning: ") + d.message;
}

}  // namespace s2p::ppddl
