#include "s2p/options.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace s2p {

std::string OptionDef::label() const {
  return "(" + std::string(to_string(p)) + ", " + (t ? std::string(to_string(*t)) : std::string("{}")) + ")";
}

bool option_key_less(const OptionDef& a, const OptionDef& b) {
  if (a.p != b.p) return a.p < b.p;
  const int ta = a.t ? static_cast<int>(*a.t) : -1;
  const int tb = b.t ? static_cast<int>(*b.t) : -1;
  return ta < tb;
}

std::vector<OptionDef> canonicalize_options(std::vector<OptionDef> options) {
  std::sort(options.begin(), options.end(), option_key_less);
  options.erase(std::unique(options.begin(), options.end(),
                            [](const OptionDef& a, const OptionDef& b) { return a.p == b.p && a.t == b.t; }),
                options.end());
  for (std::size_t i = 0; i < options.size(); ++i) options[i].id = static_cast<int>(i);
  return options;
}

std::string_view to_string(TerminationReason r) {
  switch (r) {
    case TerminationReason::TerminatorAvailable: return "TerminatorAvailable";
    case TerminationReason::PrimitiveExhausted: return "PrimitiveExhausted";
    case TerminationReason::StepBudget: return "StepBudget";
  }
  return "?";
}

std::optional<TerminationReason> termination_reason_from_string(std::string_view s) {
  for (auto r : {TerminationReason::TerminatorAvailable, TerminationReason::PrimitiveExhausted,
                 TerminationReason::StepBudget}) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

bool can_initiate(const TileMap& map, const WorldState& state, const OptionDef& opt) {
  const PrimitiveSet avail = available_primitives(map, state);
  if (!avail.contains(opt.p)) return false;
  return !opt.t || !avail.contains(*opt.t);
}

OptionResult execute_option(const TileMap& map, const WorldState& state, const OptionDef& opt, std::uint64_t seed,
                            int step_budget) {
  if (!can_initiate(map, state, opt)) throw ContractError("option " + opt.label() + " cannot initiate here");
  Rng rng(seed);
  OptionResult out{state, {}};
  out.sample.option_id = opt.id;
  out.sample.seed = seed;
  out.sample.s_init = state_vector(map, state);
  int steps = 0;
  TerminationReason reason = TerminationReason::StepBudget;
  while (steps < step_budget) {
    out.state = step_primitive(map, out.state, opt.p, rng);
    ++steps;
    const PrimitiveSet avail = available_primitives(map, out.state);
    if (opt.t && avail.contains(*opt.t)) {
      reason = TerminationReason::TerminatorAvailable;
      break;
    }
    if (!avail.contains(opt.p)) {
      reason = TerminationReason::PrimitiveExhausted;
      break;
    }
  }
  out.sample.s_term = state_vector(map, out.state);
  out.sample.reason = reason;
  out.sample.steps = steps;
  return out;
}

bool admissible(const TransitionSample& s) {
  return s.reason != TerminationReason::StepBudget && s.steps >= 1 && s.s_init != s.s_term;
}

void write_options(std::ostream& out, const std::vector<OptionDef>& options) {
  for (const OptionDef& o : options) {
    out << o.id << '\t' << to_string(o.p) << '\t' << (o.t ? to_string(*o.t) : std::string_view("-")) << '\n';
  }
}

std::vector<OptionDef> read_options(std::istream& in) {
  std::vector<OptionDef> options;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string id, p, t;
    if (!std::getline(ss, id, '\t') || !std::getline(ss, p, '\t') || !std::getline(ss, t)) {
      throw std::runtime_error("options file line " + std::to_string(line_no) + ": expected 3 fields");
    }
    OptionDef o;
    o.id = std::stoi(id);
    const auto pp = primitive_from_string(p);
    if (!pp) throw std::runtime_error("options file line " + std::to_string(line_no) + ": unknown primitive " + p);
    o.p = *pp;
    if (t != "-") {
      const auto tt = primitive_from_string(t);
      if (!tt) throw std::runtime_error("options file line " + std::to_string(line_no) + ": unknown primitive " + t);
      o.t = *tt;
    }
    options.push_back(o);
  }
  return options;
}

namespace {
std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}
}  // namespace

void write_transitions(std::ostream& out, const std::vector<TransitionSample>& samples, const StateLayout& layout) {
  out << "option_id\treason\tsteps\tseed";
  for (int i = 0; i < layout.size(); ++i) out << "\tinit_" << layout.name(i);
  for (int i = 0; i < layout.size(); ++i) out << "\tterm_" << layout.name(i);
  out << '\n';
  for (const TransitionSample& s : samples) {
    out << s.option_id << '\t' << to_string(s.reason) << '\t' << s.steps << '\t' << s.seed;
    for (double v : s.s_init) out << '\t' << fmt9(v);
    for (double v : s.s_term) out << '\t' << fmt9(v);
    out << '\n';
  }
}

std::vector<TransitionSample> read_transitions(std::istream& in) {
  std::vector<TransitionSample> samples;
  std::string line;
  if (!std::getline(in, line)) return samples;
  std::size_t dims = 0;
  {
    std::istringstream hs(line);
    std::string tok;
    std::size_t fields = 0;
    while (std::getline(hs, tok, '\t')) ++fields;
    if (fields < 4 || (fields - 4) % 2 != 0) throw std::runtime_error("transitions header malformed");
    dims = (fields - 4) / 2;
  }
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::vector<std::string> f;
    std::string tok;
    while (std::getline(ss, tok, '\t')) f.push_back(tok);
    if (f.size() != 4 + 2 * dims) {
      throw std::runtime_error("transitions line " + std::to_string(line_no) + ": wrong field count");
    }
    TransitionSample s;
    s.option_id = std::stoi(f[0]);
    const auto r = termination_reason_from_string(f[1]);
    if (!r) throw std::runtime_error("transitions line " + std::to_string(line_no) + ": unknown reason " + f[1]);
    s.reason = *r;
    s.steps = std::stoi(f[2]);
    s.seed = std::stoull(f[3]);
    s.s_init.reserve(dims);
    s.s_term.reserve(dims);
    for (std::size_t i = 0; i < dims; ++i) s.s_init.push_back(std::stod(f[4 + i]));
    for (std::size_t i = 0; i < dims; ++i) s.s_term.push_back(std::stod(f[4 + dims + i]));
    samples.push_back(std::move(s));
  }
  return samples;
}

}  // namespace s2p
