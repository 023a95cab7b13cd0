#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "s2p/abstraction.hpp"

namespace s2p {

std::string action_name(int option_id, int partition_index, int conjunction) {
  return "opt" + std::to_string(option_id) + "_p" + std::to_string(partition_index) + "_c" +
         std::to_string(conjunction);
}

std::vector<double> quantize_probabilities(const std::vector<double>& p) {
  constexpr long kUnits = 1000000;
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  std::vector<long> units(p.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  long assigned = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double exact = p[i] / total * kUnits;
    units[i] = static_cast<long>(std::floor(exact));
    assigned += units[i];
    remainders.emplace_back(exact - static_cast<double>(units[i]), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < kUnits; ++k, ++assigned) ++units[remainders[k % remainders.size()].second];
  std::vector<double> out;
  for (long u : units) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", static_cast<double>(u) / kUnits);
    out.push_back(std::strtod(buf, nullptr));
  }
  return out;
}

namespace {

// Deterministic subsample keeping at most cap items at an even stride.
std::vector<Point> thin(const std::vector<Point>& pts, int cap) {
  if (cap <= 0 || pts.size() <= static_cast<std::size_t>(cap)) return pts;
  std::vector<Point> out;
  const double stride = static_cast<double>(pts.size()) / cap;
  for (int i = 0; i < cap; ++i) out.push_back(pts[static_cast<std::size_t>(i * stride)]);
  return out;
}

std::vector<std::size_t> mask_factors(const std::vector<Factor>& factors, const std::vector<std::size_t>& mask) {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < factors.size(); ++f) {
    if (factors[f].residual) continue;
    if (std::all_of(factors[f].vars.begin(), factors[f].vars.end(),
                    [&](std::size_t v) { return std::find(mask.begin(), mask.end(), v) != mask.end(); })) {
      out.push_back(f);
    }
  }
  return out;
}

std::vector<ppddl::Branch> effect_branches(const PartitionedOption& p, const SymbolicVocabulary& vocab) {
  const auto mf = mask_factors(vocab.factors, p.mask);
  std::vector<double> probs;
  for (const OutcomeCluster& o : p.outcomes) probs.push_back(o.probability);
  const auto q = quantize_probabilities(probs);
  std::vector<ppddl::Branch> out;
  for (std::size_t o = 0; o < p.outcomes.size(); ++o) {
    ppddl::Branch b;
    b.probability = q[o];
    const auto& added = p.outcomes[o].symbols;
    for (int s : added) b.effects.push_back({vocab.symbols[static_cast<std::size_t>(s)].name, true, {}});
    for (std::size_t f : mf) {
      for (const SymbolDef& s : vocab.symbols) {
        if (s.factor_id != static_cast<int>(f)) continue;
        if (std::find(added.begin(), added.end(), s.id) != added.end()) continue;
        b.effects.push_back({s.name, false, {}});
      }
    }
    out.push_back(std::move(b));
  }
  return out;
}

struct PreconditionData {
  std::vector<Point> positives;
  std::vector<Point> negatives;
};

PreconditionData precondition_data(const PartitionedOption& part, const std::vector<PartitionedOption>& siblings,
                                   const std::vector<StateVector>& not_initiable, const AbstractionParams& params) {
  PreconditionData d;
  std::set<StateVector> pos_set;
  for (const TransitionSample& s : part.samples) {
    d.positives.push_back(s.s_init);
    pos_set.insert(s.s_init);
  }
  std::vector<Point> neg;
  for (const PartitionedOption* other : [&] {
         std::vector<const PartitionedOption*> v;
         for (const auto& s : siblings) {
           if (s.index != part.index) v.push_back(&s);
         }
         return v;
       }()) {
    for (const TransitionSample& s : other->samples) {
      if (!pos_set.count(s.s_init)) neg.push_back(s.s_init);
    }
  }
  for (const StateVector& s : not_initiable) neg.push_back(s);
  d.positives = thin(d.positives, params.max_positives);
  d.negatives = thin(neg, params.max_negatives);
  return d;
}

std::string resolve_goal(const GoalCondition& g, const AbstractionInputs& in, const SymbolicVocabulary& vocab) {
  if (g.var.empty()) {
    for (const SymbolDef& s : vocab.symbols) {
      if (s.name == g.symbol) return s.name;
    }
    throw UnreachableGoalSymbols("goal names unknown symbol '" + g.symbol + "'");
  }
  const auto it = std::find(in.var_names.begin(), in.var_names.end(), g.var);
  if (it == in.var_names.end()) throw UnreachableGoalSymbols("goal names unknown variable '" + g.var + "'");
  const auto var = static_cast<std::size_t>(it - in.var_names.begin());
  for (const Factor& f : vocab.factors) {
    const auto pos = std::find(f.vars.begin(), f.vars.end(), var);
    if (pos == f.vars.end()) continue;
    if (f.residual) break;
    const auto k = static_cast<std::size_t>(pos - f.vars.begin());
    const SymbolDef* best = nullptr;
    double best_density = 0.0;
    for (const SymbolDef& s : vocab.symbols) {
      if (s.factor_id != f.id) continue;
      Point x(f.vars.size());
      for (std::size_t j = 0; j < x.size(); ++j) x[j] = j == k ? g.value : s.distribution.mean(j);
      if (!s.distribution.covers(x)) continue;
      const double dens = s.distribution.density(x);
      if (!best || dens > best_density) {
        best = &s;
        best_density = dens;
      }
    }
    if (best) return best->name;
    break;
  }
  throw UnreachableGoalSymbols("no symbol describes " + g.var + " = " + std::to_string(g.value));
}

}  // namespace

AbstractionResult abstract(const AbstractionInputs& in, const AbstractionParams& params) {
  AbstractionResult r;
  std::map<int, std::vector<TransitionSample>> by_option;
  for (const TransitionSample& s : in.samples) {
    if (admissible(s)) by_option[s.option_id].push_back(s);
  }
  std::map<int, std::pair<std::size_t, std::size_t>> option_range;  // option -> [begin, end) in partitions
  for (const OptionDef& opt : in.options) {
    const auto it = by_option.find(opt.id);
    if (it == by_option.end()) {
      r.warnings.push_back("option " + opt.label() + ": no admissible samples");
      continue;
    }
    try {
      auto parts = partition_option_samples(it->second, params);
      option_range[opt.id] = {r.partitions.size(), r.partitions.size() + parts.size()};
      for (auto& p : parts) r.partitions.push_back(std::move(p));
    } catch (const AllNoise& e) {
      r.warnings.push_back("option " + opt.label() + ": " + e.what());
    }
  }
  if (r.partitions.empty()) throw NoOperatorsGenerated("no option produced a partition");

  std::vector<std::vector<std::size_t>> masks;
  for (const auto& p : r.partitions) masks.push_back(p.mask);
  const auto factors = compute_factors(masks, in.var_names.size());
  r.vocabulary = build_vocabulary(r.partitions, factors, in.reset_state, params);
  std::vector<std::vector<std::size_t>> factor_vars;
  for (const Factor& f : factors) factor_vars.push_back(f.vars);

  // Every visited state is a candidate negative for the options it cannot start;
  // repeats are kept so frequently visited states weigh accordingly.
  std::vector<StateVector> pool;
  for (const TransitionSample& s : in.samples) {
    pool.push_back(s.s_init);
    pool.push_back(s.s_term);
  }

  ClassifierParams cp;
  cp.bandwidth = params.classifier_bandwidth;
  r.preconditions.resize(r.partitions.size());
  r.operators_per_partition.assign(r.partitions.size(), 0);
  double acc_sum = 0.0;
  int acc_n = 0;
  int total_ops = 0;
  for (const auto& [option_id, range] : option_range) {
    std::vector<StateVector> not_initiable;
    std::map<StateVector, bool> verdict;
    for (const StateVector& s : pool) {
      auto [it, fresh] = verdict.try_emplace(s, false);
      if (fresh) it->second = in.initiable(s, option_id);
      if (!it->second) not_initiable.push_back(s);
    }
    const std::vector<PartitionedOption> siblings(r.partitions.begin() + static_cast<std::ptrdiff_t>(range.first),
                                                  r.partitions.begin() + static_cast<std::ptrdiff_t>(range.second));
    for (std::size_t pi = range.first; pi < range.second; ++pi) {
      const PartitionedOption& part = r.partitions[pi];
      const auto data = precondition_data(part, siblings, not_initiable, params);
      PreconditionModel& model = r.preconditions[pi];
      if (data.negatives.empty()) {
        model.heldout_accuracy = 1.0;
        r.warnings.push_back(action_name(part.option_id, part.index, 0) + ": no negatives; unconditional precondition");
      } else {
        model = fit_precondition_classifier(data.positives, data.negatives, factor_vars, cp);
      }
      acc_sum += model.heldout_accuracy;
      ++acc_n;

      // Relevant factors, most important first, capped at max_conj.
      std::vector<std::size_t> order(model.factors.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return model.importance[a] > model.importance[b]; });
      if (order.size() > static_cast<std::size_t>(params.max_conj)) {
        r.warnings.push_back(action_name(part.option_id, part.index, 0) + ": precondition truncated to " +
                             std::to_string(params.max_conj) + " factors");
        order.resize(static_cast<std::size_t>(params.max_conj));
      }
      std::vector<std::size_t> rel;
      for (std::size_t i : order) rel.push_back(model.factors[i]);
      std::sort(rel.begin(), rel.end());

      // Candidate symbols per relevant factor: those covering some initiation state.
      std::vector<std::vector<int>> cand(rel.size());
      for (std::size_t k = 0; k < rel.size(); ++k) {
        std::set<Point> projections;
        for (const TransitionSample& s : part.samples) projections.insert(project(s.s_init, factors[rel[k]].vars));
        for (const SymbolDef& s : r.vocabulary.symbols) {
          if (s.factor_id != static_cast<int>(rel[k])) continue;
          if (std::any_of(projections.begin(), projections.end(),
                          [&](const Point& x) { return s.distribution.covers(x); })) {
            cand[k].push_back(s.id);
          }
        }
      }
      if (std::any_of(cand.begin(), cand.end(), [](const auto& c) { return c.empty(); })) {
        r.warnings.push_back(action_name(part.option_id, part.index, 0) + ": no symbol covers its initiation states");
        continue;
      }
      const auto effect = effect_branches(part, r.vocabulary);
      std::seed_seq seq{params.seed, static_cast<std::uint64_t>(option_id), static_cast<std::uint64_t>(part.index)};
      std::mt19937_64 rng(seq);
      const StateVector& base = part.samples.front().s_init;
      std::vector<std::size_t> odo(rel.size(), 0);
      int accepted = 0;
      while (true) {
        if (total_ops >= params.max_operators) {
          r.warnings.push_back("operator cap reached");
          break;
        }
        int hits = 0;
        for (int n = 0; n < params.precond_samples; ++n) {
          StateVector x = base;
          for (std::size_t k = 0; k < rel.size(); ++k) {
            const SymbolDef& s = r.vocabulary.symbols[static_cast<std::size_t>(cand[k][odo[k]])];
            const Point y = s.distribution.sample(rng);
            for (std::size_t j = 0; j < y.size(); ++j) x[factors[rel[k]].vars[j]] = y[j];
          }
          const double p = data.negatives.empty() ? 1.0 : model.classifier.probability(x);
          if (p > 0.5) ++hits;
        }
        if (hits >= params.precond_accept * params.precond_samples - 1e-9) {
          ppddl::Action a;
          a.name = action_name(part.option_id, part.index, accepted++);
          for (std::size_t k = 0; k < rel.size(); ++k) {
            a.precondition.push_back({r.vocabulary.symbols[static_cast<std::size_t>(cand[k][odo[k]])].name, true, {}});
          }
          a.effect = effect;
          r.domain.actions.push_back(std::move(a));
          ++total_ops;
        }
        std::size_t k = 0;
        while (k < odo.size() && ++odo[k] == cand[k].size()) odo[k++] = 0;
        if (k == odo.size()) break;
      }
      r.operators_per_partition[pi] = accepted;
    }
  }
  r.mean_heldout_accuracy = acc_n ? acc_sum / acc_n : 0.0;
  if (r.domain.actions.empty()) throw NoOperatorsGenerated("no precondition conjunction was accepted");

  r.domain.name = in.domain_name;
  for (const SymbolDef& s : r.vocabulary.symbols) r.domain.predicates.push_back(s.name);
  r.problem.name = in.domain_name + "_problem";
  r.problem.domain = in.domain_name;
  for (int s : r.vocabulary.start_symbols) r.problem.init.push_back(r.vocabulary.symbols[static_cast<std::size_t>(s)].name);
  for (const GoalCondition& g : in.goal) {
    const std::string name = resolve_goal(g, in, r.vocabulary);
    const bool dup = std::any_of(r.problem.goal.begin(), r.problem.goal.end(),
                                 [&](const ppddl::Literal& l) { return l.predicate == name; });
    if (!dup) r.problem.goal.push_back({name, true, {}});
  }
  return r;
}

}  // namespace s2p
