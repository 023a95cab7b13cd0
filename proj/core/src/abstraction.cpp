#include "s2p/abstraction.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "s2p/dbscan.hpp"

namespace s2p {

std::vector<std::size_t> change_set(const TransitionSample& s, double change_tolerance) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < s.s_init.size(); ++i) {
    if (std::abs(s.s_term[i] - s.s_init[i]) > change_tolerance) out.push_back(i);
  }
  return out;
}

Point project(const StateVector& s, const std::vector<std::size_t>& vars) {
  Point p;
  p.reserve(vars.size());
  for (std::size_t v : vars) p.push_back(s[v]);
  return p;
}

std::vector<std::size_t> compute_mask(const std::vector<TransitionSample>& samples, double change_tolerance,
                                      double mask_fraction) {
  if (samples.empty()) return {};
  std::vector<std::size_t> counts(samples.front().s_init.size(), 0);
  for (const TransitionSample& s : samples) {
    for (std::size_t v : change_set(s, change_tolerance)) ++counts[v];
  }
  std::vector<std::size_t> mask;
  const double need = mask_fraction * static_cast<double>(samples.size());
  for (std::size_t v = 0; v < counts.size(); ++v) {
    if (counts[v] > 0 && static_cast<double>(counts[v]) >= need - 1e-9) mask.push_back(v);
  }
  return mask;
}

std::vector<PartitionedOption> partition_option_samples(const std::vector<TransitionSample>& samples,
                                                        const AbstractionParams& params) {
  std::map<std::vector<std::size_t>, std::vector<int>> groups;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto cs = change_set(samples[i], params.change_tolerance);
    if (!cs.empty()) groups[cs].push_back(static_cast<int>(i));
  }
  std::vector<PartitionedOption> out;
  for (const auto& [vars, members] : groups) {
    // Collapse identical terminal projections into weighted points.
    std::map<Point, std::vector<int>> unique;
    for (int i : members) unique[project(samples[static_cast<std::size_t>(i)].s_term, vars)].push_back(i);
    std::vector<Point> pts;
    std::vector<double> weights;
    std::vector<const std::vector<int>*> owners;
    for (const auto& [p, idx] : unique) {
      pts.push_back(p);
      weights.push_back(static_cast<double>(idx.size()));
      owners.push_back(&idx);
    }
    const auto labels = dbscan(pts, params.eps, params.min_samples, weights);
    const int clusters = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
    for (int c = 0; c < clusters; ++c) {
      std::vector<std::size_t> in_cluster;
      for (std::size_t k = 0; k < labels.size(); ++k) {
        if (labels[k] == c) in_cluster.push_back(k);
      }
      std::vector<Point> cpts;
      for (std::size_t k : in_cluster) cpts.push_back(pts[k]);
      const auto comp = connected_components(cpts, params.eps / 2.0);
      const int n_out = *std::max_element(comp.begin(), comp.end()) + 1;

      // Samples in original order; remember each one's outcome.
      std::vector<std::pair<int, int>> tagged;  // (sample index, outcome)
      for (std::size_t j = 0; j < in_cluster.size(); ++j) {
        for (int i : *owners[in_cluster[j]]) tagged.emplace_back(i, comp[j]);
      }
      std::sort(tagged.begin(), tagged.end());

      PartitionedOption part;
      part.option_id = samples[static_cast<std::size_t>(tagged.front().first)].option_id;
      part.index = static_cast<int>(out.size());
      part.outcomes.resize(static_cast<std::size_t>(n_out));
      for (const auto& [i, o] : tagged) {
        const TransitionSample& s = samples[static_cast<std::size_t>(i)];
        OutcomeCluster& oc = part.outcomes[static_cast<std::size_t>(o)];
        oc.samples.push_back(static_cast<int>(part.samples.size()));
        if (oc.lo.empty()) {
          oc.lo = s.s_term;
          oc.hi = s.s_term;
        }
        for (std::size_t v = 0; v < s.s_term.size(); ++v) {
          oc.lo[v] = std::min(oc.lo[v], s.s_term[v]);
          oc.hi[v] = std::max(oc.hi[v], s.s_term[v]);
        }
        part.samples.push_back(s);
      }
      for (OutcomeCluster& oc : part.outcomes) {
        oc.probability = static_cast<double>(oc.samples.size()) / static_cast<double>(part.samples.size());
      }
      part.mask = compute_mask(part.samples, params.change_tolerance, params.mask_fraction);
      out.push_back(std::move(part));
    }
  }
  if (out.empty()) throw AllNoise("no cluster formed among " + std::to_string(samples.size()) + " samples");
  return out;
}

std::vector<Factor> compute_factors(const std::vector<std::vector<std::size_t>>& masks, std::size_t num_vars) {
  std::vector<std::vector<char>> signature(num_vars, std::vector<char>(masks.size(), 0));
  for (std::size_t m = 0; m < masks.size(); ++m) {
    for (std::size_t v : masks[m]) {
      if (v < num_vars) signature[v][m] = 1;
    }
  }
  std::vector<Factor> factors;
  std::map<std::vector<char>, std::size_t> by_signature;
  Factor residual;
  residual.residual = true;
  for (std::size_t v = 0; v < num_vars; ++v) {
    if (std::find(signature[v].begin(), signature[v].end(), 1) == signature[v].end()) {
      residual.vars.push_back(v);
      continue;
    }
    const auto [it, inserted] = by_signature.try_emplace(signature[v], factors.size());
    if (inserted) {
      Factor f;
      f.id = static_cast<int>(factors.size());
      factors.push_back(f);
    }
    factors[it->second].vars.push_back(v);
  }
  if (!residual.vars.empty()) {
    residual.id = static_cast<int>(factors.size());
    factors.push_back(residual);
  }
  return factors;
}

Kde fit_effect_density(const PartitionedOption& partition, int outcome, const Factor& factor, double min_bandwidth) {
  std::map<Point, double> unique;
  for (int i : partition.outcomes[static_cast<std::size_t>(outcome)].samples) {
    unique[project(partition.samples[static_cast<std::size_t>(i)].s_term, factor.vars)] += 1.0;
  }
  std::vector<Point> pts;
  std::vector<double> w;
  for (const auto& [p, c] : unique) {
    pts.push_back(p);
    w.push_back(c);
  }
  return Kde(std::move(pts), std::move(w), min_bandwidth);
}

namespace {

bool factor_in_mask(const Factor& f, const std::vector<std::size_t>& mask) {
  if (f.residual) return false;
  for (std::size_t v : f.vars) {
    if (std::find(mask.begin(), mask.end(), v) == mask.end()) return false;
  }
  return true;
}

int add_symbol(SymbolicVocabulary& vocab, const Factor& f, Kde density, const std::string& origin, double merge_eps,
               bool dedup) {
  if (dedup) {
    for (const SymbolDef& s : vocab.symbols) {
      if (s.factor_id != f.id) continue;
      const Box box = box_union(s.distribution.support(), density.support());
      if (l1_distance(s.distribution, density, box, grid_bins_for(f.vars.size())) < merge_eps) return s.id;
    }
  }
  SymbolDef s;
  s.id = static_cast<int>(vocab.symbols.size());
  s.factor_id = f.id;
  s.distribution = std::move(density);
  s.name = "symbol_" + std::to_string(s.id);
  s.origin = origin;
  vocab.symbols.push_back(std::move(s));
  return vocab.symbols.back().id;
}

}  // namespace

SymbolicVocabulary build_vocabulary(std::vector<PartitionedOption>& partitions, const std::vector<Factor>& factors,
                                    const StateVector& reset_state, const AbstractionParams& params) {
  SymbolicVocabulary vocab;
  vocab.factors = factors;
  for (PartitionedOption& p : partitions) {
    for (std::size_t o = 0; o < p.outcomes.size(); ++o) {
      p.outcomes[o].symbols.clear();
      for (const Factor& f : factors) {
        if (!factor_in_mask(f, p.mask)) continue;
        const std::string origin = "option " + std::to_string(p.option_id) + " partition " + std::to_string(p.index) +
                                   " outcome " + std::to_string(o);
        p.outcomes[o].symbols.push_back(add_symbol(vocab, f, fit_effect_density(p, static_cast<int>(o), f,
                                                                                params.min_bandwidth),
                                                   origin, params.sym_merge_eps, true));
      }
    }
  }
  for (const Factor& f : factors) {
    if (f.residual) continue;
    const Point x = project(reset_state, f.vars);
    bool covered = false;
    for (const SymbolDef& s : vocab.symbols) {
      if (s.factor_id == f.id && s.distribution.covers(x)) {
        vocab.start_symbols.push_back(s.id);
        covered = true;
      }
    }
    if (!covered) {
      const int id = add_symbol(vocab, f, Kde({x}, {1.0}, params.min_bandwidth), "reset state", 0.0, false);
      vocab.start_symbols.push_back(id);
      vocab.synthesized_start_symbols.push_back(id);
    }
  }
  std::sort(vocab.start_symbols.begin(), vocab.start_symbols.end());
  return vocab;
}

}  // namespace s2p
