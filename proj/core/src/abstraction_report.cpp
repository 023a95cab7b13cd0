#include <cstdio>
#include <nlohmann/json.hpp>
#include <sstream>

#include "s2p/abstraction.hpp"

namespace s2p {

namespace {

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string var_list(const std::vector<std::size_t>& vars, const std::vector<std::string>& names) {
  std::string out = "{";
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) out += ", ";
    out += vars[i] < names.size() ? names[vars[i]] : std::to_string(vars[i]);
  }
  return out + "}";
}

}  // namespace

std::string abstraction_report(const AbstractionResult& r, const std::vector<OptionDef>& options,
                               const std::vector<std::string>& var_names) {
  std::ostringstream out;
  const auto& vocab = r.vocabulary;
  out << "Abstraction report\n==================\n\n";
  out << "partitions: " << r.partitions.size() << "\n";
  out << "factors: " << vocab.factors.size() << "\n";
  out << "symbols: " << vocab.symbols.size() << "\n";
  out << "operators: " << r.domain.actions.size() << "\n";
  out << "mean held-out precondition accuracy: " << fixed(r.mean_heldout_accuracy) << "\n\n";

  out << "Factors\n-------\n";
  for (const Factor& f : vocab.factors) {
    out << "factor " << f.id << (f.residual ? " (residual)" : "") << ": " << var_list(f.vars, var_names) << "\n";
  }

  out << "\nPartitions\n----------\n";
  for (std::size_t i = 0; i < r.partitions.size(); ++i) {
    const PartitionedOption& p = r.partitions[i];
    std::string label = "option " + std::to_string(p.option_id);
    for (const OptionDef& o : options) {
      if (o.id == p.option_id) label = o.label();
    }
    out << label << " partition " << p.index << ": " << p.samples.size() << " samples, mask "
        << var_list(p.mask, var_names);
    if (i < r.preconditions.size()) {
      const PreconditionModel& m = r.preconditions[i];
      out << ", precondition factors {";
      for (std::size_t k = 0; k < m.factors.size(); ++k) out << (k ? ", " : "") << m.factors[k];
      out << "}, held-out accuracy " << fixed(m.heldout_accuracy) << (m.low_confidence ? " (low confidence)" : "");
    }
    if (i < r.operators_per_partition.size()) out << ", operators " << r.operators_per_partition[i];
    out << "\n";
    for (std::size_t o = 0; o < p.outcomes.size(); ++o) {
      out << "  outcome " << o << ": p=" << fixed(p.outcomes[o].probability, 6) << " symbols";
      for (int s : p.outcomes[o].symbols) out << " " << vocab.symbols[static_cast<std::size_t>(s)].name;
      out << "\n";
    }
  }

  out << "\nSymbols\n-------\n";
  for (const SymbolDef& s : vocab.symbols) {
    const Factor& f = vocab.factors[static_cast<std::size_t>(s.factor_id)];
    out << s.name << ": factor " << s.factor_id << ", mean (";
    for (std::size_t k = 0; k < f.vars.size(); ++k) out << (k ? ", " : "") << fixed(s.distribution.mean(k));
    out << "), bandwidth (";
    for (std::size_t k = 0; k < f.vars.size(); ++k) out << (k ? ", " : "") << fixed(s.distribution.bandwidth()[k], 5);
    out << "), from " << s.origin << "\n";
  }
  out << "\nstart symbols:";
  for (int s : vocab.start_symbols) out << " " << vocab.symbols[static_cast<std::size_t>(s)].name;
  out << "\n";
  if (!r.warnings.empty()) {
    out << "\nWarnings\n--------\n";
    for (const auto& w : r.warnings) out << w << "\n";
  }
  return out.str();
}

std::string partitions_json(const AbstractionResult& r, const std::vector<std::string>& var_names) {
  nlohmann::ordered_json parts = nlohmann::ordered_json::array();
  for (const PartitionedOption& p : r.partitions) {
    nlohmann::ordered_json j;
    j["option_id"] = p.option_id;
    j["partition"] = p.index;
    j["mask"] = p.mask;
    nlohmann::ordered_json names = nlohmann::ordered_json::array();
    for (std::size_t v : p.mask) names.push_back(v < var_names.size() ? var_names[v] : std::to_string(v));
    j["mask_names"] = names;
    nlohmann::ordered_json outs = nlohmann::ordered_json::array();
    for (const OutcomeCluster& o : p.outcomes) {
      nlohmann::ordered_json oj;
      oj["probability"] = o.probability;
      std::vector<double> lo, hi;
      for (std::size_t v : p.mask) {
        lo.push_back(o.lo[v]);
        hi.push_back(o.hi[v]);
      }
      oj["lo"] = lo;
      oj["hi"] = hi;
      outs.push_back(oj);
    }
    j["outcomes"] = outs;
    parts.push_back(j);
  }
  nlohmann::ordered_json root;
  root["partitions"] = parts;
  return root.dump(2) + "\n";
}

}  // namespace s2p
