#pragma once

// Turns option transition samples into a propositional vocabulary and a PPDDL
// domain: effect clustering into partitions, masks, factors, effect symbols,
// precondition classifiers, and operator generation.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "s2p/classifier.hpp"
#include "s2p/kde.hpp"
#include "s2p/options.hpp"
#include "s2p/ppddl.hpp"

namespace s2p {

class AbstractionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class AllNoise : public AbstractionError {
 public:
  using AbstractionError::AbstractionError;
};
class NoOperatorsGenerated : public AbstractionError {
 public:
  using AbstractionError::AbstractionError;
};
class UnreachableGoalSymbols : public AbstractionError {
 public:
  using AbstractionError::AbstractionError;
};

struct AbstractionParams {
  double eps = 0.05;
  double min_samples = 5;
  double change_tolerance = 0.01;
  double mask_fraction = 0.9;
  double min_bandwidth = 1e-3;
  double sym_merge_eps = 0.1;
  double precond_accept = 0.95;
  int precond_samples = 100;
  int max_conj = 3;
  int max_operators = 5000;
  double classifier_bandwidth = 0.01;
  int max_positives = 0;  // 0 keeps every sample
  int max_negatives = 0;
  std::uint64_t seed = 13;
};

struct OutcomeCluster {
  double probability = 0.0;
  std::vector<int> samples;  // indices into PartitionedOption::samples
  StateVector lo;            // per-variable bounds of the terminal states (full vector)
  StateVector hi;
  std::vector<int> symbols;  // effect symbols, one per masked factor (filled by build_vocabulary)
};

struct PartitionedOption {
  int option_id = 0;
  int index = 0;  // partition index within the option
  std::vector<TransitionSample> samples;
  std::vector<std::size_t> mask;  // changed variables
  std::vector<OutcomeCluster> outcomes;
};

/// Variables whose change exceeds change_tolerance in a sample.
std::vector<std::size_t> change_set(const TransitionSample& s, double change_tolerance);

/// Clusters one option's terminal states. Samples are grouped by change set and
/// clustered on the terminal values of the changed variables; every cluster is
/// a partition and its eps/2-connected sub-clusters are its outcomes. Throws
/// AllNoise if nothing clusters.
std::vector<PartitionedOption> partition_option_samples(const std::vector<TransitionSample>& samples,
                                                        const AbstractionParams& params);

/// Variables changed beyond tolerance in at least mask_fraction of the samples.
std::vector<std::size_t> compute_mask(const std::vector<TransitionSample>& samples, double change_tolerance,
                                      double mask_fraction);

struct Factor {
  int id = 0;
  std::vector<std::size_t> vars;
  bool residual = false;
};

/// Variables share a factor iff they appear in exactly the same masks; the
/// variables in no mask form one residual factor (last).
std::vector<Factor> compute_factors(const std::vector<std::vector<std::size_t>>& masks, std::size_t num_vars);

struct SymbolDef {
  int id = 0;
  int factor_id = 0;
  Kde distribution;
  std::string name;  // "symbol_<id>"
  std::string origin;
};

/// Density of one outcome's terminal states projected on a factor.
Kde fit_effect_density(const PartitionedOption& partition, int outcome, const Factor& factor,
                       double min_bandwidth = 1e-3);

struct SymbolicVocabulary {
  std::vector<Factor> factors;
  std::vector<SymbolDef> symbols;
  std::vector<int> start_symbols;
  std::vector<int> synthesized_start_symbols;  // added because no effect symbol covered the reset state
};

/// Fills outcome symbols in place (deduplicating by grid L1 distance) and
/// computes the start-state symbols for reset_state.
SymbolicVocabulary build_vocabulary(std::vector<PartitionedOption>& partitions, const std::vector<Factor>& factors,
                                    const StateVector& reset_state, const AbstractionParams& params);

Point project(const StateVector& s, const std::vector<std::size_t>& vars);

/// Goal condition: variable name and value, or a symbol name (var empty).
struct GoalCondition {
  std::string var;
  double value = 0.0;
  std::string symbol;
};

struct AbstractionInputs {
  std::vector<TransitionSample> samples;
  std::vector<OptionDef> options;
  std::vector<std::string> var_names;
  StateVector reset_state;
  /// Whether option_id can initiate in the given state.
  std::function<bool(const StateVector&, int)> initiable;
  std::vector<GoalCondition> goal;
  std::string domain_name = "treasure";
};

struct AbstractionResult {
  std::vector<PartitionedOption> partitions;
  SymbolicVocabulary vocabulary;
  std::vector<PreconditionModel> preconditions;   // parallel to partitions
  std::vector<int> operators_per_partition;        // parallel to partitions
  ppddl::Domain domain;
  ppddl::Problem problem;
  std::vector<std::string> warnings;
  double mean_heldout_accuracy = 0.0;
};

/// Action name for the k-th accepted precondition of a partition.
std::string action_name(int option_id, int partition_index, int conjunction);

/// Full abstraction. Throws NoOperatorsGenerated or UnreachableGoalSymbols.
AbstractionResult abstract(const AbstractionInputs& inputs, const AbstractionParams& params = {});

/// Quantizes probabilities to multiples of 1e-6 that sum exactly to 1e6 units
/// (largest remainder), returned as doubles that print exactly at 6 decimals.
std::vector<double> quantize_probabilities(const std::vector<double>& p);

std::string abstraction_report(const AbstractionResult& r, const std::vector<OptionDef>& options,
                               const std::vector<std::string>& var_names);
std::string partitions_json(const AbstractionResult& r, const std::vector<std::string>& var_names);

}  // namespace s2p
