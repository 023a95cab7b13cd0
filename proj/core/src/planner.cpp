#include "s2p/planner.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <unordered_set>

namespace s2p {

bool SymbolicState::contains_all(const SymbolicState& mask) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & mask.words_[i]) != mask.words_[i]) return false;
  }
  return true;
}

bool SymbolicState::contains_none(const SymbolicState& mask) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & mask.words_[i]) return false;
  }
  return true;
}

SymbolicState SymbolicState::apply(const SymbolicState& add, const SymbolicState& del) const {
  SymbolicState out = *this;
  for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = (words_[i] & ~del.words_[i]) | add.words_[i];
  return out;
}

std::size_t SymbolicStateHash::operator()(const SymbolicState& s) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint64_t w : s.words()) {
    h ^= w + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

double Policy::value_of(const SymbolicState& s) const {
  const auto it = value.find(s);
  return it == value.end() ? 0.0 : it->second;
}

GroundTask ground(const ppddl::Domain& domain, const ppddl::Problem& problem) {
  GroundTask task;
  task.predicates = domain.predicates;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < domain.predicates.size(); ++i) index.emplace(domain.predicates[i], i);
  const std::size_t n = domain.predicates.size();
  auto lookup = [&](const std::string& name) {
    const auto it = index.find(name);
    if (it == index.end()) throw std::invalid_argument("unknown predicate '" + name + "'");
    return it->second;
  };

  for (const ppddl::Action& a : domain.actions) {
    GroundAction ga{a.name, SymbolicState(n), SymbolicState(n), {}};
    for (const ppddl::Literal& l : a.precondition) {
      if (l.positive) {
        ga.pre_pos.set(lookup(l.predicate));
      } else {
        ga.pre_neg.set(lookup(l.predicate));
      }
    }
    double total = 0.0;
    for (const ppddl::Branch& b : a.effect) {
      GroundBranch gb{b.probability, SymbolicState(n), SymbolicState(n)};
      for (const ppddl::Literal& l : b.effects) {
        if (l.positive) {
          gb.add.set(lookup(l.predicate));
        } else {
          gb.del.set(lookup(l.predicate));
        }
      }
      total += b.probability;
      ga.branches.push_back(std::move(gb));
    }
    if (total < 1.0 - ppddl::kProbabilitySlack) {
      ga.branches.push_back(GroundBranch{1.0 - total, SymbolicState(n), SymbolicState(n)});
    }
    task.actions.push_back(std::move(ga));
  }
  task.init = SymbolicState(n);
  for (const std::string& s : problem.init) task.init.set(lookup(s));
  task.goal_pos = SymbolicState(n);
  task.goal_neg = SymbolicState(n);
  for (const ppddl::Literal& l : problem.goal) {
    if (l.positive) {
      task.goal_pos.set(lookup(l.predicate));
    } else {
      task.goal_neg.set(lookup(l.predicate));
    }
  }
  return task;
}

namespace {

struct Edge {
  int action;
  std::vector<std::pair<double, int>> outcomes;  // (probability, successor)
};

// Lazily expanded explicit state space shared by both algorithms.
class Space {
 public:
  Space(const GroundTask& task, const PlannerParams& params) : task_(task), params_(params) {}

  int intern(const SymbolicState& s) {
    const auto [it, inserted] = index_.try_emplace(s, static_cast<int>(states_.size()));
    if (inserted) {
      states_.push_back(s);
      const bool goal = task_.is_goal(s);
      value_.push_back(0.0);
      solved_.push_back(goal ? 1 : 0);
      goal_.push_back(goal ? 1 : 0);
      expanded_.push_back(0);
      edges_.emplace_back();
    }
    return it->second;
  }

  const std::vector<Edge>& expand(int s) {
    if (expanded_[static_cast<std::size_t>(s)]) return edges_[static_cast<std::size_t>(s)];
    std::vector<Edge> edges;
    if (!goal_[static_cast<std::size_t>(s)]) {
      const SymbolicState state = states_[static_cast<std::size_t>(s)];
      for (std::size_t a = 0; a < task_.actions.size(); ++a) {
        const GroundAction& act = task_.actions[a];
        if (!task_.applicable(act, state)) continue;
        Edge e{static_cast<int>(a), {}};
        for (const GroundBranch& b : act.branches) {
          const int succ = intern(state.apply(b.add, b.del));
          auto same = std::find_if(e.outcomes.begin(), e.outcomes.end(),
                                   [&](const auto& o) { return o.second == succ; });
          if (same != e.outcomes.end()) {
            same->first += b.probability;
          } else {
            e.outcomes.emplace_back(b.probability, succ);
          }
        }
        // Pure self-loops never help reach the goal.
        if (e.outcomes.size() == 1 && e.outcomes.front().second == s) continue;
        edges.push_back(std::move(e));
      }
    }
    expanded_[static_cast<std::size_t>(s)] = 1;
    edges_[static_cast<std::size_t>(s)] = std::move(edges);
    return edges_[static_cast<std::size_t>(s)];
  }

  double q(const Edge& e) const {
    double q = 1.0;
    for (const auto& [p, succ] : e.outcomes) q += p * value_[static_cast<std::size_t>(succ)];
    return q;
  }

  // Returns (best value, best edge index or -1).
  std::pair<double, int> best(int s) {
    if (goal_[static_cast<std::size_t>(s)]) return {0.0, -1};
    if (dead(s)) return {params_.dead_end_cost, -1};
    const auto& edges = expand(s);
    double best_q = params_.dead_end_cost;
    int best_e = -1;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const double qv = std::min(q(edges[i]), params_.dead_end_cost);
      if (best_e < 0 || qv < best_q - 1e-12) {
        best_q = qv;
        best_e = static_cast<int>(i);
      }
    }
    return {best_q, best_e};
  }

  double residual(int s) {
    return std::abs(best(s).first - value_[static_cast<std::size_t>(s)]);
  }

  void update(int s) { value_[static_cast<std::size_t>(s)] = best(s).first; }

  // Forward enumeration plus backward goal reachability. States that cannot
  // reach the goal become dead ends with the declared cost. Returns false if
  // the state cap was hit (analysis skipped).
  bool analyse(int init, std::size_t cap) {
    std::deque<int> queue{init};
    std::vector<char> seen(states_.size(), 0);
    auto mark = [&](int s) {
      if (static_cast<std::size_t>(s) >= seen.size()) seen.resize(states_.size(), 0);
      if (seen[static_cast<std::size_t>(s)]) return false;
      seen[static_cast<std::size_t>(s)] = 1;
      return true;
    };
    mark(init);
    while (!queue.empty()) {
      const int s = queue.front();
      queue.pop_front();
      for (const Edge& e : expand(s)) {
        for (const auto& [p, succ] : e.outcomes) {
          if (mark(succ)) queue.push_back(succ);
        }
      }
      if (states_.size() > cap) return false;
    }
    std::vector<std::vector<int>> preds(states_.size());
    for (std::size_t s = 0; s < states_.size(); ++s) {
      if (!expanded_[s]) continue;
      for (const Edge& e : edges_[s]) {
        for (const auto& [p, succ] : e.outcomes) preds[static_cast<std::size_t>(succ)].push_back(static_cast<int>(s));
      }
    }
    std::vector<char> reach(states_.size(), 0);
    std::deque<int> back;
    for (std::size_t s = 0; s < states_.size(); ++s) {
      if (goal_[s]) {
        reach[s] = 1;
        back.push_back(static_cast<int>(s));
      }
    }
    while (!back.empty()) {
      const int s = back.front();
      back.pop_front();
      for (int p : preds[static_cast<std::size_t>(s)]) {
        if (!reach[static_cast<std::size_t>(p)]) {
          reach[static_cast<std::size_t>(p)] = 1;
          back.push_back(p);
        }
      }
    }
    dead_.assign(states_.size(), 0);
    for (std::size_t s = 0; s < states_.size(); ++s) {
      if (!reach[s]) {
        dead_[s] = 1;
        value_[s] = params_.dead_end_cost;
        solved_[s] = 1;
      }
    }
    analysed_ = true;
    return true;
  }

  void ensure_dead_flags() {
    if (dead_.size() < states_.size()) dead_.resize(states_.size(), 0);
  }

  std::size_t size() const { return states_.size(); }
  const SymbolicState& state(int s) const { return states_[static_cast<std::size_t>(s)]; }
  double& value(int s) { return value_[static_cast<std::size_t>(s)]; }
  char& solved(int s) { return solved_[static_cast<std::size_t>(s)]; }
  bool goal(int s) const { return goal_[static_cast<std::size_t>(s)] != 0; }
  bool dead(int s) const { return static_cast<std::size_t>(s) < dead_.size() && dead_[static_cast<std::size_t>(s)]; }
  bool analysed() const { return analysed_; }

 private:
  const GroundTask& task_;
  const PlannerParams& params_;
  std::vector<SymbolicState> states_;
  std::unordered_map<SymbolicState, int, SymbolicStateHash> index_;
  std::vector<double> value_;
  std::vector<char> solved_;
  std::vector<char> goal_;
  std::vector<char> expanded_;
  std::vector<char> dead_;
  std::vector<std::vector<Edge>> edges_;
  bool analysed_ = false;
};

constexpr std::size_t kAnalysisCap = 1u << 22;

class Lrtdp {
 public:
  Lrtdp(Space& space, const PlannerParams& params) : S_(space), params_(params), rng_(params.seed) {}

  long run(int s0) {
    long trials = 0;
    while (!S_.solved(s0)) {
      if (trials >= params_.max_iterations) throw IterationLimit("LRTDP exceeded the iteration limit");
      ++trials;
      trial(s0);
    }
    return trials;
  }

 private:
  int sample(const Edge& e) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double r = u(rng_);
    for (const auto& [p, succ] : e.outcomes) {
      if (r < p) return succ;
      r -= p;
    }
    return e.outcomes.back().second;
  }

  void trial(int s0) {
    std::vector<int> visited;
    int s = s0;
    constexpr std::size_t kMaxTrialLength = 100000;
    while (!S_.solved(s) && visited.size() < kMaxTrialLength) {
      S_.ensure_dead_flags();
      visited.push_back(s);
      const auto [v, e] = S_.best(s);
      S_.value(s) = v;
      if (e < 0) {
        S_.solved(s) = 1;
        break;
      }
      s = sample(S_.expand(s)[static_cast<std::size_t>(e)]);
    }
    while (!visited.empty()) {
      const int t = visited.back();
      visited.pop_back();
      if (!check_solved(t)) break;
    }
  }

  bool check_solved(int s) {
    bool rv = true;
    std::vector<int> open, closed;
    ++stamp_;
    auto seen = [&](int x) {
      if (static_cast<std::size_t>(x) >= marks_.size()) marks_.resize(S_.size() + 1024, 0);
      return marks_[static_cast<std::size_t>(x)] == stamp_;
    };
    auto mark = [&](int x) {
      seen(x);
      marks_[static_cast<std::size_t>(x)] = stamp_;
    };
    if (!S_.solved(s)) {
      open.push_back(s);
      mark(s);
    }
    while (!open.empty()) {
      const int x = open.back();
      open.pop_back();
      closed.push_back(x);
      S_.ensure_dead_flags();
      if (S_.residual(x) > params_.epsilon) {
        rv = false;
        continue;
      }
      const auto [v, e] = S_.best(x);
      if (e < 0) continue;
      for (const auto& [p, succ] : S_.expand(x)[static_cast<std::size_t>(e)].outcomes) {
        if (!S_.solved(succ) && !seen(succ)) {
          mark(succ);
          open.push_back(succ);
        }
      }
    }
    if (rv) {
      for (int x : closed) S_.solved(x) = 1;
    } else {
      while (!closed.empty()) {
        S_.ensure_dead_flags();
        S_.update(closed.back());
        closed.pop_back();
      }
    }
    return rv;
  }

  Space& S_;
  const PlannerParams& params_;
  std::mt19937_64 rng_;
  std::vector<long> marks_;
  long stamp_ = 0;
};

long value_iteration(Space& S, const PlannerParams& params) {
  long sweeps = 0;
  while (true) {
    if (sweeps >= params.max_iterations) throw IterationLimit("value iteration exceeded the iteration limit");
    ++sweeps;
    double max_res = 0.0;
    for (std::size_t s = 0; s < S.size(); ++s) {
      const int si = static_cast<int>(s);
      if (S.goal(si) || S.dead(si)) continue;
      const double v = S.best(si).first;
      max_res = std::max(max_res, std::abs(v - S.value(si)));
      S.value(si) = v;
    }
    if (max_res < params.epsilon) return sweeps;
  }
}

// Bellman sweeps over the states reachable from s0 under the greedy policy
// until the residual falls to epsilon / 100. A residual of epsilon alone can
// leave a value error well above epsilon when actions loop with high
// probability; this pass tightens the reported values for both algorithms.
void refine_envelope(Space& S, int s0, const PlannerParams& params) {
  const double tol = params.epsilon * 1e-2;
  for (long sweep = 0; sweep < params.max_iterations; ++sweep) {
    double max_res = 0.0;
    std::vector<int> stack{s0};
    std::unordered_set<int> seen{s0};
    while (!stack.empty()) {
      const int s = stack.back();
      stack.pop_back();
      S.ensure_dead_flags();
      if (S.goal(s) || S.dead(s)) continue;
      const auto [v, e] = S.best(s);
      max_res = std::max(max_res, std::abs(v - S.value(s)));
      S.value(s) = v;
      if (e < 0) continue;
      for (const auto& [p, succ] : S.expand(s)[static_cast<std::size_t>(e)].outcomes) {
        if (seen.insert(succ).second) stack.push_back(succ);
      }
    }
    if (max_res < tol) return;
  }
}

}  // namespace

Policy solve(const GroundTask& task, const PlannerParams& params) {
  Space space(task, params);
  const int s0 = space.intern(task.init);
  const bool complete = space.analyse(s0, params.algorithm == Algorithm::ValueIteration
                                              ? std::numeric_limits<std::size_t>::max()
                                              : kAnalysisCap);
  space.ensure_dead_flags();
  if (complete && space.dead(s0)) throw GoalUnreachable("no action sequence reaches the goal from init");

  Policy policy;
  if (params.algorithm == Algorithm::ValueIteration) {
    policy.iterations = value_iteration(space, params);
  } else {
    policy.iterations = Lrtdp(space, params).run(s0);
  }
  if (!space.goal(s0)) refine_envelope(space, s0, params);
  if (space.value(s0) >= params.dead_end_cost) throw GoalUnreachable("goal unreachable from init");

  // Greedy policy on the states reachable from init under the policy.
  std::vector<int> stack{s0};
  std::unordered_set<int> seen{s0};
  while (!stack.empty()) {
    const int s = stack.back();
    stack.pop_back();
    space.ensure_dead_flags();
    policy.value[space.state(s)] = space.goal(s) ? 0.0 : space.value(s);
    if (space.goal(s)) continue;
    const auto [v, e] = space.best(s);
    if (e < 0) continue;
    const Edge& edge = space.expand(s)[static_cast<std::size_t>(e)];
    policy.action[space.state(s)] = edge.action;
    for (const auto& [p, succ] : edge.outcomes) {
      if (seen.insert(succ).second) stack.push_back(succ);
    }
  }
  policy.init_value = space.value(s0);
  return policy;
}

Policy solve(const ppddl::Domain& domain, const ppddl::Problem& problem, const PlannerParams& params) {
  return solve(ground(domain, problem), params);
}

double q_value(const GroundTask& task, const Policy& policy, const SymbolicState& s, int action) {
  const GroundAction& a = task.actions[static_cast<std::size_t>(action)];
  double q = 1.0;
  for (const GroundBranch& b : a.branches) q += b.probability * policy.value_of(s.apply(b.add, b.del));
  return q;
}

namespace {

const GroundAction& policy_action(const GroundTask& task, const Policy& policy, const SymbolicState& s) {
  const auto it = policy.action.find(s);
  if (it == policy.action.end()) throw RolloutBudgetExceeded("rollout left the policy's domain");
  return task.actions[static_cast<std::size_t>(it->second)];
}

SymbolicState sample_branch(const GroundAction& a, const SymbolicState& s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double r = u(rng);
  for (const GroundBranch& b : a.branches) {
    if (r < b.probability) return s.apply(b.add, b.del);
    r -= b.probability;
  }
  return s.apply(a.branches.back().add, a.branches.back().del);
}

}  // namespace

std::vector<std::string> extract_linear_plan(const GroundTask& task, const Policy& policy, std::mt19937_64& rng,
                                             int max_steps) {
  std::vector<std::string> plan;
  SymbolicState s = task.init;
  std::unordered_set<SymbolicState, SymbolicStateHash> visited{s};
  bool sampling = false;
  while (!task.is_goal(s)) {
    if (static_cast<int>(plan.size()) >= max_steps) throw RolloutBudgetExceeded("plan rollout exceeded its budget");
    const GroundAction& a = policy_action(task, policy, s);
    plan.push_back(a.name);
    SymbolicState next;
    if (sampling) {
      next = sample_branch(a, s, rng);
    } else {
      const auto best = std::max_element(a.branches.begin(), a.branches.end(),
                                         [](const GroundBranch& x, const GroundBranch& y) {
                                           return x.probability < y.probability;
                                         });
      next = s.apply(best->add, best->del);
      if (!visited.insert(next).second) sampling = true;
    }
    s = std::move(next);
  }
  return plan;
}

double simulate_policy(const GroundTask& task, const Policy& policy, int n_rollouts, int horizon,
                       std::mt19937_64& rng) {
  if (n_rollouts <= 0) return 0.0;
  int successes = 0;
  for (int i = 0; i < n_rollouts; ++i) {
    SymbolicState s = task.init;
    for (int t = 0; t < horizon && !task.is_goal(s); ++t) {
      const auto it = policy.action.find(s);
      if (it == policy.action.end()) break;
      s = sample_branch(task.actions[static_cast<std::size_t>(it->second)], s, rng);
    }
    if (task.is_goal(s)) ++successes;
  }
  return static_cast<double>(successes) / n_rollouts;
}

}  // namespace s2p
