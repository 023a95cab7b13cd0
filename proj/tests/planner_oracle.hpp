#pragma once

// Random propositional MDPs and an independent value-iteration oracle over
// explicitly enumerated bitmask states. Shared by unit and acceptance tests.

#include <cmath>
#include <cstdint>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include "s2p/ppddl.hpp"

namespace s2p::test {

struct MaskBranch {
  double p;
  std::uint32_t add, del;
};
struct MaskAction {
  std::uint32_t pre_pos, pre_neg;
  std::vector<MaskBranch> branches;  // sums to 1
};
struct MaskMdp {
  int n = 0;
  std::vector<MaskAction> actions;
  std::uint32_t init = 0, goal = 0;
};

inline MaskMdp random_mdp(std::mt19937_64& rng, int max_vars = 10) {
  MaskMdp m;
  m.n = 3 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_vars - 2));
  auto bit = [&] { return std::uint32_t{1} << (rng() % static_cast<std::uint64_t>(m.n)); };
  const int na = 3 + static_cast<int>(rng() % 10);
  for (int a = 0; a < na; ++a) {
    MaskAction act{0, 0, {}};
    for (int k = static_cast<int>(rng() % 3); k > 0; --k) {
      const auto b = bit();
      if (rng() % 2) act.pre_pos |= b; else act.pre_neg |= b;
    }
    act.pre_neg &= ~act.pre_pos;
    const int nb = 1 + static_cast<int>(rng() % 3);
    double left = 1.0;
    for (int b = 0; b < nb; ++b) {
      const double p = b + 1 == nb ? left : std::round(left * (0.2 + 0.6 * (rng() % 1000) / 1000.0) * 1000) / 1000;
      left -= p;
      MaskBranch br{p, 0, 0};
      for (int k = 1 + static_cast<int>(rng() % 2); k > 0; --k) {
        const auto x = bit();
        if (rng() % 3) br.add |= x; else br.del |= x;
      }
      br.del &= ~br.add;
      act.branches.push_back(br);
    }
    m.actions.push_back(act);
  }
  m.goal = bit() | bit();
  return m;
}

inline std::string pred(int i) { return "p" + std::to_string(i); }

inline std::pair<ppddl::Domain, ppddl::Problem> to_ppddl(const MaskMdp& m) {
  ppddl::Domain d;
  d.name = "rand";
  for (int i = 0; i < m.n; ++i) d.predicates.push_back(pred(i));
  for (std::size_t a = 0; a < m.actions.size(); ++a) {
    ppddl::Action act;
    act.name = "a" + std::to_string(a);
    for (int i = 0; i < m.n; ++i) {
      if (m.actions[a].pre_pos >> i & 1U) act.precondition.push_back({pred(i), true, {}});
      if (m.actions[a].pre_neg >> i & 1U) act.precondition.push_back({pred(i), false, {}});
    }
    for (const auto& b : m.actions[a].branches) {
      ppddl::Branch br;
      br.probability = b.p;
      for (int i = 0; i < m.n; ++i) {
        if (b.add >> i & 1U) br.effects.push_back({pred(i), true, {}});
        if (b.del >> i & 1U) br.effects.push_back({pred(i), false, {}});
      }
      act.effect.push_back(br);
    }
    d.actions.push_back(act);
  }
  ppddl::Problem p;
  p.name = "rand_problem";
  p.domain = "rand";
  for (int i = 0; i < m.n; ++i) {
    if (m.init >> i & 1U) p.init.push_back(pred(i));
    if (m.goal >> i & 1U) p.goal.push_back({pred(i), true, {}});
  }
  return {d, p};
}

/// Expected number of steps to the goal from init, or dead_end_cost when the
/// goal cannot be reached. States that cannot reach the goal cost dead_end_cost.
inline double oracle_value(const MaskMdp& m, double dead_end_cost = 1e6) {
  auto applicable = [&](const MaskAction& a, std::uint32_t s) { return (s & a.pre_pos) == a.pre_pos && !(s & a.pre_neg); };
  auto next = [](std::uint32_t s, const MaskBranch& b) { return (s & ~b.del) | b.add; };
  auto is_goal = [&](std::uint32_t s) { return (s & m.goal) == m.goal; };
  // Forward reachable states.
  std::vector<std::uint32_t> states;
  std::map<std::uint32_t, int> index;
  std::queue<std::uint32_t> q;
  q.push(m.init);
  index[m.init] = 0;
  states.push_back(m.init);
  while (!q.empty()) {
    const auto s = q.front();
    q.pop();
    if (is_goal(s)) continue;
    for (const auto& a : m.actions) {
      if (!applicable(a, s)) continue;
      for (const auto& b : a.branches) {
        const auto t = next(s, b);
        if (index.emplace(t, static_cast<int>(states.size())).second) {
          states.push_back(t);
          q.push(t);
        }
      }
    }
  }
  // States that can reach the goal (backward closure over positive-probability edges).
  std::set<std::uint32_t> alive;
  for (auto s : states) {
    if (is_goal(s)) alive.insert(s);
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (auto s : states) {
      if (alive.count(s)) continue;
      for (const auto& a : m.actions) {
        if (!applicable(a, s)) continue;
        bool reach = false;
        for (const auto& b : a.branches) reach |= b.p > 0 && alive.count(next(s, b));
        if (reach) {
          alive.insert(s);
          changed = true;
          break;
        }
      }
    }
  }
  if (!alive.count(m.init)) return dead_end_cost;
  std::map<std::uint32_t, double> v;
  for (auto s : states) v[s] = is_goal(s) ? 0.0 : alive.count(s) ? 0.0 : dead_end_cost;
  for (int sweep = 0; sweep < 200000; ++sweep) {
    double residual = 0.0;
    for (auto s : states) {
      if (is_goal(s) || !alive.count(s)) continue;
      double best = dead_end_cost;
      for (const auto& a : m.actions) {
        if (!applicable(a, s)) continue;
        double stay = 0.0, q_rest = 0.0;
        for (const auto& b : a.branches) {
          const auto t = next(s, b);
          if (t == s) stay += b.p; else q_rest += b.p * v[t];
        }
        if (stay >= 1.0 - 1e-12) continue;  // pure self-loop
        // Closed form for the self-loop part: Q = (1 + sum_{t != s} p v(t)) / (1 - p_stay).
        best = std::min(best, (1.0 + q_rest) / (1.0 - stay));
      }
      residual = std::max(residual, std::abs(best - v[s]));
      v[s] = best;
    }
    if (residual < 1e-10) break;
  }
  return v[m.init];
}

}  // namespace s2p::test
