#include "s2p/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace s2p {

KernelClassifier::Class KernelClassifier::build(const std::vector<std::size_t>& dims, const std::vector<Point>& pts) {
  std::map<Point, double> counts;
  for (const Point& p : pts) {
    Point q;
    q.reserve(dims.size());
    for (std::size_t d : dims) q.push_back(p[d]);
    counts[q] += 1.0;
  }
  Class c;
  for (auto& [q, w] : counts) {
    c.points.push_back(q);
    c.weights.push_back(w);
    c.total += w;
  }
  return c;
}

KernelClassifier::KernelClassifier(std::vector<std::size_t> dims, const std::vector<Point>& positives,
                                   const std::vector<Point>& negatives, double bandwidth)
    : dims_(std::move(dims)), bandwidth_(bandwidth), pos_(build(dims_, positives)), neg_(build(dims_, negatives)) {}

double KernelClassifier::mass(const Class& c, const Point& x) const {
  if (dims_.empty()) return c.total > 0.0 ? 1.0 : 0.0;
  const double cutoff = 8.0 * bandwidth_;
  const double inv = 1.0 / (2.0 * bandwidth_ * bandwidth_);
  // Points are sorted lexicographically, so the first coordinate bounds the scan.
  const double first = x[dims_.front()];
  auto it = std::lower_bound(c.points.begin(), c.points.end(), first - cutoff,
                             [](const Point& p, double v) { return p.front() < v; });
  double sum = 0.0;
  for (; it != c.points.end() && it->front() <= first + cutoff; ++it) {
    const Point& p = *it;
    double d2 = 0.0;
    bool near = true;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
      const double d = x[dims_[k]] - p[k];
      if (std::abs(d) > cutoff) {
        near = false;
        break;
      }
      d2 += d * d;
    }
    if (near) sum += c.weights[static_cast<std::size_t>(it - c.points.begin())] * std::exp(-d2 * inv);
  }
  return c.total > 0.0 ? sum / c.total : 0.0;
}

double KernelClassifier::probability(const Point& x) const {
  const double p = mass(pos_, x);
  const double n = mass(neg_, x);
  if (p + n <= 1e-300) return 0.5;
  return p / (p + n);
}

double balanced_accuracy(const KernelClassifier& clf, const std::vector<Point>& positives,
                         const std::vector<Point>& negatives) {
  auto rate = [&](const std::vector<Point>& pts, bool want) {
    if (pts.empty()) return 1.0;
    std::size_t ok = 0;
    for (const Point& x : pts) ok += ((clf.probability(x) > 0.5) == want) ? 1 : 0;
    return static_cast<double>(ok) / static_cast<double>(pts.size());
  };
  return 0.5 * (rate(positives, true) + rate(negatives, false));
}

namespace {

std::vector<std::size_t> dims_of(const std::vector<std::vector<std::size_t>>& factors,
                                 const std::vector<std::size_t>& chosen) {
  std::vector<std::size_t> dims;
  for (std::size_t f : chosen) dims.insert(dims.end(), factors[f].begin(), factors[f].end());
  std::sort(dims.begin(), dims.end());
  return dims;
}

bool varies(const std::vector<Point>& a, const std::vector<Point>& b, const std::vector<std::size_t>& vars) {
  const Point& ref = a.front();
  for (const auto* set : {&a, &b}) {
    for (const Point& p : *set) {
      for (std::size_t v : vars) {
        if (p[v] != ref[v]) return true;
      }
    }
  }
  return false;
}

void split(const std::vector<Point>& all, int stride, std::size_t max_test, std::vector<Point>& train,
           std::vector<Point>& test) {
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (stride > 1 && all.size() >= 2 * static_cast<std::size_t>(stride) && i % static_cast<std::size_t>(stride) == 0) {
      test.push_back(all[i]);
    } else {
      train.push_back(all[i]);
    }
  }
  if (test.empty()) test = train;  // too small to hold out: score on the training data
  if (max_test > 0 && test.size() > max_test) {
    std::vector<Point> kept;
    const double stride_f = static_cast<double>(test.size()) / static_cast<double>(max_test);
    for (std::size_t i = 0; i < max_test; ++i) kept.push_back(test[static_cast<std::size_t>(static_cast<double>(i) * stride_f)]);
    test = std::move(kept);
  }
}

}  // namespace

PreconditionModel fit_precondition_classifier(const std::vector<Point>& positives, const std::vector<Point>& negatives,
                                              const std::vector<std::vector<std::size_t>>& factors,
                                              const ClassifierParams& params) {
  if (positives.empty() || negatives.empty()) throw DegenerateClasses("precondition classifier needs both classes");
  std::vector<Point> pos_train, pos_test, neg_train, neg_test;
  split(positives, params.holdout_stride, params.max_test, pos_train, pos_test);
  split(negatives, params.holdout_stride, params.max_test, neg_train, neg_test);

  std::vector<std::size_t> chosen;
  for (std::size_t f = 0; f < factors.size(); ++f) {
    if (!factors[f].empty() && varies(positives, negatives, factors[f])) chosen.push_back(f);
  }
  // States are binned into cells one kernel width wide. A factor is irrelevant
  // when dropping it creates no new cell holding both classes, i.e. it never
  // separates a positive from a nearby negative.
  auto cell = [&](const Point& p, const std::vector<std::size_t>& dims) {
    std::vector<long> c;
    c.reserve(dims.size());
    for (std::size_t d : dims) c.push_back(std::lround(std::floor(p[d] / params.bandwidth)));
    return c;
  };
  auto ambiguous = [&](const std::vector<std::size_t>& subset) {
    const auto dims = dims_of(factors, subset);
    std::set<std::vector<long>> pos;
    for (const Point& p : positives) pos.insert(cell(p, dims));
    std::set<std::vector<long>> out;
    for (const Point& n : negatives) {
      auto c = cell(n, dims);
      if (pos.count(c)) out.insert(std::move(c));
    }
    return out;
  };
  auto new_ambiguity = [&](const std::vector<std::size_t>& current, std::size_t drop) {
    std::vector<std::size_t> reduced = current;
    reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(drop));
    const auto before_dims = dims_of(factors, current);
    const auto after_dims = dims_of(factors, reduced);
    // Position of each reduced dimension inside the current cell key.
    std::vector<std::size_t> keep;
    for (std::size_t d : after_dims) {
      keep.push_back(static_cast<std::size_t>(std::find(before_dims.begin(), before_dims.end(), d) - before_dims.begin()));
    }
    std::set<std::vector<long>> inherited;
    for (const auto& c : ambiguous(current)) {
      std::vector<long> r;
      for (std::size_t k : keep) r.push_back(c[k]);
      inherited.insert(std::move(r));
    }
    std::size_t fresh = 0;
    for (const auto& c : ambiguous(reduced)) fresh += inherited.count(c) ? 0 : 1;
    return fresh;
  };
  for (std::size_t i = chosen.size(); i-- > 0;) {
    if (new_ambiguity(chosen, i) == 0) chosen.erase(chosen.begin() + static_cast<std::ptrdiff_t>(i));
  }
  auto score = [&](const std::vector<std::size_t>& subset) {
    const KernelClassifier clf(dims_of(factors, subset), pos_train, neg_train, params.bandwidth);
    return balanced_accuracy(clf, pos_test, neg_test);
  };
  const double current = score(chosen);
  PreconditionModel model;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    model.importance.push_back(static_cast<double>(new_ambiguity(chosen, i)));
  }
  model.factors = chosen;
  model.heldout_accuracy = current;
  model.low_confidence = current < 0.6;
  model.classifier = KernelClassifier(dims_of(factors, chosen), positives, negatives, params.bandwidth);
  return model;
}

}  // namespace s2p
