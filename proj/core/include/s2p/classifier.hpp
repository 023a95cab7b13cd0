#pragma once

// Precondition classifier: class-balanced Gaussian (radial-basis) kernel
// classifier over the factors needed to tell the classes apart.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "s2p/dbscan.hpp"

namespace s2p {

class DegenerateClasses : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ClassifierParams {
  double bandwidth = 0.01;         // kernel width in normalized state units
  int holdout_stride = 4;       // every k-th sample of each class is held out
  std::size_t max_test = 2000;  // held-out points scored per class (even subsample)
};

/// P(positive | x) = (S+/W+) / (S+/W+ + S-/W-) where S is the kernel-weighted
/// class mass at x and W the class total; 0.5 where neither class has support.
class KernelClassifier {
 public:
  KernelClassifier() = default;
  KernelClassifier(std::vector<std::size_t> dims, const std::vector<Point>& positives,
                   const std::vector<Point>& negatives, double bandwidth);

  double probability(const Point& x) const;
  const std::vector<std::size_t>& dims() const { return dims_; }
  double bandwidth() const { return bandwidth_; }

 private:
  struct Class {
    std::vector<Point> points;  // projected onto dims_, duplicates collapsed
    std::vector<double> weights;
    double total = 0.0;
  };
  static Class build(const std::vector<std::size_t>& dims, const std::vector<Point>& pts);
  double mass(const Class& c, const Point& x) const;

  std::vector<std::size_t> dims_;
  double bandwidth_ = 0.01;
  Class pos_;
  Class neg_;
};

/// Mean of the true-positive and true-negative rates at threshold 0.5.
double balanced_accuracy(const KernelClassifier& clf, const std::vector<Point>& positives,
                         const std::vector<Point>& negatives);

struct PreconditionModel {
  KernelClassifier classifier;       // trained on all data over the relevant factors
  std::vector<std::size_t> factors;  // indices into the factor list the decision depends on
  std::vector<double> importance;    // states that become ambiguous when each kept factor is dropped
  double heldout_accuracy = 0.0;
  bool low_confidence = false;       // held-out accuracy below 0.6
};

/// factors: the state-variable groups features are selected by. States are
/// binned into cells one bandwidth wide; factors are eliminated backwards
/// (highest index first) when dropping one creates no new cell holding both
/// classes, other than projections of cells that were already mixed. A kept
/// factor's importance is the number of mixed cells its removal would create.
/// Throws DegenerateClasses if either class is empty.
PreconditionModel fit_precondition_classifier(const std::vector<Point>& positives, const std::vector<Point>& negatives,
                                              const std::vector<std::vector<std::size_t>>& factors,
                                              const ClassifierParams& params = {});

}  // namespace s2p
