#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ssr/model.hpp"

namespace ssr {

enum class Provenance { supervised, semi_supervised, sparse, explicit_ };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view text);

/// Decision rule sgn(w^T (x - b)) with sgn(0) = +1. w is never the zero vector.
class LinearClassifier {
 public:
  LinearClassifier(Vector w, Vector b, Provenance provenance = Provenance::explicit_);

  const Vector& w() const { return w_; }
  const Vector& b() const { return b_; }
  Provenance provenance() const { return provenance_; }
  Eigen::Index dim() const { return w_.size(); }

  /// w^T (x - b); the sign decides the label.
  double score(const Eigen::Ref<const Vector>& x) const;

 private:
  Vector w_;
  Vector b_;
  Provenance provenance_;
};

struct PseudoLabelReport {
  std::vector<int> labels;
  std::int64_t n_pos = 0;
  std::int64_t n_neg = 0;
};

/// Mean-difference fit on 2n labeled rows: w = mean of y_i x_i over the first
/// half, b = mean of x_i over the second half.
LinearClassifier fit_supervised(const Dataset& data);

int predict(const LinearClassifier& clf, const Eigen::Ref<const Vector>& x);

PseudoLabelReport pseudo_label(const LinearClassifier& clf, const Dataset& unlabeled);

/// Half-difference and half-sum of the two pseudo-class means.
LinearClassifier fit_semi_supervised(const PseudoLabelReport& report, const Dataset& unlabeled);

/// fit_supervised on the columns in `support`, embedded back into full
/// dimension with zeros off the support. Indices are sorted and deduplicated.
LinearClassifier fit_sparse(const Dataset& labeled, std::vector<std::int64_t> support);

std::string to_json(const LinearClassifier& clf);
LinearClassifier classifier_from_json(std::string_view text);

}  // namespace ssr
