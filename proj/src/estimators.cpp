#include "ssr/estimators.hpp"

#include <algorithm>

#include <json.hpp>

#include "ssr/errors.hpp"
#include "ssr/format.hpp"

namespace ssr {

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::supervised: return "supervised";
    case Provenance::semi_supervised: return "semi_supervised";
    case Provenance::sparse: return "sparse";
    case Provenance::explicit_: return "explicit";
  }
  return "explicit";
}

Provenance provenance_from_string(std::string_view text) {
  if (text == "supervised") return Provenance::supervised;
  if (text == "semi_supervised") return Provenance::semi_supervised;
  if (text == "sparse") return Provenance::sparse;
  if (text == "explicit") return Provenance::explicit_;
  throw ParseError("unknown provenance '" + std::string(text) + "'");
}

LinearClassifier::LinearClassifier(Vector w, Vector b, Provenance provenance)
    : w_(std::move(w)), b_(std::move(b)), provenance_(provenance) {
  if (w_.size() == 0 || w_.size() != b_.size()) throw DimensionError("w and b must share a positive dimension");
  if (w_.isZero(0.0)) throw DegenerateClassifier("w is the zero vector");
}

double LinearClassifier::score(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != w_.size()) throw DimensionError("input dimension does not match classifier");
  return w_.dot(x - b_);
}

int predict(const LinearClassifier& clf, const Eigen::Ref<const Vector>& x) {
  return clf.score(x) >= 0.0 ? 1 : -1;
}

LinearClassifier fit_supervised(const Dataset& data) {
  if (!data.has_labels()) throw PreconditionError("fit_supervised needs labels");
  const Eigen::Index rows = data.rows();
  if (rows < 2 || rows % 2 != 0) throw SplitError("labeled row count must be even and >= 2");
  const Eigen::Index n = rows / 2;
  const auto& y = *data.labels;
  Vector w = Vector::Zero(data.dim());
  Vector b = Vector::Zero(data.dim());
  for (Eigen::Index i = 0; i < n; ++i) w += static_cast<double>(y[static_cast<std::size_t>(i)]) * data.features.row(i).transpose();
  for (Eigen::Index i = n; i < rows; ++i) b += data.features.row(i).transpose();
  w /= static_cast<double>(n);
  b /= static_cast<double>(n);
  if (w.isZero(0.0)) throw DegenerateEstimator("supervised direction is zero");
  return LinearClassifier(std::move(w), std::move(b), Provenance::supervised);
}

PseudoLabelReport pseudo_label(const LinearClassifier& clf, const Dataset& unlabeled) {
  if (unlabeled.has_labels()) throw PreconditionError("pseudo_label expects an unlabeled dataset");
  if (unlabeled.dim() != clf.dim()) throw DimensionError("unlabeled dimension does not match classifier");
  PseudoLabelReport report;
  report.labels.resize(static_cast<std::size_t>(unlabeled.rows()));
  for (Eigen::Index i = 0; i < unlabeled.rows(); ++i) {
    const int label = predict(clf, unlabeled.features.row(i).transpose());
    report.labels[static_cast<std::size_t>(i)] = label;
    (label > 0 ? report.n_pos : report.n_neg) += 1;
  }
  return report;
}

LinearClassifier fit_semi_supervised(const PseudoLabelReport& report, const Dataset& unlabeled) {
  if (static_cast<Eigen::Index>(report.labels.size()) != unlabeled.rows()) {
    throw DimensionError("pseudo-label count does not match unlabeled rows");
  }
  if (report.n_pos == 0 || report.n_neg == 0) throw DegeneratePseudoSplit("pseudo-labels contain a single class");
  Vector sum_pos = Vector::Zero(unlabeled.dim());
  Vector sum_neg = Vector::Zero(unlabeled.dim());
  std::int64_t n_pos = 0;
  std::int64_t n_neg = 0;
  for (Eigen::Index i = 0; i < unlabeled.rows(); ++i) {
    if (report.labels[static_cast<std::size_t>(i)] > 0) {
      sum_pos += unlabeled.features.row(i).transpose();
      ++n_pos;
    } else {
      sum_neg += unlabeled.features.row(i).transpose();
      ++n_neg;
    }
  }
  if (n_pos != report.n_pos || n_neg != report.n_neg) throw PreconditionError("pseudo-label counts are inconsistent");
  const Vector half_pos = sum_pos / (2.0 * static_cast<double>(n_pos));
  const Vector half_neg = sum_neg / (2.0 * static_cast<double>(n_neg));
  Vector w = half_pos - half_neg;
  if (w.isZero(0.0)) throw DegenerateEstimator("semi-supervised direction is zero");
  return LinearClassifier(std::move(w), half_pos + half_neg, Provenance::semi_supervised);
}

LinearClassifier fit_sparse(const Dataset& labeled, std::vector<std::int64_t> support) {
  if (support.empty()) throw EmptySupport("support estimate is empty");
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  if (support.front() < 0 || support.back() >= labeled.dim()) throw DimensionError("support index out of range");
  Dataset projected;
  projected.features = labeled.features(Eigen::all, support);
  projected.labels = labeled.labels;
  const LinearClassifier reduced = fit_supervised(projected);
  Vector w = Vector::Zero(labeled.dim());
  Vector b = Vector::Zero(labeled.dim());
  for (std::size_t k = 0; k < support.size(); ++k) {
    w[support[k]] = reduced.w()[static_cast<Eigen::Index>(k)];
    b[support[k]] = reduced.b()[static_cast<Eigen::Index>(k)];
  }
  return LinearClassifier(std::move(w), std::move(b), Provenance::sparse);
}

std::string to_json(const LinearClassifier& clf) {
  return "{\"w\":" + format_json_array(clf.w()) + ",\"b\":" + format_json_array(clf.b()) +
         ",\"provenance\":\"" + std::string(to_string(clf.provenance())) + "\"}";
}

LinearClassifier classifier_from_json(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    const auto w = doc.at("w").get<std::vector<double>>();
    const auto b = doc.at("b").get<std::vector<double>>();
    return LinearClassifier(Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size())),
                            Eigen::Map<const Vector>(b.data(), static_cast<Eigen::Index>(b.size())),
                            provenance_from_string(doc.at("provenance").get<std::string>()));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("classifier JSON: ") + e.what());
  }
}

}  // namespace ssr
