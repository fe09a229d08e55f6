#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ssr {

using Vector = Eigen::VectorXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Basis map applied to raw points before classification.
///
/// The menu is fixed: `identity`, or `scaled_saturating(c)` which maps each
/// coordinate x to c * tanh(x / c). Both are 1-Lipschitz in the l2 and
/// l-infinity norms, so the recorded composite constants are 1.
class FeatureMap {
 public:
  enum class Kind { identity, scaled_saturating };

  static FeatureMap identity() { return FeatureMap(Kind::identity, 1.0); }
  static FeatureMap scaled_saturating(double c);

  Kind kind() const { return kind_; }
  double scale() const { return scale_; }
  bool is_identity() const { return kind_ == Kind::identity; }
  double lipschitz_l2() const { return 1.0; }
  double lipschitz_linf() const { return 1.0; }

  double apply(double x) const;

  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;

 private:
  FeatureMap(Kind kind, double scale) : kind_(kind), scale_(scale) {}
  Kind kind_;
  double scale_;
};

class NoiseFamily {
 public:
  enum class Kind { gaussian, bounded_uniform };

  static NoiseFamily gaussian() { return NoiseFamily(Kind::gaussian, 0.0); }
  /// i.i.d. uniform on [-half_width, half_width] per coordinate; ignores sigma.
  static NoiseFamily bounded_uniform(double half_width);

  Kind kind() const { return kind_; }
  double half_width() const { return half_width_; }
  bool is_gaussian() const { return kind_ == Kind::gaussian; }

  friend bool operator==(const NoiseFamily&, const NoiseFamily&) = default;

 private:
  NoiseFamily(Kind kind, double half_width) : kind_(kind), half_width_(half_width) {}
  Kind kind_;
  double half_width_;
};

/// Two-component mixture: label +1 with probability mixing_pos, the point is
/// the component mean plus isotropic noise, and the feature map is applied last.
struct DomainSpec {
  Vector mean_pos;
  Vector mean_neg;
  double sigma = 1.0;
  double mixing_pos = 0.5;
  NoiseFamily noise = NoiseFamily::gaussian();
  FeatureMap feature_map = FeatureMap::identity();

  /// Labeled-domain form: means +mu / -mu, uniform mixture, gaussian noise.
  static DomainSpec symmetric(const Vector& mu, double sigma);

  Eigen::Index dim() const { return mean_pos.size(); }
  void validate() const;
  /// Content hash over every field, bit-exact on the doubles.
  std::uint64_t digest() const;
};

struct Dataset {
  RowMatrix features;
  std::optional<std::vector<int>> labels;
  std::uint64_t seed = 0;
  std::uint64_t spec_digest = 0;

  Eigen::Index rows() const { return features.rows(); }
  Eigen::Index dim() const { return features.cols(); }
  bool has_labels() const { return labels.has_value(); }
};

struct SeparationReport {
  double separation = 0.0;
  double alpha = 0.0;
  std::int64_t mc_samples = 0;
};

/// Draws n labeled rows. Row i uses its own stream keyed by (seed, i), so the
/// output does not depend on `threads`.
Dataset sample_labeled(const DomainSpec& spec, std::int64_t n, std::uint64_t seed, int threads = 1);

/// Same draw as sample_labeled with the labels dropped.
Dataset sample_unlabeled(const DomainSpec& spec, std::int64_t n, std::uint64_t seed, int threads = 1);

/// Draws row `row` of the (spec, seed) stream into `out`; returns its label.
/// The returned point is in feature space.
int draw_row(const DomainSpec& spec, std::uint64_t seed, std::uint64_t row, Eigen::Ref<Vector> out);

RowMatrix apply_feature_map(const FeatureMap& map, const RowMatrix& points);
void apply_feature_map_inplace(const FeatureMap& map, Eigen::Ref<Vector> point);

/// ||E phi(z) - E phi(-z)|| and alpha = separation / (2 sqrt(d)). Exact for the
/// identity map; Monte Carlo over both components otherwise.
SeparationReport separation_stats(const DomainSpec& spec, std::int64_t mc_samples, std::uint64_t seed);

/// CSV with header f0,...,f{d-1}[,label]; 17 significant digits.
void write_dataset_csv(const Dataset& data, std::ostream& out);
Dataset read_dataset_csv(std::istream& in);

}  // namespace ssr
