#include "ssr/model.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "ssr/errors.hpp"
#include "ssr/format.hpp"
#include "ssr/parallel.hpp"
#include "ssr/rng.hpp"

namespace ssr {

FeatureMap FeatureMap::scaled_saturating(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw PreconditionError("scaled_saturating needs c > 0");
  return FeatureMap(Kind::scaled_saturating, c);
}

double FeatureMap::apply(double x) const {
  if (kind_ == Kind::identity) return x;
  return scale_ * std::tanh(x / scale_);
}

NoiseFamily NoiseFamily::bounded_uniform(double half_width) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw PreconditionError("bounded_uniform needs half_width > 0");
  }
  return NoiseFamily(Kind::bounded_uniform, half_width);
}

DomainSpec DomainSpec::symmetric(const Vector& mu, double sigma) {
  DomainSpec spec;
  spec.mean_pos = mu;
  spec.mean_neg = -mu;
  spec.sigma = sigma;
  return spec;
}

void DomainSpec::validate() const {
  if (mean_pos.size() == 0) throw DimensionError("domain dimension must be positive");
  if (mean_pos.size() != mean_neg.size()) throw DimensionError("component means differ in dimension");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw PreconditionError("sigma must be finite and >= 0");
  if (!(mixing_pos >= 0.0 && mixing_pos <= 1.0)) throw PreconditionError("mixing_pos must lie in [0, 1]");
  if (!mean_pos.allFinite() || !mean_neg.allFinite()) throw PreconditionError("means must be finite");
}

std::uint64_t DomainSpec::digest() const {
  std::uint64_t h = fnv1a("DomainSpec/v1");
  auto feed = [&h](const void* p, std::size_t n) { h = fnv1a(p, n, h); };
  const std::int64_t d = dim();
  feed(&d, sizeof d);
  feed(mean_pos.data(), sizeof(double) * mean_pos.size());
  feed(mean_neg.data(), sizeof(double) * mean_neg.size());
  feed(&sigma, sizeof sigma);
  feed(&mixing_pos, sizeof mixing_pos);
  const int noise_kind = static_cast<int>(noise.kind());
  const double half_width = noise.half_width();
  feed(&noise_kind, sizeof noise_kind);
  feed(&half_width, sizeof half_width);
  const int map_kind = static_cast<int>(feature_map.kind());
  const double map_scale = feature_map.scale();
  feed(&map_kind, sizeof map_kind);
  feed(&map_scale, sizeof map_scale);
  return h;
}

void apply_feature_map_inplace(const FeatureMap& map, Eigen::Ref<Vector> point) {
  if (map.is_identity()) return;
  for (Eigen::Index j = 0; j < point.size(); ++j) point[j] = map.apply(point[j]);
}

RowMatrix apply_feature_map(const FeatureMap& map, const RowMatrix& points) {
  if (map.is_identity()) return points;
  return points.unaryExpr([&map](double x) { return map.apply(x); });
}

int draw_row(const DomainSpec& spec, std::uint64_t seed, std::uint64_t row, Eigen::Ref<Vector> out) {
  StreamEngine engine(derive_seed(seed, {row}));
  const int label = engine.uniform01() < spec.mixing_pos ? 1 : -1;
  const Vector& mean = label > 0 ? spec.mean_pos : spec.mean_neg;
  if (spec.noise.is_gaussian()) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index j = 0; j < out.size(); ++j) out[j] = mean[j] + spec.sigma * normal(engine);
  } else {
    const double h = spec.noise.half_width();
    for (Eigen::Index j = 0; j < out.size(); ++j) out[j] = mean[j] + h * (2.0 * engine.uniform01() - 1.0);
  }
  apply_feature_map_inplace(spec.feature_map, out);
  return label;
}

Dataset sample_labeled(const DomainSpec& spec, std::int64_t n, std::uint64_t seed, int threads) {
  spec.validate();
  if (n < 1) throw PreconditionError("sample size must be >= 1");
  Dataset data;
  data.features.resize(n, spec.dim());
  std::vector<int> labels(static_cast<std::size_t>(n));
  constexpr std::int64_t kBlock = 256;
  const auto blocks = static_cast<std::size_t>((n + kBlock - 1) / kBlock);
  parallel_for(blocks, threads, [&](std::size_t b) {
    Vector row(spec.dim());
    const std::int64_t end = std::min<std::int64_t>(n, (static_cast<std::int64_t>(b) + 1) * kBlock);
    for (std::int64_t i = static_cast<std::int64_t>(b) * kBlock; i < end; ++i) {
      labels[static_cast<std::size_t>(i)] = draw_row(spec, seed, static_cast<std::uint64_t>(i), row);
      data.features.row(i) = row.transpose();
    }
  });
  data.labels = std::move(labels);
  data.seed = seed;
  data.spec_digest = spec.digest();
  return data;
}

Dataset sample_unlabeled(const DomainSpec& spec, std::int64_t n, std::uint64_t seed, int threads) {
  Dataset data = sample_labeled(spec, n, seed, threads);
  data.labels.reset();
  return data;
}

SeparationReport separation_stats(const DomainSpec& spec, std::int64_t mc_samples, std::uint64_t seed) {
  spec.validate();
  if (mc_samples < 2) throw PreconditionError("separation_stats needs mc_samples >= 2");
  SeparationReport report;
  report.mc_samples = mc_samples;
  if (spec.feature_map.is_identity()) {
    report.separation = (spec.mean_pos - spec.mean_neg).norm();
  } else {
    // Each component is drawn with its own stream family; mixing is irrelevant here.
    DomainSpec pos = spec;
    pos.mixing_pos = 1.0;
    DomainSpec neg = spec;
    neg.mixing_pos = 0.0;
    Vector sum_pos = Vector::Zero(spec.dim());
    Vector sum_neg = Vector::Zero(spec.dim());
    Vector row(spec.dim());
    const std::uint64_t seed_pos = derive_seed(seed, {1});
    const std::uint64_t seed_neg = derive_seed(seed, {2});
    for (std::int64_t i = 0; i < mc_samples; ++i) {
      draw_row(pos, seed_pos, static_cast<std::uint64_t>(i), row);
      sum_pos += row;
      draw_row(neg, seed_neg, static_cast<std::uint64_t>(i), row);
      sum_neg += row;
    }
    report.separation = ((sum_pos - sum_neg) / static_cast<double>(mc_samples)).norm();
  }
  report.alpha = report.separation / (2.0 * std::sqrt(static_cast<double>(spec.dim())));
  return report;
}

void write_dataset_csv(const Dataset& data, std::ostream& out) {
  const Eigen::Index d = data.dim();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (j) out << ',';
    out << 'f' << j;
  }
  if (data.has_labels()) out << (d ? ",label" : "label");
  out << '\n';
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (j) out << ',';
      out << format_double(data.features(i, j));
    }
    if (data.has_labels()) out << ',' << (*data.labels)[static_cast<std::size_t>(i)];
    out << '\n';
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_number(const std::string& text) {
  if (text.empty()) throw ParseError("empty numeric cell");
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size()) throw ParseError("malformed number '" + text + "'");
  return value;
}

}  // namespace

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing CSV header");
  const auto header = split_csv_line(line);
  const bool labeled = !header.empty() && header.back() == "label";
  const std::size_t d = header.size() - (labeled ? 1 : 0);
  for (std::size_t j = 0; j < d; ++j) {
    if (header[j] != "f" + std::to_string(j)) throw ParseError("unexpected header cell '" + header[j] + "'");
  }
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) throw ParseError("ragged CSV row");
    std::vector<double> values(d);
    for (std::size_t j = 0; j < d; ++j) values[j] = parse_number(cells[j]);
    if (labeled) {
      const double y = parse_number(cells.back());
      if (y != 1.0 && y != -1.0) throw ParseError("labels must be +1 or -1");
      labels.push_back(static_cast<int>(y));
    }
    rows.push_back(std::move(values));
  }
  Dataset data;
  data.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      data.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  if (labeled) data.labels = std::move(labels);
  return data;
}

}  // namespace ssr
