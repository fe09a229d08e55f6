#pragma once

#include <string>

#include <Eigen/Dense>

namespace ssr {

/// Shortest printf form with 17 significant digits; round-trips any finite double.
std::string format_double(double value);

/// JSON array of 17-digit numbers.
std::string format_json_array(const Eigen::Ref<const Eigen::VectorXd>& values);

}  // namespace ssr
