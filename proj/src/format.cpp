#include "ssr/format.hpp"

#include <cmath>
#include <cstdio>

#include "ssr/errors.hpp"

namespace ssr {

std::string format_double(double value) {
  if (!std::isfinite(value)) throw PreconditionError("cannot format non-finite value");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string format_json_array(const Eigen::Ref<const Eigen::VectorXd>& values) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  out += ']';
  return out;
}

}  // namespace ssr
