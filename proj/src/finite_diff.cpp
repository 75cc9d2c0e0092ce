#include "csvto/finite_diff.hpp"

#include <stdexcept>

namespace csvto {

Mat finite_diff_jacobian(const std::function<Vec(const Vec&)>& fn, const Vec& point,
                         double step) {
  if (step <= 0.0) throw std::invalid_argument("finite_diff_jacobian: step must be > 0");
  Vec x = point;
  Mat jac;
  for (int j = 0; j < point.size(); ++j) {
    x[j] = point[j] + step;
    const Vec hi = fn(x);
    x[j] = point[j] - step;
    const Vec lo = fn(x);
    x[j] = point[j];
    if (!hi.allFinite() || !lo.allFinite())
      throw std::runtime_error("finite_diff_jacobian: non-finite evaluation at column " +
                               std::to_string(j));
    if (j == 0) jac.resize(hi.size(), point.size());
    jac.col(j) = (hi - lo) / (2.0 * step);
  }
  return jac;
}

Vec finite_diff_gradient(const std::function<double(const Vec&)>& fn, const Vec& point,
                         double step) {
  auto wrap = [&fn](const Vec& x) { return Vec::Constant(1, fn(x)); };
  return finite_diff_jacobian(wrap, point, step).row(0);
}

}  // namespace csvto
