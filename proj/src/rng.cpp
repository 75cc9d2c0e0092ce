#include "csvto/rng.hpp"

#include <cmath>

namespace csvto {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Vec Rng::normal_vec(int n, double sigma) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = sigma * normal();
  return v;
}

Mat Rng::normal_mat(int rows, int cols, double sigma) {
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = sigma * normal();
  return m;
}

}  // namespace csvto
