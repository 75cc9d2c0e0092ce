#include "csvto/kernels.hpp"

#include "csvto/finite_diff.hpp"
#include "csvto/geometry.hpp"
#include "csvto/rng.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace csvto;
using csvto::testing::QuadraticConstraints;
using csvto::testing::rel_error;

TEST_CASE("rbf basics") {
  Vec a(2), b(2);
  a << 1, 2;
  b = a;
  CHECK(rbf(a, b, 1.5) == 1.0);

  const double bandwidth = 0.7;
  b << 1 + std::sqrt(bandwidth * std::log(2.0)), 2;
  CHECK(rbf(a, b, bandwidth) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("rbf gradient matches finite differences") {
  Rng rng(2);
  const Vec a = rng.normal_vec(4);
  const Vec b = rng.normal_vec(4);
  const double bandwidth = 1.3;
  const Vec analytic = rbf_grad(a, b, bandwidth);
  const Vec fd = finite_diff_gradient(
      [&](const Vec& x) { return rbf(a, x, bandwidth); }, b, 1e-6);
  CHECK(rel_error(analytic, fd) < 1e-6);
}

TEST_CASE("median_bandwidth single pair") {
  Vec a(1), b(1);
  a << 0.0;
  b << 3.0;
  CHECK(median_bandwidth({a, b}) == doctest::Approx(9.0 / std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("median_bandwidth floors degenerate sets") {
  Vec a(2);
  a << 1, 1;
  CHECK(median_bandwidth({a, a, a}) == 1e-8);
}

TEST_CASE("median_bandwidth matches brute force over all pairs and ignores order") {
  Rng rng(4);
  std::vector<Vec> pts;
  for (int i = 0; i < 5; ++i) pts.push_back(rng.normal_vec(3));

  std::vector<double> dists;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) dists.push_back((pts[i] - pts[j]).norm());
  REQUIRE(dists.size() == 10);
  std::sort(dists.begin(), dists.end());
  const double med = 0.5 * (dists[4] + dists[5]);
  const double expected = med * med / std::log(5.0);
  CHECK(median_bandwidth(pts) == doctest::Approx(expected).epsilon(1e-12));

  std::vector<Vec> shuffled = {pts[3], pts[0], pts[4], pts[2], pts[1]};
  CHECK(median_bandwidth(shuffled) == doctest::Approx(expected).epsilon(1e-12));
}

namespace {

TrajectoryParticle random_trajectory(Rng& rng, int horizon, int dx, int du) {
  TrajectoryParticle p;
  p.states = rng.normal_mat(horizon, dx);
  p.controls = rng.normal_mat(horizon, du);
  return p;
}

}  // namespace

TEST_CASE("trajectory_kernel is 1 at coincidence and symmetric") {
  Rng rng(6);
  const TrajectoryParticle a = random_trajectory(rng, 6, 3, 2);
  const TrajectoryParticle b = random_trajectory(rng, 6, 3, 2);
  CHECK(trajectory_kernel(a, a, 2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(trajectory_kernel(a, b, 2) ==
        doctest::Approx(trajectory_kernel(b, a, 2)).epsilon(1e-12));
}

TEST_CASE("trajectory_kernel with T=2, W=1 reduces to one window rbf") {
  Rng rng(8);
  const TrajectoryParticle a = random_trajectory(rng, 2, 2, 1);
  const TrajectoryParticle b = random_trajectory(rng, 2, 2, 1);
  const TrajectoryKernel kernel({a, b}, 1);
  REQUIRE(kernel.num_windows() == 1);
  const Vec wa = kernel.window_vector(a, 0);
  const Vec wb = kernel.window_vector(b, 0);
  CHECK(kernel.value(a, b) ==
        doctest::Approx(rbf(wa, wb, kernel.bandwidths()[0])).epsilon(1e-12));
}

TEST_CASE("trajectory_kernel equals a naive double loop over windows") {
  Rng rng(10);
  const int horizon = 7, dx = 2, du = 1, window = 3;
  const TrajectoryParticle a = random_trajectory(rng, horizon, dx, du);
  const TrajectoryParticle b = random_trajectory(rng, horizon, dx, du);
  const TrajectoryKernel kernel({a, b}, window);

  // Naive oracle: windows t = 1..T-W, each stacking states x_t..x_{t+W} and
  // controls u_{t-1}..u_{t-1+W}.
  double acc = 0.0;
  for (int t = 1; t <= horizon - window; ++t) {
    Vec wa((window + 1) * (dx + du)), wb((window + 1) * (dx + du));
    int pos = 0;
    for (int r = 0; r < window + 1; ++r)
      for (int c = 0; c < dx; ++c) {
        wa[pos] = a.states(t - 1 + r, c);
        wb[pos] = b.states(t - 1 + r, c);
        ++pos;
      }
    for (int r = 0; r < window + 1; ++r)
      for (int c = 0; c < du; ++c) {
        wa[pos] = a.controls(t - 1 + r, c);
        wb[pos] = b.controls(t - 1 + r, c);
        ++pos;
      }
    acc += rbf(wa, wb, kernel.bandwidths()[t - 1]);
  }
  acc /= horizon - window;
  CHECK(kernel.value(a, b) == doctest::Approx(acc).epsilon(1e-12));
}

TEST_CASE("trajectory_kernel rejects windows spanning the whole horizon") {
  Rng rng(12);
  const TrajectoryParticle a = random_trajectory(rng, 3, 2, 1);
  CHECK_THROWS_AS(trajectory_kernel(a, a, 3), std::invalid_argument);
}

TEST_CASE("trajectory kernel gradient matches finite differences") {
  Rng rng(14);
  const int horizon = 6, dx = 2, du = 2, window = 2;
  const TrajectoryParticle a = random_trajectory(rng, horizon, dx, du);
  const TrajectoryParticle b = random_trajectory(rng, horizon, dx, du);
  const TrajectoryKernel kernel({a, b}, window);

  const Vec analytic = kernel.grad_second(a, b);
  const Vec fd = finite_diff_gradient(
      [&](const Vec& tau) {
        return kernel.value(a, TrajectoryParticle::unflatten(tau, horizon, dx, du));
      },
      b.flatten(), 1e-6);
  CHECK(rel_error(analytic, fd) < 1e-6);
}

TEST_CASE("tangent_kernel trivial cases") {
  const Mat eye = Mat::Identity(3, 3);
  CHECK(rel_error(tangent_kernel(0.7, eye, eye), 0.7 * eye) < 1e-14);

  Mat j(1, 3);
  j << 1, 1, 0;
  const Mat p = projection_matrix(j).P;
  CHECK(rel_error(tangent_kernel(1.0, p, p), p) < 1e-12);  // idempotence

  Mat pi(2, 2), pj(2, 2);
  pi << 1, 0, 0, 0;
  pj << 0, 0, 0, 1;
  CHECK(tangent_kernel(1.0, pi, pj).cwiseAbs().maxCoeff() == 0.0);  // annihilation
}

namespace {

struct KernelGradientFixture {
  QuadraticConstraints qc;
  Vec xi, xj;
  double bandwidth = 2.0;

  Mat kperp(const Vec& a, const Vec& b) const {
    const Mat pa = projection_matrix(qc.jacobian(a)).P;
    const Mat pb = projection_matrix(qc.jacobian(b)).P;
    return rbf(a, b, bandwidth) * pa * pb;
  }

  // Matrix-kernel finite-difference oracle:
  // grad_l = sum_m d[K_perp]_{l,m} / d xj_m.
  Vec fd_gradient(double step = 1e-6) const {
    const int n = static_cast<int>(xj.size());
    Vec grad = Vec::Zero(n);
    Vec probe = xj;
    for (int m = 0; m < n; ++m) {
      probe[m] = xj[m] + step;
      const Mat hi = kperp(xi, probe);
      probe[m] = xj[m] - step;
      const Mat lo = kperp(xi, probe);
      probe[m] = xj[m];
      grad += (hi.col(m) - lo.col(m)) / (2.0 * step);
    }
    return grad;
  }

  Vec analytic() const {
    const Mat pi = projection_matrix(qc.jacobian(xi)).P;
    const ProjectionData pj = projection_matrix(qc.jacobian(xj));
    const Vec s = projection_derivative_colsum(pj, qc.hessians());
    return tangent_kernel_gradient(rbf(xi, xj, bandwidth),
                                   rbf_grad(xi, xj, bandwidth), pi, pj.P, s);
  }
};

}  // namespace

TEST_CASE("tangent_kernel_gradient reduces to the projected rbf gradient for linear constraints") {
  Rng rng(16);
  QuadraticConstraints qc = QuadraticConstraints::random(rng, 2, 5);
  for (auto& q : qc.quad) q.setZero();

  KernelGradientFixture fx{qc, rng.normal_vec(5), rng.normal_vec(5)};
  const Vec analytic = fx.analytic();
  CHECK(rel_error(analytic, fx.fd_gradient()) < 1e-5);

  // dP = 0, shared projector: the gradient is P (P grad_k).
  const Mat p = projection_matrix(qc.jacobian(fx.xj)).P;
  const Mat pi = projection_matrix(qc.jacobian(fx.xi)).P;
  const Vec expected = pi * (p * rbf_grad(fx.xi, fx.xj, fx.bandwidth));
  CHECK(rel_error(analytic, expected) < 1e-12);
}

TEST_CASE("tangent_kernel_gradient at coincidence is the pure projector-derivative term") {
  Rng rng(18);
  const QuadraticConstraints qc = QuadraticConstraints::random(rng, 2, 5);
  KernelGradientFixture fx{qc, rng.normal_vec(5), Vec()};
  fx.xj = fx.xi;  // grad rbf(a, a) = 0
  const ProjectionData pj = projection_matrix(qc.jacobian(fx.xj));
  const Vec s = projection_derivative_colsum(pj, qc.hessians());
  const Vec expected = pj.P * s;  // k = 1, Pi = Pj
  CHECK(rel_error(fx.analytic(), expected) < 1e-12);
  CHECK(rel_error(fx.analytic(), fx.fd_gradient()) < 1e-4);
}

TEST_CASE("tangent_kernel_gradient matches finite differences with full quadratic constraints") {
  Rng rng(20);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 1 + trial % 3;
    const int n = 4 + trial % 4;
    KernelGradientFixture fx{QuadraticConstraints::random(rng, m, n), rng.normal_vec(n),
                             rng.normal_vec(n)};
    CHECK(rel_error(fx.analytic(), fx.fd_gradient()) < 1e-4);
  }
}

TEST_CASE("tangent_kernel_gradient full-tensor overload agrees with the contraction") {
  Rng rng(22);
  const QuadraticConstraints qc = QuadraticConstraints::random(rng, 2, 6);
  const Vec xi = rng.normal_vec(6);
  const Vec xj = rng.normal_vec(6);
  const Mat pi = projection_matrix(qc.jacobian(xi)).P;
  const ProjectionData pj = projection_matrix(qc.jacobian(xj));

  const double k = rbf(xi, xj, 2.0);
  const Vec gk = rbf_grad(xi, xj, 2.0);
  const Vec via_colsum = tangent_kernel_gradient(
      k, gk, pi, pj.P, projection_derivative_colsum(pj, qc.hessians()));
  const Vec via_tensor = tangent_kernel_gradient(
      k, gk, pi, pj.P, projection_derivative(pj.jacobian, qc.hessians()));
  CHECK(rel_error(via_colsum, via_tensor) < 1e-10);
}
