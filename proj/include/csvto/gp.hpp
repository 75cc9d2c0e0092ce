#pragma once

#include "csvto/rng.hpp"
#include "csvto/types.hpp"

namespace csvto {

/// Noise-free GP posterior mean with an RBF kernel
/// k(a, b) = signal_var * exp(-||a-b||^2 / (2 l^2)) and a constant mean
/// function. Value, gradient and Hessian are analytic.
class GpPosteriorMean {
 public:
  GpPosteriorMean() = default;
  /// observations: n x d inputs, targets: n values. Throws when the kernel
  /// matrix stays singular after the jitter.
  GpPosteriorMean(Mat observations, const Vec& targets, double lengthscale,
                  double mean_const = 0.0, double signal_var = 1.0,
                  double jitter = 1e-8);

  double value(const Vec& query) const;
  Vec gradient(const Vec& query) const;
  Mat hessian(const Vec& query) const;

  /// Draws one function sample from the GP prior at the given inputs
  /// (Cholesky of the kernel matrix plus jitter).
  static Vec sample_prior(const Mat& inputs, double lengthscale, double mean_const,
                          double signal_var, Rng& rng, double jitter = 1e-8);

  const Mat& observations() const { return observations_; }

 private:
  Mat observations_;  // n x d
  Vec alpha_;         // (K + jitter I)^{-1} (y - mean)
  double lengthscale_sq_ = 1.0;
  double mean_ = 0.0;
  double signal_var_ = 1.0;
};

}  // namespace csvto
