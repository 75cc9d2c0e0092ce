#pragma once

#include "csvto/types.hpp"

#include <functional>

namespace csvto {

/// Central-difference Jacobian, column j = (fn(x + s e_j) - fn(x - s e_j)) / 2s.
/// Test oracle and documented fallback for problems without analytic
/// derivatives; the solver itself always consumes analytic providers.
/// Throws std::runtime_error if fn produces non-finite values near `point`.
Mat finite_diff_jacobian(const std::function<Vec(const Vec&)>& fn, const Vec& point,
                         double step);

/// Central-difference gradient of a scalar function.
Vec finite_diff_gradient(const std::function<double(const Vec&)>& fn, const Vec& point,
                         double step);

}  // namespace csvto
