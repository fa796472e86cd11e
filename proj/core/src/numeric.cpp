#include "ulp/numeric.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "ulp/error.hpp"

namespace ulp {

namespace {

// M. Giles, "Approximating the erfinv function" (single-precision branch);
// used only as the starting point for the refinement below.
double erf_inv_seed(double x) {
  double w = -std::log((1.0 - x) * (1.0 + x));
  double p = 0.0;
  if (w < 5.0) {
    w -= 2.5;
    p = 2.81022636e-08;
    p = 3.43273939e-07 + p * w;
    p = -3.5233877e-06 + p * w;
    p = -4.39150654e-06 + p * w;
    p = 0.00021858087 + p * w;
    p = -0.00125372503 + p * w;
    p = -0.00417768164 + p * w;
    p = 0.246640727 + p * w;
    p = 1.50140941 + p * w;
  } else {
    w = std::sqrt(w) - 3.0;
    p = -0.000200214257;
    p = 0.000100950558 + p * w;
    p = 0.00134934322 + p * w;
    p = -0.00367342844 + p * w;
    p = 0.00573950773 + p * w;
    p = -0.0076224613 + p * w;
    p = 0.00943887047 + p * w;
    p = 1.00167406 + p * w;
    p = 2.83297682 + p * w;
  }
  return p * x;
}

}  // namespace

double erf_inv(double y) {
  if (!(y > -1.0 && y < 1.0)) {
    throw Error(ErrorKind::ParameterDomain, fmt::format("erf_inv requires |y| < 1, got {}", y));
  }
  if (y == 0.0) return 0.0;
  double x = erf_inv_seed(y);
  // Halley steps on f(x) = erf(x) - y; f' = 2/sqrt(pi) e^{-x^2}, f'' = -2x f'.
  for (int i = 0; i < 3; ++i) {
    const double f = std::erf(x) - y;
    if (f == 0.0) break;
    const double fp = 2.0 * std::numbers::inv_sqrtpi * std::exp(-x * x);
    if (fp == 0.0) break;
    x -= f / (fp + x * f);
  }
  return x;
}

}  // namespace ulp
