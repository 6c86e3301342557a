#pragma once

// Aberth-Ehrlich simultaneous root finding for L-polynomials.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "motivic/errors.hpp"
#include "motivic/lpolynomial.hpp"
#include "motivic/tolerances.hpp"

namespace motivic::rhythm {

using Complex = std::complex<double>;

namespace detail {

struct Evaluation {
  Complex value;
  Complex derivative;
};

/// Horner for P and P' at once; coeffs little-endian.
inline Evaluation evaluate(std::span<const double> coeffs, Complex z) {
  Complex v = coeffs.back();
  Complex dv = 0.0;
  for (std::size_t i = coeffs.size() - 1; i-- > 0;) {
    dv = dv * z + v;
    v = v * z + coeffs[i];
  }
  return {v, dv};
}

} // namespace detail

/// All roots of the real polynomial sum coeffs[i] z^i. Initial guesses lie on a
/// slightly perturbed circle of the given radius; the iteration updates roots in
/// place (Gauss-Seidel) and stops when every correction is below
/// tol.root_update. Throws RootFinderDivergence after tol.max_iterations sweeps
/// or if an accepted root has Newton residual above tol.residual.
inline std::vector<Complex> aberth_roots(std::span<const double> coeffs, double radius,
                                         const Tolerances& tol = {}) {
  if (coeffs.empty() || coeffs.back() == 0.0) throw InvalidArgument("leading coefficient must be nonzero");
  const std::size_t n = coeffs.size() - 1;
  std::vector<Complex> z(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n) + 0.4;
    const double r = radius * (1.0 + 0.01 * static_cast<double>(j % 3));
    z[j] = std::polar(r, angle);
  }

  for (int iter = 0; iter < tol.max_iterations; ++iter) {
    double max_update = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const auto [value, derivative] = detail::evaluate(coeffs, z[j]);
      if (value == 0.0) continue;
      const Complex ratio = value / derivative;
      Complex repulsion = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i != j) repulsion += 1.0 / (z[j] - z[i]);
      }
      const Complex step = ratio / (1.0 - ratio * repulsion);
      z[j] -= step;
      max_update = std::max(max_update, std::abs(step));
    }
    if (max_update < tol.root_update) {
      for (const Complex& root : z) {
        const auto [value, derivative] = detail::evaluate(coeffs, root);
        const double residual = std::abs(value) / std::abs(derivative);
        if (!(residual < tol.residual)) {
          throw RootFinderDivergence("root residual " + std::to_string(residual) + " above tolerance");
        }
      }
      return z;
    }
  }
  throw RootFinderDivergence("Aberth iteration did not converge in " + std::to_string(tol.max_iterations) +
                             " iterations");
}

/// The 2g complex roots of an L-polynomial, in arbitrary order.
inline std::vector<Complex> find_roots(const zeta::LPolynomial& l, const Tolerances& tol = {}) {
  if (l.c.empty() || l.c.front() != 1) throw InvalidArgument("L-polynomial must have constant term 1");
  if (static_cast<int>(l.c.size()) != 2 * l.genus + 1) throw InvalidArgument("L-polynomial must have degree 2g");
  std::vector<double> coeffs(l.c.begin(), l.c.end());
  return aberth_roots(coeffs, 1.0 / std::sqrt(static_cast<double>(l.p)), tol);
}

} // namespace motivic::rhythm
