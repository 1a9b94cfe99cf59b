// quadrature.hpp — Adaptive Gauss–Kronrod integration for oscillatory integrands
#pragma once

#include <functional>
#include <vector>

namespace mwm {

struct QuadConfig {
  double omega_max_mev = 0.0;  // integration cutoff; 0 = derive from the density
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_panels = 4000;
};

namespace quad {

/// Adaptive G7/K15 on [a, b]. `seed_width` > 0 pre-splits the range into
/// panels of roughly that width before refining, which keeps the error
/// estimate honest for integrands oscillating on a known scale.
/// Throws NumericError when max_panels is exhausted above tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_tol, int max_panels,
                          double seed_width = 0.0);

/// Nodes and weights of a composite Gauss–Legendre rule: `panels` panels of
/// equal width on [a, b], `order` points each (order in {8, 15}).
struct FixedRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
FixedRule composite_gauss(double a, double b, int panels, int order);

} // namespace quad
} // namespace mwm
