// fit.hpp — Reservoir parameter estimation from direction-resolved curves
//
// Stacked nonlinear least squares: all datasets are fit simultaneously
// against the forward model, per the idea that many diffraction directions
// constrain the reservoir better than any single curve.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mwm/signals.hpp"

namespace mwm {

enum class FitParam { Alpha, OmegaC, AlphaP, OmegaP, GammaP, DeltaB, Temperature };

std::string fit_param_name(FitParam p);
std::optional<FitParam> fit_param_from_name(const std::string& name);

enum class CurveKind { TimeResolved, IntegratedVsT1 };

struct FitDataset {
  WeakSignal order = WeakSignal::SixWave;
  CurveKind kind = CurveKind::IntegratedVsT1;
  std::vector<std::pair<double, double>> samples;  // (t or t1 [ps], intensity)
  double weight = 0.0;  // 0 = auto: 1 / max|y| over the dataset
};

struct FitProblem {
  std::vector<FitDataset> datasets;

  // Forward-model context: reservoir family and fixed values for everything
  // not being fit. The reservoir variant of `base` decides which parameters
  // are meaningful.
  SpectralDensity base = SpectralDensity::ohmic(0.1, 8.0);
  double temperature_k = 10.0;
  EnsembleSpec ensemble{};
  PulseSequence sequence = PulseSequence::weak_three(
      {0.0, 0.1, 0.2}, {M_PI / 2, M_PI / 2, M_PI / 2});
  QuadConfig quad{};

  struct FreeParam {
    FitParam param;
    double init = 0.0, lo = 0.0, hi = 0.0;
  };
  std::vector<FreeParam> free_params;

  int starts = 8;          // multistart count (first start = the initial guess)
  int max_iterations = 60;
  int jobs = 1;
  std::uint64_t seed = 0;  // reserved for callers that add noise; fitting itself is deterministic
};

struct FitResult {
  std::vector<double> estimates;       // per free param
  std::vector<double> uncertainties;   // 1-sigma from the residual Jacobian
  double residual_norm = 0.0;
  double initial_residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  bool ill_conditioned = false;  // Jacobian singular-value ratio < 1e-10
  std::vector<double> objective_trace;  // accepted-step objective values
};

/// Weighted (model - data) residuals stacked over all datasets, in dataset
/// order. `params` are the free-parameter values.
std::vector<double> residuals(const FitProblem& problem, const std::vector<double>& params);

/// Bounded, damped least squares with central-difference Jacobian and
/// low-discrepancy multistart. Throws NumericError (carrying the best
/// incumbent's residual norm) if no start converges.
FitResult solve(const FitProblem& problem);

/// Richardson check of the finite-difference Jacobian: largest relative
/// deviation between `rel_step` and `rel_step / 2`. A health diagnostic for
/// quadrature noise leaking into derivatives.
double jacobian_check(const FitProblem& problem, const std::vector<double>& params,
                      double rel_step = 1e-4);

} // namespace mwm
