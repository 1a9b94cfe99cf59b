// fit.cpp
#include "mwm/fit.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

#include "mwm/errors.hpp"
#include "mwm/parallel.hpp"

namespace mwm {
namespace {

struct ModelContext {
  SpectralDensity sd;
  double temp_k;
  EnsembleSpec ens;
};

ModelContext apply_params(const FitProblem& p, const std::vector<double>& params) {
  if (params.size() != p.free_params.size())
    throw std::invalid_argument("fit: parameter vector size mismatch");

  SpectralDensity::Form form = p.base.form();
  double temp = p.temperature_k;
  EnsembleSpec ens = p.ensemble;

  for (std::size_t i = 0; i < p.free_params.size(); ++i) {
    const double v = params[i];
    switch (p.free_params[i].param) {
      case FitParam::Alpha:
        if (auto* o = std::get_if<Ohmic>(&form)) o->alpha = v;
        else if (auto* g = std::get_if<GaussianOhmic>(&form)) g->alpha = v;
        else throw ConfigError("fit: alpha is not a parameter of this reservoir");
        break;
      case FitParam::OmegaC:
        if (auto* o = std::get_if<Ohmic>(&form)) o->omega_c_mev = v;
        else if (auto* g = std::get_if<GaussianOhmic>(&form)) g->omega_c_mev = v;
        else throw ConfigError("fit: omega_c is not a parameter of this reservoir");
        break;
      case FitParam::AlphaP:
        if (auto* g = std::get_if<GaussianOhmic>(&form)) g->alpha_p = v;
        else throw ConfigError("fit: alpha_p requires a gaussian_ohmic reservoir");
        break;
      case FitParam::OmegaP:
        if (auto* g = std::get_if<GaussianOhmic>(&form)) g->omega_p_mev = v;
        else if (auto* s = std::get_if<SingleMode>(&form)) s->omega_p_mev = v;
        else throw ConfigError("fit: omega_p requires a gaussian_ohmic or single_mode reservoir");
        break;
      case FitParam::GammaP:
        if (auto* g = std::get_if<GaussianOhmic>(&form)) g->gamma_p_mev = v;
        else throw ConfigError("fit: gamma_p requires a gaussian_ohmic reservoir");
        break;
      case FitParam::DeltaB:
        ens.delta_b_mev = v;
        break;
      case FitParam::Temperature:
        temp = v;
        break;
    }
  }
  return {SpectralDensity(std::move(form)), temp, ens};
}

double dataset_weight(const FitDataset& ds) {
  if (ds.weight > 0.0) return ds.weight;
  double peak = 0.0;
  for (const auto& [x, y] : ds.samples) peak = std::max(peak, std::abs(y));
  return peak > 0.0 ? 1.0 / peak : 1.0;
}

double sweep_span(const FitProblem& p, const ModelContext& ctx) {
  const double t0 = p.sequence.pulse(0).t_ps;
  const double t2 = p.sequence.pulse(2).t_ps;
  double t_max = t2;
  for (const auto& ds : p.datasets)
    for (const auto& [x, y] : ds.samples)
      t_max = std::max(t_max, ds.kind == CurveKind::TimeResolved ? x : t2);
  const double delta = ctx.ens.delta_rad_ps();
  const double window = delta > 0.0 ? 8.0 / delta : 4.0;
  return std::max(t_max - t0, 2.0 * (t2 - t0)) + window;
}

} // namespace

std::string fit_param_name(FitParam p) {
  switch (p) {
    case FitParam::Alpha: return "alpha";
    case FitParam::OmegaC: return "omega_c_mev";
    case FitParam::AlphaP: return "alpha_p";
    case FitParam::OmegaP: return "omega_p_mev";
    case FitParam::GammaP: return "gamma_p_mev";
    case FitParam::DeltaB: return "delta_b_mev";
    case FitParam::Temperature: return "temperature_k";
  }
  return "?";
}

std::optional<FitParam> fit_param_from_name(const std::string& name) {
  if (name == "alpha") return FitParam::Alpha;
  if (name == "omega_c" || name == "omega_c_mev") return FitParam::OmegaC;
  if (name == "alpha_p") return FitParam::AlphaP;
  if (name == "omega_p" || name == "omega_p_mev") return FitParam::OmegaP;
  if (name == "gamma_p" || name == "gamma_p_mev") return FitParam::GammaP;
  if (name == "delta_b" || name == "delta_b_mev") return FitParam::DeltaB;
  if (name == "temperature" || name == "temperature_k") return FitParam::Temperature;
  return std::nullopt;
}

std::vector<double> residuals(const FitProblem& problem, const std::vector<double>& params) {
  if (problem.datasets.empty()) throw std::invalid_argument("fit: no datasets");
  const ModelContext ctx = apply_params(problem, params);
  const GammaGrid grid(ctx.sd, ctx.temp_k, sweep_span(problem, ctx), problem.quad);

  const double t0 = problem.sequence.pulse(0).t_ps;
  const double t2 = problem.sequence.pulse(2).t_ps;
  const std::array<double, 3> thetas = {problem.sequence.pulse(0).theta_rad,
                                        problem.sequence.pulse(1).theta_rad,
                                        problem.sequence.pulse(2).theta_rad};

  std::vector<double> out;
  std::size_t dataset_index = 0;
  for (const auto& ds : problem.datasets) {
    const double w = dataset_weight(ds);
    try {
      if (ds.kind == CurveKind::IntegratedVsT1) {
        // The four-wave exponent kernel telescopes over [t0, t]; its
        // integral is exactly independent of t1, so evaluate it once.
        double hoisted = std::numeric_limits<double>::quiet_NaN();
        for (const auto& [t1, y] : ds.samples) {
          double model;
          if (ds.order == WeakSignal::FourWave && !std::isnan(hoisted)) {
            model = hoisted;
          } else {
            const PulseSequence seq = PulseSequence::weak_three({t0, t1, t2}, thetas);
            model = integrated_intensity(seq, ctx.sd, ctx.temp_k, ctx.ens, ds.order, grid,
                                         0.0, problem.quad);
            if (ds.order == WeakSignal::FourWave) hoisted = model;
          }
          out.push_back(w * (model - y));
        }
      } else {
        for (const auto& [t, y] : ds.samples) {
          const double model = intensity_weak(problem.sequence, ctx.ens, ds.order, grid, t);
          out.push_back(w * (model - y));
        }
      }
    } catch (const NumericError& e) {
      throw NumericError("fit: forward model failed on dataset " +
                             std::to_string(dataset_index) + ": " + e.what(),
                         e.partial_result, e.error_bound);
    }
    ++dataset_index;
  }
  return out;
}

namespace {

double sum_sq(const std::vector<double>& r) {
  double s = 0.0;
  for (double v : r) s += v * v;
  return s;
}

// Central-difference Jacobian in unscaled coordinates.
Eigen::MatrixXd jacobian(const FitProblem& problem, const std::vector<double>& params,
                         double rel_step) {
  const std::size_t p = params.size();
  const std::size_t n = residuals(problem, params).size();
  Eigen::MatrixXd jac(n, p);
  for (std::size_t j = 0; j < p; ++j) {
    const double width = problem.free_params[j].hi - problem.free_params[j].lo;
    const double h = rel_step * width;
    std::vector<double> lo_params = params, hi_params = params;
    hi_params[j] += h;
    lo_params[j] -= h;
    const std::vector<double> r_hi = residuals(problem, hi_params);
    const std::vector<double> r_lo = residuals(problem, lo_params);
    for (std::size_t i = 0; i < n; ++i)
      jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          (r_hi[i] - r_lo[i]) / (2.0 * h);
  }
  return jac;
}

struct LocalFit {
  std::vector<double> x;
  double ssr = std::numeric_limits<double>::infinity();
  double initial_ssr = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

LocalFit run_lm(const FitProblem& problem, std::vector<double> x) {
  const std::size_t p = x.size();
  std::vector<double> width(p);
  for (std::size_t j = 0; j < p; ++j)
    width[j] = problem.free_params[j].hi - problem.free_params[j].lo;

  const auto clamp_to_box = [&](std::vector<double>& v) {
    for (std::size_t j = 0; j < p; ++j)
      v[j] = std::clamp(v[j], problem.free_params[j].lo, problem.free_params[j].hi);
  };
  clamp_to_box(x);

  LocalFit fit;
  std::vector<double> r = residuals(problem, x);
  double ssr = sum_sq(r);
  fit.initial_ssr = ssr;
  fit.trace.push_back(ssr);

  double lambda = 1e-3;
  for (int iter = 0; iter < problem.max_iterations; ++iter) {
    fit.iterations = iter + 1;
    const Eigen::MatrixXd jac = jacobian(problem, x, 1e-4);
    const Eigen::Index n = jac.rows();
    Eigen::VectorXd rv(n);
    for (Eigen::Index i = 0; i < n; ++i) rv(i) = r[static_cast<std::size_t>(i)];

    // scale columns by the box width so lambda acts uniformly
    Eigen::MatrixXd js = jac;
    for (std::size_t j = 0; j < p; ++j) js.col(static_cast<Eigen::Index>(j)) *= width[j];

    const Eigen::MatrixXd jtj = js.transpose() * js;
    const Eigen::VectorXd jtr = js.transpose() * rv;

    bool accepted = false;
    for (int tries = 0; tries < 12 && !accepted; ++tries) {
      Eigen::MatrixXd damped = jtj;
      for (std::size_t j = 0; j < p; ++j) {
        const Eigen::Index jj = static_cast<Eigen::Index>(j);
        damped(jj, jj) += lambda * std::max(jtj(jj, jj), 1e-12);
      }
      const Eigen::VectorXd step_scaled = damped.ldlt().solve(-jtr);

      std::vector<double> x_try = x;
      for (std::size_t j = 0; j < p; ++j)
        x_try[j] += step_scaled(static_cast<Eigen::Index>(j)) * width[j];
      clamp_to_box(x_try);

      double step_norm = 0.0;
      for (std::size_t j = 0; j < p; ++j) {
        const double dz = (x_try[j] - x[j]) / width[j];
        step_norm += dz * dz;
      }
      step_norm = std::sqrt(step_norm);

      const std::vector<double> r_try = residuals(problem, x_try);
      const double ssr_try = sum_sq(r_try);
      if (ssr_try <= ssr) {
        const double improvement = (ssr - ssr_try) / std::max(ssr, 1e-300);
        x = std::move(x_try);
        r = r_try;
        ssr = ssr_try;
        fit.trace.push_back(ssr);
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
        if (step_norm < 1e-10 || improvement < 1e-12) {
          fit.converged = true;
          fit.x = x;
          fit.ssr = ssr;
          return fit;
        }
      } else {
        lambda *= 4.0;
      }
    }
    if (!accepted) {
      // Damping saturated: no downhill direction left at this resolution.
      fit.converged = true;
      break;
    }
  }
  fit.x = x;
  fit.ssr = ssr;
  return fit;
}

// Halton low-discrepancy point, dimension j in {0..}, index i >= 1.
double halton(int index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

} // namespace

FitResult solve(const FitProblem& problem) {
  if (problem.free_params.empty())
    throw std::invalid_argument("fit: no free parameters");
  if (problem.datasets.empty()) throw std::invalid_argument("fit: no datasets");
  for (const auto& fp : problem.free_params) {
    if (!(fp.lo < fp.hi) || fp.init < fp.lo || fp.init > fp.hi)
      throw std::invalid_argument("fit: bounds must satisfy lo < hi with init inside");
    if (!std::isfinite(fp.lo) || !std::isfinite(fp.hi))
      throw std::invalid_argument("fit: bounds must be finite");
  }

  const std::size_t p = problem.free_params.size();
  const int starts = std::max(1, problem.starts);
  static const int kBases[] = {2, 3, 5, 7, 11, 13, 17, 19};

  std::vector<std::vector<double>> start_points;
  start_points.reserve(static_cast<std::size_t>(starts));
  for (int s = 0; s < starts; ++s) {
    std::vector<double> x(p);
    for (std::size_t j = 0; j < p; ++j) {
      const auto& fp = problem.free_params[j];
      x[j] = s == 0 ? fp.init
                    : fp.lo + (fp.hi - fp.lo) * halton(s, kBases[j % std::size(kBases)]);
    }
    start_points.push_back(std::move(x));
  }

  std::vector<LocalFit> fits(start_points.size());
  parallel_for(start_points.size(), problem.jobs,
               [&](std::size_t i) { fits[i] = run_lm(problem, start_points[i]); });

  int best = -1;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    if (!fits[i].converged) continue;
    if (best < 0 || fits[i].ssr < fits[best].ssr) best = static_cast<int>(i);
  }
  if (best < 0) {
    double incumbent = std::numeric_limits<double>::infinity();
    for (const auto& f : fits) incumbent = std::min(incumbent, f.ssr);
    throw NumericError("fit: no start converged", std::sqrt(incumbent), 0.0);
  }
  const LocalFit& winner = fits[static_cast<std::size_t>(best)];

  FitResult result;
  result.estimates = winner.x;
  result.residual_norm = std::sqrt(winner.ssr);
  result.initial_residual_norm = std::sqrt(fits[0].initial_ssr);
  result.iterations = winner.iterations;
  result.converged = true;
  result.objective_trace = winner.trace;

  // Uncertainties and conditioning from the Jacobian at the optimum.
  const Eigen::MatrixXd jac = jacobian(problem, winner.x, 1e-4);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
  const auto& sv = svd.singularValues();
  if (sv.size() > 0) {
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    result.ill_conditioned = !(smax > 0.0) || smin < 1e-10 * smax;
  }
  const Eigen::Index n = jac.rows();
  const double dof = static_cast<double>(n) - static_cast<double>(p);
  const double s2 = dof > 0 ? winner.ssr / dof : 0.0;
  result.uncertainties.assign(p, std::numeric_limits<double>::quiet_NaN());
  if (!result.ill_conditioned) {
    const Eigen::MatrixXd cov = (jac.transpose() * jac).inverse() * s2;
    for (std::size_t j = 0; j < p; ++j)
      result.uncertainties[j] = std::sqrt(std::max(0.0, cov(static_cast<Eigen::Index>(j),
                                                           static_cast<Eigen::Index>(j))));
  }
  return result;
}

double jacobian_check(const FitProblem& problem, const std::vector<double>& params,
                      double rel_step) {
  const Eigen::MatrixXd j1 = jacobian(problem, params, rel_step);
  const Eigen::MatrixXd j2 = jacobian(problem, params, 0.5 * rel_step);
  const double scale = std::max(j2.cwiseAbs().maxCoeff(), 1e-30);
  return (j1 - j2).cwiseAbs().maxCoeff() / scale;
}

} // namespace mwm
