// spectral.cpp
#include "mwm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "mwm/csv.hpp"
#include "mwm/errors.hpp"

namespace mwm {
namespace {

constexpr double kPi = 3.14159265358979323846;

void validate(const SpectralDensity::Form& form) {
  if (const auto* o = std::get_if<Ohmic>(&form)) {
    if (o->alpha < 0.0) throw ConfigError("ohmic: alpha must be >= 0");
    if (!(o->omega_c_mev > 0.0)) throw ConfigError("ohmic: omega_c_mev must be > 0");
  } else if (const auto* g = std::get_if<GaussianOhmic>(&form)) {
    if (g->alpha < 0.0 || g->alpha_p < 0.0)
      throw ConfigError("gaussian_ohmic: couplings must be >= 0");
    if (!(g->omega_c_mev > 0.0) || !(g->omega_p_mev > 0.0) || !(g->gamma_p_mev > 0.0))
      throw ConfigError("gaussian_ohmic: omega_c_mev, omega_p_mev, gamma_p_mev must be > 0");
  } else if (const auto* s = std::get_if<SingleMode>(&form)) {
    if (s->g_sq_mev2 < 0.0) throw ConfigError("single_mode: g_sq_mev2 must be >= 0");
    if (!(s->omega_p_mev > 0.0)) throw ConfigError("single_mode: omega_p_mev must be > 0");
  } else if (const auto* t = std::get_if<Tabulated>(&form)) {
    if (t->samples.empty()) throw ConfigError("tabulated: no samples");
    for (std::size_t i = 0; i < t->samples.size(); ++i) {
      if (t->samples[i].second < 0.0) throw ConfigError("tabulated: I must be >= 0");
      if (i > 0 && !(t->samples[i].first > t->samples[i - 1].first))
        throw ConfigError("tabulated: omega column must be strictly increasing");
    }
  }
}

double density_of(const SpectralDensity::Form& form, double omega) {
  if (omega < 0.0) throw std::domain_error("density: omega must be >= 0");
  if (const auto* o = std::get_if<Ohmic>(&form)) {
    return o->alpha * omega * std::exp(-omega / o->omega_c_mev);
  }
  if (const auto* g = std::get_if<GaussianOhmic>(&form)) {
    const double dz = (omega - g->omega_p_mev) / g->gamma_p_mev;
    return g->alpha * omega * std::exp(-omega / g->omega_c_mev) +
           g->alpha_p * omega * omega / (std::sqrt(kPi) * g->gamma_p_mev) * std::exp(-dz * dz);
  }
  if (std::holds_alternative<SingleMode>(form)) {
    throw std::invalid_argument(
        "density: a single-mode spectrum has no pointwise value; use the closed-form "
        "exponent paths");
  }
  const auto& samples = std::get<Tabulated>(form).samples;
  if (omega <= samples.front().first) {
    // zero extrapolation except exactly at the first node
    return omega == samples.front().first ? samples.front().second : 0.0;
  }
  if (omega >= samples.back().first) {
    return omega == samples.back().first ? samples.back().second : 0.0;
  }
  auto it = std::lower_bound(samples.begin(), samples.end(), omega,
                             [](const auto& s, double w) { return s.first < w; });
  const auto& [x1, y1] = *it;
  const auto& [x0, y0] = *(it - 1);
  return y0 + (y1 - y0) * (omega - x0) / (x1 - x0);
}

/// Golden-section maximum refinement on [lo, hi] around a coarse bracket.
double golden_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
  constexpr double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

} // namespace

SpectralDensity::SpectralDensity(Form form) : form_(std::move(form)) { validate(form_); }

SpectralDensity SpectralDensity::ohmic(double alpha, double omega_c_mev) {
  return SpectralDensity(Ohmic{alpha, omega_c_mev});
}

SpectralDensity SpectralDensity::gaussian_ohmic(double alpha, double omega_c_mev,
                                                double alpha_p, double omega_p_mev,
                                                double gamma_p_mev) {
  return SpectralDensity(GaussianOhmic{alpha, omega_c_mev, alpha_p, omega_p_mev, gamma_p_mev});
}

SpectralDensity SpectralDensity::single_mode(double g_sq_mev2, double omega_p_mev) {
  return SpectralDensity(SingleMode{g_sq_mev2, omega_p_mev});
}

SpectralDensity SpectralDensity::tabulated(std::vector<std::pair<double, double>> samples) {
  return SpectralDensity(Tabulated{std::move(samples)});
}

SpectralDensity SpectralDensity::tabulated_from_csv(const std::string& path) {
  const csv::Table table = csv::read_table(path);
  if (table.columns.size() != 2)
    throw ConfigError("tabulated spectrum '" + path + "': expected two columns (omega_mev, i_mev)");
  Tabulated tab;
  tab.samples.reserve(table.rows.size());
  for (const auto& row : table.rows) tab.samples.emplace_back(row[0], row[1]);
  return SpectralDensity(std::move(tab));
}

double SpectralDensity::density(double omega_mev) const { return density_of(form_, omega_mev); }

double SpectralDensity::eta(double omega_mev, double temp_k) const {
  if (!(omega_mev > 0.0)) throw std::domain_error("eta: omega must be > 0");
  return density(omega_mev) * coth_thermal(omega_mev, temp_k);
}

double SpectralDensity::frequency_scale_mev() const {
  if (const auto* o = std::get_if<Ohmic>(&form_)) return 40.0 * o->omega_c_mev;
  if (const auto* g = std::get_if<GaussianOhmic>(&form_))
    return std::max(40.0 * g->omega_c_mev, g->omega_p_mev + 8.0 * g->gamma_p_mev);
  if (const auto* s = std::get_if<SingleMode>(&form_)) return s->omega_p_mev;
  return std::get<Tabulated>(form_).samples.back().first;
}

double SpectralDensity::omega_th_mev(double temp_k) const {
  if (const auto* s = std::get_if<SingleMode>(&form_)) return s->omega_p_mev;

  double hi = 0.0;
  if (const auto* o = std::get_if<Ohmic>(&form_)) {
    hi = 10.0 * o->omega_c_mev;
  } else if (const auto* g = std::get_if<GaussianOhmic>(&form_)) {
    hi = 10.0 * std::max(g->omega_c_mev, g->omega_p_mev + 3.0 * g->gamma_p_mev);
  } else {
    hi = std::get<Tabulated>(form_).samples.back().first;
  }

  const auto f = [&](double w) { return eta(w, temp_k); };

  // Coarse scan to pick the dominant lobe, then golden-section refinement.
  // eta can dip near zero before an interior peak, so a plain unimodal
  // search over the whole range is not safe.
  constexpr int kScan = 4000;
  const double lo = hi * 1e-7;
  double best_w = lo, best = f(lo);
  for (int i = 1; i <= kScan; ++i) {
    const double w = lo + (hi - lo) * static_cast<double>(i) / kScan;
    const double v = f(w);
    if (v > best) {
      best = v;
      best_w = w;
    }
  }
  const double step = (hi - lo) / kScan;
  const double a = std::max(lo, best_w - step);
  const double b = std::min(hi, best_w + step);
  return golden_max(f, a, b, 1e-6);
}

double SpectralDensity::stabilization_interval_ps(double temp_k) const {
  const double omega_th = energy_to_angfreq(omega_th_mev(temp_k));
  return kPi / (2.0 * omega_th);
}

std::string SpectralDensity::describe() const {
  std::ostringstream os;
  if (const auto* o = std::get_if<Ohmic>(&form_)) {
    os << "ohmic alpha=" << o->alpha << " omega_c_mev=" << o->omega_c_mev;
  } else if (const auto* g = std::get_if<GaussianOhmic>(&form_)) {
    os << "gaussian_ohmic alpha=" << g->alpha << " omega_c_mev=" << g->omega_c_mev
       << " alpha_p=" << g->alpha_p << " omega_p_mev=" << g->omega_p_mev
       << " gamma_p_mev=" << g->gamma_p_mev;
  } else if (const auto* s = std::get_if<SingleMode>(&form_)) {
    os << "single_mode g_sq_mev2=" << s->g_sq_mev2 << " omega_p_mev=" << s->omega_p_mev;
  } else {
    os << "tabulated n=" << std::get<Tabulated>(form_).samples.size();
  }
  return os.str();
}

} // namespace mwm
