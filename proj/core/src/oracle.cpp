// oracle.cpp
#include "mwm/oracle.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

#include "mwm/errors.hpp"
#include "mwm/pulses.hpp"
#include "mwm/units.hpp"

namespace mwm {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kThermalTail = 1e-10;
constexpr double kLeakTol = 1e-8;

using cplx = std::complex<double>;

double thermal_occupation(double omega_rad_ps, double temp_k) {
  if (temp_k == 0.0) return 0.0;
  const double x = kPhys.hbar * omega_rad_ps / (kPhys.kb * temp_k);
  return 1.0 / std::expm1(x);
}

int auto_cutoff(double n_bar, double displacement_scale) {
  // Thermal tail (n_bar/(1+n_bar))^N < kThermalTail, plus headroom for
  // compounded coherent displacements up to |beta| ~ 3 * per-interval bound.
  int n = 8;
  if (n_bar > 0.0) {
    const double r = n_bar / (1.0 + n_bar);
    n = std::max(n, static_cast<int>(std::ceil(std::log(kThermalTail) / std::log(r))) + 2);
  }
  const double beta = 3.0 * displacement_scale;
  n += static_cast<int>(std::ceil(beta * beta + 8.0 * beta)) + 8;
  return n;
}

} // namespace

ThermalOracle::ThermalOracle(double omega_p_rad_ps, double g_rad_ps, double temp_k, int n_cut)
    : omega_p_(omega_p_rad_ps), g_(g_rad_ps), temp_k_(temp_k) {
  if (!(omega_p_ > 0.0)) throw std::invalid_argument("ThermalOracle: omega_p must be > 0");
  n_bar_ = thermal_occupation(omega_p_, temp_k_);
  n_cut_ = n_cut > 0 ? n_cut : auto_cutoff(n_bar_, 2.0 * std::abs(g_) / omega_p_);

  const int nf = n_cut_ + 1;
  Eigen::VectorXd pops(nf);
  if (temp_k_ == 0.0) {
    pops.setZero();
    pops(0) = 1.0;
  } else {
    for (int n = 0; n < nf; ++n)
      pops(n) = std::pow(n_bar_, n) / std::pow(1.0 + n_bar_, n + 1);
    const double tail = 1.0 - pops.sum();
    if (pops(nf - 1) > kThermalTail || tail > std::sqrt(kThermalTail))
      throw CutoffError("ThermalOracle: n_cut too small for the thermal tail");
    pops /= pops.sum();  // renormalize the truncated state
  }

  rho_ = Eigen::MatrixXcd::Zero(2 * nf, 2 * nf);
  for (int n = 0; n < nf; ++n) rho_(n, n) = pops(n);  // qubit |down> block
}

Eigen::MatrixXcd ThermalOracle::displacement(cplx alpha) const {
  const int nf = n_cut_ + 1;
  Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(nf, nf);
  for (int n = 0; n < nf - 1; ++n) {
    const double root = std::sqrt(static_cast<double>(n + 1));
    gen(n + 1, n) = alpha * root;              // alpha B^dag
    gen(n, n + 1) = -std::conj(alpha) * root;  // -alpha* B
  }
  return gen.exp();
}

Eigen::MatrixXcd ThermalOracle::free_propagator(double t_start_ps, double dt_ps) const {
  const int nf = n_cut_ + 1;
  const cplx i1(0.0, 1.0);
  const cplx alpha = g_ / omega_p_ *
                     (std::exp(i1 * omega_p_ * t_start_ps) -
                      std::exp(i1 * omega_p_ * (t_start_ps + dt_ps)));
  const double theta = g_ * g_ / (omega_p_ * omega_p_) *
                       (omega_p_ * dt_ps - std::sin(omega_p_ * dt_ps));
  const Eigen::MatrixXcd d_plus = displacement(alpha);

  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(2 * nf, 2 * nf);
  // qubit-major blocks: |down> feels D(-alpha) = D(alpha)^dag, |up> D(+alpha)
  u.block(0, 0, nf, nf) = d_plus.adjoint();
  u.block(nf, nf, nf, nf) = d_plus;
  return std::exp(i1 * theta) * u;
}

void ThermalOracle::apply_pulse(double theta_rad, double phi_rad) {
  const int nf = n_cut_ + 1;
  const double c = std::cos(0.5 * theta_rad);
  const double s = std::sin(0.5 * theta_rad);
  const cplx e_plus = std::polar(1.0, phi_rad);

  // u|down> = c|down> + s e^{i phi}|up>;  u|up> = c|up> - s e^{-i phi}|down>
  Eigen::Matrix2cd q;
  q << c, -s * std::conj(e_plus), s * e_plus, c;

  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(2 * nf, 2 * nf);
  u.block(0, 0, nf, nf) = q(0, 0) * Eigen::MatrixXcd::Identity(nf, nf);
  u.block(0, nf, nf, nf) = q(0, 1) * Eigen::MatrixXcd::Identity(nf, nf);
  u.block(nf, 0, nf, nf) = q(1, 0) * Eigen::MatrixXcd::Identity(nf, nf);
  u.block(nf, nf, nf, nf) = q(1, 1) * Eigen::MatrixXcd::Identity(nf, nf);
  rho_ = u * rho_ * u.adjoint();
}

void ThermalOracle::evolve_free(double dt_ps) {
  if (dt_ps < 0.0) throw std::invalid_argument("evolve_free: dt must be >= 0");
  if (dt_ps == 0.0) return;
  const Eigen::MatrixXcd u = free_propagator(t_ps_, dt_ps);
  rho_ = u * rho_ * u.adjoint();
  t_ps_ += dt_ps;

  const int nf = n_cut_ + 1;
  const double top = std::real(rho_(nf - 1, nf - 1) + rho_(2 * nf - 1, 2 * nf - 1));
  if (top > kLeakTol)
    throw CutoffError("ThermalOracle: population leaked into the top Fock level; raise n_cut");
}

std::complex<double> ThermalOracle::polarization() const {
  const int nf = n_cut_ + 1;
  cplx p = 0.0;
  for (int n = 0; n < nf; ++n) p += rho_(n, nf + n);  // <down,n| rho |up,n>
  return p;
}

double ThermalOracle::trace_real() const { return std::real(rho_.trace()); }

double ThermalOracle::hermiticity_defect() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double ThermalOracle::qubit_purity() const {
  const int nf = n_cut_ + 1;
  cplx r00 = 0.0, r01 = 0.0, r11 = 0.0;
  for (int n = 0; n < nf; ++n) {
    r00 += rho_(n, n);
    r01 += rho_(n, nf + n);
    r11 += rho_(nf + n, nf + n);
  }
  return std::norm(r00) + std::norm(r11) + 2.0 * std::norm(r01);
}

PhaseCycleResult phase_cycled_amplitudes(double omega_p_rad_ps, double g_rad_ps, double temp_k,
                                         const std::array<double, 3>& times_ps, double t_ps,
                                         const std::array<double, 3>& thetas_rad, int n_cut) {
  if (!(times_ps[0] < times_ps[1] && times_ps[1] < times_ps[2] && times_ps[2] <= t_ps))
    throw std::invalid_argument("phase_cycled_amplitudes: need t0 < t1 < t2 <= t");

  constexpr int kSteps = 5;  // separates integer orders with coefficients in [-2, 2]
  const double step = 2.0 * kPi / kSteps;
  const cplx i1(0.0, 1.0);

  // polarization on the phase grid
  std::array<cplx, kSteps * kSteps * kSteps> pol;
  for (int a = 0; a < kSteps; ++a) {
    for (int b = 0; b < kSteps; ++b) {
      for (int c = 0; c < kSteps; ++c) {
        ThermalOracle oracle(omega_p_rad_ps, g_rad_ps, temp_k, n_cut);
        // The oracle clock starts at 0; shift so the first pulse lands at t0.
        // Interval phases are referenced to absolute times, so evolve the
        // pristine thermal state up to t0 first (a no-op on |down> x rho_th
        // apart from the global phase).
        oracle.evolve_free(times_ps[0]);
        const double phases[3] = {a * step, b * step, c * step};
        for (int m = 0; m < 3; ++m) {
          oracle.apply_pulse(thetas_rad[m], phases[m]);
          const double t_next = m < 2 ? times_ps[m + 1] : t_ps;
          oracle.evolve_free(t_next - times_ps[m]);
        }
        pol[(a * kSteps + b) * kSteps + c] = oracle.polarization();
      }
    }
  }

  PhaseCycleResult result;
  const auto& orders = enumerate_weak_orders();
  for (std::size_t k = 0; k < orders.size(); ++k) {
    const auto& n = orders[k].order.coeffs;  // (n0, n1, n2)
    cplx acc = 0.0;
    for (int a = 0; a < kSteps; ++a)
      for (int b = 0; b < kSteps; ++b)
        for (int c = 0; c < kSteps; ++c)
          acc += pol[(a * kSteps + b) * kSteps + c] *
                 std::exp(i1 * (n[0] * a * step + n[1] * b * step + n[2] * c * step));
    result.amplitudes[k] = acc / static_cast<double>(kSteps * kSteps * kSteps);
  }

  // Reconstruction probe at phases off the extraction grid: any weight
  // outside the nine orders shows up as a residual here.
  const std::array<std::array<double, 3>, 3> probes = {{
      {0.37, 1.21, 2.55}, {2.93, 0.11, 4.07}, {5.01, 3.33, 0.73}}};
  double worst = 0.0;
  for (const auto& probe : probes) {
    ThermalOracle oracle(omega_p_rad_ps, g_rad_ps, temp_k, n_cut);
    oracle.evolve_free(times_ps[0]);
    for (int m = 0; m < 3; ++m) {
      oracle.apply_pulse(thetas_rad[m], probe[m]);
      const double t_next = m < 2 ? times_ps[m + 1] : t_ps;
      oracle.evolve_free(t_next - times_ps[m]);
    }
    const cplx direct = oracle.polarization();
    cplx recon = 0.0;
    for (std::size_t k = 0; k < orders.size(); ++k) {
      const auto& n = orders[k].order.coeffs;
      recon += result.amplitudes[k] *
               std::exp(-i1 * (n[0] * probe[0] + n[1] * probe[1] + n[2] * probe[2]));
    }
    worst = std::max(worst, std::abs(direct - recon));
  }
  result.completeness_residual = worst;
  return result;
}

} // namespace mwm
