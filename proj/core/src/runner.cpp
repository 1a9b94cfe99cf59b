// runner.cpp
#include "mwm/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "mwm/csv.hpp"
#include "mwm/errors.hpp"
#include "mwm/oracle.hpp"

namespace mwm {

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers =
      std::min<std::size_t>(n, jobs > 0 ? static_cast<std::size_t>(jobs) : hw);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

namespace {

namespace fs = std::filesystem;

constexpr double kPi = 3.14159265358979323846;

std::string out_path(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  return (fs::path(cfg.out_dir) / (cfg.prefix + "_" + name)).string();
}

std::map<std::string, std::string> base_meta(const RunConfig& cfg, double temp_k) {
  return {{"reservoir", cfg.reservoir.describe()},
          {"temperature_k", csv::format_double(temp_k)},
          {"delta_b_mev", csv::format_double(cfg.ensemble.delta_b_mev)}};
}

std::vector<double> time_grid(const RunConfig& cfg, double t_min) {
  std::vector<double> grid;
  for (double t = cfg.t_start_ps; t <= cfg.t_end_ps + 0.5 * cfg.t_step_ps; t += cfg.t_step_ps)
    if (t >= t_min - 1e-15) grid.push_back(std::max(t, t_min));
  return grid;
}

int severity(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const NumericError*>(&e)) return kExitNumeric;
  if (dynamic_cast<const CutoffError*>(&e)) return kExitNumeric;
  return kExitNumeric;
}

} // namespace

CommandResult cmd_gamma(const RunConfig& cfg, int jobs, std::ostream& log) {
  CommandResult result;
  try {
    struct Variant {
      std::string name;
      std::function<double(const GammaGrid&, double)> eval;
      double t_min;
    };
    std::vector<Variant> variants;

    if (cfg.pulse_mode == SequenceMode::PiTrain) {
      std::vector<int> ms = cfg.m_list.empty() ? std::vector<int>{cfg.m_pulses} : cfg.m_list;
      for (int m : ms) {
        const PulseSequence seq = cfg.make_pi_train(m);
        const std::vector<double> times = seq.times();
        variants.push_back({"pi_M" + std::to_string(m),
                            [times](const GammaGrid& g, double t) {
                              return g.gamma_pi(times, t);
                            },
                            seq.t_last()});
      }
    } else {
      const double t0 = cfg.t0_ps, t1 = cfg.t1_ps, t2 = cfg.t2_ps;
      const auto add = [&](const std::string& name, Coeffs3 c) {
        variants.push_back({name,
                            [=](const GammaGrid& g, double t) {
                              return g.gamma_weak(c, t0, t1, t2, t);
                            },
                            t2});
      };
      add("weak_fid", {-1, -1, -1});
      add("weak_4wm", {-1, +1, +1});
      add("weak_6wm", {-1, +1, -1});
    }

    const GammaGrid grid(cfg.reservoir, cfg.temperature_k,
                         cfg.t_end_ps - cfg.t_start_ps + 0.5, cfg.quad);
    for (const auto& variant : variants) {
      const std::vector<double> ts = time_grid(cfg, variant.t_min);
      std::vector<double> gs(ts.size());
      parallel_for(ts.size(), jobs, [&](std::size_t i) { gs[i] = variant.eval(grid, ts[i]); });
      csv::Table table;
      table.meta = base_meta(cfg, cfg.temperature_k);
      table.meta["variant"] = variant.name;
      table.columns = {"t_ps", "gamma"};
      for (std::size_t i = 0; i < ts.size(); ++i) table.rows.push_back({ts[i], gs[i]});
      const std::string path = out_path(cfg, "gamma_" + variant.name + ".csv");
      csv::write_table(path, table);
      result.files_written.push_back(path);
      log << "wrote " << path << " (" << ts.size() << " rows)\n";
    }
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    result.exit_code = severity(e);
  }
  return result;
}

CommandResult cmd_signal(const RunConfig& cfg, int jobs, std::ostream& log) {
  CommandResult result;
  try {
    if (cfg.pulse_mode == SequenceMode::PiTrain && cfg.m_list.empty()) {
      log << "signal: empty m_list, nothing to do\n";
      return result;
    }
    const GammaGrid grid(cfg.reservoir, cfg.temperature_k,
                         cfg.t_end_ps - cfg.t_start_ps + 0.5, cfg.quad);
    const double delta = cfg.ensemble.delta_rad_ps();
    const double sin0 = std::sin(cfg.theta0_over_pi * kPi);

    const auto write_curve = [&](const std::string& name, const std::vector<double>& ts,
                                 const std::vector<std::vector<double>>& cols,
                                 const std::vector<std::string>& col_names,
                                 std::map<std::string, std::string> extra_meta) {
      csv::Table table;
      table.meta = base_meta(cfg, cfg.temperature_k);
      for (auto& [k, v] : extra_meta) table.meta[k] = v;
      table.columns = col_names;
      for (std::size_t i = 0; i < ts.size(); ++i) {
        std::vector<double> row{ts[i]};
        for (const auto& col : cols) row.push_back(col[i]);
        table.rows.push_back(std::move(row));
      }
      const std::string path = out_path(cfg, name);
      csv::write_table(path, table);
      result.files_written.push_back(path);
      log << "wrote " << path << " (" << ts.size() << " rows)\n";
    };

    // free-induction reference in direction k0
    {
      const std::vector<double> ts = time_grid(cfg, cfg.t0_ps);
      std::vector<double> is(ts.size());
      const double fid_times[1] = {cfg.t0_ps};
      parallel_for(ts.size(), jobs, [&](std::size_t i) {
        const double g = grid.gamma_pi(fid_times, ts[i]);
        const double tau = ts[i] - cfg.t0_ps;
        is[i] = 0.25 * sin0 * sin0 * std::exp(-2.0 * g - tau * tau * delta * delta);
      });
      write_curve("signal_fid.csv", ts, {is}, {"t_ps", "intensity"}, {{"curve", "k0"}});
    }

    if (cfg.pulse_mode == SequenceMode::PiTrain) {
      for (int m : cfg.m_list) {
        const PulseSequence seq = cfg.make_pi_train(m);
        const std::vector<double> times = seq.times();
        const std::vector<double> ts = time_grid(cfg, seq.t_last());
        std::vector<double> is(ts.size());
        double alt = 0.0, sign = 1.0;
        for (int i = 0; i < m; ++i, sign = -sign) alt += sign * seq.interval(static_cast<std::size_t>(i));
        const double parity = (m % 2 == 0) ? 1.0 : -1.0;
        parallel_for(ts.size(), jobs, [&](std::size_t i) {
          const double g = grid.gamma_pi(times, ts[i]);
          const double tau = (ts[i] - seq.t_last()) + parity * alt;
          is[i] = 0.25 * sin0 * sin0 * std::exp(-2.0 * g - tau * tau * delta * delta);
        });
        write_curve("signal_M" + std::to_string(m) + ".csv", ts, {is}, {"t_ps", "intensity"},
                    {{"curve", phase_matching_direction(m).label()},
                     {"m_pulses", std::to_string(m)},
                     {"interval_ps", csv::format_double(cfg.interval_ps)}});
      }
    } else {
      std::vector<double> t1s = cfg.t1_list_ps.empty() ? std::vector<double>{cfg.t1_ps}
                                                       : cfg.t1_list_ps;
      int index = 0;
      for (double t1 : t1s) {
        const PulseSequence seq = PulseSequence::weak_three(
            {cfg.t0_ps, t1, cfg.t2_ps},
            {cfg.theta0_over_pi * kPi, cfg.theta1_over_pi * kPi, cfg.theta2_over_pi * kPi});
        const std::vector<double> ts = time_grid(cfg, cfg.t2_ps);
        std::vector<double> i4(ts.size()), i6(ts.size());
        parallel_for(ts.size(), jobs, [&](std::size_t i) {
          i4[i] = intensity_weak(seq, cfg.ensemble, WeakSignal::FourWave, grid, ts[i]);
          i6[i] = intensity_weak(seq, cfg.ensemble, WeakSignal::SixWave, grid, ts[i]);
        });
        std::ostringstream name;
        name << "signal_t1_" << index++ << ".csv";
        write_curve(name.str(), ts, {i4, i6}, {"t_ps", "i_4wm", "i_6wm"},
                    {{"t1_ps", csv::format_double(t1)},
                     {"t2_ps", csv::format_double(cfg.t2_ps)}});
      }
    }
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    result.exit_code = severity(e);
  }
  return result;
}

CommandResult cmd_sweep(const RunConfig& cfg, int jobs, std::ostream& log) {
  CommandResult result;
  try {
    if (cfg.pulse_mode != SequenceMode::WeakThreePulse)
      throw ConfigError("[pulses] mode: sweep requires weak_three_pulse");
    if (cfg.t1_list_ps.empty())
      throw ConfigError("[grid] t1_list_ps: sweep requires a t1 grid");

    const PulseSequence seq_template = cfg.make_sequence();
    const std::vector<double> temps =
        cfg.temps_k.empty() ? std::vector<double>{cfg.temperature_k} : cfg.temps_k;

    for (double temp : temps) {
      const auto [four, six] = sweep_t1(seq_template, cfg.reservoir, temp, cfg.ensemble,
                                        cfg.t1_list_ps, cfg.t2_ps, cfg.quad, jobs);
      csv::Table table;
      table.meta = base_meta(cfg, temp);
      table.meta["t2_ps"] = csv::format_double(cfg.t2_ps);
      table.meta["orders"] = four.order.label() + " ; " + six.order.label();
      table.columns = {"t1_ps", "int_4wm", "int_6wm"};
      for (std::size_t i = 0; i < four.samples.size(); ++i)
        table.rows.push_back(
            {four.samples[i].first, four.samples[i].second, six.samples[i].second});
      std::ostringstream name;
      name << "sweep_T" << csv::format_double(temp) << ".csv";
      const std::string path = out_path(cfg, name.str());
      csv::write_table(path, table);
      result.files_written.push_back(path);
      log << "wrote " << path << " (" << four.samples.size() << " rows)\n";
    }
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    result.exit_code = severity(e);
  }
  return result;
}

CommandResult cmd_oracle_check(const RunConfig& cfg, int jobs, std::ostream& log) {
  (void)jobs;
  CommandResult result;
  try {
    const SingleMode* sm = cfg.reservoir.single_mode();
    if (sm == nullptr)
      throw ConfigError("[reservoir] type: oracle-check requires a single_mode reservoir");

    const double omega_p = energy_to_angfreq(sm->omega_p_mev);
    const double g = energy_to_angfreq(std::sqrt(sm->g_sq_mev2));
    const std::array<double, 3> times = {cfg.t0_ps, cfg.t1_ps, cfg.t2_ps};
    const std::array<double, 3> thetas = {cfg.theta0_over_pi * kPi, cfg.theta1_over_pi * kPi,
                                          cfg.theta2_over_pi * kPi};
    const std::array<double, 2> obs_times = {cfg.t2_ps + (cfg.t2_ps - cfg.t1_ps),
                                             2.0 * cfg.t2_ps - cfg.t0_ps};

    std::ostringstream report;
    report << "oracle-check: reservoir " << cfg.reservoir.describe() << "\n";
    double worst = 0.0;

    for (double temp : cfg.oracle_temps_k) {
      for (double t_obs : obs_times) {
        const PhaseCycleResult cycle =
            phase_cycled_amplitudes(omega_p, g, temp, times, t_obs, thetas, cfg.oracle_n_cut);
        const PulseSequence seq = PulseSequence::weak_three(times, thetas);
        auto analytic = weak_polarization_terms(seq, cfg.reservoir, temp, EnsembleSpec{},
                                                t_obs, cfg.quad);
        if (cfg.oracle_corrupt_sign) analytic[1].second = std::conj(analytic[1].second);

        report << "T=" << temp << " K, t=" << t_obs
               << " ps (completeness residual " << cycle.completeness_residual << ")\n";
        for (std::size_t k = 0; k < analytic.size(); ++k) {
          const std::complex<double> a = analytic[k].second;
          const std::complex<double> o = cycle.amplitudes[k];
          const double rel = std::abs(o - a) / std::max(std::abs(a), 1e-12);
          worst = std::max(worst, rel);
          report << "  " << analytic[k].first.label() << ": |oracle-analytic|/|analytic| = "
                 << rel << "\n";
        }
      }
      if (temp == 0.0) {
        // pure-state recoherence: the qubit disentangles after a full
        // reservoir period of free evolution
        ThermalOracle oracle(omega_p, g, 0.0, cfg.oracle_n_cut);
        oracle.apply_pulse(0.5 * kPi, 0.0);
        oracle.evolve_free(2.0 * kPi / omega_p);
        report << "T=0 recoherence purity at one period: " << oracle.qubit_purity() << "\n";
        if (oracle.qubit_purity() < 1.0 - 1e-8)
          throw NumericError("oracle-check: recoherence purity breach", oracle.qubit_purity(),
                             1e-8);
      }
    }

    report << "max relative deviation: " << worst << " (tolerance " << cfg.oracle_tol << ")\n";
    const std::string path = out_path(cfg, "oracle_check.txt");
    std::ofstream os(path, std::ios::binary);
    os << report.str();
    result.files_written.push_back(path);
    log << report.str();
    if (worst > cfg.oracle_tol) {
      log << "oracle-check: BREACH\n";
      result.exit_code = kExitBreach;
    } else {
      log << "oracle-check: ok\n";
    }
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    result.exit_code = severity(e);
  }
  return result;
}

CommandResult cmd_fit(const RunConfig& cfg, int jobs, std::ostream& log) {
  CommandResult result;
  try {
    if (cfg.fit_params.empty())
      throw ConfigError("[fit] param1: at least one free parameter is required");
    if (cfg.fit_data_4wm.empty() && cfg.fit_data_6wm.empty())
      throw ConfigError("[fit] data_4wm/data_6wm: at least one dataset is required");

    FitProblem problem;
    problem.base = cfg.reservoir;
    problem.temperature_k = cfg.temperature_k;
    problem.ensemble = cfg.ensemble;
    problem.sequence = cfg.make_sequence();
    problem.quad = cfg.quad;
    problem.free_params = cfg.fit_params;
    problem.starts = cfg.fit_starts;
    problem.jobs = jobs;
    problem.seed = cfg.seed;

    const auto load = [&](const std::string& path, WeakSignal which) {
      if (path.empty()) return;
      const csv::Table t = csv::read_table(path);
      if (t.columns.size() < 2)
        throw ConfigError("fit data '" + path + "': expected (t1_ps, intensity) columns");
      FitDataset ds;
      ds.order = which;
      ds.kind = CurveKind::IntegratedVsT1;
      for (const auto& row : t.rows) ds.samples.emplace_back(row[0], row[1]);
      problem.datasets.push_back(std::move(ds));
    };
    load(cfg.fit_data_4wm, WeakSignal::FourWave);
    load(cfg.fit_data_6wm, WeakSignal::SixWave);

    const FitResult fr = solve(problem);

    csv::Table table;
    table.meta["converged"] = fr.converged ? "1" : "0";
    table.meta["ill_conditioned"] = fr.ill_conditioned ? "1" : "0";
    table.meta["residual_norm"] = csv::format_double(fr.residual_norm);
    table.meta["iterations"] = std::to_string(fr.iterations);
    table.columns = {"estimate", "sigma"};
    std::ostringstream text;
    text << "fit result (residual norm " << fr.residual_norm << ", "
         << fr.iterations << " iterations" << (fr.ill_conditioned ? ", ILL-CONDITIONED" : "")
         << ")\n";
    for (std::size_t j = 0; j < problem.free_params.size(); ++j) {
      table.meta["param" + std::to_string(j)] = fit_param_name(problem.free_params[j].param);
      table.rows.push_back({fr.estimates[j], fr.uncertainties[j]});
      text << "  " << fit_param_name(problem.free_params[j].param) << " = " << fr.estimates[j]
           << " +- " << fr.uncertainties[j] << "\n";
    }
    const std::string csv_path = out_path(cfg, "fit_result.csv");
    csv::write_table(csv_path, table);
    result.files_written.push_back(csv_path);

    // residual curves for inspection
    const std::vector<double> res = residuals(problem, fr.estimates);
    csv::Table rtab;
    rtab.columns = {"index", "residual"};
    for (std::size_t i = 0; i < res.size(); ++i)
      rtab.rows.push_back({static_cast<double>(i), res[i]});
    const std::string res_path = out_path(cfg, "fit_residuals.csv");
    csv::write_table(res_path, rtab);
    result.files_written.push_back(res_path);

    const std::string report_path = out_path(cfg, "fit_report.txt");
    std::ofstream os(report_path, std::ios::binary);
    os << text.str();
    result.files_written.push_back(report_path);
    log << text.str();
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    result.exit_code = severity(e);
  }
  return result;
}

CommandResult cmd_gnuplot(const RunConfig& cfg, std::ostream& log) {
  CommandResult result;
  try {
    std::ostringstream gp;
    gp << "set datafile separator ','\n"
       << "set datafile commentschars '#'\n"
       << "set xlabel 't (ps)'\n"
       << "set ylabel 'intensity'\n"
       << "set key outside\n";
    if (cfg.pulse_mode == SequenceMode::PiTrain) {
      gp << "plot '" << cfg.prefix << "_signal_fid.csv' using 1:2 with lines title 'k0'";
      for (int m : cfg.m_list)
        gp << ", \\\n     '" << cfg.prefix << "_signal_M" << m
           << ".csv' using 1:2 with lines title 'M=" << m << "'";
      gp << "\n";
    } else {
      gp << "set xlabel 't1 (ps)'\n"
         << "plot '" << cfg.prefix << "_sweep_T" << csv::format_double(cfg.temperature_k)
         << ".csv' using 1:2 with linespoints title '4wm', \\\n"
         << "     '" << cfg.prefix << "_sweep_T" << csv::format_double(cfg.temperature_k)
         << ".csv' using 1:3 with linespoints title '6wm'\n";
    }
    const std::string path = out_path(cfg, "plot.gp");
    std::ofstream os(path, std::ios::binary);
    os << gp.str();
    if (!os) throw ConfigError("gnuplot: write failed for '" + path + "'");
    result.files_written.push_back(path);
    log << "wrote " << path << "\n";
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    result.exit_code = severity(e);
  }
  return result;
}

} // namespace mwm
