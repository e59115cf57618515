#include "flrw/report.hpp"

#include "flrw/density.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace flrw {

std::string format_num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file " + tmp.string());
    out << content;
    if (!out.good()) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

Json blowup_report_json(const BlowupReport& report) {
  Json j;
  j["verdict"] = verdict_name(report.verdict);
  if (report.t_blow) j["t_blow"] = *report.t_blow;
  else j["t_blow"] = nullptr;
  if (report.alpha_star) {
    Json arr = Json::array();
    for (int d = 0; d < report.alpha_star->size(); ++d) arr.push_back((*report.alpha_star)[d]);
    j["alpha_star"] = arr;
  } else {
    j["alpha_star"] = nullptr;
  }
  j["analytic_bound"] =
      std::isinf(report.analytic_bound) ? Json("inf") : Json(report.analytic_bound);
  j["epsilon_threshold"] = {{"name", report.threshold.name},
                            {"value", report.threshold.value}};
  j["min_det_observed"] = report.min_det_observed;
  j["certificate"] = report.certificate;
  Json trace = Json::array();
  for (const auto& [t, d] : report.det_trace) trace.push_back(Json::array({t, d}));
  j["trace"] = trace;
  return j;
}

std::vector<SweepRow> sweep_lifespan(const ExperimentConfig& cfg,
                                     const std::vector<double>& epsilons, int jobs) {
  if (epsilons.empty()) throw ConfigError("sweep: empty epsilon list");
  for (double e : epsilons)
    if (!(e > 0.0)) throw ConfigError("sweep: epsilons must be strictly positive");

  std::vector<SweepRow> rows(epsilons.size());
  parallel_for(static_cast<int>(epsilons.size()), jobs, [&](int i) {
    SweepRow& row = rows[i];
    row.epsilon = epsilons[i];
    try {
      InitialData data = build_initial_data(cfg.initial_data, epsilons[i]);
      CharacteristicFlow flow(build_scale_factor(cfg.scale_factor), std::move(data));
      row.regime = regime_name(flow.scale().classify().regime);
      BlowupSearch search = build_blowup_search(flow.dim(), cfg.sweep);
      BlowupReport report = find_blowup_time(flow, search);
      row.analytic_bound = report.analytic_bound;
      if (report.verdict == BlowupReport::Verdict::blowup) row.t_blow = report.t_blow;
    } catch (const std::exception& e) {
      row.status = std::string("error: ") + e.what();
    }
  });
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "epsilon,t_blow,analytic_bound,regime,status\n";
  for (const SweepRow& r : rows) {
    out << format_num(r.epsilon) << ',' << (r.t_blow ? format_num(*r.t_blow) : "none") << ','
        << format_num(r.analytic_bound) << ',' << r.regime << ',' << r.status << '\n';
  }
  return out.str();
}

namespace {

std::vector<double> num_list(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw ConfigError(std::string("config: '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : j.at(key)) out.push_back(v.get<double>());
  return out;
}

std::string summary_header(const CharacteristicFlow& flow) {
  std::ostringstream out;
  LifespanParams p = make_lifespan_params(flow);
  EpsilonThreshold th = epsilon_threshold(p);
  out << "regime: " << regime_name(p.regime) << "\n"
      << "epsilon: " << format_num(p.eps) << "\n"
      << "M0: " << format_num(p.M0) << "\n"
      << "threshold " << th.name << ": " << format_num(th.value) << "\n"
      << "analytic lower bound on the life span: " << format_num(lifespan_bound(p)) << "\n";
  return out.str();
}

}  // namespace

int run_blowup(const ExperimentConfig& cfg, const RunContext& ctx) {
  CharacteristicFlow flow(build_scale_factor(cfg.scale_factor),
                          build_initial_data(cfg.initial_data));
  BlowupSearch search = build_blowup_search(flow.dim(), cfg.blowup);
  search.jobs = ctx.jobs;
  BlowupReport report = find_blowup_time(flow, search);

  atomic_write(ctx.out_dir / "blowup_report.json", blowup_report_json(report).dump(2) + "\n");
  std::ostringstream summary;
  summary << summary_header(flow) << "verdict: " << verdict_name(report.verdict) << "\n";
  if (report.t_blow) summary << "t_blow: " << format_num(*report.t_blow) << "\n";
  if (!report.certificate.empty()) summary << "certificate: " << report.certificate << "\n";
  atomic_write(ctx.out_dir / "summary.txt", summary.str());
  return 0;
}

int run_sweep(const ExperimentConfig& cfg, const RunContext& ctx) {
  if (cfg.sweep.is_null()) throw ConfigError("sweep: missing 'sweep' block");
  std::vector<double> eps = num_list(cfg.sweep, "epsilons");
  std::vector<SweepRow> rows = sweep_lifespan(cfg, eps, ctx.jobs);
  atomic_write(ctx.out_dir / "sweep.csv", sweep_csv(rows));

  std::ostringstream summary;
  summary << "rows: " << rows.size() << "\n";
  bool all_blow = true;
  std::vector<double> log_inv_eps, log1p_t;
  for (const SweepRow& r : rows) {
    if (r.t_blow) {
      log_inv_eps.push_back(std::log(1.0 / r.epsilon));
      log1p_t.push_back(std::log1p(*r.t_blow));
    } else {
      all_blow = false;
    }
  }
  if (all_blow && log_inv_eps.size() >= 2) {
    LinearFit fit = linear_fit(log_inv_eps, log1p_t);
    summary << "scaling fit log(1+t_blow) vs log(1/eps): slope " << format_num(fit.slope)
            << " r2 " << format_num(fit.r2) << "\n";
  }
  atomic_write(ctx.out_dir / "summary.txt", summary.str());
  return 0;
}

int run_simulate(const ExperimentConfig& cfg, const RunContext& ctx) {
  if (cfg.simulate.is_null()) throw ConfigError("simulate: missing 'simulate' block");
  CharacteristicFlow flow(build_scale_factor(cfg.scale_factor),
                          build_initial_data(cfg.initial_data));
  const int n = flow.dim();
  std::vector<double> ts = num_list(cfg.simulate, "t_values");
  if (!cfg.simulate.contains("alphas") || !cfg.simulate.at("alphas").is_array())
    throw ConfigError("simulate: 'alphas' must be an array of label points");
  std::vector<Vec> alphas;
  for (const auto& row : cfg.simulate.at("alphas")) {
    Vec a(n);
    if (row.is_number() && n == 1) {
      a[0] = row.get<double>();
    } else {
      if (!row.is_array() || static_cast<int>(row.size()) != n)
        throw ConfigError("simulate: each label must have n components");
      for (int d = 0; d < n; ++d) a[d] = row.at(d).get<double>();
    }
    alphas.push_back(a);
  }

  std::ostringstream csv;
  csv << "t";
  for (int d = 0; d < n; ++d) csv << ",alpha" << d + 1;
  for (int d = 0; d < n; ++d) csv << ",x" << d + 1;
  csv << ",rho";
  for (int d = 0; d < n; ++d) csv << ",grad_rho" << d + 1;
  csv << "\n";
  for (const Vec& a : alphas) {
    DensityPoint dp(flow, a);
    for (double t : ts) {
      Vec x = dp.point().position(t);
      DensityEval de = dp.eval(t);
      csv << format_num(t);
      for (int d = 0; d < n; ++d) csv << ',' << format_num(a[d]);
      for (int d = 0; d < n; ++d) csv << ',' << format_num(x[d]);
      csv << ',' << format_num(de.rho);
      for (int d = 0; d < n; ++d) csv << ',' << format_num(de.grad_rho[d]);
      csv << '\n';
    }
  }
  atomic_write(ctx.out_dir / "simulate.csv", csv.str());
  return 0;
}

int run_oracle_compare(const ExperimentConfig& cfg, const RunContext& ctx) {
  CharacteristicFlow flow(build_scale_factor(cfg.scale_factor),
                          build_initial_data(cfg.initial_data));
  if (flow.dim() != 1) throw ConfigError("oracle-compare: one-dimensional data only");
  GridConfig gc = build_grid_config(cfg.oracle);
  GridSolver solver(build_scale_factor(cfg.scale_factor),
                    build_initial_data(cfg.initial_data), gc);
  GridSolver::RunResult run = solver.run();
  std::vector<CompareRow> rows = compare_with_flow(run, flow, solver);

  Json j;
  j["N"] = gc.N;
  j["steps"] = run.steps;
  j["monitor_time"] = run.monitor_time ? Json(*run.monitor_time) : Json(nullptr);
  Json arr = Json::array();
  for (const CompareRow& r : rows)
    arr.push_back({{"t", r.t},
                   {"linf_v", r.linf_v},
                   {"l1_v", r.l1_v},
                   {"linf_rho", r.linf_rho},
                   {"l1_rho", r.l1_rho},
                   {"excluded", r.excluded}});
  j["snapshots"] = arr;
  atomic_write(ctx.out_dir / "oracle_report.json", j.dump(2) + "\n");

  std::ostringstream csv;
  csv << "t,linf_v,l1_v,linf_rho,l1_rho,excluded\n";
  for (const CompareRow& r : rows)
    csv << format_num(r.t) << ',' << format_num(r.linf_v) << ',' << format_num(r.l1_v) << ','
        << format_num(r.linf_rho) << ',' << format_num(r.l1_rho) << ',' << r.excluded << '\n';
  atomic_write(ctx.out_dir / "oracle_errors.csv", csv.str());
  return 0;
}

int run_spherical(const ExperimentConfig& cfg, const RunContext& ctx) {
  if (cfg.spherical.is_null()) throw ConfigError("spherical: missing 'spherical' block");
  const int ambient = static_cast<int>(cfg.spherical.value("ambient_n", 3.0));
  InitialData data = build_initial_data(cfg.initial_data);
  RadialFlow rf(build_scale_factor(cfg.scale_factor), std::move(data), ambient);

  std::vector<double> alphas = num_list(cfg.spherical, "alphas");
  std::vector<double> ts = num_list(cfg.spherical, "t_values");
  std::ostringstream csv;
  csv << "t,alpha,r,vr,v_r,rho\n";
  for (double alpha : alphas) {
    RadialFlow::Point point = rf.at(alpha);
    for (double t : ts) {
      auto st = rf.radial_flow(t, alpha);
      auto d = point.derivs(t);
      csv << format_num(t) << ',' << format_num(alpha) << ',' << format_num(st.r) << ','
          << format_num(st.vr) << ',' << format_num(d.v_r) << ','
          << format_num(point.rho(t)) << '\n';
    }
  }
  atomic_write(ctx.out_dir / "spherical.csv", csv.str());

  if (cfg.spherical.contains("rate_fit_alpha")) {
    const double alpha = cfg.spherical.at("rate_fit_alpha").get<double>();
    RadialFlow::RateFit fit = rf.blowup_rate_fit(alpha);
    Json j;
    j["t2"] = fit.t2;
    j["exponents"] = {{"gradient", fit.gradient_exponent}, {"density", fit.density_exponent}};
    j["r_squared"] = {{"gradient", fit.r2_gradient}, {"density", fit.r2_density}};
    j["vr_limit"] = fit.vr_limit;
    atomic_write(ctx.out_dir / "rate_fit.json", j.dump(2) + "\n");
  }
  return 0;
}

int run_thresholds(const ExperimentConfig& cfg, const RunContext& ctx) {
  CharacteristicFlow flow(build_scale_factor(cfg.scale_factor),
                          build_initial_data(cfg.initial_data));
  LifespanParams p = make_lifespan_params(flow);
  EpsilonThreshold th = epsilon_threshold(p);
  const double bound = lifespan_bound(p);
  Json j;
  j["regime"] = regime_name(p.regime);
  j["epsilon"] = p.eps;
  j["M0"] = p.M0;
  j["threshold"] = {{"name", th.name}, {"value", th.value}, {"eta", th.eta}};
  j["analytic_bound"] = std::isinf(bound) ? Json("inf") : Json(bound);
  atomic_write(ctx.out_dir / "thresholds.json", j.dump(2) + "\n");
  atomic_write(ctx.out_dir / "summary.txt", summary_header(flow));
  return 0;
}

}  // namespace flrw
