#include "csop/cli/run.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "csop/antilinear.hpp"
#include "csop/complex_scaling.hpp"
#include "csop/decay_bounds.hpp"
#include "csop/error.hpp"
#include "csop/kronig_penney.hpp"
#include "csop/schrodinger.hpp"
#include "csop/sweeps.hpp"

namespace csop::cli {

namespace {

std::string num(double v) { return format_number(v); }
std::string num(cplx z) { return format_number(z.real()) + (z.imag() < 0 ? "" : "+") + format_number(z.imag()) + "i"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_failure, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> read_numeric_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream cells(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(cells, cell, ',')) {
      const auto v = parse_real(cell);
      if (!v) {
        numeric = false;
        break;
      }
      row.push_back(*v);
    }
    if (!numeric) {
      if (rows.empty() && line_no == 1) continue;  // header
      throw Error(Errc::io_failure, path + ":" + std::to_string(line_no) + ": non-numeric cell");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix read_complex_matrix(const std::string& path) {
  const auto rows = read_numeric_csv(path);
  const Index n = static_cast<Index>(rows.size());
  if (n == 0) throw Error(Errc::io_failure, path + ": empty matrix");
  CMatrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    if (static_cast<Index>(rows[i].size()) != 2 * n)
      throw Error(Errc::io_failure, path + ": row " + std::to_string(i + 1) + " has " +
                                        std::to_string(rows[i].size()) + " values, expected " +
                                        std::to_string(2 * n) + " (interleaved real,imag)");
    for (Index j = 0; j < n; ++j) m(i, j) = cplx(rows[i][2 * j], rows[i][2 * j + 1]);
  }
  return m;
}

std::vector<double> linspace(double lo, double hi, long long count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) out[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
  return out;
}

void add_vector_columns(ResultTable& t, Index n) {
  for (Index i = 0; i < n; ++i) {
    t.columns.push_back("u" + std::to_string(i) + "_re");
    t.columns.push_back("u" + std::to_string(i) + "_im");
  }
}

void push_vector(std::vector<double>& row, const CVector& u) {
  for (Index i = 0; i < u.size(); ++i) {
    row.push_back(u(i).real());
    row.push_back(u(i).imag());
  }
}

ResultTable run_takagi(const RunConfig& cfg) {
  const CMatrix raw = read_complex_matrix(cfg.text("matrix"));
  const double scale = std::max(raw.cwiseAbs().maxCoeff(), kNormFloor);
  if ((raw - raw.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw Error(Errc::not_c_symmetric, "matrix is not complex symmetric");
  const ComplexSymmetricMatrix a(raw);
  const TakagiFactorization tk = takagi(a);
  const Index n = a.dim();
  ResultTable t;
  t.columns = {"k", "sigma"};
  add_vector_columns(t, n);
  for (Index k = 0; k < n; ++k) {
    std::vector<double> row{static_cast<double>(k), tk.sigma[k]};
    push_vector(row, tk.u.col(k));
    t.add_row(std::move(row));
  }
  const RVector s = Eigen::Map<const RVector>(tk.sigma.data(), n);
  const CMatrix rebuilt = tk.u * s.asDiagonal() * tk.u.transpose();
  t.set_meta("reconstruction_error", num((rebuilt - a.matrix()).norm()));
  t.set_meta("unitarity_error", num((tk.u.adjoint() * tk.u - CMatrix::Identity(n, n)).norm()));
  t.set_meta("degenerate_clusters", std::to_string(tk.degenerate_clusters));
  return t;
}

ResultTable run_antilinear(const RunConfig& cfg) {
  const CMatrix m = read_complex_matrix(cfg.text("matrix"));
  const Conjugation conj =
      cfg.has("conjugation") ? Conjugation(read_complex_matrix(cfg.text("conjugation"))) : Conjugation::entrywise(m.rows());
  const cplx z = cfg.complex("z");
  const AntilinearSpectrum spec = antilinear_spectrum(m, conj, z);
  const Index n = m.rows();
  ResultTable t;
  t.columns = {"k", "lambda"};
  add_vector_columns(t, n);
  CMatrix shifted = m;
  shifted.diagonal().array() -= z;
  double residual = 0.0;
  for (Index k = 0; k < n; ++k) {
    const CVector u = spec.vectors.col(k);
    residual = std::max(residual, (shifted * u - spec.lambdas[k] * conj.apply(u)).norm());
    std::vector<double> row{static_cast<double>(k), spec.lambdas[k]};
    push_vector(row, u);
    t.add_row(std::move(row));
  }
  t.set_meta("max_residual", num(residual));
  t.set_meta("degenerate_clusters", std::to_string(spec.degenerate_clusters));
  t.set_meta("resolvent_norm", spec.lambdas.front() > 0 ? num(1.0 / spec.lambdas.front()) : "inf");
  return t;
}

ResultTable run_decay_bound(const RunConfig& cfg) {
  const GapSpectrum gap = GapSpectrum::make(cfg.real("e_bottom"), cfg.real("e_minus"), cfg.real("e_plus"));
  const GapOnlyBound gb = qbar_and_ebar(gap);
  std::vector<double> energies;
  if (cfg.has("e")) {
    energies.push_back(cfg.real("e"));
  } else {
    const long long points = cfg.integer("points");
    for (long long k = 0; k < points; ++k)
      energies.push_back(gap.e_minus + gap.gap() * static_cast<double>(k + 1) / static_cast<double>(points + 1));
  }
  const auto curve = critical_q_curve(gap, energies);
  ResultTable t;
  t.columns = {"E", "q_c", "F", "C", "valid"};
  const double q = cfg.real("q");
  for (const auto& pt : curve) {
    const BoundResult r = evaluate_bound({gap, pt.e, q, cfg.real("eps"), static_cast<int>(cfg.integer("d"))});
    t.add_row({pt.e, pt.q_c, r.f_value, r.c_value, r.valid ? 1.0 : 0.0});
  }
  t.set_meta("q_bar", num(gb.q_bar));
  t.set_meta("E_bar", num(gb.e_bar));
  t.set_meta("E_bar_in_gap", gb.e_bar_in_gap ? "true" : "false");
  t.set_meta("bisection_rel_tol", "1e-13");
  return t;
}

ResultTable run_kernel_scan(const RunConfig& cfg) {
  const double length = cfg.real("length");
  const Grid1D grid = Grid1D::make(length, cfg.integer("points"));
  FindGapOptions gap_opts;
  PotentialSpec pot = PotentialSpec::sampled({});
  if (cfg.has("potential")) {
    const auto rows = read_numeric_csv(cfg.text("potential"));
    std::vector<double> xs, vs;
    for (const auto& r : rows) {
      if (r.size() != 2) throw Error(Errc::io_failure, "potential CSV needs two columns (x, v)");
      xs.push_back(r[0]);
      vs.push_back(r[1]);
    }
    pot = resample_potential(grid, xs, vs);
  } else {
    const double cells = std::round(length);
    if (std::abs(cells - length) > 1e-12)
      throw Error(Errc::precondition_violated, "a unit-lattice comb needs an integer length");
    pot = PotentialSpec::unit_comb(static_cast<Index>(cells), cfg.real("v0"));
    gap_opts.lower_band_count = static_cast<Index>(cells);
  }
  if (cfg.has("lower_band_count")) gap_opts.lower_band_count = cfg.integer("lower_band_count");
  const DiscreteHamiltonian h = build_hamiltonian(grid, pot);
  const Eigensystem eig = eigensystem(h);
  const double eps = cfg.real("eps");

  ResultTable t;
  if (cfg.text("mode") == "projector") {
    ProjectorDecayOptions opts;
    opts.gap = gap_opts;
    opts.eps = eps;
    opts.anchor = cfg.real("anchor_first");
    opts.prefactor_exponent = cfg.real("prefactor_exponent");
    const ProjectorDecay pd = projector_decay(h, eig, opts);
    t.columns = {"x1", "x2", "separation", "projector"};
    for (const auto& s : pd.samples) t.add_row({s.x1, s.x2, s.separation, s.value});
    t.set_meta("E_minus", num(pd.gap.e_minus));
    t.set_meta("E_plus", num(pd.gap.e_plus));
    t.set_meta("filled_states", std::to_string(pd.filled_states));
    t.set_meta("q_fit", num(pd.q_fit));
    t.set_meta("q_bar", num(qbar_and_ebar(pd.gap).q_bar));
    t.set_meta("fit_window", "[0.2, 0.6] L");
    return t;
  }

  const GapSpectrum gap = find_gap(eig, gap_opts);
  const GapOnlyBound gb = qbar_and_ebar(gap);
  const double e = cfg.has("e") ? cfg.real("e") : (gb.e_bar_in_gap ? gb.e_bar : 0.5 * (gap.e_minus + gap.e_plus));
  const AveragedResolvent g(h, e);
  std::vector<double> anchors;
  for (double x = cfg.real("anchor_first"); x <= cfg.real("anchor_last") + 1e-12; x += cfg.real("anchor_step"))
    anchors.push_back(x);
  const auto samples = resolvent_kernel_samples(g, anchors, eps);
  const double qc = critical_q(gap, e);
  t.columns = {"x1", "x2", "separation", "abs_kernel", "q", "bound", "margin"};
  bool all_pass = true;
  for (double f : cfg.reals("q_fractions")) {
    const BoundInputs in{gap, e, f * qc, eps, 1};
    const Certificate cert = certify_bound(samples, in);
    all_pass = all_pass && cert.passed;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const auto& s = samples[i];
      t.add_row({s.x1, s.x2, s.separation, s.value, in.q, cert.c_value * std::exp(-in.q * s.separation),
                 cert.margins[i]});
    }
    std::ostringstream key;
    key << "worst_margin_" << f << "qc";
    t.set_meta(key.str(), num(cert.worst_margin));
  }
  t.set_meta("E_minus", num(gap.e_minus));
  t.set_meta("E_plus", num(gap.e_plus));
  t.set_meta("E", num(e));
  t.set_meta("q_c", num(qc));
  t.set_meta("certificate", all_pass ? "pass" : "fail");
  return t;
}

ResultTable run_kp_fig1(const RunConfig& cfg) {
  const std::vector<double> v0s =
      cfg.has("v0_values") ? cfg.reals("v0_values")
                           : kp::fig1_default_v0_values(static_cast<int>(cfg.integer("count")), cfg.real("ratio_lo"),
                                                        cfg.real("ratio_hi"));
  const auto rows = kp::fig1_sweep(v0s);
  ResultTable t;
  t.columns = {"v0", "G", "W", "G_over_W", "q_exact", "q_bound", "rel_diff"};
  for (const auto& r : rows) t.add_row({r.v0, r.gap, r.width, r.gap_over_width, r.q_exact, r.q_bound, r.rel_diff});
  t.set_meta("bisection_rel_tol", "1e-14");
  return t;
}

ResultTable run_resonance(const RunConfig& cfg) {
  const cs::DilationPotential v = cs::DilationPotential::alpha_x2_exp(cfg.real("alpha"));
  const Grid1D grid = Grid1D::make(cfg.real("length"), cfg.integer("points"));
  const cs::ScalingProblem p{v, std::nullopt, grid};
  const cplx theta = cfg.complex("theta");
  cs::ScanOptions opts;
  opts.resonance.delta_theta = cfg.complex("delta_theta");
  opts.seed = static_cast<std::uint64_t>(cfg.integer("seed"));
  if (cfg.has("a")) opts.constants = cs::RelativeBound{cfg.real("a"), cfg.real("b"), 0, 0};
  const cs::Resonance res = cs::locate_resonance(p, theta, 0.0, opts.resonance);
  const cplx probe = cfg.has("z_probe") ? cfg.complex("z_probe") : res.z + 0.01;
  const std::vector<double> gammas = cfg.reals("gammas");
  const cs::PerturbationScan scan = cs::perturbation_scan(p, theta, gammas, probe, opts);

  ResultTable t;
  t.columns = {"gamma", "re_z", "im_z", "norm", "bound", "measured_wr", "psi0_residual", "psi0_bound"};
  for (const auto& r : scan.rows)
    t.add_row({r.gamma, r.z_res.real(), r.z_res.imag(), r.norm, r.bound, r.measured_wr, r.psi0_residual, r.psi0_bound});
  t.set_meta("z_res", num(res.z));
  t.set_meta("z_res_residual", num(res.residual));
  t.set_meta("resonance_candidates", std::to_string(res.candidates));
  t.set_meta("z_probe", num(probe));
  t.set_meta("ray_distance", num(cs::ray_distance(probe, theta).clamped));
  t.set_meta("relative_bound_a", num(scan.constants.a));
  t.set_meta("relative_bound_b", num(scan.constants.b));
  t.set_meta("relative_bound_source", opts.constants ? "config" : "least-squares fit");
  t.set_meta("relative_bound_samples", std::to_string(scan.constants.samples));
  t.set_meta("rqi_tol", num(opts.resonance.tol));
  if (cfg.has("points_coarse")) {
    const auto ext = cs::extrapolated_resonance(v, grid.length, cfg.integer("points_coarse"), grid.points, theta,
                                                opts.resonance);
    t.set_meta("z_res_coarse", num(ext.coarse));
    t.set_meta("z_res_extrapolated", num(ext.extrapolated));
  }
  return t;
}

ResultTable run_resolvent_map(const RunConfig& cfg) {
  const cs::DilationPotential v = cs::DilationPotential::alpha_x2_exp(cfg.real("alpha"));
  const Grid1D grid = Grid1D::make(cfg.real("length"), cfg.integer("points"));
  const cs::ScaledHamiltonian h = cs::build_scaled({v, std::nullopt, grid}, cfg.complex("theta"), cfg.real("gamma"));
  const auto re = linspace(cfg.real("re_min"), cfg.real("re_max"), cfg.integer("re_count"));
  const auto im = linspace(cfg.real("im_min"), cfg.real("im_max"), cfg.integer("im_count"));
  ResultTable t;
  t.columns = {"re_z", "im_z", "norm"};
  for (const auto& pt : resolvent_map(h, re, im)) t.add_row({pt.re, pt.im, pt.norm});
  t.set_meta("method", "banded real doubling, smallest eigenvalue");
  return t;
}

}  // namespace

ResultTable run(const RunConfig& cfg) {
  ResultTable t;
  if (cfg.subcommand == "takagi") t = run_takagi(cfg);
  else if (cfg.subcommand == "antilinear") t = run_antilinear(cfg);
  else if (cfg.subcommand == "decay-bound") t = run_decay_bound(cfg);
  else if (cfg.subcommand == "kernel-scan") t = run_kernel_scan(cfg);
  else if (cfg.subcommand == "kp-fig1") t = run_kp_fig1(cfg);
  else if (cfg.subcommand == "resonance") t = run_resonance(cfg);
  else if (cfg.subcommand == "resolvent-map") t = run_resolvent_map(cfg);
  else throw Error(Errc::invalid_argument, "unknown subcommand '" + cfg.subcommand + "'");

  std::vector<std::pair<std::string, std::string>> head{{"csop_version", CSOP_VERSION},
                                                        {"subcommand", cfg.subcommand}};
  for (const auto& k : cfg.order) {
    const auto it = cfg.values.find(k);
    if (it != cfg.values.end()) head.emplace_back("config." + k, it->second);
  }
  head.insert(head.end(), t.metadata.begin(), t.metadata.end());
  t.metadata = std::move(head);
  return t;
}

int run_command_line(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"csop"};
  std::string subcommand, config_path, format, output;
  std::vector<std::string> sets;
  app.add_option("subcommand", subcommand, "one of the subcommands below");
  app.add_option("--config", config_path, "key = value file");
  app.add_option("--set", sets, "extra key=value, applied after the file");
  app.add_option("--format", format, "csv or json");
  app.add_option("--output", output, "write here instead of stdout");
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << usage();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << usage();
    return 1;
  }
  if (subcommand.empty()) {
    err << usage();
    return 1;
  }
  try {
    schema_for(subcommand);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n" << usage();
    return 1;
  }

  try {
    std::string text = config_path.empty() ? std::string() : read_file(config_path);
    if (!text.empty() && text.back() != '\n') text += '\n';
    for (const auto& s : sets) {
      if (s.find('=') == std::string::npos) throw Error(Errc::type_mismatch, "--set expects key=value, got '" + s + "'");
      text += s + "\n";
    }
    if (!format.empty()) text += "format = " + format + "\n";
    const RunConfig cfg = parse_config(subcommand, text);
    validate(cfg);
    apply_thread_limit_from_env();
    const ResultTable table = run(cfg);
    const std::string bytes = emit(table, parse_format(cfg.text("format")));
    if (output.empty()) {
      out << bytes;
    } else {
      std::ofstream file(output, std::ios::binary);
      if (!file) throw Error(Errc::io_failure, "cannot write '" + output + "'");
      file << bytes;
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace csop::cli
