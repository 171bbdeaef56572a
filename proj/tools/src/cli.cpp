#include "gaussvol/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gaussvol/errors.hpp"
#include "gaussvol/fisher_rao.hpp"
#include "gaussvol/states.hpp"

namespace gaussvol::cli {
namespace {

using integrate::DomainTag;

std::string fmt(double x, int precision = 12) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, x);
  return buf;
}

std::string tuple(const std::vector<double>& xs) {
  std::string s = "(";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ",";
    s += fmt(xs[i], 10);
  }
  return s + ")";
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

DomainTag parse_set(const std::string& s) {
  if (s == "classical") return DomainTag::Classical;
  if (s == "quantum") return DomainTag::Quantum;
  if (s == "separable") return DomainTag::Separable;
  if (s == "entangled") return DomainTag::Entangled;
  throw InvalidArgument("unknown set '" + s + "'");
}

RegularizerKind parse_reg(const std::string& s) {
  if (s == "energy") return RegularizerKind::EnergyPhi;
  if (s == "adj") return RegularizerKind::AdjugateUpsilon;
  throw InvalidArgument("unknown regularizer '" + s + "'");
}

void print_probes(const std::vector<integrate::ShellProbe>& probes, std::ostream& err) {
  err << "box search: half_width, inner, shell\n";
  for (const auto& p : probes)
    err << "  " << fmt(p.half_width) << ", " << fmt(p.inner) << ", " << fmt(p.shell) << "\n";
}

// Writes to --out when given, stdout otherwise.
int emit(const RunConfig& cfg, const std::string& text, std::ostream& out, std::ostream& err) {
  if (cfg.out.empty()) {
    out << text;
    return kOk;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) {
    err << "error: cannot write " << cfg.out << "\n";
    return kFailure;
  }
  f << text;
  return kOk;
}

int maybe_write_config(const RunConfig& cfg, std::ostream& err) {
  if (cfg.write_config.empty()) return kOk;
  std::ofstream f(cfg.write_config, std::ios::binary);
  if (!f) {
    err << "error: cannot write " << cfg.write_config << "\n";
    return kFailure;
  }
  f << format_config(cfg);
  return kOk;
}

}  // namespace

ParseError::ParseError(const std::string& what, int line, int column)
    : std::runtime_error(what), line_(line), column_(column) {}

Matrix read_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string text;
  int line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (const auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    std::vector<double> row;
    std::size_t pos = 0;
    while (true) {
      pos = text.find_first_not_of(" \t\r,", pos);
      if (pos == std::string::npos) break;
      const auto end = text.find_first_of(" \t\r,", pos);
      const std::string token = text.substr(pos, end == std::string::npos ? end : end - pos);
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size() || !std::isfinite(value))
        throw ParseError("not a number: '" + token + "'", line_no, static_cast<int>(pos) + 1);
      row.push_back(value);
      if (end == std::string::npos) break;
      pos = end;
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("row has " + std::to_string(row.size()) + " entries, expected " +
                           std::to_string(rows.front().size()),
                       line_no, 1);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no matrix rows found", line_no + 1, 1);
  if (rows.size() != rows.front().size())
    throw ParseError("matrix is " + std::to_string(rows.size()) + "x" +
                         std::to_string(rows.front().size()) + ", expected square",
                     line_no, 1);
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

std::vector<double> parse_range(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v))
      throw InvalidArgument("bad number '" + s + "' in range '" + text + "'");
    return v;
  };

  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(trim(part));
  if (parts.size() == 1) return {number(parts[0])};
  if (parts.size() != 4) throw InvalidArgument("range must be start:stop:lin|log:count");

  const double start = number(parts[0]);
  const double stop = number(parts[1]);
  const double count_d = number(parts[3]);
  if (count_d < 1 || count_d != std::floor(count_d))
    throw InvalidArgument("range count must be a positive integer");
  const auto count = static_cast<int>(count_d);
  if (stop < start) throw InvalidArgument("range must be ascending");

  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(count));
  if (parts[2] == "lin") {
    for (int i = 0; i < count; ++i)
      values.push_back(count == 1 ? start : start + (stop - start) * i / (count - 1));
  } else if (parts[2] == "log") {
    if (!(start > 0.0)) throw InvalidArgument("log range needs a positive start");
    const double ls = std::log(start), le = std::log(stop);
    for (int i = 0; i < count; ++i)
      values.push_back(count == 1 ? start : std::exp(ls + (le - ls) * i / (count - 1)));
  } else {
    throw InvalidArgument("range spacing must be 'lin' or 'log'");
  }
  // Pin the endpoints exactly.
  values.front() = start;
  if (count > 1) values.back() = stop;
  return values;
}

std::map<std::string, std::string> read_config(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string text;
  int line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (const auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    if (trim(text).empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no, 1);
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", line_no, 1);
    kv[key] = value;
  }
  return kv;
}

std::string format_config(const RunConfig& cfg) {
  std::ostringstream s;
  s << "# gaussvol " << cfg.subcommand << " config\n";
  if (cfg.subcommand == "volume") s << "set = " << cfg.set << "\n";
  s << "reg = " << cfg.reg << "\n";
  if (cfg.reg == "energy")
    s << "E = " << cfg.energy << "\n";
  else
    s << "kappa = " << cfg.kappa << "\n";
  s << "m = " << cfg.m << "\n";
  s << "samples = " << cfg.samples << "\n";
  s << "seed = " << cfg.seed << "\n";
  s << "streams = " << cfg.streams << "\n";
  s << "eps-tail = " << fmt(cfg.eps_tail, 17) << "\n";
  s << "tol = " << fmt(cfg.tol, 17) << "\n";
  return s.str();
}

std::string format_sweep_csv(const integrate::SweepTable& table, std::size_t n_samples,
                             std::uint64_t seed) {
  std::ostringstream s;
  s << "# gaussvol sweep csv v1\n";
  s << "param_name,param_value,vol_classical,err_classical,vol_quantum,err_quantum,"
       "vol_separable,err_separable,vol_entangled,err_entangled,ratio_qc,err_qc,"
       "ratio_sc,err_sc,ratio_ec,err_ec,n_samples,seed\n";
  const double nan = std::nan("");
  for (const auto& row : table.rows) {
    s << integrate::to_string(table.param) << "," << fmt(row.param_value);
    for (const auto tag : {DomainTag::Classical, DomainTag::Quantum, DomainTag::Separable,
                           DomainTag::Entangled}) {
      const auto& r = row.volumes[tag];
      s << "," << (row.ok() ? fmt(r.estimate) : fmt(nan)) << ","
        << (row.ok() ? fmt(r.std_error) : fmt(nan));
    }
    for (const auto& ratio : {row.quantum_over_classical, row.separable_over_classical,
                              row.entangled_over_classical}) {
      s << "," << (row.ok() ? fmt(ratio.value) : fmt(nan)) << ","
        << (row.ok() ? fmt(ratio.error) : fmt(nan));
    }
    s << "," << n_samples << "," << seed << "\n";
  }
  return s.str();
}

int cmd_classify(const std::string& path, double tol, std::ostream& out, std::ostream& err) {
  std::ifstream in(path);
  if (!in) {
    err << "error: cannot open " << path << "\n";
    return kUsage;
  }
  Matrix m;
  try {
    m = read_matrix(in);
  } catch (const ParseError& e) {
    err << path << ":" << e.line() << ":" << e.column() << ": " << e.what() << "\n";
    return kUsage;
  }
  if (m.rows() % 2 != 0) {
    err << "error: matrix side " << m.rows() << " is not 2N\n";
    return kUsage;
  }
  if (asymmetry(m) > 1e-12) {
    err << "error: matrix is not symmetric (relative asymmetry " << fmt(asymmetry(m), 3)
        << ")\n";
    return kAsymmetric;
  }

  const CovarianceMatrix v(m);
  const StateClass cls = classify(v, tol);
  out << to_string(cls);
  if (v.positive_definite()) {
    out << ", nu=" << tuple(symplectic_eigenvalues(v)) << "\n";
    if (v.modes() == 2) {
      const auto pt = partial_transpose_two_mode(v);
      out << "ppt_nu=" << tuple(symplectic_eigenvalues(pt)) << "\n";
    }
  } else {
    out << ", nu=n/a\n";
  }
  out << "det_V=" << fmt(v.determinant()) << "\n";
  out << "tr_V=" << fmt(v.trace()) << "\n";
  return kOk;
}

int cmd_metric(const twomode::CanonicalPoint& p, std::ostream& out, std::ostream& err) {
  MetricAtPoint g;
  try {
    g = twomode::closed_form_metric(p);
  } catch (const DomainError& e) {
    err << "error: (" << fmt(p.a) << "," << fmt(p.b) << "," << fmt(p.c) << "," << fmt(p.d)
        << ") is outside the classical domain: " << e.what() << "\n";
    return kOutsideClassical;
  }
  const auto v = twomode::canonical_embed(p);
  const auto bound = det_bound(v, twomode::canonical_chart());
  out << "metric (a,b,c,d):\n";
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) out << (j ? " " : "  ") << fmt(g.g(i, j), 10);
    out << "\n";
  }
  out << "det_g=" << fmt(g.det_g) << "\n";
  out << "sqrt_det_g=" << fmt(volume_element(g)) << "\n";
  out << "det_bound: " << fmt(bound.det_g) << " <= " << fmt(bound.bound)
      << (bound.holds ? " (holds)" : " (VIOLATED)") << "\n";
  return kOk;
}

int cmd_volume(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  integrate::IntegrationRequest req;
  req.domain = parse_set(cfg.set);
  const auto kind = parse_reg(cfg.reg);
  const auto values = parse_range(kind == RegularizerKind::EnergyPhi ? cfg.energy : cfg.kappa);
  if (values.size() != 1) throw InvalidArgument("volume takes a single E or kappa value");
  req.regularizer = kind == RegularizerKind::EnergyPhi
                        ? RegularizerSpec::energy(values[0], cfg.m)
                        : RegularizerSpec::adjugate(values[0], cfg.m);
  req.n_samples = cfg.samples;
  req.seed = cfg.seed;
  req.streams = cfg.streams;
  req.tol = cfg.tol;
  req.eps_tail = cfg.eps_tail;

  integrate::IntegrationResult r;
  try {
    r = integrate::mc_volume(req);
  } catch (const integrate::ConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    print_probes(e.probes(), err);
    return kBoxNotConverged;
  }
  if (r.empty_domain) err << "note: no samples landed in the " << cfg.set << " domain\n";

  std::ostringstream s;
  s << "# gaussvol volume csv v1\n";
  s << "set,reg,param_name,param_value,estimate,std_error,acceptance_fraction,box_volume,"
       "n_samples,seed,streams\n";
  s << cfg.set << "," << cfg.reg << ","
    << (kind == RegularizerKind::EnergyPhi ? "E" : "kappa") << "," << fmt(values[0]) << ","
    << fmt(r.estimate) << "," << fmt(r.std_error) << "," << fmt(r.acceptance_fraction) << ","
    << fmt(r.box.volume()) << "," << r.n_samples << "," << r.seed << "," << r.streams << "\n";
  return emit(cfg, s.str(), out, err);
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto kind = parse_reg(cfg.reg);
  const auto values = parse_range(kind == RegularizerKind::EnergyPhi ? cfg.energy : cfg.kappa);
  integrate::SweepTemplate tmpl;
  tmpl.n_samples = cfg.samples;
  tmpl.seed = cfg.seed;
  tmpl.streams = cfg.streams;
  tmpl.m = cfg.m;
  tmpl.tol = cfg.tol;
  tmpl.eps_tail = cfg.eps_tail;
  const auto param =
      kind == RegularizerKind::EnergyPhi ? integrate::SweepParam::Energy : integrate::SweepParam::Kappa;
  const auto table = integrate::sweep(param, values, tmpl);

  int code = emit(cfg, format_sweep_csv(table, cfg.samples, cfg.seed), out, err);
  for (const auto& row : table.rows) {
    if (row.ok()) continue;
    err << "error at " << integrate::to_string(param) << "=" << fmt(row.param_value) << ": "
        << row.error << "\n";
    if (row.box_not_converged) {
      print_probes(row.probes, err);
      if (code == kOk) code = kBoxNotConverged;
    } else if (code == kOk) {
      code = kFailure;
    }
  }
  return code;
}

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  twomode::CanonicalPoint point;
  std::string matrix_path;
  std::string config_path;

  CLI::App app{"Fisher-Rao volumes of two-mode Gaussian states", "gaussvol"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  auto* classify_cmd = app.add_subcommand("classify", "Classify a covariance matrix file");
  classify_cmd->add_option("matrix", matrix_path, "Whitespace-separated matrix file")->required();
  classify_cmd->add_option("--tol", cfg.tol, "Eigenvalue tolerance");

  auto* metric_cmd = app.add_subcommand("metric", "Fisher-Rao metric at a canonical point");
  metric_cmd->add_option("--a", point.a)->required();
  metric_cmd->add_option("--b", point.b)->required();
  metric_cmd->add_option("--c", point.c)->required();
  metric_cmd->add_option("--d", point.d)->required();

  auto add_integration_flags = [&](CLI::App* cmd) {
    cmd->add_option("--reg", cfg.reg, "energy | adj")->check(CLI::IsMember({"energy", "adj"}));
    cmd->add_option("--E", cfg.energy, "Energy bound (value or start:stop:lin|log:count)");
    cmd->add_option("--kappa", cfg.kappa, "Adjugate damping (value or range)");
    cmd->add_option("--m", cfg.m, "Exponent in log(1 + det^m)");
    cmd->add_option("--samples", cfg.samples, "Monte Carlo samples per volume");
    cmd->add_option("--seed", cfg.seed, "Random seed");
    cmd->add_option("--streams", cfg.streams, "Deterministic substreams / workers");
    cmd->add_option("--eps-tail", cfg.eps_tail, "Box-search tail tolerance");
    cmd->add_option("--tol", cfg.tol, "Domain membership tolerance");
    cmd->add_option("--out", cfg.out, "Write CSV here instead of stdout");
    cmd->add_option("--config", config_path, "key = value file; flags override it");
    cmd->add_option("--write-config", cfg.write_config, "Write the effective config here");
  };
  auto* volume_cmd = app.add_subcommand("volume", "Regularized volume of one set");
  volume_cmd->add_option("--set", cfg.set, "classical | quantum | separable | entangled")
      ->check(CLI::IsMember({"classical", "quantum", "separable", "entangled"}));
  add_integration_flags(volume_cmd);
  auto* sweep_cmd = app.add_subcommand("sweep", "Volumes and ratios over a range of E or kappa");
  add_integration_flags(sweep_cmd);

  // Config values are spliced in right after the subcommand so that any flag
  // given on the command line comes later and wins.
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    if (path.empty()) continue;
    std::ifstream in(path);
    if (!in) {
      err << "error: cannot open config " << path << "\n";
      return kUsage;
    }
    std::map<std::string, std::string> kv;
    try {
      kv = read_config(in);
    } catch (const ParseError& e) {
      err << path << ":" << e.line() << ":" << e.column() << ": " << e.what() << "\n";
      return kUsage;
    }
    const auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) {
      return a == "volume" || a == "sweep";
    });
    if (sub == args.end()) break;
    std::vector<std::string> injected;
    for (const auto& [k, v] : kv) injected.push_back("--" + k + "=" + v);
    args.insert(sub + 1, injected.begin(), injected.end());
    break;
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*classify_cmd) return cmd_classify(matrix_path, cfg.tol, out, err);
    if (*metric_cmd) return cmd_metric(point, out, err);
    cfg.subcommand = *volume_cmd ? "volume" : "sweep";
    if (const int rc = maybe_write_config(cfg, err); rc != kOk) return rc;
    return *volume_cmd ? cmd_volume(cfg, out, err) : cmd_sweep(cfg, out, err);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace gaussvol::cli
