#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "finslerlab/algebra.hpp"
#include "finslerlab/curvature.hpp"
#include "finslerlab/errors.hpp"
#include "finslerlab/phi.hpp"
#include "finslerlab/report.hpp"
#include "finslerlab/sampling.hpp"
#include "finslerlab/spec_io.hpp"
#include "finslerlab/volume.hpp"

namespace finslerlab::cli {

enum class Command { s_curvature, mean_berwald, verify_formulas, validate_metric, isotropy, volume_coeff };
enum class OutputFormat { text, csv };

inline std::optional<Command> parse_command(std::string_view name) {
  if (name == "s-curvature") return Command::s_curvature;
  if (name == "mean-berwald") return Command::mean_berwald;
  if (name == "verify-formulas") return Command::verify_formulas;
  if (name == "validate-metric") return Command::validate_metric;
  if (name == "isotropy") return Command::isotropy;
  if (name == "volume-coeff") return Command::volume_coeff;
  return std::nullopt;
}

inline const char* to_string(Command c) {
  switch (c) {
    case Command::s_curvature: return "s-curvature";
    case Command::mean_berwald: return "mean-berwald";
    case Command::verify_formulas: return "verify-formulas";
    case Command::validate_metric: return "validate-metric";
    case Command::isotropy: return "isotropy";
    case Command::volume_coeff: return "volume-coeff";
  }
  return "?";
}

struct RunConfig {
  Command command = Command::validate_metric;
  std::string spec_path;
  std::optional<std::string> spec_text;  // used instead of spec_path when set
  std::vector<TangentVector> directions;
  std::optional<std::size_t> samples;
  std::uint64_t seed = default_seed;
  OutputFormat format = OutputFormat::text;
  std::optional<double> m_override;
  /// Known keys: "hessian_step" (relative FD step), "quad_rel_tol".
  std::map<std::string, double> tolerances;
  unsigned threads = 1;
};

struct RunResult {
  int exit_code = 0;
  std::string report;       // standard output
  std::string diagnostics;  // standard error
};

/// Parses "x1,x2,..." into a direction.
inline TangentVector parse_direction(std::string_view text) {
  Vector y;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used == 0 || used != item.size())
      throw InputError("direction: cannot parse '" + std::string(text) + "'");
    y.push_back(x);
  }
  if (y.empty()) throw InputError("direction: empty");
  return TangentVector(std::move(y));
}

namespace detail {

class Report {
 public:
  explicit Report(OutputFormat f) : format_(f) {}

  bool csv() const { return format_ == OutputFormat::csv; }

  void text(const std::string& line) {
    if (!csv()) out_ += line + "\n";
  }
  void comment(const std::string& line) {
    if (csv()) out_ += "# " + line + "\n";
  }
  void header(const std::string& line) {
    if (csv())
      comment(line);
    else
      text(line);
  }
  /// "label: value" in text, "key,value" in CSV.
  void scalar(const std::string& label, const std::string& key, double value,
              const std::string& indent = "") {
    if (csv())
      out_ += csv_scalar(key, value);
    else
      out_ += indent + label + " = " + fmt9(value) + "\n";
  }
  void matrix(const std::string& title, const Matrix& m) {
    if (csv()) {
      comment(title);
      out_ += csv_matrix(m);
    } else {
      out_ += "  " + title + ":\n" + text_matrix(m);
    }
  }
  void raw_csv(const std::string& line) {
    if (csv()) out_ += line + "\n";
  }

  std::string str() const { return out_; }

 private:
  OutputFormat format_;
  std::string out_;
};

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline double tolerance(const RunConfig& cfg, const std::string& key, double fallback) {
  const auto it = cfg.tolerances.find(key);
  return it == cfg.tolerances.end() ? fallback : it->second;
}

inline std::string describe_direction(const TangentVector& y) {
  return "(" + fmt_vector(y.components()) + ")";
}

struct Context {
  const RunConfig& cfg;
  const HomogeneousSpec& spec;
  const PhiModel& model;
  Report& out;
};

inline std::string spec_summary(const Context& c) {
  return "phi=" + c.model.describe() + ", n=" + std::to_string(c.spec.n()) +
         ", b=" + fmt9(c.spec.b());
}

inline std::vector<TangentVector> directions_for(const Context& c, std::size_t default_samples) {
  if (!c.cfg.directions.empty()) {
    for (const auto& y : c.cfg.directions)
      if (y.size() != c.spec.n())
        throw InputError("direction " + describe_direction(y) + " does not have n = " +
                         std::to_string(c.spec.n()) + " components");
    return c.cfg.directions;
  }
  const std::size_t count = c.cfg.samples.value_or(default_samples);
  if (count == 0)
    throw InputError(std::string(to_string(c.cfg.command)) +
                     ": no directions (use --direction or --samples)");
  DirectionSampling sampling;
  sampling.count = count;
  sampling.seed = c.cfg.seed;
  sampling.positive_beta = c.model.is_kropina() && !is_integer_valued(c.model.kropina_m());
  auto dirs = sample_directions(c.spec, sampling);
  if (dirs.empty()) throw NumericalError("could not sample any regular direction");
  return dirs;
}

inline HessianOptions hessian_options(const RunConfig& cfg) {
  HessianOptions h;
  h.relative_step = tolerance(cfg, "hessian_step", h.relative_step);
  h.threads = cfg.threads;
  return h;
}

inline double require_kropina(const Context& c) {
  if (!c.model.is_kropina())
    throw InputError(std::string(to_string(c.cfg.command)) +
                     ": needs a kropina metric (spec phi or --m)");
  return c.model.kropina_m();
}

inline int run_validate(const Context& c) {
  const ValidationReport vr = validate_spec(c.spec);
  const double b = c.spec.b();
  std::optional<ValidityReport> validity;
  if (vr.passed()) validity = validity_check(c.model, b, default_validity_grid(c.model, b));

  const bool phi_ok = validity && validity->all_evaluated_points_pass();
  const bool ok = vr.passed() && phi_ok;

  std::string summary;
  if (!vr.passed()) {
    summary = "invalid: " + vr.first_failure();
  } else if (!phi_ok) {
    summary = "invalid: " + c.model.describe() + " violates the Finsler condition for b=" + fmt9(b);
  } else {
    summary = "valid, b=" + fmt9(b) + ", " + c.model.describe();
    if (c.model.is_singular()) summary += " singular at β=0";
    if (c.model.is_kropina() && !is_integer_valued(c.model.kropina_m()))
      summary += ", defined for β>0 only";
  }
  c.out.text(summary);
  c.out.comment(summary);
  c.out.raw_csv("label,value");
  c.out.raw_csv(std::string("valid,") + (ok ? "1" : "0"));
  c.out.raw_csv("b," + fmt9(b));
  for (const auto& chk : vr.checks) {
    c.out.text("check " + chk.name + ": " + (chk.passed ? "pass" : "fail (" + chk.detail + ")"));
    c.out.raw_csv("check:" + chk.name + "," + (chk.passed ? "1" : "0"));
  }
  if (validity) {
    const std::string where = c.model.is_singular() ? "(0, b]" : "[-b, b]";
    c.out.text("phi condition on " + std::to_string(validity->points.size()) + "-point grid " +
               where + ": " + (phi_ok ? "pass" : "fail"));
    c.out.raw_csv(std::string("phi_condition,") + (phi_ok ? "1" : "0"));
    c.out.text(std::string("phi singular at s=0: ") + (c.model.is_singular() ? "yes" : "no"));
    c.out.raw_csv(std::string("singular,") + (c.model.is_singular() ? "1" : "0"));
  }
  return ok ? 0 : 1;
}

inline int run_s_curvature(const Context& c) {
  const auto dirs = directions_for(c, 0);
  c.out.header("s-curvature: " + spec_summary(c));
  c.out.raw_csv("label,value");
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    const std::string tag = "[" + std::to_string(k + 1) + "]";
    c.out.text("y" + tag + " = " + describe_direction(dirs[k]));
    c.out.scalar("S", "S" + tag, s_curvature_generic(c.spec, c.model, dirs[k]), "  ");
    if (c.model.is_kropina())
      c.out.scalar("S_closed", "S_closed" + tag,
                   s_curvature_kropina(c.spec, c.model.kropina_m(), dirs[k]), "  ");
  }
  return 0;
}

inline int run_mean_berwald(const Context& c) {
  const auto dirs = directions_for(c, 0);
  const HessianOptions hopts = hessian_options(c.cfg);
  c.out.header("mean-berwald: " + spec_summary(c));
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    const std::string tag = "y[" + std::to_string(k + 1) + "]";
    c.out.header(tag + " = " + describe_direction(dirs[k]));
    const auto oracle = mean_berwald_oracle(c.spec, c.model, dirs[k], hopts);
    c.out.matrix(tag + " E oracle (h=" + fmt9(oracle.step) + ")", oracle.E);
    if (c.model.is_kropina()) {
      const auto closed =
          mean_berwald_closed(c.spec, c.model.kropina_m(), dirs[k], AReading::omega, hopts);
      c.out.matrix(tag + " E closed form (A=Omega), residual vs oracle " +
                       fmt9(*closed.residual_vs_oracle) + ", asymmetry " +
                       fmt9(closed.asymmetry),
                   closed.E);
    }
  }
  return 0;
}

inline int run_verify(const Context& c) {
  const double m = require_kropina(c);
  const auto dirs = directions_for(c, 8);
  const HessianOptions hopts = hessian_options(c.cfg);
  const int n = static_cast<int>(c.spec.n());
  const double b2 = c.spec.b2();
  const PhiModel kropina = PhiModel::kropina(m);

  double q = 0, qp = 0, qpp = 0, delta = 0, phi = 0, phi_forms = 0;
  double s_abs = 0, s_rel = 0;
  double dj = 0, dij = 0, dj_scale = 0, dij_scale = 0;
  double e_omega = 0, e_first = 0, e_asym = 0, e_scale = 0, euler = 0, oracle_asym = 0;

  for (const auto& y : dirs) {
    const auto ab = alpha_beta_s(c.spec, y);
    const auto gen = ab_scalars_generic(kropina, ab.s, b2, n);
    const auto cls = ab_scalars_kropina(m, ab.s, b2, n);
    q = std::max(q, rel_diff(gen.Q, cls.Q));
    qp = std::max(qp, rel_diff(gen.Qp, cls.Qp));
    qpp = std::max(qpp, rel_diff(gen.Qpp, cls.Qpp));
    delta = std::max(delta, rel_diff(gen.Delta, cls.Delta));
    phi = std::max(phi, rel_diff(gen.Phi, cls.Phi));
    phi_forms = std::max(
        phi_forms, std::abs(phi_bracket_form(gen.s, gen.b2, n, gen.Q, gen.Qp, gen.Qpp, gen.Delta) -
                            phi_negated_form(gen.s, gen.b2, n, gen.Q, gen.Qp, gen.Qpp, gen.Delta)));

    const double sg = s_curvature_generic(c.spec, kropina, y);
    const double sk = s_curvature_kropina(c.spec, m, y);
    s_abs = std::max(s_abs, std::abs(sg - sk));
    s_rel = std::max(s_rel, rel_diff(sg, sk));

    const auto om = omega_bundle(m, ab.s, b2, n);
    const auto d = omega_y_derivatives(om, ab.alpha, y, TangentVector(c.spec.v()), c.spec.metric());
    dj = std::max(dj, d.discrepancy_j);
    dij = std::max(dij, d.discrepancy_ij);
    for (double x : d.chain_j) dj_scale = std::max(dj_scale, std::abs(x));
    dij_scale = std::max(dij_scale, max_abs(d.chain_ij));

    const auto oracle = mean_berwald_oracle(c.spec, kropina, y, hopts);
    const auto c_omega = mean_berwald_closed(c.spec, m, y, AReading::omega, hopts);
    const auto c_first = mean_berwald_closed(c.spec, m, y, AReading::first_summand, hopts);
    e_omega = std::max(e_omega, *c_omega.residual_vs_oracle);
    e_first = std::max(e_first, *c_first.residual_vs_oracle);
    e_asym = std::max(e_asym, c_omega.asymmetry);
    e_scale = std::max(e_scale, max_abs(oracle.E));
    oracle_asym = std::max(oracle_asym, oracle.asymmetry);
    for (std::size_t i = 0; i < y.size(); ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < y.size(); ++j) acc += oracle.E(i, j) * y[j];
      euler = std::max(euler, std::abs(acc));
    }
  }
  const auto ratio = [](double a, double scale) { return scale == 0.0 ? a : a / scale; };

  c.out.header("verify-formulas: " + spec_summary(c) + ", directions=" + std::to_string(dirs.size()));
  c.out.raw_csv("label,value");
  c.out.text("kropina closed-form scalars vs jet pipeline (max relative residual):");
  c.out.scalar("Q", "scalars_Q_rel", q, "  ");
  c.out.scalar("Q'", "scalars_Qp_rel", qp, "  ");
  c.out.scalar("Q''", "scalars_Qpp_rel", qpp, "  ");
  c.out.scalar("Delta", "scalars_Delta_rel", delta, "  ");
  c.out.scalar("Phi", "scalars_Phi_rel", phi, "  ");
  c.out.text("Phi, bracket form vs negated form (max absolute difference):");
  c.out.scalar("difference", "phi_forms_abs", phi_forms, "  ");
  c.out.text("S-curvature, kropina closed form vs generic (Omega form vs Phi/Delta/Q form):");
  c.out.scalar("max absolute residual", "s_closed_vs_generic_abs", s_abs, "  ");
  c.out.scalar("max relative residual", "s_closed_vs_generic_rel", s_rel, "  ");
  c.out.text("Omega y-derivatives, printed polynomials vs chain rule:");
  c.out.scalar("dOmega/dy max absolute residual", "omega_j_printed_abs", dj, "  ");
  c.out.scalar("dOmega/dy residual / max|chain|", "omega_j_printed_rel", ratio(dj, dj_scale), "  ");
  c.out.scalar("d2Omega/dydy max absolute residual", "omega_ij_printed_abs", dij, "  ");
  c.out.scalar("d2Omega/dydy residual / max|chain|", "omega_ij_printed_rel", ratio(dij, dij_scale), "  ");
  c.out.text("mean Berwald curvature, printed closed form vs Hessian oracle:");
  c.out.scalar("A=Omega: max absolute residual", "e_closed_A_omega_abs", e_omega, "  ");
  c.out.scalar("A=Omega: residual / max|E|", "e_closed_A_omega_rel", ratio(e_omega, e_scale), "  ");
  c.out.scalar("A=Omega<[v,y],y>/alpha: max absolute residual", "e_closed_A_first_abs", e_first, "  ");
  c.out.scalar("A=Omega<[v,y],y>/alpha: residual / max|E|", "e_closed_A_first_rel",
               ratio(e_first, e_scale), "  ");
  c.out.scalar("closed form asymmetry max|E - E^T|", "e_closed_asymmetry", e_asym, "  ");
  c.out.text("Hessian oracle self-checks:");
  c.out.scalar("Euler residual max|E y|", "e_oracle_euler_abs", euler, "  ");
  c.out.scalar("asymmetry max|E - E^T|", "e_oracle_asymmetry", oracle_asym, "  ");
  return 0;
}

inline int run_isotropy(const Context& c) {
  const double m = require_kropina(c);
  const std::size_t samples = c.cfg.samples.value_or(256);
  const auto verdict = classify_isotropy(c.spec, m, samples, c.cfg.seed);
  c.out.header("isotropy: " + spec_summary(c) + ", samples=" + std::to_string(verdict.samples) +
               ", seed=" + std::to_string(c.cfg.seed));
  c.out.text("verdict: " + verdict.label());
  c.out.raw_csv("label,value");
  c.out.raw_csv(std::string("zero,") + (verdict.zero ? "1" : "0"));
  c.out.scalar("max |S|", "max_abs_S", verdict.max_abs_s);
  c.out.scalar("term scale", "scale", verdict.scale);
  return 0;
}

inline int run_volume(const Context& c) {
  const double b = c.spec.b();
  const int n = static_cast<int>(c.spec.n());
  QuadratureOptions q;
  q.rel_tol = tolerance(c.cfg, "quad_rel_tol", q.rel_tol);
  const VolumeFormKind bh = volume::BusemannHausdorff{};
  const double f = f_of_b(c.model, b, n, bh, q);
  const double dlog = fb_log_derivative(c.model, b, n, bh, q);
  c.out.header("volume-coeff: " + spec_summary(c) + ", volume form=busemann-hausdorff");
  c.out.raw_csv("label,value");
  c.out.scalar("f(b)", "f_b", f);
  c.out.scalar("f'(b)/(b f(b))", "fb_log_derivative", dlog);
  return 0;
}

}  // namespace detail

/// Runs one command. Exit codes: 0 success, 1 invalid input or spec, 2 numerical failure.
inline RunResult run(const RunConfig& cfg) {
  RunResult result;
  detail::Report out(cfg.format);
  try {
    const SpecFile file = cfg.spec_text ? parse_spec(*cfg.spec_text) : load_spec(cfg.spec_path);
    const PhiModel model = cfg.m_override ? PhiModel::kropina(*cfg.m_override) : file.phi;
    const detail::Context ctx{cfg, file.spec, model, out};

    if (cfg.command == Command::validate_metric) {
      result.exit_code = detail::run_validate(ctx);
      result.report = out.str();
      return result;
    }

    const ValidationReport vr = validate_spec(file.spec);
    if (!vr.passed()) {
      result.exit_code = 1;
      result.diagnostics = "invalid spec: " + vr.first_failure() + "\n";
      return result;
    }

    switch (cfg.command) {
      case Command::s_curvature: result.exit_code = detail::run_s_curvature(ctx); break;
      case Command::mean_berwald: result.exit_code = detail::run_mean_berwald(ctx); break;
      case Command::verify_formulas: result.exit_code = detail::run_verify(ctx); break;
      case Command::isotropy: result.exit_code = detail::run_isotropy(ctx); break;
      case Command::volume_coeff: result.exit_code = detail::run_volume(ctx); break;
      case Command::validate_metric: break;
    }
    result.report = out.str();
  } catch (const InputError& e) {
    result.exit_code = 1;
    result.diagnostics = std::string("error: ") + e.what() + "\n";
  } catch (const NumericalError& e) {
    result.exit_code = 2;
    result.diagnostics = std::string("numerical failure: ") + e.what() + "\n";
  }
  return result;
}

}  // namespace finslerlab::cli
