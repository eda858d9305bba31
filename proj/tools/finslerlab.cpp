#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "finslerlab/cli.hpp"

namespace {

unsigned threads_from_env() {
  const char* env = std::getenv("FINSLERLAB_THREADS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 0) return 1;
  if (v == 0) return std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(v);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace finslerlab;

  CLI::App app{"Curvature of homogeneous (alpha, beta) Finsler spaces"};
  app.require_subcommand(1, 1);

  cli::RunConfig cfg;
  std::vector<std::string> directions;
  std::vector<std::string> tolerances;
  std::size_t samples = 0;
  double m = 0.0;
  std::string format = "text";

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--spec", cfg.spec_path, "spec file (JSON)")->required();
    sub->add_option("--format", format, "text or csv")
        ->check(CLI::IsMember({"text", "csv"}));
    sub->add_option("--m", m, "use a kropina metric with this m (overrides the spec)");
    sub->add_option("--tol", tolerances, "tolerance override key=value (hessian_step, quad_rel_tol)");
  };
  const auto add_directions = [&](CLI::App* sub) {
    sub->add_option("--direction", directions, "tangent direction x1,x2,... (repeatable)");
    sub->add_option("--samples", samples, "number of sampled directions");
    sub->add_option("--seed", cfg.seed, "sampling seed");
  };

  struct Sub {
    const char* name;
    const char* help;
    bool directions;
  };
  for (const Sub& s : {Sub{"s-curvature", "S-curvature at the origin", true},
                       Sub{"mean-berwald", "mean Berwald curvature E_ij", true},
                       Sub{"verify-formulas", "closed-form audit against the oracles", true},
                       Sub{"validate-metric", "check the spec and the metric family", false},
                       Sub{"isotropy", "isotropic (zero) S-curvature test", true},
                       Sub{"volume-coeff", "Busemann-Hausdorff f(b) and f'(b)/(b f(b))", false}}) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub);
    if (s.directions) add_directions(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  cfg.command = *cli::parse_command(chosen->get_name());
  cfg.format = format == "csv" ? cli::OutputFormat::csv : cli::OutputFormat::text;
  if (chosen->count("--m")) cfg.m_override = m;
  // volume-coeff and validate-metric have no --samples option
  if (const auto* opt = chosen->get_option_no_throw("--samples"); opt && opt->count())
    cfg.samples = samples;
  cfg.threads = threads_from_env();

  try {
    for (const auto& d : directions) cfg.directions.push_back(cli::parse_direction(d));
    for (const auto& t : tolerances) {
      const auto eq = t.find('=');
      if (eq == std::string::npos) throw InputError("--tol expects key=value, got '" + t + "'");
      cfg.tolerances[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  const cli::RunResult result = cli::run(cfg);
  std::cout << result.report;
  std::cerr << result.diagnostics;
  return result.exit_code;
}
