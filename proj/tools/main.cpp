// bievolve: CSV/JSON frontend for the bidirectional-evolution library.
//
// Exit codes: 0 success, 1 computation/domain error, 2 usage error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bievolve/interference.hpp"
#include "bievolve/io.hpp"
#include "bievolve/kaon.hpp"
#include "bievolve/linops.hpp"
#include "bievolve/pathsum.hpp"
#include "bievolve/spectral.hpp"
#include "bievolve/verify.hpp"

namespace {

using bievolve::linops::Complex;
using bievolve::linops::ComplexMatrix;
using bievolve::linops::StateVector;
using ordered_json = nlohmann::ordered_json;

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    bievolve::io::write_file(path, content);
  }
}

// BIEVOLVE_THREADS caps grid parallelism; unset means hardware concurrency.
int env_thread_cap() {
  const char* raw = std::getenv("BIEVOLVE_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || v < 1) {
    throw std::invalid_argument("BIEVOLVE_THREADS must be a positive integer");
  }
  return static_cast<int>(v);
}

ordered_json log_scaled_json(const bievolve::spectral::LogScaled& v) {
  ordered_json j;
  j["mantissa"] = v.mantissa();
  j["exp10"] = v.exp10();
  return j;
}

// ---------------------------------------------------------------------------

struct InterferenceArgs {
  int m = 0;
  int n = 0;
  double x_min = 0.0;
  double x_max = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double tau = 0.0;
  int steps = 0;
  bool normalize = false;
  bool with_density = false;
  double lambda_sd_x = 0.0;
  std::string output = "-";
};

int run_interference(const InterferenceArgs& a, bool lambda_range) {
  namespace itf = bievolve::interference;
  double x_min = a.x_min;
  double x_max = a.x_max;
  if (lambda_range) {
    x_min = itf::x_from_tau_lambda(a.tau, a.lambda_min);
    x_max = itf::x_from_tau_lambda(a.tau, a.lambda_max);
  }
  const bool normalize = a.normalize || a.with_density;
  const auto profile = itf::sample_profile(a.m, a.n, x_min, x_max, a.steps, normalize, env_thread_cap());

  std::optional<std::vector<double>> density;
  if (a.with_density) {
    if (!(a.lambda_sd_x > 0.0)) {
      throw std::invalid_argument("--with-density requires --lambda-sd-x > 0");
    }
    std::vector<double> d;
    d.reserve(profile.samples.size());
    for (const auto& s : profile.samples) {
      const double z = s.x / a.lambda_sd_x;
      d.push_back(0.5 * std::exp(-0.5 * z * z));  // density drawn at half the peak height
    }
    density = std::move(d);
  }
  emit(a.output, bievolve::io::profile_to_csv(profile, density));
  return 0;
}

// ---------------------------------------------------------------------------

struct RegimeArgs {
  bievolve::spectral::EnsembleModel model;
  bievolve::spectral::RegimeConfig config;
  double n_steps = 0.0;
  double n_forward = 0.0;
  std::string output = "-";
};

int run_regime(const RegimeArgs& a) {
  namespace sp = bievolve::spectral;
  const sp::RegimeReport rep = sp::regime_classify(a.model, a.n_steps, a.n_forward, a.config);

  ordered_json j;
  j["W"] = log_scaled_json(rep.width);
  j["lambda_sd"] = log_scaled_json(rep.lambda_sd);
  j["ratio"] = log_scaled_json(rep.ratio);
  j["classification"] = sp::regime_name(rep.classification);
  j["t23_seconds"] = log_scaled_json(rep.t23_seconds);
  j["t13_seconds"] = log_scaled_json(rep.t13_seconds);
  ordered_json inputs;
  inputs["f"] = rep.model.f;
  inputs["total_particles"] = rep.model.total_particles;
  inputs["lambda1"] = rep.model.lambda1;
  inputs["tau"] = rep.model.tau;
  inputs["N"] = rep.n_steps;
  inputs["n"] = rep.n_forward;
  inputs["broad_factor"] = rep.config.broad_factor;
  inputs["narrow_factor"] = rep.config.narrow_factor;
  inputs["sd_multiplier"] = rep.config.sd_multiplier;
  j["inputs"] = std::move(inputs);
  emit(a.output, j.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------

struct KaonArgs {
  bievolve::kaon::KaonParams params;
  std::string output = "-";
};

int run_kaon(const KaonArgs& a) {
  namespace kn = bievolve::kaon;
  kn::validate(a.params);
  const auto res = kn::commutator_2x2(kn::lee_wolfenstein_m(a.params));

  ordered_json j;
  j["A_im"] = res.a_value.imag();
  j["lambda1"] = res.lambda1;
  ordered_json eigs = ordered_json::array();
  for (const auto& ev : res.eigenvalues) {
    eigs.push_back(ordered_json::array({ev.real(), ev.imag()}));
  }
  j["eigenvalues"] = std::move(eigs);
  ordered_json inputs;
  inputs["delta_m"] = a.params.delta_m;
  inputs["delta_gamma"] = a.params.delta_gamma;
  inputs["eps_abs"] = a.params.eps_abs;
  inputs["eps_arg"] = a.params.eps_arg;
  inputs["theta"] = a.params.theta;
  j["inputs"] = std::move(inputs);
  j["closed_form_A_im"] = kn::eigenvalue_closed_form(a.params).imag();
  j["paper_order_of_magnitude"] = 1e17;
  emit(a.output, j.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------

struct PathsumArgs {
  std::string hf_file;
  std::string hb_file;
  std::string psi0_file;
  int n_steps = 0;
  double tau = 0.0;
  double theta = 0.0;
  std::string output_csv = "-";
  std::string output_state = "-";
};

int run_pathsum(const PathsumArgs& a) {
  namespace ps = bievolve::pathsum;
  const ComplexMatrix hf = bievolve::io::read_matrix(a.hf_file);
  const ComplexMatrix hb = bievolve::io::read_matrix(a.hb_file);
  const StateVector psi0 = bievolve::io::read_vector(a.psi0_file);
  const ps::BiHamiltonian bh(hf, hb, a.tau);

  const auto res = ps::symmetric_evolve(bh, psi0, a.n_steps, a.theta);
  emit(a.output_csv, bievolve::io::pathsum_to_csv(res));
  emit(a.output_state, bievolve::io::vector_to_json(res.total));

  const double nonzero = ps::check_nonzero_condition(bh, psi0);
  std::cerr << "nonzero_condition ||Pi(0) psi0|| / ||psi0|| = " << bievolve::io::format_double(nonzero)
            << (nonzero == 0.0 ? " (holds: no kernel component)\n" : "\n");
  return 0;
}

// ---------------------------------------------------------------------------

struct AttractorArgs {
  std::string h_file;
  std::string psi0_file;
  double tau = 0.0;
  int n_steps = 0;
  std::string output_csv = "-";
  std::string output_state = "-";
};

int run_attractor(const AttractorArgs& a) {
  namespace ps = bievolve::pathsum;
  const ComplexMatrix h = bievolve::io::read_matrix(a.h_file);
  const StateVector psi0 = bievolve::io::read_vector(a.psi0_file);

  std::string csv = "n,residual,dominant_fraction\n";
  const auto dec = bievolve::linops::hermitian_eigendecomposition(h);
  ps::AttractorResult last;
  for (int n = 0; n <= a.n_steps; ++n) {
    last = ps::attractor_evolve(h, psi0, a.tau, n);
    const double residual = (h * last.state).norm();
    double dominant = 0.0;
    for (std::size_t i = 0; i < dec.eigenvalues.size(); ++i) {
      if (std::abs(dec.eigenvalues[i] - last.dominant_energy) <= 1e-12 * std::max(1.0, dec.max_abs_eigenvalue())) {
        const StateVector comp = dec.projectors[i] * last.state;
        dominant = comp.norm() * comp.norm();
      }
    }
    csv += std::to_string(n);
    csv += ',';
    csv += bievolve::io::format_double(residual);
    csv += ',';
    csv += bievolve::io::format_double(dominant);
    csv += '\n';
  }
  emit(a.output_csv, csv);

  ordered_json j;
  j["n_steps"] = a.n_steps;
  j["tau"] = a.tau;
  j["dominant_energy"] = last.dominant_energy;
  j["dominant_abs_cos"] = last.dominant_abs_cos;
  j["zero_energy_overlap"] = last.zero_energy_overlap;
  j["converged_to_zero_energy"] = last.converged_to_zero_energy;
  j["spectral_condition_ok"] = last.spectral_condition_ok;
  j["state"] = ordered_json::parse(bievolve::io::vector_to_json(last.state));
  emit(a.output_state, j.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::uint64_t seed = 42;
  std::string suite = "all";
  std::string output = "-";
};

int run_verify(const VerifyArgs& a) {
  const auto reports = bievolve::verify::run(a.suite, a.seed);
  emit(a.output, bievolve::verify::report_json(reports));
  std::cerr << bievolve::verify::report_text(reports);
  for (const auto& rep : reports) {
    if (!rep.all_pass()) return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetric bidirectional time evolution: interference profiles, "
               "regime reports, kaon commutator numbers, path sums, attractors."};
  app.require_subcommand(1);

  InterferenceArgs ia;
  auto* itf = app.add_subcommand("interference", "Sample I_{m,n}(x) on a grid; emit profile CSV");
  itf->add_option("--m", ia.m, "backward step count m")->required();
  itf->add_option("--n", ia.n, "forward step count n")->required();
  auto* xmin = itf->add_option("--x-min", ia.x_min, "grid start, x units");
  auto* xmax = itf->add_option("--x-max", ia.x_max, "grid end, x units");
  auto* lmin = itf->add_option("--lambda-min", ia.lambda_min, "grid start, eigenvalue units (needs --tau)");
  auto* lmax = itf->add_option("--lambda-max", ia.lambda_max, "grid end, eigenvalue units (needs --tau)");
  auto* tau_opt = itf->add_option("--tau", ia.tau, "step duration; converts lambda to x = tau^2 lambda");
  itf->add_option("--steps", ia.steps, "number of samples (>= 2)")->required()->check(CLI::Range(2, 100000000));
  itf->add_flag("--normalize", ia.normalize, "scale modulus so the x=0 peak is 1");
  auto* with_density =
      itf->add_flag("--with-density", ia.with_density, "overlay Gaussian eigenvalue density (implies --normalize)");
  auto* sd_x = itf->add_option("--lambda-sd-x", ia.lambda_sd_x, "density standard deviation, x units")
                   ->check(CLI::PositiveNumber);
  itf->add_option("--output,-o", ia.output, "output path ('-' = stdout)");
  xmin->needs(xmax);
  xmax->needs(xmin);
  lmin->needs(lmax, tau_opt);
  lmax->needs(lmin, tau_opt);
  xmin->excludes(lmin);
  with_density->needs(sd_x);

  RegimeArgs ra;
  auto* rg = app.add_subcommand("regime", "Classify interference regime; emit report JSON");
  rg->add_option("--f", ra.model.f, "participating fraction of the ensemble")->required();
  rg->add_option("--tau", ra.model.tau, "step duration in seconds");
  rg->add_option("--N", ra.n_steps, "total step count N")->required();
  rg->add_option("--n", ra.n_forward, "forward step count n")->required();
  rg->add_option("--total-particles", ra.model.total_particles, "baseline particle count");
  rg->add_option("--lambda1", ra.model.lambda1, "single-particle commutator eigenvalue, s^-2");
  rg->add_option("--broad-factor", ra.config.broad_factor, "W/lambda_SD ratio above which the regime is Broad");
  rg->add_option("--narrow-factor", ra.config.narrow_factor, "W/lambda_SD ratio below which the regime is Narrow");
  rg->add_option("--sd-multiplier", ra.config.sd_multiplier, "spread convention multiplier on lambda_SD");
  rg->add_option("--output,-o", ra.output, "output path ('-' = stdout)");

  KaonArgs ka;
  auto* kn = app.add_subcommand("kaon", "Kaon commutator eigenvalue estimate; emit JSON");
  kn->add_option("--delta-m", ka.params.delta_m, "mass splitting m2 - m1, s^-1");
  kn->add_option("--delta-gamma", ka.params.delta_gamma, "decay-rate splitting gamma1 - gamma2, s^-1");
  kn->add_option("--eps-abs", ka.params.eps_abs, "|epsilon| CP-violation magnitude");
  kn->add_option("--eps-arg", ka.params.eps_arg, "arg(epsilon), radians");
  kn->add_option("--theta", ka.params.theta, "CP-operator phase (drops out; exposed to show it)");
  kn->add_option("--output,-o", ka.output, "output path ('-' = stdout)");

  PathsumArgs pa;
  auto* ps = app.add_subcommand("pathsum", "N-step symmetric evolution; emit per-n CSV + state JSON");
  ps->add_option("--hf-file", pa.hf_file, "forward Hamiltonian, matrix JSON")->required();
  ps->add_option("--hb-file", pa.hb_file, "backward Hamiltonian, matrix JSON")->required();
  ps->add_option("--psi0-file", pa.psi0_file, "origin state, vector JSON")->required();
  ps->add_option("--N", pa.n_steps, "step count")->required()->check(CLI::Range(0, 64));
  ps->add_option("--tau", pa.tau, "step duration")->required();
  ps->add_option("--theta", pa.theta, "branch phase on U_B");
  ps->add_option("--output-csv", pa.output_csv, "per-n norm CSV path ('-' = stdout)");
  ps->add_option("--output-state", pa.output_state, "total-state JSON path ('-' = stdout)");

  AttractorArgs aa;
  auto* at = app.add_subcommand("attractor", "cos^N(H tau) relaxation trace; emit CSV + final JSON");
  at->add_option("--h-file", aa.h_file, "Hamiltonian, matrix JSON")->required();
  at->add_option("--psi0-file", aa.psi0_file, "origin state, vector JSON")->required();
  at->add_option("--tau", aa.tau, "step duration")->required();
  at->add_option("--N", aa.n_steps, "step count")->required()->check(CLI::Range(0, 10000));
  at->add_option("--output-csv", aa.output_csv, "trace CSV path ('-' = stdout)");
  at->add_option("--output-state", aa.output_state, "final report JSON path ('-' = stdout)");

  VerifyArgs va;
  auto* vf = app.add_subcommand("verify", "Run randomized self-check suites; emit summary JSON");
  vf->add_option("--seed", va.seed, "RNG seed for the property samples");
  vf->add_option("--suite", va.suite, "which suite to run")
      ->check(CLI::IsMember({"all", "interference", "pathsum", "kaon", "spectral"}));
  vf->add_option("--output,-o", va.output, "output path ('-' = stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (app.got_subcommand(itf) && xmin->count() == 0 && lmin->count() == 0) {
    std::cerr << "error: interference needs --x-min/--x-max, or --lambda-min/--lambda-max with --tau\n";
    return 2;
  }

  try {
    if (app.got_subcommand(itf)) return run_interference(ia, lmin->count() > 0);
    if (app.got_subcommand(rg)) return run_regime(ra);
    if (app.got_subcommand(kn)) return run_kaon(ka);
    if (app.got_subcommand(ps)) return run_pathsum(pa);
    if (app.got_subcommand(at)) return run_attractor(aa);
    if (app.got_subcommand(vf)) return run_verify(va);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;  // unreachable: require_subcommand(1)
}
