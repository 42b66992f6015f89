#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <vector>

#include "bievolve/interference.hpp"
#include "bievolve/kaon.hpp"
#include "bievolve/linops.hpp"
#include "bievolve/pathsum.hpp"
#include "bievolve/spectral.hpp"
#include "bievolve/verify.hpp"

namespace py = pybind11;
using namespace bievolve;
using linops::Complex;
using linops::ComplexMatrix;
using linops::StateVector;

namespace {

using Rows = std::vector<std::vector<Complex>>;
using Amps = std::vector<Complex>;

ComplexMatrix mat_from_rows(const Rows& rows) {
  const int dim = static_cast<int>(rows.size());
  if (dim == 0) throw std::invalid_argument("matrix: no rows");
  std::vector<Complex> entries;
  entries.reserve(static_cast<size_t>(dim) * dim);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != dim)
      throw std::invalid_argument("matrix: rows must form a square matrix");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return ComplexMatrix(dim, std::move(entries));
}

Rows rows_from_mat(const ComplexMatrix& m) {
  Rows rows(static_cast<size_t>(m.dim()));
  for (int r = 0; r < m.dim(); ++r)
    for (int c = 0; c < m.dim(); ++c) rows[r].push_back(m(r, c));
  return rows;
}

StateVector state_from_amps(const Amps& amps) {
  StateVector psi(static_cast<int>(amps.size()));
  for (size_t i = 0; i < amps.size(); ++i) psi[static_cast<int>(i)] = amps[i];
  return psi;
}

void bind_interference(py::module_& m) {
  py::class_<interference::ProfileSample>(m, "ProfileSample")
      .def_readonly("x", &interference::ProfileSample::x)
      .def_readonly("value", &interference::ProfileSample::value)
      .def_readonly("log_abs", &interference::ProfileSample::log_abs)
      .def_readonly("norm_abs", &interference::ProfileSample::norm_abs)
      .def_readonly("quad", &interference::ProfileSample::quad);

  py::class_<interference::InterferenceProfile>(m, "InterferenceProfile")
      .def_readonly("m", &interference::InterferenceProfile::m)
      .def_readonly("n", &interference::InterferenceProfile::n)
      .def_readonly("normalized", &interference::InterferenceProfile::normalized)
      .def_readonly("width", &interference::InterferenceProfile::width)
      .def_readonly("peak_log_modulus", &interference::InterferenceProfile::peak_log_modulus)
      .def_readonly("samples", &interference::InterferenceProfile::samples);

  m.def("eval", &interference::eval_closed_form, "I_{m,n}(x) via the closed product form.",
        py::arg("m"), py::arg("n"), py::arg("x"));
  m.def(
      "eval_log",
      [](int mm, int nn, double x) {
        const auto lc = interference::eval_closed_form_log(mm, nn, x);
        return py::make_tuple(lc.log_abs, lc.phase);
      },
      "(log|I|, arg I) without overflow for large orders.", py::arg("m"), py::arg("n"),
      py::arg("x"));
  m.def("eval_oracle", &interference::eval_nested_sum_oracle,
        "Brute-force nested-sum evaluation; cost grows as C(m+n, n).", py::arg("m"),
        py::arg("n"), py::arg("x"), py::arg("term_cap") = 10'000'000);
  m.def("modulus", &interference::eval_modulus_product,
        "|I_{m,n}(x)| via the Dirichlet-kernel modulus product.", py::arg("m"), py::arg("n"),
        py::arg("x"));
  m.def("log_binomial", &interference::log_binomial, "ln C(n, k).", py::arg("n"), py::arg("k"));
  m.def("peak_width", &interference::peak_width,
        "Half-width W = sqrt(24 / (n m (n+m+1))) of the central peak.", py::arg("m"),
        py::arg("n"));
  m.def("quadratic_approx_normalized", &interference::quadratic_approx_normalized,
        "max(0, 1 - x^2/W^2): small-x model of |I|/C.", py::arg("m"), py::arg("n"),
        py::arg("x"));
  m.def("x_from_tau_lambda", &interference::x_from_tau_lambda,
        "Phase argument x = tau^2 lambda.", py::arg("tau"), py::arg("lam"));
  m.def("sample_profile", &interference::sample_profile, "Evenly sampled profile over x.",
        py::arg("m"), py::arg("n"), py::arg("x_min"), py::arg("x_max"), py::arg("steps"),
        py::arg("normalized") = false, py::arg("max_threads") = 0);
}

void bind_pathsum(py::module_& m) {
  m.attr("RECURSION_CAP") = pathsum::kRecursionCap;

  py::class_<pathsum::BiHamiltonian>(m, "BiHamiltonian")
      .def(py::init([](const Rows& hf, const Rows& hb, double tau) {
             return pathsum::BiHamiltonian(mat_from_rows(hf), mat_from_rows(hb), tau);
           }),
           py::arg("hf"), py::arg("hb"), py::arg("tau"))
      .def_property_readonly("tau", &pathsum::BiHamiltonian::tau)
      .def_property_readonly("dim", &pathsum::BiHamiltonian::dim)
      .def_property_readonly("commutator_norm", &pathsum::BiHamiltonian::commutator_norm)
      .def("t_invariant", &pathsum::BiHamiltonian::t_invariant)
      .def(
          "uf", [](const pathsum::BiHamiltonian& bh, double t) { return rows_from_mat(bh.uf(t)); },
          "exp(-i t H_F) as nested lists.", py::arg("t"))
      .def(
          "ub", [](const pathsum::BiHamiltonian& bh, double t) { return rows_from_mat(bh.ub(t)); },
          "exp(+i t H_B) as nested lists.", py::arg("t"));

  py::class_<pathsum::PathSumResult>(m, "PathSumResult")
      .def_readonly("n_steps", &pathsum::PathSumResult::n_steps)
      .def_readonly("norms", &pathsum::PathSumResult::norms)
      .def_property_readonly("per_n",
                             [](const pathsum::PathSumResult& r) {
                               std::vector<Amps> out;
                               for (const auto& v : r.per_n) out.push_back(v.amplitudes);
                               return out;
                             })
      .def_property_readonly(
          "total", [](const pathsum::PathSumResult& r) { return r.total.amplitudes; });

  py::class_<pathsum::AttractorResult>(m, "AttractorResult")
      .def_property_readonly(
          "state", [](const pathsum::AttractorResult& r) { return r.state.amplitudes; })
      .def_readonly("dominant_energy", &pathsum::AttractorResult::dominant_energy)
      .def_readonly("dominant_abs_cos", &pathsum::AttractorResult::dominant_abs_cos)
      .def_readonly("zero_energy_overlap", &pathsum::AttractorResult::zero_energy_overlap)
      .def_readonly("converged_to_zero_energy",
                    &pathsum::AttractorResult::converged_to_zero_energy)
      .def_readonly("spectral_condition_ok", &pathsum::AttractorResult::spectral_condition_ok);

  m.def(
      "symmetric_evolve",
      [](const pathsum::BiHamiltonian& bh, const Amps& psi0, int n_steps, double theta) {
        return pathsum::symmetric_evolve(bh, state_from_amps(psi0), n_steps, theta);
      },
      "N applications of U_F + e^{i theta} U_B with per-path decomposition.", py::arg("bh"),
      py::arg("psi0"), py::arg("n_steps"), py::arg("theta") = 0.0);
  m.def(
      "s_mn_exact",
      [](const pathsum::BiHamiltonian& bh, int mm, int nn) {
        return rows_from_mat(pathsum::s_mn_exact(bh, mm, nn));
      },
      "Exact path-class operator S_{m,n}.", py::arg("bh"), py::arg("m"), py::arg("n"));
  m.def(
      "s_mn_spectral",
      [](const pathsum::BiHamiltonian& bh, int mm, int nn) {
        return rows_from_mat(pathsum::s_mn_spectral(bh, mm, nn));
      },
      "Reordered spectral form of S_{m,n}; differs by O(tau^3).", py::arg("bh"), py::arg("m"),
      py::arg("n"));
  m.def(
      "bievolution_state",
      [](const pathsum::BiHamiltonian& bh, const Amps& psi0, double t) {
        auto [f, b] = pathsum::bievolution_state(bh, state_from_amps(psi0), t);
        return py::make_tuple(f.amplitudes, b.amplitudes);
      },
      "(U_F(t) psi0, U_B(t) psi0).", py::arg("bh"), py::arg("psi0"), py::arg("t"));
  m.def(
      "bievolution_derivative",
      [](const pathsum::BiHamiltonian& bh, const Amps& psi0, double t) {
        return pathsum::bievolution_derivative(bh, state_from_amps(psi0), t).amplitudes;
      },
      "d/dt of the branch sum U_F(t) psi0 + U_B(t) psi0.", py::arg("bh"), py::arg("psi0"),
      py::arg("t"));
  m.def(
      "check_nonzero_condition",
      [](const pathsum::BiHamiltonian& bh, const Amps& psi0) {
        return pathsum::check_nonzero_condition(bh, state_from_amps(psi0));
      },
      "Kernel-overlap fraction of psi0 under i[H_F, H_B]; 0 means bievolution applies.",
      py::arg("bh"), py::arg("psi0"));
  m.def(
      "general_origin_evolve",
      [](const pathsum::BiHamiltonian& bh, const Amps& psi0, int n_steps) {
        auto [perp, par] = pathsum::general_origin_evolve(bh, state_from_amps(psi0), n_steps);
        return py::make_tuple(perp.amplitudes, par.amplitudes);
      },
      "Split evolution of the kernel-perpendicular and kernel-parallel parts.", py::arg("bh"),
      py::arg("psi0"), py::arg("n_steps"));
  m.def(
      "attractor_evolve",
      [](const Rows& h, const Amps& psi0, double tau, int n_steps) {
        return pathsum::attractor_evolve(mat_from_rows(h), state_from_amps(psi0), tau, n_steps);
      },
      "Normalized cos^N(H tau) psi0 with log-domain amplitude tracking.", py::arg("h"),
      py::arg("psi0"), py::arg("tau"), py::arg("n_steps"));
  m.def(
      "half_difference_limit",
      [](const pathsum::BiHamiltonian& bh, double t_tot, int n_steps, const Amps& psi0) {
        return pathsum::half_difference_limit(bh, t_tot, n_steps, state_from_amps(psi0))
            .amplitudes;
      },
      "2^-N [U_F + U_B]^N psi0 -> exp(-i (H_F - H_B) t/2) psi0, O(1/N) error.", py::arg("bh"),
      py::arg("t_tot"), py::arg("n_steps"), py::arg("psi0"));
}

void bind_kaon(py::module_& m) {
  py::class_<kaon::KaonParams>(m, "KaonParams")
      .def(py::init<>())
      .def_readwrite("delta_m", &kaon::KaonParams::delta_m)
      .def_readwrite("delta_gamma", &kaon::KaonParams::delta_gamma)
      .def_readwrite("eps_abs", &kaon::KaonParams::eps_abs)
      .def_readwrite("eps_arg", &kaon::KaonParams::eps_arg)
      .def_readwrite("theta", &kaon::KaonParams::theta)
      .def_readwrite("m_sum", &kaon::KaonParams::m_sum)
      .def_readwrite("gamma_sum", &kaon::KaonParams::gamma_sum);

  py::class_<kaon::KaonCommutatorResult>(m, "KaonCommutatorResult")
      .def_readonly("a_value", &kaon::KaonCommutatorResult::a_value)
      .def_readonly("b_value", &kaon::KaonCommutatorResult::b_value)
      .def_property_readonly("eigenvalues",
                             [](const kaon::KaonCommutatorResult& r) {
                               return std::vector<Complex>(r.eigenvalues.begin(),
                                                           r.eigenvalues.end());
                             })
      .def_readonly("lambda1", &kaon::KaonCommutatorResult::lambda1);

  m.def("expansion_valid", &kaon::expansion_valid,
        "Whether |eps| is small enough for the first-order construction.", py::arg("params"));
  m.def(
      "mass_matrix",
      [](const kaon::KaonParams& p) { return rows_from_mat(kaon::lee_wolfenstein_m(p)); },
      "Hermitian 2x2 mass matrix to first order in |eps|.", py::arg("params"));
  m.def(
      "decay_matrix",
      [](const kaon::KaonParams& p) { return rows_from_mat(kaon::lee_wolfenstein_gamma(p)); },
      "Companion decay matrix to the same order.", py::arg("params"));
  m.def(
      "hb_from_hf",
      [](const Rows& hf, double theta) { return rows_from_mat(kaon::hb_from_hf(mat_from_rows(hf), theta)); },
      "CP conjugate (CP)^-1 H (CP); swaps diagonal and off-diagonal entries.", py::arg("hf"),
      py::arg("theta") = 0.0);
  m.def(
      "commutator_2x2",
      [](const Rows& hf) { return kaon::commutator_2x2(mat_from_rows(hf)); },
      "Closed-form commutator of a 2x2 H with its CP conjugate.", py::arg("hf"));
  m.def("eigenvalue_closed_form", &kaon::eigenvalue_closed_form,
        "i sqrt(2)|eps| (delta_gamma delta_m / 2 + delta_m^2).", py::arg("params"));
  m.def("epsilon_phase", &kaon::epsilon_phase, "(1 - eps) / (1 + eps), exact.",
        py::arg("eps_abs"), py::arg("eps_arg"));
  m.def("epsilon_phase_first_order", &kaon::epsilon_phase_first_order,
        "First-order expansion 1 - 2 eps.", py::arg("eps_abs"), py::arg("eps_arg"));
}

void bind_spectral(py::module_& m) {
  py::class_<spectral::LogScaled>(m, "LogScaled")
      .def_readonly("log10_value", &spectral::LogScaled::log10_value)
      .def_static("from_value", &spectral::LogScaled::from_value, py::arg("v"))
      .def_static("from_log10", &spectral::LogScaled::from_log10, py::arg("l"))
      .def("mantissa", &spectral::LogScaled::mantissa)
      .def("exp10", &spectral::LogScaled::exp10)
      .def("value", &spectral::LogScaled::value)
      .def("__repr__", [](const spectral::LogScaled& v) {
        return "LogScaled(" + std::to_string(v.mantissa()) + "e" + std::to_string(v.exp10()) +
               ")";
      });

  py::class_<spectral::EnsembleModel>(m, "EnsembleModel")
      .def(py::init<>())
      .def_readwrite("f", &spectral::EnsembleModel::f)
      .def_readwrite("total_particles", &spectral::EnsembleModel::total_particles)
      .def_readwrite("lambda1", &spectral::EnsembleModel::lambda1)
      .def_readwrite("tau", &spectral::EnsembleModel::tau)
      .def("particles", &spectral::EnsembleModel::particles);

  py::enum_<spectral::Regime>(m, "Regime")
      .value("Broad", spectral::Regime::Broad)
      .value("Narrow", spectral::Regime::Narrow)
      .value("Intermediate", spectral::Regime::Intermediate);

  py::class_<spectral::RegimeConfig>(m, "RegimeConfig")
      .def(py::init<>())
      .def_readwrite("broad_factor", &spectral::RegimeConfig::broad_factor)
      .def_readwrite("narrow_factor", &spectral::RegimeConfig::narrow_factor)
      .def_readwrite("sd_multiplier", &spectral::RegimeConfig::sd_multiplier);

  py::class_<spectral::RegimeReport>(m, "RegimeReport")
      .def_readonly("width", &spectral::RegimeReport::width)
      .def_readonly("lambda_sd", &spectral::RegimeReport::lambda_sd)
      .def_readonly("ratio", &spectral::RegimeReport::ratio)
      .def_readonly("classification", &spectral::RegimeReport::classification)
      .def_readonly("t23_seconds", &spectral::RegimeReport::t23_seconds)
      .def_readonly("t13_seconds", &spectral::RegimeReport::t13_seconds)
      .def_readonly("n_steps", &spectral::RegimeReport::n_steps)
      .def_readonly("n_forward", &spectral::RegimeReport::n_forward);

  m.def("degeneracy_density", &spectral::degeneracy_density, "ln C(M, M/2 + k).",
        py::arg("m_particles"), py::arg("k"));
  m.def("gaussian_density_approx", &spectral::gaussian_density_approx,
        "sqrt(2/(pi M)) exp(-2 k^2 / M).", py::arg("m_particles"), py::arg("k"));
  m.def("lambda_sd", &spectral::lambda_sd, "0.5 sqrt(M) |lambda1| for M = f N_total.",
        py::arg("model"));
  m.def("interference_width", &spectral::interference_width,
        "Peak width in eigenvalue units for an N-step evolution.", py::arg("tau"),
        py::arg("n_steps"), py::arg("n_forward"));
  m.def("regime_classify", &spectral::regime_classify,
        "Broad/Narrow/Intermediate interference regime for (N, n).", py::arg("model"),
        py::arg("n_steps"), py::arg("n_forward"), py::arg("config") = spectral::RegimeConfig{});
  m.def("t23_boundary", &spectral::t23_boundary, "1 / (tau^(1/3) lambda_SD^(2/3)), seconds.",
        py::arg("model"));
  m.def("t13_boundary", &spectral::t13_boundary, "sqrt(24) / (tau lambda_SD), seconds.",
        py::arg("model"));
}

void bind_linops(py::module_& m) {
  m.def(
      "mat_exp",
      [](const Rows& a, Complex scale) { return rows_from_mat(linops::mat_exp(mat_from_rows(a), scale)); },
      "exp(scale * a) by scaling-and-squaring.", py::arg("a"),
      py::arg("scale") = Complex(1.0, 0.0));
  m.def(
      "commutator",
      [](const Rows& a, const Rows& b) {
        return rows_from_mat(linops::commutator(mat_from_rows(a), mat_from_rows(b)));
      },
      "a b - b a.", py::arg("a"), py::arg("b"));
  m.def(
      "eigenvalues",
      [](const Rows& a) {
        const auto sd = linops::hermitian_eigendecomposition(mat_from_rows(a));
        return py::make_tuple(sd.eigenvalues, sd.multiplicities);
      },
      "(distinct eigenvalues ascending, multiplicities) of a Hermitian matrix.", py::arg("a"));
}

}  // namespace

PYBIND11_MODULE(_bievolve, m) {
  m.doc() = "Symmetric bidirectional evolution: interference closed forms, path sums, "
            "the kaon commutator scale, and ensemble regime analysis.";

  auto interference_m = m.def_submodule("interference", "Interference function I_{m,n}(x).");
  bind_interference(interference_m);

  auto pathsum_m = m.def_submodule("pathsum", "Two-Hamiltonian path sums.");
  bind_pathsum(pathsum_m);

  auto kaon_m = m.def_submodule("kaon", "Neutral-kaon commutator estimate.");
  bind_kaon(kaon_m);

  auto spectral_m = m.def_submodule("spectral", "Ensemble spectra and regimes.");
  bind_spectral(spectral_m);

  auto linops_m = m.def_submodule("linops", "Small dense Hermitian utilities.");
  bind_linops(linops_m);

  auto verify_m = m.def_submodule("verify", "Randomized self-checks.");
  verify_m.def(
      "run",
      [](const std::string& suite, std::uint64_t seed) {
        return verify::report_json(verify::run(suite, seed));
      },
      "JSON report of the named property suite ('all' runs every suite).", py::arg("suite"),
      py::arg("seed"));
}
