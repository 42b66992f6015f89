#include "bievolve/verify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "bievolve/interference.hpp"
#include "bievolve/kaon.hpp"
#include "bievolve/spectral.hpp"

namespace bievolve::verify {

using linops::Complex;
using linops::ComplexMatrix;
using linops::StateVector;

bool SuiteReport::all_pass() const {
  for (const auto& p : properties) {
    if (!p.pass) return false;
  }
  return !properties.empty();
}

double Rng::unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

int Rng::uniform_int(int lo, int hi) {
  return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
}

Complex Rng::complex_in_disc(double radius) {
  const double r = radius * std::sqrt(unit());
  const double a = 2.0 * M_PI * unit();
  return {r * std::cos(a), r * std::sin(a)};
}

ComplexMatrix Rng::hermitian(int dim, double scale) {
  ComplexMatrix h(dim);
  for (int r = 0; r < dim; ++r) {
    h(r, r) = Complex(uniform(-scale, scale), 0.0);
    for (int c = r + 1; c < dim; ++c) {
      h(r, c) = complex_in_disc(scale);
      h(c, r) = std::conj(h(r, c));
    }
  }
  return h;
}

StateVector Rng::state(int dim) {
  StateVector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = complex_in_disc(1.0);
  if (v.norm() < 1e-6) v[0] += 1.0;  // vanishing draw; vanishing probability
  return v.normalized();
}

ComplexMatrix enumerate_orderings(const pathsum::BiHamiltonian& bh, int m, int n) {
  if (m < 0 || n < 0) throw std::invalid_argument("enumerate_orderings: m, n must be >= 0");
  if (m + n > 16) throw std::invalid_argument("enumerate_orderings: m + n too large to enumerate");
  const ComplexMatrix uf = bh.uf(bh.tau());
  const ComplexMatrix ub = bh.ub(bh.tau());
  const int total = m + n;
  ComplexMatrix sum = ComplexMatrix::zero(bh.dim());
  for (std::uint32_t mask = 0; mask < (1u << total); ++mask) {
    if (std::popcount(mask) != n) continue;
    ComplexMatrix prod = ComplexMatrix::identity(bh.dim());
    for (int pos = 0; pos < total; ++pos) {
      prod = prod * (((mask >> pos) & 1u) ? uf : ub);
    }
    sum += prod;
  }
  return sum;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Check {
 public:
  Check(std::string name, double tolerance) {
    result_.name = std::move(name);
    result_.tolerance = tolerance;
  }
  void record(double err) {
    if (std::isnan(err)) err = kInf;
    ++result_.samples;
    result_.max_error = std::max(result_.max_error, err);
  }
  void record_flag(bool ok) { record(ok ? 0.0 : 1.0); }
  PropertyResult done() {
    result_.pass = result_.samples > 0 && result_.max_error <= result_.tolerance;
    return result_;
  }

 private:
  PropertyResult result_;
};

double rel_err(Complex got, Complex want) {
  const double scale = std::max({std::abs(got), std::abs(want), 1e-300});
  return std::abs(got - want) / scale;
}

double mat_err(const ComplexMatrix& got, const ComplexMatrix& want) {
  return (got - want).max_abs() / std::max(want.max_abs(), 1e-300);
}

double vec_err(const StateVector& got, const StateVector& want) {
  return (got - want).norm() / std::max(want.norm(), 1e-300);
}

std::uint64_t suite_stream(std::uint64_t seed, const std::string& name) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a, keyed by suite name
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h ^ seed;
}

// ---------------------------------------------------------------------------
// interference

SuiteReport interference_suite(std::uint64_t seed) {
  namespace itf = interference;
  SuiteReport rep;
  rep.suite = "interference";
  rep.seed = seed;
  Rng rng(suite_stream(seed, rep.suite));

  {
    // Closed form against the literal nested sum, every order pair up to 6.
    Check ck("closed_form_vs_oracle", 1e-11);
    for (int m = 0; m <= 6; ++m) {
      for (int n = 0; n <= 6; ++n) {
        for (int t = 0; t < 25; ++t) {
          const double x = rng.uniform(-M_PI, M_PI);
          const Complex oracle = itf::eval_nested_sum_oracle(m, n, x);
          const Complex closed = itf::eval_closed_form(m, n, x);
          // err <= tol  <=>  |diff| <= tol*|oracle| + 1e-13
          ck.record(std::abs(closed - oracle) / (std::abs(oracle) + 1e-2));
        }
      }
    }
    rep.properties.push_back(ck.done());
  }

  {
    Check ck("symmetry_generic", 1e-11);
    for (int t = 0; t < 200; ++t) {
      const int m = rng.uniform_int(0, 12);
      const int n = rng.uniform_int(0, 12);
      const double x = rng.uniform(-10.0, 10.0);
      ck.record(rel_err(itf::eval_closed_form(m, n, x), itf::eval_closed_form(n, m, x)));
    }
    rep.properties.push_back(ck.done());
  }

  {
    // x pinned within 1e-6 of every rational singular point 2*pi*j/q, q <= 12.
    Check ck("symmetry_near_singular", 1e-9);
    const double deltas[] = {1e-6, -1e-6, 1e-7, -1e-7, 1e-9, -1e-9};
    for (int q = 1; q <= 12; ++q) {
      for (int j = 1; j < q || (q == 1 && j == 1); ++j) {
        if (std::gcd(j, q) != 1) continue;
        for (double d : deltas) {
          const double x = 2.0 * M_PI * j / q + d;
          const int m = rng.uniform_int(0, 12);
          const int n = rng.uniform_int(0, 12);
          ck.record(rel_err(itf::eval_closed_form(m, n, x), itf::eval_closed_form(n, m, x)));
        }
      }
    }
    rep.properties.push_back(ck.done());
  }

  {
    Check ck("periodicity", 1e-11);
    for (int t = 0; t < 100; ++t) {
      const int m = rng.uniform_int(0, 8);
      const int n = rng.uniform_int(0, 8);
      const double x = rng.uniform(-M_PI, M_PI);
      ck.record(rel_err(itf::eval_closed_form(m, n, x + 2.0 * M_PI), itf::eval_closed_form(m, n, x)));
    }
    rep.properties.push_back(ck.done());
  }

  {
    // Peak log-modulus is exactly ln C(m+n, n); includes the figure-scale sets.
    Check ck("peak_log_binomial", 1e-10);
    const int fixed[][2] = {{0, 0},  {1, 1},    {3, 9},       {100, 400},  {250, 250},
                            {1000, 1000}, {1600, 400}, {400, 7600}, {7600, 400}};
    for (const auto& p : fixed) {
      const auto lc = itf::eval_closed_form_log(p[0], p[1], 0.0);
      ck.record(std::abs(lc.log_abs - itf::log_binomial(p[0] + p[1], p[1])));
      ck.record(std::abs(lc.phase));
    }
    for (int t = 0; t < 20; ++t) {
      const int m = rng.uniform_int(0, 1000);
      const int n = rng.uniform_int(0, 1000);
      const auto lc = itf::eval_closed_form_log(m, n, 0.0);
      ck.record(std::abs(lc.log_abs - itf::log_binomial(m + n, n)));
    }
    rep.properties.push_back(ck.done());
  }

  {
    // Dirichlet-kernel modulus route against the closed form, log domain.
    Check ck("modulus_product_match", 1e-9);
    for (int t = 0; t < 150; ++t) {
      const int m = rng.uniform_int(1, 12);
      const int n = rng.uniform_int(1, 12);
      const double x = rng.uniform(-M_PI, M_PI);
      const double lhs = itf::eval_modulus_product(m, n, x);
      const double rhs = itf::eval_closed_form_log(m, n, x).log_abs;
      if (std::isinf(lhs) && std::isinf(rhs)) {
        ck.record(0.0);
      } else {
        ck.record(std::abs(lhs - rhs));
      }
    }
    for (int q = 2; q <= 8; ++q) {
      const double x = 2.0 * M_PI / q + 1e-7;
      const int m = rng.uniform_int(1, 12);
      const int n = rng.uniform_int(1, 12);
      ck.record(std::abs(itf::eval_modulus_product(m, n, x) -
                         itf::eval_closed_form_log(m, n, x).log_abs));
    }
    rep.properties.push_back(ck.done());
  }

  {
    // Quadratic model tracks the normalized modulus near the peak (figure
    // parameters N=500, n=100).
    Check ck("quadratic_peak_band", 0.02);
    const int m = 400, n = 100;
    const double w = itf::peak_width(m, n);
    const double peak = itf::log_binomial(m + n, n);
    for (int i = 0; i <= 50; ++i) {
      const double x = -0.25 * w + 0.5 * w * i / 50.0;
      const double norm = std::exp(itf::eval_closed_form_log(m, n, x).log_abs - peak);
      const double quad = itf::quadratic_approx_normalized(m, n, x);
      ck.record(std::abs(norm - quad) / quad);
    }
    rep.properties.push_back(ck.done());
  }

  {
    // W is the zero of the quadratic model by construction.
    Check ck("width_quad_zero", 1e-12);
    for (int t = 0; t < 50; ++t) {
      const int m = rng.uniform_int(1, 2000);
      const int n = rng.uniform_int(1, 2000);
      const double w = itf::peak_width(m, n);
      const double c = static_cast<double>(n) * m * (static_cast<double>(n) + m + 1.0) / 24.0;
      ck.record(std::abs(1.0 - c * w * w));
      ck.record(std::abs(itf::peak_width(n, m) - w));
    }
    rep.properties.push_back(ck.done());
  }

  return rep;
}

// ---------------------------------------------------------------------------
// pathsum (includes the linops invariants it is built on)

SuiteReport pathsum_suite(std::uint64_t seed) {
  SuiteReport rep;
  rep.suite = "pathsum";
  rep.seed = seed;
  Rng rng(suite_stream(seed, rep.suite));

  const ComplexMatrix sigma_x(2, {0.0, 1.0, 1.0, 0.0});
  const ComplexMatrix sigma_y(2, {0.0, Complex(0, -1), Complex(0, 1), 0.0});

  {
    Check ck("mat_exp_unitary_group", 1e-10);
    for (int t = 0; t < 30; ++t) {
      const int dim = rng.uniform_int(2, 6);
      const ComplexMatrix h = rng.hermitian(dim, 2.0);
      const double t1 = rng.uniform(-3.0, 3.0);
      const double t2 = rng.uniform(-3.0, 3.0);
      const ComplexMatrix u1 = linops::mat_exp(h, Complex(0, -t1));
      const ComplexMatrix u2 = linops::mat_exp(h, Complex(0, -t2));
      const ComplexMatrix u12 = linops::mat_exp(h, Complex(0, -(t1 + t2)));
      ck.record((u1.adjoint() * u1 - ComplexMatrix::identity(dim)).max_abs());
      ck.record((u1 * u2 - u12).max_abs() / std::max(1.0, u12.max_abs()));
    }
    rep.properties.push_back(ck.done());
  }

  {
    // Taylor core against the independent spectral route.
    Check ck("mat_exp_vs_spectral_route", 1e-10);
    for (int t = 0; t < 20; ++t) {
      const int dim = rng.uniform_int(2, 6);
      const ComplexMatrix h = rng.hermitian(dim, 2.0);
      const double s = rng.uniform(-3.0, 3.0);
      ck.record(mat_err(linops::mat_exp(h, Complex(0, s)), linops::mat_exp_hermitian(h, Complex(0, s))));
    }
    rep.properties.push_back(ck.done());
  }

  {
    Check ck("spectral_reconstruction", 1e-10);
    for (int t = 0; t < 30; ++t) {
      const int dim = rng.uniform_int(2, 6);
      const ComplexMatrix h = rng.hermitian(dim, 1.5);
      const auto dec = linops::hermitian_eigendecomposition(h);
      ComplexMatrix sum_p = ComplexMatrix::zero(dim);
      ComplexMatrix recon = ComplexMatrix::zero(dim);
      double err = 0.0;
      for (std::size_t i = 0; i < dec.projectors.size(); ++i) {
        sum_p += dec.projectors[i];
        recon += Complex(dec.eigenvalues[i], 0.0) * dec.projectors[i];
        for (std::size_t j = 0; j < dec.projectors.size(); ++j) {
          const ComplexMatrix prod = dec.projectors[i] * dec.projectors[j];
          const ComplexMatrix want = i == j ? dec.projectors[i] : ComplexMatrix::zero(dim);
          err = std::max(err, (prod - want).max_abs());
        }
      }
      err = std::max(err, (sum_p - ComplexMatrix::identity(dim)).max_abs());
      err = std::max(err, (recon - h).max_abs() / std::max(1.0, h.max_abs()));
      ck.record(err);
    }
    rep.properties.push_back(ck.done());
  }

  {
    // Shift a random Hermitian so one eigenspace sits at zero; the kernel
    // projector must absorb exactly that eigenspace.
    Check ck("kernel_projector_action", 1e-9);
    for (int t = 0; t < 20; ++t) {
      const int dim = rng.uniform_int(2, 5);
      ComplexMatrix h = rng.hermitian(dim, 1.5);
      auto dec0 = linops::hermitian_eigendecomposition(h);
      const std::size_t pick = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(dec0.projectors.size()) - 1));
      const double shift = dec0.eigenvalues[pick];
      h -= Complex(shift, 0.0) * ComplexMatrix::identity(dim);
      const auto dec = linops::hermitian_eigendecomposition(h);
      const ComplexMatrix pi0 = linops::kernel_projector(dec);
      ck.record((h * pi0).max_abs() / std::max(1.0, h.max_abs()));
      ck.record(mat_err(pi0, dec0.projectors[pick]));
    }
    rep.properties.push_back(ck.done());
  }

  {
    // sum_n S_{N-n,n} psi0 recomposes the N-step evolution, any branch phase.
    Check ck("decomposition_identity", 1e-9);
    for (int t = 0; t < 20; ++t) {
      const int dim = rng.uniform_int(2, 3);
      const double tau = rng.uniform(0.1, 0.6);
      const pathsum::BiHamiltonian bh(rng.hermitian(dim, 1.0), rng.hermitian(dim, 1.0), tau);
      const StateVector psi0 = rng.state(dim);
      const int n_steps = rng.uniform_int(1, 12);
      const double theta = (t % 2 == 0) ? 0.0 : rng.uniform(-M_PI, M_PI);
      const auto res = pathsum::symmetric_evolve(bh, psi0, n_steps, theta);
      StateVector sum(dim);
      double scale = 0.0;
      for (int n = 0; n <= n_steps; ++n) {
        sum = sum + res.per_n[static_cast<std::size_t>(n)];  // branch phase already folded in
        scale += res.norms[static_cast<std::size_t>(n)];
      }
      ck.record((sum - res.total).norm() / scale);
    }
    rep.properties.push_back(ck.done());
  }

  {
    // Recursion against the brute-force sum over all C(m+n, n) orderings.
    Check ck("ordering_enumeration", 1e-11);
    const pathsum::BiHamiltonian bh(rng.hermitian(3, 1.0), rng.hermitian(3, 1.0), 0.37);
    for (int m = 0; m <= 8; ++m) {
      for (int n = 0; m + n <= 8; ++n) {
        const ComplexMatrix brute = enumerate_orderings(bh, m, n);
        const ComplexMatrix fast = pathsum::s_mn_exact(bh, m, n);
        ck.record((fast - brute).max_abs() / std::max(1.0, brute.max_abs()));
      }
    }
    rep.properties.push_back(ck.done());
  }

  {
    // ||s_mn_exact - s_mn_spectral|| ~ O(tau^3): log-log slope 3 +- 0.3.
    Check ck("spectral_slope", 0.3);
    for (int dim = 2; dim <= 3; ++dim) {
      const ComplexMatrix hf = rng.hermitian(dim, 1.0);
      const ComplexMatrix hb = rng.hermitian(dim, 1.0);
      const double taus[] = {0.1, 0.05, 0.025};
      double lx[3], ly[3];
      for (int i = 0; i < 3; ++i) {
        const pathsum::BiHamiltonian bh(hf, hb, taus[i]);
        const double err = (pathsum::s_mn_exact(bh, 3, 3) - pathsum::s_mn_spectral(bh, 3, 3)).frobenius_norm();
        lx[i] = std::log(taus[i]);
        ly[i] = std::log(err);
      }
      const double mx = (lx[0] + lx[1] + lx[2]) / 3.0;
      const double my = (ly[0] + ly[1] + ly[2]) / 3.0;
      double num = 0.0, den = 0.0;
      for (int i = 0; i < 3; ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
      }
      ck.record(std::abs(num / den - 3.0));
    }
    rep.properties.push_back(ck.done());
  }

  {
    // H_F = H_B: every path commutes, so S_{N-n,n} = C(N,n) e^{i(N-2n) tau H}.
    Check ck("t_invariant_closed_form", 1e-10);
    for (int t = 0; t < 3; ++t) {
      const int dim = rng.uniform_int(2, 3);
      const ComplexMatrix h = rng.hermitian(dim, 1.0);
      const double tau = rng.uniform(0.2, 0.5);
      const pathsum::BiHamiltonian bh(h, h, tau);
      for (int n_steps = 1; n_steps <= 12; ++n_steps) {
        for (int n = 0; n <= n_steps; ++n) {
          const int m = n_steps - n;
          const double c = std::exp(interference::log_binomial(n_steps, n));
          const ComplexMatrix want =
              Complex(c, 0.0) * linops::mat_exp(h, Complex(0.0, (n_steps - 2.0 * n) * tau));
          ck.record((pathsum::s_mn_exact(bh, m, n) - want).max_abs() / c);
        }
      }
    }
    rep.properties.push_back(ck.done());
  }

  {
    // sigma_x / sigma_y fixture, tau = 0.5, N = 40. Spectrum of i[H_F,H_B] is
    // {-2, +2} and psi0 = (1,0) sits in the -2 eigenspace, so the reordered
    // path weight at the central n is exactly I_{20,20}(-2 tau^2).
    const pathsum::BiHamiltonian bh(sigma_x, sigma_y, 0.5);
    const StateVector psi0{1.0, 0.0};
    const auto res = pathsum::symmetric_evolve(bh, psi0, 40);
    const double log_c = interference::log_binomial(40, 20);

    Check center("destructive_center_suppression", 1e-2);
    const double spectral_ratio =
        (pathsum::s_mn_spectral(bh, 20, 20) * psi0).norm() / std::exp(log_c);
    center.record(spectral_ratio);
    rep.properties.push_back(center.done());

    Check ends("destructive_end_paths", 1e-12);
    ends.record(std::abs(res.norms[0] - 1.0));
    ends.record(std::abs(res.norms[40] - 1.0));
    rep.properties.push_back(ends.done());

    Check cross("destructive_cross_check", 1e-9);
    const double predicted = std::exp(interference::eval_closed_form_log(20, 20, -0.5).log_abs - log_c);
    cross.record(std::abs(spectral_ratio - predicted) / predicted);
    rep.properties.push_back(cross.done());

    // Full dynamics at tau = 0.5 carries Zassenhaus corrections that cap the
    // achievable suppression well above the reordered-path weight; the exact
    // central norm still drops an order of magnitude below the binomial.
    Check exact("destructive_exact_dynamics", 0.25);
    exact.record(res.norms[20] / std::exp(log_c));
    rep.properties.push_back(exact.done());

    Check sym("symmetry_transfer", 1e-10);
    const auto res12 = pathsum::symmetric_evolve(bh, psi0, 12);
    for (int n = 0; n <= 12; ++n) {
      sym.record(std::abs(res12.norms[static_cast<std::size_t>(n)] -
                          res12.norms[static_cast<std::size_t>(12 - n)]) /
                 res12.norms[static_cast<std::size_t>(n)]);
    }
    for (int n = 0; n <= 40; ++n) {
      sym.record(std::abs(res.norms[static_cast<std::size_t>(n)] -
                          res.norms[static_cast<std::size_t>(40 - n)]) /
                 res.norms[static_cast<std::size_t>(n)]);
    }
    rep.properties.push_back(sym.done());
  }

  {
    Check ck("bievolution_unitarity", 1e-10);
    for (int t = 0; t < 20; ++t) {
      const int dim = rng.uniform_int(2, 3);
      const pathsum::BiHamiltonian bh(rng.hermitian(dim, 1.0), rng.hermitian(dim, 1.0), 0.3);
      const StateVector psi0 = rng.state(dim);
      const auto [fwd, bwd] = pathsum::bievolution_state(bh, psi0, rng.uniform(0.0, 5.0));
      ck.record(std::abs(fwd.norm() - 1.0));
      ck.record(std::abs(bwd.norm() - 1.0));
    }
    rep.properties.push_back(ck.done());
  }

  {
    // d/dt (U_F + U_B) psi0: forward differences converge at first order, so
    // the error ratio between delta = 1e-3 and 1e-4 sits near 10.
    Check ck("bievolution_derivative_fd", 3.0);
    for (int t = 0; t < 10; ++t) {
      const int dim = rng.uniform_int(2, 3);
      const pathsum::BiHamiltonian bh(rng.hermitian(dim, 1.0), rng.hermitian(dim, 1.0), 0.3);
      const StateVector psi0 = rng.state(dim);
      const double at = rng.uniform(0.1, 1.0);
      const StateVector d = pathsum::bievolution_derivative(bh, psi0, at);
      auto sum_at = [&](double tt) {
        const auto [fwd, bwd] = pathsum::bievolution_state(bh, psi0, tt);
        return fwd + bwd;
      };
      const StateVector base = sum_at(at);
      double errs[2];
      const double deltas[2] = {1e-3, 1e-4};
      for (int i = 0; i < 2; ++i) {
        const StateVector fd = Complex(1.0 / deltas[i], 0.0) * (sum_at(at + deltas[i]) - base);
        errs[i] = (fd - d).norm();
      }
      ck.record(std::abs(errs[0] / errs[1] - 10.0));
    }
    rep.properties.push_back(ck.done());
  }

  {
    // ||Pi(0) psi0|| / ||psi0|| for the three canonical cases: full-rank
    // commutator (0), T-invariant (1), and a half-kernel block split (1/sqrt2).
    Check ck("nonzero_condition_cases", 1e-10);
    const pathsum::BiHamiltonian bh_xy(sigma_x, sigma_y, 0.5);
    ck.record(pathsum::check_nonzero_condition(bh_xy, rng.state(2)));
    const ComplexMatrix h = rng.hermitian(3, 1.0);
    const pathsum::BiHamiltonian bh_t(h, h, 0.5);
    ck.record(std::abs(pathsum::check_nonzero_condition(bh_t, rng.state(3)) - 1.0));
    ComplexMatrix hf4 = ComplexMatrix::zero(4);
    ComplexMatrix hb4 = ComplexMatrix::zero(4);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        hf4(r, c) = sigma_x(r, c);
        hb4(r, c) = sigma_y(r, c);
      }
    }
    hf4(2, 2) = 1.0;
    hf4(3, 3) = -1.0;
    hb4(2, 2) = 1.0;
    hb4(3, 3) = -1.0;
    const pathsum::BiHamiltonian bh_block(hf4, hb4, 0.5);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    StateVector mixed{inv_sqrt2, 0.0, inv_sqrt2, 0.0};
    ck.record(std::abs(pathsum::check_nonzero_condition(bh_block, mixed) - inv_sqrt2));
    rep.properties.push_back(ck.done());
  }

  {
    // The branch phase theta multiplies S_{N-n,n} by a pure phase only.
    Check ck("theta_phase_invariance", 1e-12);
    for (int t = 0; t < 10; ++t) {
      const int dim = rng.uniform_int(2, 3);
      const pathsum::BiHamiltonian bh(rng.hermitian(dim, 1.0), rng.hermitian(dim, 1.0), 0.4);
      const StateVector psi0 = rng.state(dim);
      const int n_steps = rng.uniform_int(1, 10);
      const auto plain = pathsum::symmetric_evolve(bh, psi0, n_steps, 0.0);
      const auto turned = pathsum::symmetric_evolve(bh, psi0, n_steps, 0.7);
      for (int n = 0; n <= n_steps; ++n) {
        const double a = plain.norms[static_cast<std::size_t>(n)];
        const double b = turned.norms[static_cast<std::size_t>(n)];
        ck.record(std::abs(a - b) / std::max(a, 1e-300));
      }
    }
    rep.properties.push_back(ck.done());
  }

  {
    // Log-domain attractor versus the direct matrix-power route.
    Check ck("attractor_route_equivalence", 1e-10);
    for (int t = 0; t < 10; ++t) {
      const int dim = rng.uniform_int(2, 4);
      const ComplexMatrix h = rng.hermitian(dim, 1.0);
      const double tau = rng.uniform(0.1, 0.3);
      const StateVector psi0 = rng.state(dim);
      const ComplexMatrix cos_h =
          Complex(0.5, 0.0) * (linops::mat_exp(h, Complex(0, tau)) + linops::mat_exp(h, Complex(0, -tau)));
      StateVector direct = psi0;
      const int n_steps = 20;
      for (int i = 0; i < n_steps; ++i) direct = cos_h * direct;
      const auto res = pathsum::attractor_evolve(h, psi0, tau, n_steps);
      ck.record(vec_err(res.state, direct.normalized()));
    }
    rep.properties.push_back(ck.done());
  }

  {
    // diag(0, E) with E*tau = pi/3: the E component decays as cos^N(pi/3) = 2^-N.
    Check residual("attractor_constraint_residual", 1e-10);
    ComplexMatrix h2 = ComplexMatrix::zero(2);
    h2(1, 1) = M_PI / 3.0;  // tau = 1
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const StateVector even{inv_sqrt2, inv_sqrt2};
    const auto res200 = pathsum::attractor_evolve(h2, even, 1.0, 200);
    residual.record((h2 * res200.state).norm());
    residual.record(res200.converged_to_zero_energy ? 0.0 : 1.0);
    rep.properties.push_back(residual.done());

    Check amp("attractor_residual_amplitude", 1e-12);
    const auto res4 = pathsum::attractor_evolve(h2, even, 1.0, 4);
    amp.record(std::abs(std::abs(res4.state[1] / res4.state[0]) - 0.0625));
    rep.properties.push_back(amp.done());

    Check flags("attractor_no_kernel_flags", 0.0);
    ComplexMatrix h3 = ComplexMatrix::zero(2);
    h3(0, 0) = 1.0;
    h3(1, 1) = 3.0;
    const auto drift = pathsum::attractor_evolve(h3, even, 0.3, 50);
    flags.record_flag(!drift.converged_to_zero_energy);
    flags.record_flag(std::abs(drift.dominant_energy - 1.0) < 1e-12);
    flags.record_flag(drift.spectral_condition_ok);  // 0.9 < pi/2
    flags.record_flag(drift.zero_energy_overlap == 0.0);
    const auto wrapped = pathsum::attractor_evolve(h3, even, 0.6, 10);
    flags.record_flag(!wrapped.spectral_condition_ok);  // 1.8 > pi/2
    rep.properties.push_back(flags.done());
  }

  {
    // 2^-N [U_F + U_B]^N -> exp(-i (H_F - H_B) t / 2); error halves with N.
    Check ck("half_difference_convergence", 0.3);
    const pathsum::BiHamiltonian coarse(sigma_x, sigma_y, 1.0);  // tau unused by the limit helper
    const StateVector psi0 = rng.state(2);
    const double t_tot = 2.0;
    const ComplexMatrix target = linops::mat_exp(sigma_x - sigma_y, Complex(0, -0.5 * t_tot));
    const StateVector want = target * psi0;
    const double e64 = (pathsum::half_difference_limit(coarse, t_tot, 64, psi0) - want).norm();
    const double e128 = (pathsum::half_difference_limit(coarse, t_tot, 128, psi0) - want).norm();
    ck.record(std::abs(e64 / e128 - 2.0));
    rep.properties.push_back(ck.done());
  }

  {
    // Contract: perp branch is the two-path bievolution of the non-kernel
    // component; parallel branch is the binomial-weighted kernel evolution.
    Check ck("general_origin_contract", 1e-9);
    for (int t = 0; t < 10; ++t) {
      const int dim = rng.uniform_int(2, 3);
      const pathsum::BiHamiltonian bh(rng.hermitian(dim, 1.0), rng.hermitian(dim, 1.0), 0.4);
      const StateVector psi0 = rng.state(dim);
      const int n_steps = rng.uniform_int(1, 8);
      const auto [perp, par] = pathsum::general_origin_evolve(bh, psi0, n_steps);
      const ComplexMatrix pi0 = linops::kernel_projector(linops::hermitian_eigendecomposition(
          Complex(0, 1) * linops::commutator(bh.hf(), bh.hb())));
      const StateVector psi_perp = psi0 - pi0 * psi0;
      const auto [fwd, bwd] = pathsum::bievolution_state(bh, psi_perp.norm() > 0 ? psi_perp : psi0,
                                                         n_steps * bh.tau());
      if (psi_perp.norm() > 0) {
        ck.record((perp - (fwd + bwd)).norm() / std::max(psi_perp.norm(), 1e-300));
      }
    }
    // No kernel: parallel branch empty, perp branch is the plain bievolution.
    const pathsum::BiHamiltonian bh_xy(sigma_x, sigma_y, 0.5);
    const StateVector psi_xy = rng.state(2);
    const auto [perp_xy, par_xy] = pathsum::general_origin_evolve(bh_xy, psi_xy, 6);
    ck.record(par_xy.norm());
    const auto [fwd_xy, bwd_xy] = pathsum::bievolution_state(bh_xy, psi_xy, 6 * 0.5);
    ck.record((perp_xy - (fwd_xy + bwd_xy)).norm());
    // Full kernel (T-invariant): parallel branch is 2^N cos^N(H tau) psi0 by
    // the binomial identity; cross-checked through the matrix-power route.
    const ComplexMatrix h = rng.hermitian(3, 1.0);
    const pathsum::BiHamiltonian bh_t(h, h, 0.5);
    const StateVector psi_t = rng.state(3);
    const int nt = 6;
    const auto [perp_t, par_t] = pathsum::general_origin_evolve(bh_t, psi_t, nt);
    ck.record(perp_t.norm());
    const ComplexMatrix cos_h =
        Complex(0.5, 0.0) * (linops::mat_exp(h, Complex(0, 0.5)) + linops::mat_exp(h, Complex(0, -0.5)));
    StateVector want = psi_t;
    for (int i = 0; i < nt; ++i) want = Complex(2.0, 0.0) * (cos_h * want);
    ck.record((par_t - want).norm() / want.norm());
    // Block fixture: the two branches live in orthogonal blocks.
    ComplexMatrix hf4 = ComplexMatrix::zero(4);
    ComplexMatrix hb4 = ComplexMatrix::zero(4);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        hf4(r, c) = sigma_x(r, c);
        hb4(r, c) = sigma_y(r, c);
      }
    }
    hf4(2, 2) = hb4(2, 2) = 1.0;
    hf4(3, 3) = hb4(3, 3) = -1.0;
    const pathsum::BiHamiltonian bh_block(hf4, hb4, 0.5);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const StateVector mixed{inv_sqrt2, 0.0, inv_sqrt2, 0.0};
    const auto [perp_b, par_b] = pathsum::general_origin_evolve(bh_block, mixed, 5);
    ck.record(perp_b.norm() > 0.1 && par_b.norm() > 0.1 ? 0.0 : 1.0);
    ck.record(std::abs(linops::inner(perp_b, par_b)) / (perp_b.norm() * par_b.norm()));
    rep.properties.push_back(ck.done());
  }

  return rep;
}

// ---------------------------------------------------------------------------
// kaon

SuiteReport kaon_suite(std::uint64_t seed) {
  SuiteReport rep;
  rep.suite = "kaon";
  rep.seed = seed;
  Rng rng(suite_stream(seed, rep.suite));

  {
    // First-order closed form against the generic commutator, with the error
    // budget scaling as 10|eps|.
    Check ck("route_equivalence_eps_sweep", 1.0);
    const double eps_values[] = {1e-4, 1e-3, 2.3e-3, 1e-2};
    for (double eps : eps_values) {
      kaon::KaonParams p;
      p.eps_abs = eps;
      const Complex closed = kaon::eigenvalue_closed_form(p);
      const auto res = kaon::commutator_2x2(kaon::lee_wolfenstein_m(p));
      ck.record(rel_err(closed, res.a_value) / (10.0 * eps));
      ck.record(std::abs(res.a_value.real()) / std::abs(res.a_value));  // A is purely imaginary
    }
    rep.properties.push_back(ck.done());
  }

  {
    // [H_F, X H_F X] always has the form [[A, B], [-B, -A]].
    Check ck("commutator_structure", 1e-10);
    for (int t = 0; t < 20; ++t) {
      ComplexMatrix hf(2);
      if (t % 2 == 0) {
        kaon::KaonParams p;
        p.delta_m = std::pow(10.0, rng.uniform(9.0, 11.0));
        p.delta_gamma = std::pow(10.0, rng.uniform(9.0, 11.0));
        p.eps_abs = std::pow(10.0, rng.uniform(-4.0, -2.0));
        p.eps_arg = rng.uniform(-M_PI, M_PI);
        hf = kaon::lee_wolfenstein_m(p);
      } else {
        hf = rng.hermitian(2, 1.0);
      }
      const auto res = kaon::commutator_2x2(hf);
      const ComplexMatrix d = linops::commutator(hf, kaon::hb_from_hf(hf));
      const double scale = std::max(d.max_abs(), 1e-300);
      double err = std::abs(d(0, 0) - res.a_value) / scale;
      err = std::max(err, std::abs(d(0, 1) - res.b_value) / scale);
      err = std::max(err, std::abs(d(0, 0) + d(1, 1)) / scale);
      err = std::max(err, std::abs(d(0, 1) + d(1, 0)) / scale);
      err = std::max(err, std::abs(res.eigenvalues[0] + res.eigenvalues[1]) / scale);
      const Complex root2 = res.eigenvalues[0] * res.eigenvalues[0];
      err = std::max(err, std::abs(root2 - (res.a_value * res.a_value - res.b_value * res.b_value)) /
                              (scale * scale));
      ck.record(err);
    }
    rep.properties.push_back(ck.done());
  }

  {
    // i [H_F, H_B] is Hermitian; its spectrum is {+lambda1, -lambda1}.
    Check ck("hermitian_eigenvalue_match", 1e-10);
    for (int t = 0; t < 20; ++t) {
      const ComplexMatrix hf = rng.hermitian(2, 1.0);
      const auto res = kaon::commutator_2x2(hf);
      if (res.lambda1 < 1e-6) continue;  // accidental near-degeneracy; not informative
      const ComplexMatrix ic = Complex(0, 1) * linops::commutator(hf, kaon::hb_from_hf(hf));
      const auto dec = linops::hermitian_eigendecomposition(ic);
      double lo = dec.eigenvalues.front(), hi = dec.eigenvalues.back();
      ck.record(std::abs(hi - res.lambda1) / res.lambda1);
      ck.record(std::abs(lo + res.lambda1) / res.lambda1);
    }
    rep.properties.push_back(ck.done());
  }

  {
    // CP = e^{i theta} X: conjugation is theta-independent and involutive.
    Check ck("cp_conjugation", 1e-12);
    for (double theta : {0.0, 0.9, 2.2}) {
      const ComplexMatrix cp = kaon::cp_operator(theta);
      ck.record((cp.adjoint() * cp - ComplexMatrix::identity(2)).max_abs());
      const ComplexMatrix hf = rng.hermitian(2, 1.0);
      const ComplexMatrix via_op = cp * hf * cp.adjoint();
      const ComplexMatrix direct = kaon::hb_from_hf(hf, theta);
      ck.record(mat_err(direct, via_op));
      ck.record(mat_err(kaon::hb_from_hf(direct, theta), hf));
    }
    rep.properties.push_back(ck.done());
  }

  {
    // (1 - eps) / (1 + eps) versus 1 - 2 eps: deviation bounded by 3|eps|^2.
    Check ck("epsilon_phase_first_order", 1.0);
    for (double mag : {1e-3, 2.3e-3, 1e-2, 1e-1}) {
      for (double arg : {0.0, M_PI / 4.0, 1.2, -2.0}) {
        const Complex exact = kaon::epsilon_phase(mag, arg);
        const Complex first = kaon::epsilon_phase_first_order(mag, arg);
        ck.record(std::abs(exact - first) / (3.0 * mag * mag));
      }
    }
    rep.properties.push_back(ck.done());
  }

  {
    // Default parameters land the headline magnitude window [1.5e17, 2.5e17].
    Check ck("default_magnitude_window", 0.0);
    const auto res = kaon::commutator_2x2(kaon::lee_wolfenstein_m(kaon::KaonParams{}));
    ck.record_flag(res.lambda1 >= 1.5e17 && res.lambda1 <= 2.5e17);
    const Complex closed = kaon::eigenvalue_closed_form(kaon::KaonParams{});
    ck.record_flag(std::abs(closed) >= 1.5e17 && std::abs(closed) <= 2.5e17);
    rep.properties.push_back(ck.done());
  }

  return rep;
}

// ---------------------------------------------------------------------------
// spectral

SuiteReport spectral_suite(std::uint64_t seed) {
  namespace sp = spectral;
  SuiteReport rep;
  rep.suite = "spectral";
  rep.seed = seed;
  Rng rng(suite_stream(seed, rep.suite));

  {
    // sum_k rho(k) = 2^M, accumulated as logs.
    Check ck("density_normalization", 1e-9);
    for (std::int64_t m : {2LL, 8LL, 64LL, 500LL, 1000LL}) {
      long double peak = 0.0L;
      for (std::int64_t k = -m / 2; k <= m / 2; ++k) {
        peak = std::max(peak, static_cast<long double>(sp::degeneracy_density(m, k)));
      }
      long double sum = 0.0L;
      for (std::int64_t k = -m / 2; k <= m / 2; ++k) {
        sum += expl(static_cast<long double>(sp::degeneracy_density(m, k)) - peak);
      }
      const long double total = peak + logl(sum);
      ck.record(std::abs(static_cast<double>(total - m * logl(2.0L))));
    }
    rep.properties.push_back(ck.done());
  }

  {
    // Exact Pascal-triangle binomials for small M.
    Check ck("density_factorial_match", 1e-12);
    for (std::int64_t m = 2; m <= 20; m += 2) {
      std::vector<unsigned long long> row(static_cast<std::size_t>(m) + 1, 0);
      row[0] = 1;
      for (std::int64_t i = 1; i <= m; ++i) {
        for (std::int64_t j = i; j >= 1; --j) row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j) - 1];
      }
      for (std::int64_t k = -m / 2; k <= m / 2; ++k) {
        const double want = static_cast<double>(row[static_cast<std::size_t>(m / 2 + k)]);
        const double got = std::exp(sp::degeneracy_density(m, k));
        ck.record(std::abs(got - want) / want);
      }
    }
    rep.properties.push_back(ck.done());
  }

  {
    // Gaussian approximation of the scaled density: sup error decays ~ M^-1.5.
    Check ck("gaussian_approx_error", 1.0);
    for (std::int64_t m : {100LL, 500LL, 2000LL}) {
      const double ln2 = std::log(2.0);
      double worst = 0.0;
      for (std::int64_t k = -m / 2; k <= m / 2; ++k) {
        const double scaled = std::exp(sp::degeneracy_density(m, k) - m * ln2);
        worst = std::max(worst, std::abs(scaled - sp::gaussian_density_approx(m, k)));
      }
      ck.record(worst * std::pow(static_cast<double>(m), 1.5));
    }
    rep.properties.push_back(ck.done());
  }

  {
    Check ck("lambda_sd_default", 0.01);
    const sp::EnsembleModel model;
    const sp::LogScaled sd = sp::lambda_sd(model);
    ck.record(std::abs(std::pow(10.0, sd.log10_value - std::log10(5e56)) - 1.0));
    rep.properties.push_back(ck.done());
  }

  {
    // lambda_SD ~ sqrt(f); boundary times follow f^{-1/3} and f^{-1/2}.
    Check ck("participation_scaling", 1e-9);
    sp::EnsembleModel quarter;
    quarter.f = 0.25;
    const sp::EnsembleModel full;
    ck.record(std::abs(std::pow(10.0, sp::lambda_sd(quarter).log10_value - sp::lambda_sd(full).log10_value) - 0.5));
    const double t23_ratio = std::pow(10.0, sp::t23_boundary(quarter).log10_value - sp::t23_boundary(full).log10_value);
    ck.record(std::abs(t23_ratio - std::pow(4.0, 1.0 / 3.0)) / std::pow(4.0, 1.0 / 3.0));
    const double t13_ratio = std::pow(10.0, sp::t13_boundary(quarter).log10_value - sp::t13_boundary(full).log10_value);
    ck.record(std::abs(t13_ratio - 2.0) / 2.0);
    rep.properties.push_back(ck.done());
  }

  {
    // Headline boundary-time windows for f = 1.
    Check ck("boundary_time_windows", 0.0);
    const sp::EnsembleModel model;
    const double t23 = sp::t23_boundary(model).log10_value;
    const double t13 = sp::t13_boundary(model).log10_value;
    auto outside = [](double lg, double lo, double hi) {
      if (lg < lo) return lo - lg;
      if (lg > hi) return lg - hi;
      return 0.0;
    };
    ck.record(outside(t23, -24.0, -23.0));
    ck.record(outside(t13, -13.0, -12.0));
    rep.properties.push_back(ck.done());
  }

  {
    Check ck("regime_classification_cases", 0.0);
    const sp::EnsembleModel model;
    ck.record_flag(sp::regime_classify(model, 1e27, 1.0).classification == sp::Regime::Broad);
    const double n_one_second = 1.0 / model.tau;  // t = N tau = 1 s
    ck.record_flag(sp::regime_classify(model, n_one_second, n_one_second / 2.0).classification ==
                   sp::Regime::Narrow);
    ck.record_flag(sp::regime_classify(model, 3.95e20, 1.975e20).classification ==
                   sp::Regime::Intermediate);
    bool rejected = false;
    try {
      sp::EnsembleModel bad;
      bad.f = 0.0;
      sp::validate(bad);
    } catch (const std::invalid_argument&) {
      rejected = true;
    }
    ck.record_flag(rejected);
    rep.properties.push_back(ck.done());
  }

  {
    // Same width formula as the interference module, expressed in lambda units.
    Check ck("width_cross_module", 1e-12);
    for (int t = 0; t < 30; ++t) {
      const double tau = rng.uniform(0.1, 2.0);
      const int n = rng.uniform_int(1, 900);
      const int m = rng.uniform_int(1, 900);
      const double via_spectral = sp::interference_width(tau, static_cast<double>(m) + n, n).value();
      const double via_interference = interference::peak_width(m, n) / (tau * tau);
      ck.record(std::abs(via_spectral - via_interference) / via_interference);
    }
    rep.properties.push_back(ck.done());
  }

  return rep;
}

}  // namespace

SuiteReport run_suite(const std::string& suite, std::uint64_t seed) {
  if (suite == "interference") return interference_suite(seed);
  if (suite == "pathsum") return pathsum_suite(seed);
  if (suite == "kaon") return kaon_suite(seed);
  if (suite == "spectral") return spectral_suite(seed);
  throw std::invalid_argument("unknown verify suite: " + suite);
}

std::vector<SuiteReport> run(const std::string& suite, std::uint64_t seed) {
  std::vector<SuiteReport> out;
  if (suite == "all") {
    for (const auto& name : suite_names()) out.push_back(run_suite(name, seed));
  } else {
    out.push_back(run_suite(suite, seed));
  }
  return out;
}

std::string report_json(const std::vector<SuiteReport>& reports) {
  nlohmann::ordered_json j;
  bool all = true;
  nlohmann::ordered_json suites = nlohmann::ordered_json::array();
  auto finite = [](double v) { return std::isfinite(v) ? v : 1.0e308; };
  for (const auto& rep : reports) {
    nlohmann::ordered_json js;
    js["suite"] = rep.suite;
    js["seed"] = rep.seed;
    nlohmann::ordered_json props = nlohmann::ordered_json::array();
    for (const auto& p : rep.properties) {
      nlohmann::ordered_json jp;
      jp["name"] = p.name;
      jp["samples"] = p.samples;
      jp["max_error"] = finite(p.max_error);
      jp["tolerance"] = p.tolerance;
      jp["pass"] = p.pass;
      props.push_back(std::move(jp));
    }
    js["properties"] = std::move(props);
    js["all_pass"] = rep.all_pass();
    all = all && rep.all_pass();
    suites.push_back(std::move(js));
  }
  j["suites"] = std::move(suites);
  j["all_pass"] = all;
  return j.dump(2) + "\n";
}

std::string report_text(const std::vector<SuiteReport>& reports) {
  std::string out;
  char line[256];
  for (const auto& rep : reports) {
    out += "suite " + rep.suite + " (seed " + std::to_string(rep.seed) + ")\n";
    for (const auto& p : rep.properties) {
      std::snprintf(line, sizeof line, "  [%s] %-32s samples=%-5d max_error=%.3e tol=%.3e\n",
                    p.pass ? "PASS" : "FAIL", p.name.c_str(), p.samples, p.max_error, p.tolerance);
      out += line;
    }
  }
  return out;
}

}  // namespace bievolve::verify
