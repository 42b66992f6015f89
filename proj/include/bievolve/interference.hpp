#pragma once

// The interference function
//
//   I_{m,n}(x) = sum_{v=0}^{m} sum_{u=0}^{v} ... sum_{k=0}^{l} e^{-i(v+u+...+k)x}
//              = prod_{q=0}^{n-1} (1 - e^{-i(n+m-q)x}) / prod_{q=1}^{n} (1 - e^{-iqx})
//
// (n nested summations over non-increasing index tuples; C(n+m, n) unit terms).
// I_{m,n}(0) = C(n+m, n), I_{m,n} = I_{n,m}, period 2pi in x.
//
// All modulus arithmetic runs in the log domain so parameter sets whose peak
// C(n+m, n) overflows double (e.g. m=7600, n=400) stay representable. Factor
// evaluation reduces q*x mod 2pi in double-double arithmetic, which keeps every
// factor accurate to a few ulp arbitrarily close to the removable singularities
// x = 2*pi*j/q; vanishing numerator/denominator factors are paired and replaced
// by their joint limit, whose product at x=0 is exactly the binomial.

#include <complex>
#include <cstdint>
#include <vector>

namespace bievolve::interference {

using Complex = std::complex<double>;

// A complex value carried as (log-modulus, phase). Exact zero is
// log_abs = -infinity. value() overflows to inf for log_abs > ~709.
struct LogComplex {
  double log_abs;
  double phase;
  Complex value() const;
};

// The n-fold nested sum evaluated literally, term by term. Intentionally slow;
// this is the brute-force oracle the closed form is checked against. Throws
// std::domain_error when C(n+m, n) exceeds term_cap.
Complex eval_nested_sum_oracle(int m, int n, double x, std::uint64_t term_cap = 10'000'000);

// Closed form, log-domain. Finite for every finite x.
LogComplex eval_closed_form_log(int m, int n, double x);
Complex eval_closed_form(int m, int n, double x);

// log |I_{m,n}(x)| via the diffraction-style product
//   prod_{q=1}^{n} sin(alpha_q beta_q x) / sin(beta_q x),
// alpha_q = (N+1-q)/q, beta_q = q/2, N = n+m. Each factor limits to alpha_q
// when numerator and denominator sines vanish together; the product of the
// limits at x=0 is C(N,n). Returns -inf at true zeros, never +inf.
double eval_modulus_product(int m, int n, double x);

// max(0, 1 - n m (n+m+1) x^2 / 24): quadratic peak model, normalized to 1.
double quadratic_approx_normalized(int m, int n, double x);
// C(n+m, n) * quadratic_approx_normalized(x); overflows for n+m beyond ~1020.
double quadratic_approx(int m, int n, double x);

// W_{m,n} = sqrt(24 / (n m (n+m+1))), the zero of the quadratic model and the
// half-width of the central interference peak.
double peak_width(int m, int n);

double log_binomial(std::int64_t n, std::int64_t k);  // ln C(n, k)

// x = tau^2 * lambda maps a commutator eigenvalue to the argument of I.
double x_from_tau_lambda(double tau, double lambda);

struct ProfileSample {
  double x;
  Complex value;   // scaled by exp(-ln C(n+m,n)) when the profile is normalized
  double log_abs;  // raw log-modulus (never normalized)
  double norm_abs; // modulus relative to the x=0 peak
  double quad;     // quadratic model under the same normalization as `value`
};

struct InterferenceProfile {
  int m = 0;
  int n = 0;
  bool normalized = false;
  double width = 0.0;            // W_{m,n}
  double peak_log_modulus = 0.0; // ln C(n+m, n)
  std::vector<ProfileSample> samples;
};

// `steps` uniform samples on [x_min, x_max] inclusive (steps >= 2). Slots are
// independent and are evaluated in parallel (pre-assigned indices, so the
// result is identical for any thread count). max_threads <= 0 means hardware
// concurrency.
InterferenceProfile sample_profile(int m, int n, double x_min, double x_max, int steps,
                                   bool normalize, int max_threads = 0);

}  // namespace bievolve::interference
