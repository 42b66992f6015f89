#include "bievolve/interference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace bievolve::interference {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 2*pi as a double-double pair: kTwoPiHi = fl(2*pi), kTwoPiLo = 2*pi - fl(2*pi).
constexpr double kTwoPiHi = 6.283185307179586;
constexpr double kTwoPiLo = 2.4492935982947064e-16;

void check_orders(int m, int n) {
  if (m < 0 || n < 0) throw std::invalid_argument("interference orders must be non-negative");
}

// theta = coeff*x reduced mod 2*pi. The reduction is done in double-double
// arithmetic (fma residuals), so the residual r -- and with it sin(theta/2) --
// keeps full relative accuracy arbitrarily close to multiples of 2*pi. Since
// theta = 2*pi*k + r,
//   1 - e^{-i theta} = 2 sin(r/2) * i e^{-i r/2}
// with no leftover parity: the (-1)^k from sin and from the half-angle phase
// cancel.
struct ReducedAngle {
  double r;         // residual in [-pi, pi]
  double sin_half;  // sin(r/2)
  bool exact_zero;  // r == 0 in dd arithmetic (e.g. x == 0)
};

ReducedAngle reduce_angle(double coeff, double x) {
  const double hi = coeff * x;
  const double lo = std::fma(coeff, x, -hi);  // exact multiplication residual
  const double k = std::nearbyint(hi / kTwoPiHi);
  // hi - k*kTwoPiHi is exact by Sterbenz once k != 0; pe catches the rounding
  // of the product itself.
  const double p = k * kTwoPiHi;
  const double pe = std::fma(k, kTwoPiHi, -p);
  double r = ((hi - p) - pe) + (lo - k * kTwoPiLo);
  if (r > kTwoPiHi / 2) r -= kTwoPiHi;  // boundary fold; never near zero here
  if (r < -kTwoPiHi / 2) r += kTwoPiHi;
  return {r, std::sin(0.5 * r), r == 0.0};
}

struct FactorSet {
  // Parallel arrays over the n numerator / n denominator factors.
  std::vector<ReducedAngle> num, den;
  std::vector<double> num_coeff, den_coeff;
};

// Closed-form factor coefficients: numerator m+q, denominator q, q = 1..n.
FactorSet closed_form_factors(int m, int n, double x) {
  FactorSet f;
  f.num.reserve(n), f.den.reserve(n);
  for (int q = 1; q <= n; ++q) {
    f.num_coeff.push_back(static_cast<double>(m) + q);
    f.den_coeff.push_back(q);
    f.num.push_back(reduce_angle(static_cast<double>(m) + q, x));
    f.den.push_back(reduce_angle(q, x));
  }
  return f;
}

// Accumulated log-magnitude and phase of prod(num)/prod(den) with exact-zero
// factors paired and replaced by their joint limit (ratio of coefficients).
// Leftover zero numerators make the whole product zero; leftover zero
// denominators cannot occur for these factor families (the function is finite),
// but are paired defensively with the smallest surviving numerator.
struct LogProduct {
  long double log_abs = 0.0L;
  long double phase = 0.0L;
  bool zero = false;
};

LogProduct accumulate(const FactorSet& f, bool with_phase) {
  std::vector<size_t> zero_num, zero_den;
  for (size_t i = 0; i < f.num.size(); ++i) {
    if (f.num[i].exact_zero) zero_num.push_back(i);
    if (f.den[i].exact_zero) zero_den.push_back(i);
  }

  LogProduct out;
  std::vector<char> num_done(f.num.size(), 0), den_done(f.den.size(), 0);
  const size_t pairs = std::min(zero_num.size(), zero_den.size());
  for (size_t p = 0; p < pairs; ++p) {
    // lim (1 - e^{-iAx})/(1 - e^{-iqx}) = A/q at a joint zero: positive real.
    out.log_abs += std::log(static_cast<long double>(f.num_coeff[zero_num[p]])) -
                   std::log(static_cast<long double>(f.den_coeff[zero_den[p]]));
    num_done[zero_num[p]] = den_done[zero_den[p]] = 1;
  }
  if (zero_num.size() > pairs) {
    out.zero = true;  // unmatched vanishing numerator: the product is 0
    return out;
  }
  for (size_t p = pairs; p < zero_den.size(); ++p) {
    // Defensive branch, see above.
    size_t best = static_cast<size_t>(-1);
    for (size_t i = 0; i < f.num.size(); ++i)
      if (!num_done[i] && (best == static_cast<size_t>(-1) ||
                           std::abs(f.num[i].sin_half) < std::abs(f.num[best].sin_half)))
        best = i;
    out.log_abs += std::log(static_cast<long double>(f.num_coeff[best])) -
                   std::log(static_cast<long double>(f.den_coeff[zero_den[p]]));
    num_done[best] = den_done[zero_den[p]] = 1;
  }

  for (size_t i = 0; i < f.num.size(); ++i) {
    if (!num_done[i]) {
      const auto& a = f.num[i];
      out.log_abs += std::log(2.0L * std::abs(static_cast<long double>(a.sin_half)));
      if (with_phase) {
        out.phase += 0.5L * (kTwoPiHi / 2) - 0.5L * a.r;  // pi/2 - r/2
        if (a.sin_half < 0.0) out.phase += kTwoPiHi / 2;
      }
    }
    if (!den_done[i]) {
      const auto& a = f.den[i];
      out.log_abs -= std::log(2.0L * std::abs(static_cast<long double>(a.sin_half)));
      if (with_phase) {
        out.phase -= 0.5L * (kTwoPiHi / 2) - 0.5L * a.r;
        if (a.sin_half < 0.0) out.phase -= kTwoPiHi / 2;
      }
    }
  }
  return out;
}

}  // namespace

Complex LogComplex::value() const {
  if (log_abs == -kInf) return {0.0, 0.0};
  const double mag = std::exp(log_abs);
  return {mag * std::cos(phase), mag * std::sin(phase)};
}

Complex eval_nested_sum_oracle(int m, int n, double x, std::uint64_t term_cap) {
  check_orders(m, n);
  const double terms = std::exp(log_binomial(m + n, n));
  if (terms > static_cast<double>(term_cap))
    throw std::domain_error("nested sum would exceed the term cap");

  // Depth-first walk over non-increasing index tuples (v >= u >= ... >= k).
  long double re = 0.0L, im = 0.0L;
  const long double lx = x;
  auto walk = [&](auto&& self, int levels, int upper, long long index_sum) -> void {
    if (levels == 0) {
      const long double arg = -static_cast<long double>(index_sum) * lx;
      re += std::cos(arg);
      im += std::sin(arg);
      return;
    }
    for (int k = 0; k <= upper; ++k) self(self, levels - 1, k, index_sum + k);
  };
  walk(walk, n, m, 0);
  return {static_cast<double>(re), static_cast<double>(im)};
}

LogComplex eval_closed_form_log(int m, int n, double x) {
  check_orders(m, n);
  if (!std::isfinite(x)) throw std::invalid_argument("x must be finite");
  if (m == 0 || n == 0) return {0.0, 0.0};  // I = 1: empty product / single path

  const LogProduct p = accumulate(closed_form_factors(m, n, x), /*with_phase=*/true);
  if (p.zero) return {-kInf, 0.0};
  const double folded =
      std::remainder(static_cast<double>(p.phase), kTwoPiHi);
  return {static_cast<double>(p.log_abs), folded};
}

Complex eval_closed_form(int m, int n, double x) { return eval_closed_form_log(m, n, x).value(); }

double eval_modulus_product(int m, int n, double x) {
  check_orders(m, n);
  if (!std::isfinite(x)) throw std::invalid_argument("x must be finite");
  if (m == 0 || n == 0) return 0.0;

  const int N = m + n;
  FactorSet f;
  for (int q = 1; q <= n; ++q) {
    // alpha_q * beta_q = (N+1-q)/2 and beta_q = q/2: reduce_angle already
    // works with half-angles, so the coefficients are N+1-q and q.
    f.num_coeff.push_back(static_cast<double>(N + 1 - q));
    f.den_coeff.push_back(q);
    f.num.push_back(reduce_angle(static_cast<double>(N + 1 - q), x));
    f.den.push_back(reduce_angle(q, x));
  }
  const LogProduct p = accumulate(f, /*with_phase=*/false);
  if (p.zero) return -kInf;
  return static_cast<double>(p.log_abs);
}

double quadratic_approx_normalized(int m, int n, double x) {
  check_orders(m, n);
  if (m < 1 || n < 1) throw std::invalid_argument("quadratic model needs m, n >= 1");
  const double curvature =
      static_cast<double>(n) * static_cast<double>(m) * (static_cast<double>(n + m) + 1.0) / 24.0;
  return std::max(0.0, 1.0 - curvature * x * x);
}

double quadratic_approx(int m, int n, double x) {
  return std::exp(log_binomial(m + n, n)) * quadratic_approx_normalized(m, n, x);
}

double peak_width(int m, int n) {
  check_orders(m, n);
  if (m < 1 || n < 1) throw std::invalid_argument("peak width needs m, n >= 1");
  return std::sqrt(24.0 / (static_cast<double>(n) * static_cast<double>(m) *
                           (static_cast<double>(n + m) + 1.0)));
}

double log_binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) throw std::invalid_argument("log_binomial needs 0 <= k <= n");
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

double x_from_tau_lambda(double tau, double lambda) {
  if (!std::isfinite(tau) || !std::isfinite(lambda))
    throw std::invalid_argument("tau and lambda must be finite");
  return tau * tau * lambda;
}

InterferenceProfile sample_profile(int m, int n, double x_min, double x_max, int steps,
                                   bool normalize, int max_threads) {
  check_orders(m, n);
  if (m < 1 || n < 1) throw std::invalid_argument("profiles need m, n >= 1");
  if (steps < 2) throw std::invalid_argument("steps must be >= 2");
  if (!(x_min < x_max)) throw std::invalid_argument("x_min must be < x_max");

  InterferenceProfile prof;
  prof.m = m;
  prof.n = n;
  prof.normalized = normalize;
  prof.width = peak_width(m, n);
  prof.peak_log_modulus = log_binomial(m + n, n);
  prof.samples.resize(static_cast<size_t>(steps));

  const double dx = (x_max - x_min) / (steps - 1);
  auto fill_slot = [&](int i) {
    const double x = (i == steps - 1) ? x_max : x_min + dx * i;
    const LogComplex lc = eval_closed_form_log(m, n, x);
    ProfileSample s;
    s.x = x;
    s.log_abs = lc.log_abs;
    s.norm_abs = std::exp(lc.log_abs - prof.peak_log_modulus);
    const double qn = quadratic_approx_normalized(m, n, x);
    if (normalize) {
      const double mag = std::exp(lc.log_abs - prof.peak_log_modulus);
      s.value = {mag * std::cos(lc.phase), mag * std::sin(lc.phase)};
      s.quad = qn;
    } else {
      s.value = lc.value();
      s.quad = std::exp(prof.peak_log_modulus) * qn;
    }
    prof.samples[static_cast<size_t>(i)] = s;
  };

  int threads = max_threads > 0 ? max_threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, steps));
  if (threads == 1) {
    for (int i = 0; i < steps; ++i) fill_slot(i);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (int i = t; i < steps; i += threads) fill_slot(i);
      });
    for (auto& th : pool) th.join();
  }
  return prof;
}

}  // namespace bievolve::interference
