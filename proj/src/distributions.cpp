#include "fnp/distributions.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fnp/error.hpp"

namespace fnp {

namespace {

constexpr double kIntegrationHalfWidth = 8.0;
constexpr double kIntegrationTolerance = 1e-8;
constexpr double kQuantileTolerance = 1e-6;
constexpr int kMaxBisections = 60;

// q_alpha = quantile / sqrt(2), k = 2..20, obtained from the quadrature
// quantile and rounded to 6 decimals.
constexpr std::array<std::array<double, 19>, 3> kQTable{{
    {2.575829, 2.913494, 3.113250, 3.254686, 3.363740, 3.452213, 3.526471, 3.590339, 3.646292, 3.696021,
     3.740733, 3.781318, 3.818451, 3.852654, 3.884343, 3.913850, 3.941446, 3.967357, 3.991770},
    {1.959964, 2.343701, 2.569032, 2.727774, 2.849705, 2.948320, 3.030878, 3.101730, 3.163684, 3.218654,
     3.268004, 3.312739, 3.353618, 3.391230, 3.426041, 3.458425, 3.488685, 3.517073, 3.543799},
    {1.644854, 2.052293, 2.291341, 2.459516, 2.588521, 2.692732, 2.779884, 2.854606, 2.919889, 2.977768,
     3.029694, 3.076733, 3.119693, 3.159199, 3.195743, 3.229723, 3.261461, 3.291224, 3.319233},
}};

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
constexpr std::array<double, 8> kKronrodNodes{0.991455371120812639, 0.949107912342758525, 0.864864423359769073,
                                              0.741531185599394440, 0.586087235467691130, 0.405845151377397167,
                                              0.207784955007898468, 0.000000000000000000};
constexpr std::array<double, 8> kKronrodWeights{0.022935322010529225, 0.063092092629978553, 0.104790010322250184,
                                                0.140653259715525919, 0.169004726639267903, 0.190350578064785410,
                                                0.204432940075298892, 0.209482141084727828};
constexpr std::array<double, 4> kGaussWeights{0.129484966168869693, 0.279705391489276668, 0.381830050505118945,
                                              0.417959183673469388};

struct Segment {
  double value;
  double error;
};

template <class F>
Segment gauss_kronrod(const F& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double sum = f(centre - dx) + f(centre + dx);
    kronrod += kKronrodWeights[i] * sum;
    // odd Kronrod indices are the Gauss nodes
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * sum;
  }
  return {kronrod * half, std::abs((kronrod - gauss) * half)};
}

// Recursive bisection until each segment's error is within its share of the
// total tolerance. Returns the accumulated error estimate alongside the value.
template <class F>
Segment adaptive_integrate(const F& f, double a, double b, double tol, int depth) {
  const Segment whole = gauss_kronrod(f, a, b);
  if (whole.error <= tol) return whole;
  if (depth == 0) return whole;
  const double mid = 0.5 * (a + b);
  const Segment left = adaptive_integrate(f, a, mid, 0.5 * tol, depth - 1);
  const Segment right = adaptive_integrate(f, mid, b, 0.5 * tol, depth - 1);
  return {left.value + right.value, left.error + right.error};
}

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

std::string supported_ranges() {
  return "supported: k in 2..20, alpha in {0.01, 0.05, 0.10}";
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double chi_square_sf(double x, unsigned df) {
  if (df == 0) throw DomainError("chi-square degrees of freedom must be positive");
  if (!(x >= 0.0)) throw DomainError("chi-square statistic must be non-negative");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

double f_sf(double x, unsigned d1, unsigned d2) {
  if (d1 == 0 || d2 == 0) throw DomainError("F degrees of freedom must be positive");
  if (!(x >= 0.0)) throw DomainError("F statistic must be non-negative");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  const double a = 0.5 * d1;
  const double b = 0.5 * d2;
  const double t = d1 * x / (d1 * x + d2);
  return boost::math::ibetac(a, b, t);
}

double studentized_range_cdf(double q, unsigned k) {
  if (k < 2) throw DomainError("studentized range needs k >= 2");
  if (!(q >= 0.0)) throw DomainError("studentized range argument must be non-negative");
  if (q == 0.0) return 0.0;

  const double exponent = static_cast<double>(k - 1);
  auto integrand = [&](double z) {
    const double width = normal_cdf(z) - normal_cdf(z - q);
    return normal_pdf(z) * std::pow(std::max(width, 0.0), exponent);
  };

  // The integral is multiplied by k afterwards, so its tolerance shrinks by k.
  const double tol = kIntegrationTolerance / static_cast<double>(k);
  const Segment s = adaptive_integrate(integrand, -kIntegrationHalfWidth, kIntegrationHalfWidth, tol, 30);
  if (!(s.error <= tol)) {
    std::ostringstream msg;
    msg << "studentized range quadrature did not converge for q=" << q << ", k=" << k
        << " (achieved tolerance " << s.error * k << ")";
    throw NumericalError(msg.str(), s.error * k);
  }
  return std::clamp(k * s.value, 0.0, 1.0);
}

double studentized_range_quantile(double p, unsigned k) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile probability must lie in (0, 1)");
  double lo = 0.0;
  double hi = 1.0;
  while (studentized_range_cdf(hi, k) < p) {
    hi *= 2.0;
    if (hi > 64.0) throw NumericalError("studentized range quantile bracket exceeded q = 64", hi);
  }
  for (int i = 0; i < kMaxBisections && hi - lo > kQuantileTolerance; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (studentized_range_cdf(mid, k) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double QTable::entry(std::size_t alpha_index, unsigned k) {
  if (alpha_index >= alphas.size() || k < min_k || k > max_k) {
    throw UnsupportedDesignError("no q table entry for k=" + std::to_string(k) + "; " + supported_ranges());
  }
  return kQTable[alpha_index][k - min_k];
}

bool is_supported_alpha(double alpha) noexcept {
  for (double a : QTable::alphas) {
    if (std::abs(alpha - a) < 1e-12) return true;
  }
  return false;
}

double q_alpha(unsigned k, double alpha) {
  for (std::size_t a = 0; a < QTable::alphas.size(); ++a) {
    if (std::abs(alpha - QTable::alphas[a]) < 1e-12) {
      if (k < QTable::min_k || k > QTable::max_k) {
        throw UnsupportedDesignError("q_alpha is not tabulated for k=" + std::to_string(k) + "; " +
                                     supported_ranges());
      }
      return kQTable[a][k - QTable::min_k];
    }
  }
  std::ostringstream msg;
  msg << "q_alpha is not tabulated for alpha=" << alpha << "; " << supported_ranges();
  throw UnsupportedDesignError(msg.str());
}

}  // namespace fnp
