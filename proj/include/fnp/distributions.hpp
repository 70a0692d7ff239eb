#pragma once

#include <array>

namespace fnp {

// P(chi2_df >= x). Throws DomainError for x < 0 or df == 0.
double chi_square_sf(double x, unsigned df);

// P(F_{d1,d2} >= x). Throws DomainError for x < 0 or zero degrees of freedom.
double f_sf(double x, unsigned d1, unsigned d2);

// Standard normal cdf.
double normal_cdf(double z);

// CDF of the range of k iid standard normals (studentized range with
// infinite degrees of freedom):
//   k * integral phi(z) [Phi(z) - Phi(z - q)]^(k-1) dz
// evaluated by adaptive Gauss-Kronrod over [-8, 8] to absolute tolerance 1e-8.
// Throws NumericalError if the tolerance is not reached.
double studentized_range_cdf(double q, unsigned k);

// Root of studentized_range_cdf(q, k) = p, bisected to 1e-6 in q.
double studentized_range_quantile(double p, unsigned k);

// Critical values of the Nemenyi test: the (1 - alpha) quantile of the
// infinite-df studentized range for k groups, divided by sqrt(2).
struct QTable {
  static constexpr unsigned min_k = 2;
  static constexpr unsigned max_k = 20;
  static constexpr std::array<double, 3> alphas{0.01, 0.05, 0.10};

  // Stored values for alpha index a and group count k.
  static double entry(std::size_t alpha_index, unsigned k);
};

// Looks up q_alpha. alpha must be one of 0.01, 0.05, 0.10 and k in 2..=20;
// anything else throws UnsupportedDesignError naming the supported ranges.
double q_alpha(unsigned k, double alpha);

bool is_supported_alpha(double alpha) noexcept;

}  // namespace fnp
