#pragma once

#include <functional>
#include <vector>

namespace uukin {

/// K(d, t) = (1/eps^2) int_0^t cos(d u / eps^2) du = sin(d t / eps^2) / d, with K(0, t) = t / eps^2.
double broadened_kernel(double delta_eps, double t, double eps);

/// int_R K(d, t) dd by panel Gauss-Legendre on [-Y, Y] plus the analytic sine-integral tail.
/// Returns the value (pi for every t > 0, eps > 0 up to quadrature error).
double broadened_kernel_integral(double t, double eps);

struct WeakConvergenceRow {
  double eps = 0.0;
  double pairing = 0.0;  // int K(d, t) phi(d) dd over [-R, R]
  double error = 0.0;    // |pairing - pi phi(0)|
  bool converged = true; // panel-halving check passed
};

struct WeakConvergenceTable {
  std::vector<WeakConvergenceRow> rows;
  bool strictly_decreasing = false;
  bool all_converged = true;
};

/// Pairs the kernel with `test_fn` on [-half_width, half_width] for each eps.
WeakConvergenceTable weak_convergence_check(const std::function<double(double)>& test_fn, double t,
                                            const std::vector<double>& eps_list, double half_width,
                                            double rel_tol = 1e-10);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace uukin
