#include "uukin/kernel.hpp"

#include <cmath>

#include "uukin/error.hpp"
#include "uukin/params.hpp"

namespace uukin {

using constants::pi;

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

double broadened_kernel(double delta_eps, double t, double eps) {
  if (!(t >= 0.0)) throw DomainError("broadened_kernel: t must be >= 0");
  if (!(eps > 0.0)) throw DomainError("broadened_kernel: eps must be > 0");
  const double a = t / (eps * eps);
  const double x = a * delta_eps;
  if (std::fabs(x) < 1e-4) {
    const double x2 = x * x;
    return a * (1.0 - x2 / 6.0 * (1.0 - x2 / 20.0));
  }
  return std::sin(x) / delta_eps;
}

namespace {

constexpr int kNodes = 20;

// int_lo^hi g over panels no wider than `width`
double panel_integral(const std::function<double(double)>& g, double lo, double hi, double width) {
  static std::vector<double> x, w;
  if (x.empty()) gauss_legendre(kNodes, x, w);
  const std::size_t panels = static_cast<std::size_t>(std::ceil((hi - lo) / width));
  const double h = (hi - lo) / panels;
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double a = lo + h * p;
    const double mid = a + 0.5 * h;
    double s = 0.0;
    for (int k = 0; k < kNodes; ++k) s += w[k] * g(mid + 0.5 * h * x[k]);
    total += 0.5 * h * s;
  }
  return total;
}

// int_X^inf sin(u)/u du, X large
double sine_tail(double X) {
  const double c = std::cos(X), s = std::sin(X);
  const double i1 = 1.0 / X, i2 = i1 * i1;
  const double f = i1 * (1.0 - 2.0 * i2 + 24.0 * i2 * i2 - 720.0 * i2 * i2 * i2);
  const double g = i2 * (1.0 - 6.0 * i2 + 120.0 * i2 * i2 - 5040.0 * i2 * i2 * i2);
  return f * c + g * s;
}

}  // namespace

double broadened_kernel_integral(double t, double eps) {
  if (!(t > 0.0) || !(eps > 0.0)) throw DomainError("kernel integral needs t > 0 and eps > 0");
  const double a = t / (eps * eps);
  // integrate out to 200 half-periods, the rest is the sine-integral tail
  const double Y = 200.0 * pi / a;
  auto k = [&](double d) { return broadened_kernel(d, t, eps); };
  const double core = 2.0 * panel_integral(k, 0.0, Y, 0.5 * pi / a);
  return core + 2.0 * sine_tail(a * Y);
}

WeakConvergenceTable weak_convergence_check(const std::function<double(double)>& test_fn, double t,
                                            const std::vector<double>& eps_list, double half_width,
                                            double rel_tol) {
  if (!(t > 0.0)) throw DomainError("weak_convergence_check: t must be > 0");
  if (!(half_width > 0.0)) throw DomainError("weak_convergence_check: half_width must be > 0");
  WeakConvergenceTable out;
  const double target = pi * test_fn(0.0);
  for (double eps : eps_list) {
    if (!(eps > 0.0)) throw DomainError("weak_convergence_check: eps must be > 0");
    const double a = t / (eps * eps);
    auto g = [&](double d) { return broadened_kernel(d, t, eps) * test_fn(d); };
    const double width = std::min(0.5 * pi / a, half_width / 64.0);
    const double coarse = panel_integral(g, -half_width, half_width, 2.0 * width);
    const double fine = panel_integral(g, -half_width, half_width, width);
    WeakConvergenceRow row;
    row.eps = eps;
    row.pairing = fine;
    row.error = std::fabs(fine - target);
    row.converged = std::fabs(fine - coarse) <= rel_tol * std::max(1.0, std::fabs(fine));
    out.all_converged = out.all_converged && row.converged;
    out.rows.push_back(row);
  }
  out.strictly_decreasing = true;
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    if (!(out.rows[i].error < out.rows[i - 1].error)) out.strictly_decreasing = false;
  }
  return out;
}

}  // namespace uukin
