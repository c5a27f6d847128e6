#include "gausshardy/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "gausshardy/quadrature.hpp"
#include "gausshardy/util.hpp"

namespace gh {

double admissibility(std::span<const double> x) {
  double r = norm2(x);
  return r <= 1.0 ? 1.0 : 1.0 / r;
}

double gamma_density(std::span<const double> x) {
  return std::pow(M_PI, -0.5 * static_cast<double>(x.size())) * std::exp(-squared_norm(x));
}

bool in_local_region(std::span<const double> x, std::span<const double> y, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("in_local_region: a must be positive");
  return dist2(x, y) <= a * admissibility(x);
}

bool in_region_D(double t, std::span<const double> x) {
  if (!(t > 0.0)) throw std::invalid_argument("in_region_D: t must be positive");
  return t < admissibility(x);
}

bool AdmissibleBall::admissible() const {
  return radius > 0.0 && radius <= scale * admissibility(center);
}

double Annulus::inner_radius() const { return k == 0 ? 0.0 : std::ldexp(ball.radius, k); }
double Annulus::outer_radius() const { return std::ldexp(ball.radius, k + 1); }

bool Annulus::contains(std::span<const double> x) const {
  double d = dist2(x, ball.center);
  if (k == 0) return d < outer_radius();
  return d >= inner_radius() && d < outer_radius();
}

namespace {

// gamma(B(c,r)) reduced to a radial integral about |c|.
// n=1: exact erf difference. n=2: angular integral by periodic trapezoid.
// n=3: angular integral in closed form (2 sinh(z)/z).
double radial_measure(int n, double c, double r, int radial_order) {
  if (n == 1) {
    // erfc form keeps precision in the right tail (c = |center| >= 0)
    return 0.5 * (std::erfc(c - r) - std::erfc(c + r));
  }
  QuadratureRule gl = gauss_legendre_on(0.0, r, radial_order);
  double total = 0.0;
  if (n == 2) {
    const int m = 64;
    for (int i = 0; i < radial_order; ++i) {
      double rho = gl.nodes[i];
      double ang = 0.0;
      for (int a = 0; a < m; ++a) {
        double th = 2.0 * M_PI * (a + 0.5) / m;
        ang += std::exp(-2.0 * c * rho * std::cos(th));
      }
      ang *= 2.0 * M_PI / m;
      total += gl.weights[i] * rho * std::exp(-(c * c + rho * rho)) * ang;
    }
    return total / M_PI;
  }
  // n == 3
  for (int i = 0; i < radial_order; ++i) {
    double rho = gl.nodes[i];
    double z = 2.0 * c * rho;
    double ang = (z < 1e-6) ? 2.0 + z * z / 3.0 : (std::exp(z) - std::exp(-z)) / z;
    total += gl.weights[i] * rho * rho * std::exp(-(c * c + rho * rho)) * ang;
  }
  return total * 2.0 * M_PI * std::pow(M_PI, -1.5);
}

}  // namespace

double gaussian_ball_measure(std::span<const double> center, double radius, MeasureMethod method,
                             std::uint64_t mc_samples, std::uint64_t seed, double* std_error) {
  if (!(radius > 0.0)) throw std::invalid_argument("gaussian_ball_measure: radius must be positive");
  int n = static_cast<int>(center.size());
  if (n < 1 || n > 3) throw std::invalid_argument("gaussian_ball_measure: dimension must be 1..3");
  double c = norm2(center);

  if (method == MeasureMethod::MonteCarlo) {
    Rng rng(seed);
    std::uint64_t hits = 0;
    std::vector<double> x(n);
    double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::uint64_t i = 0; i < mc_samples; ++i) {
      double dd = 0.0;
      for (int d = 0; d < n; ++d) {
        x[d] = rng.normal() * inv_sqrt2;
        double diff = x[d] - center[d];
        dd += diff * diff;
      }
      if (dd <= radius * radius) ++hits;
    }
    double p = static_cast<double>(hits) / static_cast<double>(mc_samples);
    if (std_error) *std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(mc_samples));
    return p;
  }

  if (std_error) *std_error = 0.0;
  if (n == 1) return radial_measure(1, c, radius, 0);
  int order = 24;
  double prev = radial_measure(n, c, radius, order);
  for (int iter = 0; iter < 6; ++iter) {
    order *= 2;
    double next = radial_measure(n, c, radius, order);
    if (std::abs(next - prev) <= 1e-10 * std::max(std::abs(next), 1e-300)) return next;
    prev = next;
  }
  return prev;
}

double BallMeasureCache::measure(std::span<const double> center, double radius) {
  std::vector<double> key_c(center.begin(), center.end());
  auto key = std::make_pair(std::move(key_c), radius);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  double v = gaussian_ball_measure(center, radius);
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.emplace(std::move(key), v).first->second;
}

std::vector<ConeSample> cone_points(std::span<const double> x, const ConeSpec& spec) {
  if (!(spec.aperture > 0.0) || !(spec.admissibility > 0.0) || spec.t_levels < 1 ||
      spec.rays_per_level < 1 || spec.radii_per_level < 1 || !(spec.t_min_fraction > 0.0) ||
      !(spec.t_min_fraction < 1.0))
    throw std::invalid_argument("cone_points: invalid ConeSpec");

  int n = static_cast<int>(x.size());
  double t_hi = spec.admissibility * admissibility(x);
  double t_lo = spec.t_min_fraction * t_hi;
  double log_step = 0.0;
  std::vector<double> levels = geometric_midpoints(t_lo, t_hi, spec.t_levels, &log_step);
  // boundary levels carry weight 0: sups often live at the cone's rim, and
  // the midpoint levels alone converge to them only linearly
  std::vector<bool> sup_only(levels.size(), false);
  levels.push_back(t_hi);
  sup_only.push_back(true);
  levels.push_back(t_lo);
  sup_only.push_back(true);

  const QuadratureRule& radial = gauss_legendre_rule(spec.radii_per_level);
  std::vector<ConeSample> out;
  std::vector<double> y(n);

  auto push = [&](const std::vector<double>& yy, double t, double w) {
    out.push_back(ConeSample{yy, t, w});
  };

  for (std::size_t li = 0; li < levels.size(); ++li) {
    double t = levels[li];
    double At = spec.aperture * t;
    // cone axis: participates in sups only
    push(std::vector<double>(x.begin(), x.end()), t, 0.0);
    if (spec.rays_per_level == 1) continue;
    for (int m = 0; m <= spec.radii_per_level; ++m) {
      // the last pass is the open-ball rim (weight 0), since sups often sit
      // against |y-x| = At
      bool rim = m == spec.radii_per_level;
      double rho = rim ? 1.0 - 1e-9 : 0.5 * (radial.nodes[m] + 1.0);  // in (0,1)
      double wr = (rim || sup_only[li]) ? 0.0 : 0.5 * radial.weights[m];
      double r = rho * At;
      if (n == 1) {
        for (int d = 0; d < 2; ++d) {
          y[0] = x[0] + (d == 0 ? r : -r);
          push(y, t, log_step * At * wr * gamma_density(y));
        }
      } else if (n == 2) {
        int R = spec.rays_per_level;
        for (int a = 0; a < R; ++a) {
          double th = 2.0 * M_PI * (a + 0.5) / R;
          y[0] = x[0] + r * std::cos(th);
          y[1] = x[1] + r * std::sin(th);
          push(y, t, log_step * At * At * rho * wr * (2.0 * M_PI / R) * gamma_density(y));
        }
      } else {
        // Fibonacci sphere directions
        int R = spec.rays_per_level;
        double golden = M_PI * (3.0 - std::sqrt(5.0));
        for (int a = 0; a < R; ++a) {
          double z = 1.0 - 2.0 * (a + 0.5) / R;
          double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
          double th = golden * a;
          y[0] = x[0] + r * rad * std::cos(th);
          y[1] = x[1] + r * rad * std::sin(th);
          y[2] = x[2] + r * z;
          push(y, t,
               log_step * At * At * At * rho * rho * wr * (4.0 * M_PI / R) * gamma_density(y));
        }
      }
    }
  }
  return out;
}

}  // namespace gh
