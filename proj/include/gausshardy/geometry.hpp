#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <vector>

namespace gh {

/// admissibility function m(x) = min(1, 1/|x|), values in (0,1]
double admissibility(std::span<const double> x);

/// gamma density pi^{-n/2} exp(-|x|^2)
double gamma_density(std::span<const double> x);

/// local region N_a = {(x,y): |x-y| <= a m(x)}; not symmetric in (x,y)
bool in_local_region(std::span<const double> x, std::span<const double> y, double a);

/// region D = {(t,x): t < m(x)}; requires t > 0
bool in_region_D(double t, std::span<const double> x);

struct AdmissibleBall {
  std::vector<double> center;
  double radius = 0.0;
  double scale = 1.0;  // the admissibility scale a

  int dim() const { return static_cast<int>(center.size()); }
  /// r <= a m(center)
  bool admissible() const;
};

/// C_0(B) = B(c,2r); C_k(B) = B(c,2^{k+1}r) \ B(c,2^k r) for k >= 1
struct Annulus {
  AdmissibleBall ball;
  int k = 0;
  bool contains(std::span<const double> x) const;
  double inner_radius() const;  // 0 for k=0
  double outer_radius() const;
};

enum class MeasureMethod { Quadrature, MonteCarlo };

/// gamma(B(center,radius)). The quadrature method reduces to a radial
/// integral (exact erf difference in n=1) refined until two successive
/// orders agree to 1e-10 relative; Monte Carlo reports a standard error.
double gaussian_ball_measure(std::span<const double> center, double radius,
                             MeasureMethod method = MeasureMethod::Quadrature,
                             std::uint64_t mc_samples = 200000, std::uint64_t seed = 1,
                             double* std_error = nullptr);

/// Read-mostly cache keyed by (center, radius); quadrature method only.
class BallMeasureCache {
 public:
  double measure(std::span<const double> center, double radius);

 private:
  std::map<std::pair<std::vector<double>, double>, double> cache_;
  std::mutex mu_;
};

/// Discretization of the admissible cone with aperture A and admissibility
/// parameter a based at x: |y-x| < A t and t <= a m(x). t is sampled
/// log-uniformly on [t_min_fraction * a m(x), a m(x)].
struct ConeSpec {
  double aperture = 1.0;        // A
  double admissibility = 1.0;   // a
  int t_levels = 24;
  int rays_per_level = 16;      // directions (2 in n=1)
  int radii_per_level = 4;
  double t_min_fraction = 1.0 / 64;

  ConeSpec refined() const {
    ConeSpec s = *this;
    s.t_levels *= 2;
    s.radii_per_level *= 2;
    s.t_min_fraction *= 0.5;
    return s;
  }
};

/// One cone sample; weight approximates the cell of d gamma(y) dt/t
/// (gamma density included). Axis samples carry weight 0 and only feed sups.
struct ConeSample {
  std::vector<double> y;
  double t = 0.0;
  double weight = 0.0;
};

std::vector<ConeSample> cone_points(std::span<const double> x, const ConeSpec& spec);

}  // namespace gh
