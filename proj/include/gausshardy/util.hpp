#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace gh {

/// Seeded generator with explicit double mappings, so streams are
/// reproducible independently of the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {
    // 53 mantissa bits, value in [0,1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// uniform in (0,hi]
  double uniform_pos(double hi) { return hi * (1.0 - uniform()); }
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(6.283185307179586 * u2);
    have_spare_ = true;
    return r * std::cos(6.283185307179586 * u2);
  }
  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// sign * exp(lg); sign in {-1,0,1}. Keeps magnitudes representable far
/// outside double range, which the annulus norms need.
struct SignedLog {
  double lg = -std::numeric_limits<double>::infinity();
  int sign = 0;

  static SignedLog zero() { return {}; }
  static SignedLog of(double v) {
    if (v == 0.0) return {};
    return {std::log(std::abs(v)), v > 0 ? 1 : -1};
  }
  static SignedLog from_log(double lg, int sign) {
    if (sign == 0) return {};
    return {lg, sign};
  }
  double value() const { return sign == 0 ? 0.0 : sign * std::exp(lg); }
  bool is_zero() const { return sign == 0; }

  SignedLog& operator+=(const SignedLog& o) {
    if (o.sign == 0) return *this;
    if (sign == 0) {
      *this = o;
      return *this;
    }
    if (lg >= o.lg) {
      double m = sign + o.sign * std::exp(o.lg - lg);
      if (m == 0.0) {
        *this = zero();
      } else {
        lg += std::log(std::abs(m));
        sign = m > 0 ? 1 : -1;
      }
    } else {
      double m = o.sign + sign * std::exp(lg - o.lg);
      if (m == 0.0) {
        *this = zero();
      } else {
        lg = o.lg + std::log(std::abs(m));
        sign = m > 0 ? 1 : -1;
      }
    }
    return *this;
  }
  SignedLog operator*(double v) const {
    if (sign == 0 || v == 0.0) return zero();
    return {lg + std::log(std::abs(v)), v > 0 ? sign : -sign};
  }
  SignedLog scaled_log(double dlg) const {
    if (sign == 0) return zero();
    return {lg + dlg, sign};
  }
};

/// Runs fn(i) for i in [0,n). Each index writes only its own slots, so the
/// result is identical for every thread count.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

std::uint64_t fnv1a64(std::span<const unsigned char> data);
std::uint64_t fnv1a64(const std::string& s);
std::string hex64(std::uint64_t v);

/// Canonical shortest-round-trip text for doubles; used by every CSV/JSON
/// writer so artifacts are byte-stable.
std::string fmt_double(double v);

std::vector<double> linspace(double a, double b, int count);
/// count geometric midpoints of [lo,hi] plus the shared log-step weight
std::vector<double> geometric_midpoints(double lo, double hi, int count, double* log_step);

double squared_norm(std::span<const double> x);
double norm2(std::span<const double> x);
double dist2(std::span<const double> x, std::span<const double> y);

}  // namespace gh
