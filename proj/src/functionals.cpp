#include "gausshardy/functionals.hpp"

#include <cmath>
#include <stdexcept>

#include "gausshardy/kernels.hpp"
#include "gausshardy/quadrature.hpp"
#include "gausshardy/semigroup.hpp"

namespace gh {

namespace {

// |e^{t^2 L} u(y)| evaluated directly from the coefficients
double heat_value(const ChaosExpansion& u, double t, std::span<const double> y) {
  thread_local std::vector<std::vector<double>> axis;
  axis.resize(u.dimension);
  for (int d = 0; d < u.dimension; ++d) hermite_axis_values(u.max_degree, y[d], axis[d]);
  double s = 0.0;
  for (const auto& [beta, c] : u.coefficients) {
    double h = 1.0;
    for (int d = 0; d < u.dimension; ++d) h *= axis[d][beta[d]];
    s += c * std::exp(-t * t * beta.order()) * h;
  }
  return s;
}

}  // namespace

GridFunction maximal_function(const ChaosExpansion& u, const ConeSpec& spec,
                              const GridFunction& grid) {
  GridFunction out = grid;
  for (std::size_t i = 0; i < grid.count(); ++i) {
    auto x = grid.point(i);
    double best = 0.0;
    for (const auto& s : cone_points(x, spec))
      best = std::max(best, std::abs(heat_value(u, s.t, s.y)));
    out.values[i] = best;
  }
  return out;
}

namespace {

// int_{B(x,r)} |u| dgamma by radial quadrature (n = 1..2)
double ball_l1(const RealFunction& u, std::span<const double> x, double r, int order) {
  int n = static_cast<int>(x.size());
  if (n == 1) {
    QuadratureRule gl = gauss_legendre_on(x[0] - r, x[0] + r, order);
    double s = 0.0;
    for (int i = 0; i < order; ++i) {
      std::vector<double> y{gl.nodes[i]};
      s += gl.weights[i] * std::abs(u(y)) * gamma_density(y);
    }
    return s;
  }
  QuadratureRule gl = gauss_legendre_on(0.0, r, order);
  const int m = 32;
  double s = 0.0;
  std::vector<double> y(2);
  for (int i = 0; i < order; ++i) {
    double rho = gl.nodes[i];
    for (int a = 0; a < m; ++a) {
      double th = 2.0 * M_PI * (a + 0.5) / m;
      y[0] = x[0] + rho * std::cos(th);
      y[1] = x[1] + rho * std::sin(th);
      s += gl.weights[i] * rho * (2.0 * M_PI / m) * std::abs(u(y)) * gamma_density(y);
    }
  }
  return s;
}

}  // namespace

GridFunction hl_maximal(const RealFunction& u, int dim, const GridFunction& grid,
                        const std::vector<double>& r_grid) {
  if (grid.dimension != dim) throw std::invalid_argument("hl_maximal: dimension mismatch");
  GridFunction out = grid;
  for (std::size_t i = 0; i < grid.count(); ++i) {
    auto x = grid.point(i);
    double best = 0.0;
    for (double r : r_grid) {
      int order = std::min(96, 24 + static_cast<int>(10.0 * r));
      double avg = ball_l1(u, x, r, order) / gaussian_ball_measure(x, r);
      best = std::max(best, avg);
    }
    out.values[i] = best;
  }
  return out;
}

GridFunction maximal_masked(const RealFunction& abs_u, int dim, double aperture, double adm,
                            bool global_part, const ConeSpec& spec, const GridFunction& grid,
                            int gh_order, double tau_override) {
  double tau = tau_override > 0.0
                   ? tau_override
                   : 0.5 * (1.0 + adm * aperture) * (1.0 + 2.0 * adm * aperture);
  ConeSpec sp = spec;
  sp.aperture = aperture;
  sp.admissibility = adm;
  TensorGrid w = gamma_tensor_grid(dim, gh_order);

  GridFunction out = grid;
  std::vector<double> z(dim);
  for (std::size_t i = 0; i < grid.count(); ++i) {
    auto x = grid.point(i);
    double best = 0.0;
    for (const auto& s : cone_points(x, sp)) {
      double E = std::exp(-s.t * s.t);
      double sq = std::sqrt(one_minus_exp_m2(s.t * s.t));
      double my = admissibility(s.y);
      double acc = 0.0;
      for (std::size_t qi = 0; qi < w.count(); ++qi) {
        auto zq = w.point(qi);
        for (int d = 0; d < dim; ++d) z[d] = E * s.y[d] + sq * zq[d];
        bool local = dist2(s.y, z) <= tau * my;
        if (local == global_part) continue;
        acc += w.weights[qi] * std::abs(abs_u(z));
      }
      best = std::max(best, acc);
    }
    out.values[i] = best;
  }
  return out;
}

GridFunction square_function(const ChaosExpansion& u, double a, const ConeSpec& spec,
                             const GridFunction& grid, BallMeasureCache* cache) {
  BallMeasureCache local_cache;
  if (!cache) cache = &local_cache;
  ConeSpec sp = spec;
  sp.aperture = 1.0;
  sp.admissibility = a;

  GridFunction out = grid;
  for (std::size_t i = 0; i < grid.count(); ++i) {
    auto x = grid.point(i);
    double acc = 0.0;
    double last_t = -1.0;
    std::vector<ChaosExpansion> grads;
    for (const auto& s : cone_points(x, sp)) {
      if (s.weight == 0.0) continue;
      if (s.t != last_t) {
        grads = apply_gradient_semigroup(u, s.t);
        last_t = s.t;
      }
      double g2 = 0.0;
      for (const auto& comp : grads) {
        double g = eval_expansion(comp, s.y);
        g2 += g * g;
      }
      acc += s.weight * g2 / cache->measure(s.y, s.t);
    }
    out.values[i] = std::sqrt(acc);
  }
  return out;
}

H1Norms h1_norms(const ChaosExpansion& u, double a, double a_prime, const ConeSpec& spec,
                 const GridFunction& grid, BallMeasureCache* cache) {
  if (!grid.has_rule()) throw std::invalid_argument("h1_norms: grid needs gamma weights");
  H1Norms res;
  GridFunction su = square_function(u, a, spec, grid, cache);
  GridFunction uu = synthesize_on(u, grid);
  res.quad = su.l1_gamma() + uu.l1_gamma();
  ConeSpec max_spec = spec;
  max_spec.aperture = 1.0;
  max_spec.admissibility = a_prime;
  res.max = maximal_function(u, max_spec, grid).l1_gamma();
  res.ratio = res.max / res.quad;
  return res;
}

// ---------------------------------------------------------------------------
// tent atoms

double TentAtom::support_height(std::span<const double> y) const {
  double rho2 = 0.0;
  for (std::size_t d = 0; d < y.size(); ++d) {
    double diff = y[d] - ball.center[d];
    rho2 += diff * diff;
  }
  double q = lambda * (ball.radius * ball.radius - rho2) / (2.0 * ball.radius);
  return q > 0.0 ? q : 0.0;
}

namespace {

// profile shape in u = t/q: vanishes at both ends so |F|^2 dt/t integrates
double shape(double u) {
  if (u <= 0.0 || u > 1.0) return 0.0;
  double w = 1.0 - u * u;
  double w2 = w * w;
  return u * w2 * w2;
}

// monomial basis t^a prod (y-c)^b / r-normalized, a <= 2, |b| <= 2
int atom_basis_size(int dim) { return dim == 1 ? 9 : 18; }

double atom_poly(const TentAtom& atom, double t, std::span<const double> y) {
  double r = atom.ball.radius;
  double th = t / r;
  double tp[3] = {1.0, th, th * th};
  int dim = atom.ball.dim();
  double acc = 0.0;
  if (dim == 1) {
    double yh = (y[0] - atom.ball.center[0]) / r;
    double yp[3] = {1.0, yh, yh * yh};
    int idx = 0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) acc += atom.poly_coeffs[idx++] * tp[a] * yp[b];
  } else {
    double y0 = (y[0] - atom.ball.center[0]) / r;
    double y1 = (y[1] - atom.ball.center[1]) / r;
    double yb[6] = {1.0, y0, y1, y0 * y0, y0 * y1, y1 * y1};
    int idx = 0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 6; ++b) acc += atom.poly_coeffs[idx++] * tp[a] * yb[b];
  }
  return acc;
}

// int_B [ int_0^1 P(u q(y), y)^2 shape(u)^2 du/u ] dy, exact quadrature
double atom_norm_integral(const TentAtom& atom) {
  const QuadratureRule& ugl = gauss_legendre_rule(12);
  auto t_integral = [&](std::span<const double> y) {
    double q = atom.support_height(y);
    if (q <= 0.0) return 0.0;
    double acc = 0.0;
    for (int i = 0; i < 12; ++i) {
      double u = 0.5 * (ugl.nodes[i] + 1.0);
      double w = 0.5 * ugl.weights[i];
      double p = atom_poly(atom, u * q, y);
      double sh = shape(u);
      acc += w * p * p * sh * sh / u;
    }
    return acc;
  };
  int dim = atom.ball.dim();
  double r = atom.ball.radius;
  if (dim == 1) {
    QuadratureRule gl = gauss_legendre_on(atom.ball.center[0] - r, atom.ball.center[0] + r, 24);
    double s = 0.0;
    for (int i = 0; i < 24; ++i) {
      std::vector<double> y{gl.nodes[i]};
      s += gl.weights[i] * t_integral(y);
    }
    return s;
  }
  QuadratureRule gl = gauss_legendre_on(0.0, r, 16);
  const int m = 32;
  double s = 0.0;
  std::vector<double> y(2);
  for (int i = 0; i < 16; ++i) {
    double rho = gl.nodes[i];
    for (int a = 0; a < m; ++a) {
      double th = 2.0 * M_PI * (a + 0.5) / m;
      y[0] = atom.ball.center[0] + rho * std::cos(th);
      y[1] = atom.ball.center[1] + rho * std::sin(th);
      s += gl.weights[i] * rho * (2.0 * M_PI / m) * t_integral(y);
    }
  }
  return s;
}

}  // namespace

double TentAtom::eval(double t, std::span<const double> y) const {
  if (t <= 0.0) return 0.0;
  double q = support_height(y);
  if (q <= 0.0 || t > q) return 0.0;
  return amplitude * atom_poly(*this, t, y) * shape(t / q);
}

TentAtom make_atom(const AdmissibleBall& ball, std::uint64_t seed) {
  if (ball.dim() < 1 || ball.dim() > 2)
    throw std::invalid_argument("make_atom: dimension must be 1 or 2");
  if (!(ball.scale == 2.0) || !ball.admissible())
    throw std::invalid_argument("make_atom: ball must be admissible at scale 2");

  TentAtom atom;
  atom.ball = ball;
  double m_min = std::min(1.0, 1.0 / (norm2(ball.center) + ball.radius));
  atom.lambda = std::min(1.0, 2.0 * m_min / ball.radius);
  if (atom.lambda * ball.radius / 2.0 < 1e-6)
    throw std::domain_error("make_atom: support region degenerate at this resolution");

  Rng rng(seed);
  atom.poly_coeffs.resize(atom_basis_size(ball.dim()));
  for (auto& c : atom.poly_coeffs) c = rng.uniform(-1.0, 1.0);
  atom.poly_coeffs[0] += 1.5;  // keeps the profile away from identically small

  atom.amplitude = 1.0;
  double raw = atom_norm_integral(atom);
  double gb = gaussian_ball_measure(ball.center, ball.radius);
  atom.amplitude = std::sqrt(0.99 / (gb * raw));
  atom.norm_certificate = gb * atom.amplitude * atom.amplitude * raw;

  // sampled profile for serialization
  double q_max = atom.lambda * ball.radius / 2.0;
  double log_step = 0.0;
  atom.t_samples = geometric_midpoints(q_max * 1e-3, q_max, 16, &log_step);
  if (ball.dim() == 1) {
    QuadratureRule gl = gauss_legendre_on(ball.center[0] - ball.radius,
                                          ball.center[0] + ball.radius, 16);
    for (double y : gl.nodes) atom.y_points.push_back(y);
  } else {
    QuadratureRule gl = gauss_legendre_on(0.0, ball.radius, 4);
    for (int i = 0; i < 4; ++i)
      for (int a = 0; a < 8; ++a) {
        double th = 2.0 * M_PI * (a + 0.5) / 8;
        atom.y_points.push_back(ball.center[0] + gl.nodes[i] * std::cos(th));
        atom.y_points.push_back(ball.center[1] + gl.nodes[i] * std::sin(th));
      }
  }
  std::size_t ycount = atom.y_points.size() / ball.dim();
  atom.profile.resize(atom.t_samples.size() * ycount);
  for (std::size_t ti = 0; ti < atom.t_samples.size(); ++ti)
    for (std::size_t yi = 0; yi < ycount; ++yi)
      atom.profile[ti * ycount + yi] = atom.eval(
          atom.t_samples[ti],
          std::span<const double>(atom.y_points.data() + yi * ball.dim(), ball.dim()));
  return atom;
}

double tent_norm(const TentField& field, const AdmissibleBall& ball, const ConeSpec& spec,
                 int outer_points, BallMeasureCache* cache) {
  BallMeasureCache local_cache;
  if (!cache) cache = &local_cache;
  ConeSpec sp = spec;
  sp.aperture = 1.0;
  sp.admissibility = 1.0;
  int dim = ball.dim();
  double reach = 2.0 * ball.radius;

  auto inner_sqrt = [&](std::span<const double> x) {
    double acc = 0.0;
    for (const auto& s : cone_points(x, sp)) {
      if (s.weight == 0.0) continue;
      double F = field(s.t, s.y);
      if (F == 0.0) continue;
      acc += s.weight * F * F / cache->measure(s.y, s.t);
    }
    return std::sqrt(acc);
  };

  if (dim == 1) {
    QuadratureRule gl = gauss_legendre_on(ball.center[0] - reach,
                                          ball.center[0] + reach, outer_points);
    double total = 0.0;
    for (int i = 0; i < outer_points; ++i) {
      std::vector<double> x{gl.nodes[i]};
      total += gl.weights[i] * gamma_density(x) * inner_sqrt(x);
    }
    return total;
  }
  int radial = outer_points / 6;
  QuadratureRule gl = gauss_legendre_on(0.0, reach, radial);
  const int m = 24;
  double total = 0.0;
  std::vector<double> x(2);
  for (int i = 0; i < radial; ++i) {
    for (int a = 0; a < m; ++a) {
      double th = 2.0 * M_PI * (a + 0.5) / m;
      x[0] = ball.center[0] + gl.nodes[i] * std::cos(th);
      x[1] = ball.center[1] + gl.nodes[i] * std::sin(th);
      total += gl.weights[i] * gl.nodes[i] * (2.0 * M_PI / m) * gamma_density(x) * inner_sqrt(x);
    }
  }
  return total;
}

double tent_norm(const TentAtom& atom, const ConeSpec& spec, int outer_points,
                 BallMeasureCache* cache) {
  return tent_norm(
      [&atom](double t, std::span<const double> y) { return atom.eval(t, y); }, atom.ball,
      spec, outer_points, cache);
}

// ---------------------------------------------------------------------------
// molecules

namespace {

SignedLog molecule_value_impl(const TentAtom& atom, int N_poly, int t_power, double alpha,
                              int axis, std::span<const double> x,
                              const MoleculeQuadrature& mq, double t_min = 0.0) {
  int dim = atom.ball.dim();
  const KernelPoly& q = KernelPoly::Q(N_poly, dim, axis);
  double r = atom.ball.radius;
  // the profile vanishes identically above the support height, so the
  // integration range ends there (the integrand is C^3 at that endpoint)
  double t_hi = atom.lambda * r / 2.0;
  double t_lo = std::max(t_hi * mq.t_lo_fraction, t_min);
  if (t_lo >= t_hi) return SignedLog::zero();
  PanelRule panels = log_panels(t_lo, t_hi, mq.t_points_per_decade);

  SignedLog total = SignedLog::zero();
  std::vector<double> U(dim), V(dim), y(dim);
  for (std::size_t pi = 0; pi < panels.t.size(); ++pi) {
    double t = panels.t[pi];
    // the level-t support is the smaller ball where support_height >= t
    double rho2 = r * r - 2.0 * r * t / atom.lambda;
    if (rho2 <= 0.0) continue;
    double s = t * t / alpha;
    double E = std::exp(-s);
    double D = one_minus_exp_m2(s);
    double sq = std::sqrt(D);
    std::vector<double> zc(dim);
    for (int d = 0; d < dim; ++d) zc[d] = (atom.ball.center[d] - E * x[d]) / sq;
    double R = std::sqrt(rho2) / sq;
    auto g = [&](std::span<const double> z) {
      for (int d = 0; d < dim; ++d) {
        y[d] = E * x[d] + sq * z[d];
        U[d] = E * z[d] - sq * x[d];
        V[d] = E * sq * x[d] + D * z[d];
      }
      double F = atom.eval(t, y);
      if (F == 0.0) return 0.0;
      return q.eval(E, U, V) * F;
    };
    SignedLog I = gaussian_window_integral(zc, R, g);
    if (I.is_zero()) continue;
    double lg = t_power * std::log(t) - (N_poly + 0.5) * std::log(D) -
                0.5 * dim * std::log(M_PI);
    total += I.scaled_log(lg) * (panels.w[pi] / t);
  }
  return total;
}

}  // namespace

SignedLog molecule_field_value(const TentAtom& atom, int N, double alpha, int axis,
                               std::span<const double> x, const MoleculeQuadrature& mq) {
  return molecule_value_impl(atom, N, 2 * N + 1, alpha, axis, x, mq);
}

SignedLog molecule_tilde_value(const TentAtom& atom, int N, double alpha, int axis,
                               std::span<const double> x, const MoleculeQuadrature& mq) {
  // t^{2N+1} e^{(t^2/alpha)L} d* F = t^{2N} * [e^{(t^2/alpha)L} t d* F]
  return molecule_value_impl(atom, 0, 2 * N + 1, alpha, axis, x, mq);
}

SignedLog masked_tail_field_value(const TentAtom& atom, int N, double alpha, int axis, double b,
                                  std::span<const double> x, const MoleculeQuadrature& mq) {
  // same integrand as the molecule field, restricted to t >= m(x)/b
  return molecule_value_impl(atom, N, 2 * N + 1, alpha, axis, x, mq, admissibility(x) / b);
}

namespace {

// log L^2(gamma) norm over one annulus component set
double annulus_log_norm(const MoleculeField& f, const AdmissibleBall& ball, int k, int points) {
  int dim = ball.dim();
  double lo = (k == 0) ? 0.0 : std::ldexp(ball.radius, k);
  double hi = std::ldexp(ball.radius, k + 1);
  SignedLog sum = SignedLog::zero();
  if (dim == 1) {
    double c = ball.center[0];
    std::vector<std::pair<double, double>> segs;
    segs.emplace_back(c + lo, c + hi);
    segs.emplace_back(c - hi, c - lo);
    for (auto [a, b] : segs) {
      if (a >= b) continue;
      QuadratureRule gl = gauss_legendre_on(a, b, points);
      for (int i = 0; i < points; ++i) {
        std::vector<double> xx{gl.nodes[i]};
        SignedLog v = f(xx);
        if (v.is_zero()) continue;
        sum += SignedLog::from_log(
            2.0 * v.lg + std::log(gl.weights[i] * gamma_density(xx)), 1);
      }
    }
  } else {
    QuadratureRule gl = gauss_legendre_on(std::max(lo, 1e-12), hi, points);
    const int m = 24;
    std::vector<double> xx(2);
    for (int i = 0; i < points; ++i) {
      for (int a = 0; a < m; ++a) {
        double th = 2.0 * M_PI * (a + 0.5) / m;
        xx[0] = ball.center[0] + gl.nodes[i] * std::cos(th);
        xx[1] = ball.center[1] + gl.nodes[i] * std::sin(th);
        SignedLog v = f(xx);
        if (v.is_zero()) continue;
        sum += SignedLog::from_log(
            2.0 * v.lg +
                std::log(gl.weights[i] * gl.nodes[i] * (2.0 * M_PI / m) * gamma_density(xx)),
            1);
      }
    }
  }
  if (sum.is_zero()) return -std::numeric_limits<double>::infinity();
  return 0.5 * sum.lg;
}

// least squares of y against xi: y ~ A - c xi; returns c
double fit_decay_rate(std::span<const double> log_norms_scaled, std::span<const double> xi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = static_cast<int>(xi.size());
  for (int i = 0; i < n; ++i) {
    sx += xi[i];
    sy += log_norms_scaled[i];
    sxx += xi[i] * xi[i];
    sxy += xi[i] * log_norms_scaled[i];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return -slope;
}

}  // namespace

MoleculeReport check_molecule(const MoleculeField& f, const MoleculeField& f_tilde,
                              const AdmissibleBall& ball, int N, double rate_C,
                              const MoleculeQuadrature& mq) {
  MoleculeReport rep;
  rep.ball = ball;
  rep.N = N;
  double half_log_gb = 0.5 * std::log(gaussian_ball_measure(ball.center, ball.radius));
  for (int k = 0; k <= mq.k_max; ++k) {
    double lf = annulus_log_norm(f, ball, k, mq.annulus_points);
    double lt = annulus_log_norm(f_tilde, ball, k, mq.annulus_points);
    rep.log_annulus_norms.push_back(lf);
    rep.log_tilde_annulus_norms.push_back(lt);
    rep.annulus_norms.push_back(std::isfinite(lf) ? std::exp(lf) : 0.0);
    rep.tilde_annulus_norms.push_back(std::isfinite(lt) ? std::exp(lt) : 0.0);
  }
  std::vector<double> xi, yf, yt;
  for (int k = 1; k <= 4 && k <= mq.k_max; ++k) {
    if (!std::isfinite(rep.log_annulus_norms[k]) ||
        !std::isfinite(rep.log_tilde_annulus_norms[k]))
      continue;
    xi.push_back(std::pow(4.0, k));
    yf.push_back(rep.log_annulus_norms[k] + half_log_gb);
    yt.push_back(rep.log_tilde_annulus_norms[k] + half_log_gb);
  }
  if (xi.size() >= 2) {
    rep.fitted_decay_rate = fit_decay_rate(yf, xi);
    rep.tilde_fitted_decay_rate = fit_decay_rate(yt, xi);
  }
  rep.holds_at_rate = rep.fitted_decay_rate >= rate_C && rep.tilde_fitted_decay_rate >= rate_C;
  return rep;
}

namespace {

// <f, h_beta>_gamma for the molecule field, with the x-integral folded into
// the kernel's Gaussian by x = E y + sqrt(D) z: the z-integrand is then
// polynomial times the Gauss-Hermite weight, so that slot is exact and only
// the smooth t- and y-quadratures remain (pointwise sampling cannot resolve
// the small-t boundary layers of the field).
ChaosExpansion molecule_projection(const TentAtom& atom, int N_poly, int t_power, double alpha,
                                   int axis, int max_degree, const MoleculeQuadrature& mq) {
  int dim = atom.ball.dim();
  const KernelPoly& qp = KernelPoly::Q(N_poly, dim, axis);
  double r = atom.ball.radius;
  double t_hi = atom.lambda * r / 2.0;
  PanelRule panels = log_panels(t_hi * mq.t_lo_fraction, t_hi, mq.t_points_per_decade);

  std::vector<MultiIndex> betas;
  for_each_index(dim, max_degree, [&](const MultiIndex& b) { betas.push_back(b); });
  std::vector<double> acc(betas.size(), 0.0);

  int gh_order = (max_degree + qp.degree()) / 2 + 2;
  TensorGrid z = gamma_tensor_grid(dim, gh_order);

  std::vector<double> U(dim), V(dim), xq(dim);
  std::vector<std::vector<double>> axisvals(dim);
  for (std::size_t pi = 0; pi < panels.t.size(); ++pi) {
    double t = panels.t[pi];
    double rho2 = r * r - 2.0 * r * t / atom.lambda;
    if (rho2 <= 0.0) continue;
    double rho = std::sqrt(rho2);
    double s = t * t / alpha;
    double E = std::exp(-s);
    double D = one_minus_exp_m2(s);
    double sq = std::sqrt(D);
    double pref = panels.w[pi] / t * std::pow(t, t_power) * std::pow(D, -(N_poly + 0.5));

    auto add_y = [&](std::span<const double> y, double wy) {
      double F = atom.eval(t, y);
      if (F == 0.0) return;
      double base = pref * wy * gamma_density(y) * F;
      for (int d = 0; d < dim; ++d) V[d] = sq * y[d];
      for (std::size_t qi = 0; qi < z.count(); ++qi) {
        auto zq = z.point(qi);
        for (int d = 0; d < dim; ++d) {
          U[d] = -zq[d];
          xq[d] = E * y[d] + sq * zq[d];
          hermite_axis_values(max_degree, xq[d], axisvals[d]);
        }
        double common = base * z.weights[qi] * qp.eval(E, U, V);
        for (std::size_t bi = 0; bi < betas.size(); ++bi) {
          double h = 1.0;
          for (int d = 0; d < dim; ++d) h *= axisvals[d][betas[bi][d]];
          acc[bi] += common * h;
        }
      }
    };

    if (dim == 1) {
      QuadratureRule gl = gauss_legendre_on(atom.ball.center[0] - rho,
                                            atom.ball.center[0] + rho, 24);
      for (int i = 0; i < 24; ++i) {
        std::vector<double> y{gl.nodes[i]};
        add_y(y, gl.weights[i]);
      }
    } else {
      QuadratureRule gl = gauss_legendre_on(0.0, rho, 12);
      const int m = 24;
      std::vector<double> y(2);
      for (int i = 0; i < 12; ++i) {
        for (int a = 0; a < m; ++a) {
          double th = 2.0 * M_PI * (a + 0.5) / m;
          y[0] = atom.ball.center[0] + gl.nodes[i] * std::cos(th);
          y[1] = atom.ball.center[1] + gl.nodes[i] * std::sin(th);
          add_y(y, gl.weights[i] * gl.nodes[i] * (2.0 * M_PI / m));
        }
      }
    }
  }
  ChaosExpansion out;
  out.dimension = dim;
  out.max_degree = max_degree;
  for (std::size_t bi = 0; bi < betas.size(); ++bi)
    if (acc[bi] != 0.0) out.coefficients[betas[bi]] = acc[bi];
  return out;
}

}  // namespace

AtomMoleculeResult atom_to_molecule(const TentAtom& atom, int N, double alpha, int axis,
                                    const MoleculeQuadrature& mq, int analysis_order,
                                    int analysis_degree) {
  if (N < 1) throw std::invalid_argument("atom_to_molecule: N >= 1");
  (void)analysis_order;
  AtomMoleculeResult res;

  MoleculeField f = [&](std::span<const double> x) {
    return molecule_field_value(atom, N, alpha, axis, x, mq);
  };
  MoleculeField ft = [&](std::span<const double> x) {
    return molecule_tilde_value(atom, N, alpha, axis, x, mq);
  };

  res.f_hat = molecule_projection(atom, N, 2 * N + 1, alpha, axis, analysis_degree, mq);
  res.f_tilde_hat = molecule_projection(atom, 0, 2 * N + 1, alpha, axis, analysis_degree, mq);

  // f = L^N f_tilde, so f_hat = (-|beta|)^N f_tilde_hat coefficientwise
  double scale = res.f_hat.l2_norm();
  double worst = 0.0;
  for (const auto& [beta, c] : res.f_hat.coefficients) {
    if (std::abs(c) < 1e-8 * scale) continue;
    double expect = std::pow(-double(beta.order()), N) * res.f_tilde_hat.get(beta);
    worst = std::max(worst, std::abs(c - expect) / std::abs(c));
  }
  res.relation_max_rel_error = worst;
  res.report = check_molecule(f, ft, atom.ball, N, 0.0, mq);
  return res;
}

std::vector<FamilyMember> norm_experiment_family(int dim, std::uint64_t seed) {
  std::vector<FamilyMember> fam;
  std::vector<MultiIndex> low;
  for_each_index(dim, 3, [&](const MultiIndex& b) { low.push_back(b); });
  for (const auto& b : low) {
    std::string id = "h";
    for (int d = 0; d < b.size(); ++d) id += "_" + std::to_string(b[d]);
    fam.push_back({id, ChaosExpansion::unit(b)});
  }
  // degree-8 chaos fits of gaussian bumps centered at |x| = 0,1,2,3
  GridFunction grid = tensor_grid_function(dim, 16);
  for (int c = 0; c <= 3; ++c) {
    GridFunction g = grid;
    for (std::size_t i = 0; i < grid.count(); ++i) {
      auto x = grid.point(i);
      double d2 = (x[0] - c) * (x[0] - c);
      for (int d = 1; d < dim; ++d) d2 += x[d] * x[d];
      g.values[i] = std::exp(-d2);
    }
    fam.push_back({"bump_" + std::to_string(c), analyze(g, 8)});
  }
  int want = 20;
  int r = 0;
  while (static_cast<int>(fam.size()) < want) {
    fam.push_back({"rand_" + std::to_string(r),
                   random_expansion(dim, 5, seed * 1000 + r)});
    ++r;
  }
  return fam;
}

}  // namespace gh
