#include "gausshardy/verify.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "gausshardy/chaos.hpp"
#include "gausshardy/functionals.hpp"
#include "gausshardy/geometry.hpp"
#include "gausshardy/io.hpp"
#include "gausshardy/kernels.hpp"
#include "gausshardy/quadrature.hpp"
#include "gausshardy/riesz.hpp"
#include "gausshardy/semigroup.hpp"
#include "gausshardy/util.hpp"

namespace gh {

namespace {

long scaled(double base, double scale) {
  return std::max<long>(1, static_cast<long>(std::llround(base * scale)));
}

std::string csv_line(std::initializer_list<std::string> fields) {
  std::string out;
  bool first = true;
  for (const auto& f : fields) {
    if (!first) out += ",";
    first = false;
    out += f;
  }
  out += "\n";
  return out;
}

std::string fd(double v) { return fmt_double(v); }

// the fixed test-function family (seed pinned so fitted constants are
// properties of the family, not of the run)
constexpr std::uint64_t kFamilySeed = 1004;

std::vector<FamilyMember> small_family(int dim, int count) {
  std::vector<FamilyMember> all = norm_experiment_family(dim, kFamilySeed);
  if (static_cast<int>(all.size()) > count) all.resize(count);
  return all;
}

// ---------------------------------------------------------------------------

SuiteResult suite_slow2(const SuiteConfig& cfg) {
  SuiteResult res;
  res.name = "slow2";
  long count = scaled(cfg.param("samples", 500000), cfg.scale);
  long violations[2] = {0, 0};
  for (int variant = 1; variant <= 2; ++variant) {
    std::vector<int> bad(count, 0);
    parallel_for(count, cfg.threads, [&](std::size_t i) {
      Rng rng(cfg.seed * 1000003 + variant * 7919 + i);
      int dim = 1 + static_cast<int>(rng.uniform_int(0, 1));
      double a = rng.uniform(0.25, 4.0);
      double t = rng.uniform_pos(a);
      double alpha = rng.uniform(1.0 + 1e-9, 50.0);
      double C = rng.uniform_pos(8.0);
      std::vector<double> x(dim), y(dim);
      for (auto& v : x) v = rng.uniform(-6.0, 6.0);
      for (auto& v : y) v = rng.uniform(-6.0, 6.0);
      if (!check_slow2(t, alpha, a, C, x, y, variant)) bad[i] = 1;
    });
    for (int b : bad) violations[variant - 1] += b;
  }
  res.violations = violations[0] + violations[1];
  res.hard_pass = res.violations == 0;
  std::string csv = "variant,samples,violations\n";
  csv += csv_line({"1", std::to_string(count), std::to_string(violations[0])});
  csv += csv_line({"2", std::to_string(count), std::to_string(violations[1])});
  res.artifacts.emplace_back("slow2.csv", csv);
  res.summary = "slow2: " + std::to_string(2 * count) + " samples, " +
                std::to_string(res.violations) + " violations";
  return res;
}

SuiteResult suite_est(const SuiteConfig& cfg) {
  SuiteResult res;
  res.name = "est";
  long count = scaled(cfg.param("samples", 20000), cfg.scale);
  std::string csv = "clause,kappa,a,alpha,N,samples,c_fit\n";
  bool ok = true;
  const std::pair<double, double> params[2] = {{0.5, 36.0}, {1.0, 36.0}};
  for (int clause = 1; clause <= 3; ++clause) {
    for (double kappa : {0.5, 1.0, 2.0}) {
      for (auto [a, alpha] : params) {
        std::vector<double> gaps(count, -1e300);
        parallel_for(count, cfg.threads, [&](std::size_t i) {
          Rng rng(cfg.seed * 73856093 + clause * 19349663 + static_cast<std::uint64_t>(kappa * 40) +
                  static_cast<std::uint64_t>(a * 16) + i);
          int N = static_cast<int>(rng.uniform_int(0, 2));
          std::vector<double> x(1), y(1);
          x[0] = rng.uniform(-5.0, 5.0);
          y[0] = rng.uniform(-5.0, 5.0);
          // the constraint t <= kappa m(.) attaches to y for clauses 1,3 and x for 2
          std::span<const double> anchor = (clause == 2) ? std::span<const double>(x)
                                                         : std::span<const double>(y);
          double cap = std::min(a, kappa * admissibility(anchor));
          double t = std::max(1.1e-6, rng.uniform_pos(cap));
          gaps[i] = est_clause_log_gap(clause, t, N, alpha, a, 0, x, y);
        });
        double worst = -1e300;
        for (double g : gaps) worst = std::max(worst, g);
        // deterministic lattice sweep: the sup sits on the parameter
        // boundary, and the max statistic must not depend on the seed
        for (int xi = 0; xi <= 40; ++xi) {
          double xv = -5.0 + 10.0 * xi / 40.0;
          for (int di = 0; di <= 20; ++di) {
            double yv = xv - 0.5 + 1.0 * di / 20.0;
            std::vector<double> x{xv}, y{yv};
            std::span<const double> anchor = (clause == 2) ? std::span<const double>(x)
                                                           : std::span<const double>(y);
            double cap = std::min(a, kappa * admissibility(anchor));
            for (int ti = 1; ti <= 10; ++ti) {
              double t = std::max(1.1e-6, cap * ti / 10.0);
              for (int N = 0; N <= 2; ++N)
                worst = std::max(worst, est_clause_log_gap(clause, t, N, alpha, a, 0, x, y));
            }
          }
        }
        double c_fit = std::exp(worst);
        ok = ok && std::isfinite(c_fit);
        std::ostringstream key;
        key << "est_c" << clause << "_k" << kappa << "_a" << a;
        res.fitted_constants[key.str()] = c_fit;
        csv += csv_line({std::to_string(clause), fd(kappa), fd(a), fd(alpha), "mixed",
                         std::to_string(count), fd(c_fit)});
      }
    }
  }
  res.hard_pass = ok;
  res.artifacts.emplace_back("est.csv", csv);
  res.summary = "est: fitted constants finite=" + std::string(ok ? "yes" : "no");
  return res;
}

SuiteResult suite_mnp1(const SuiteConfig& cfg) {
  SuiteResult res;
  res.name = "mnp1";
  long count = scaled(cfg.param("samples", 100000), cfg.scale);
  std::vector<int> bad(count, 0);
  parallel_for(count, cfg.threads, [&](std::size_t i) {
    Rng rng(cfg.seed * 2654435761 + i);
    int dim = 1 + static_cast<int>(rng.uniform_int(0, 1));
    std::vector<double> x(dim), y(dim);
    for (auto& v : x) v = rng.uniform(-8.0, 8.0);
    double a = rng.uniform_pos(4.0);
    double mx = admissibility(x);
    double r = a * mx * rng.uniform();
    if (dim == 1) {
      y[0] = x[0] + (rng.uniform() < 0.5 ? -r : r);
    } else {
      double th = rng.uniform(0.0, 2.0 * M_PI);
      y[0] = x[0] + r * std::cos(th);
      y[1] = x[1] + r * std::sin(th);
    }
    double my = admissibility(y);
    bool okx = mx <= (1.0 + a) * my * (1.0 + 1e-12);
    bool oky = my <= (2.0 + 2.0 * a) * mx * (1.0 + 1e-12);
    if (!(okx && oky)) bad[i] = 1;
  });
  for (int b : bad) res.violations += b;
  res.hard_pass = res.violations == 0;
  std::string csv = "samples,violations\n" +
                    csv_line({std::to_string(count), std::to_string(res.violations)});
  res.artifacts.emplace_back("mnp1.csv", csv);
  res.summary = "mnp1: " + std::to_string(count) + " samples, " +
                std::to_string(res.violations) + " violations";
  return res;
}

SuiteResult suite_mm(const SuiteConfig& cfg) {
  SuiteResult res;
  res.name = "mm";
  long count = scaled(cfg.param("samples", 100000), cfg.scale);
  std::vector<int> bad(count, 0);
  parallel_for(count, cfg.threads, [&](std::size_t i) {
    Rng rng(cfg.seed * 40503 + i);
    int dim = (rng.uniform() < 0.7) ? 1 : 2;
    std::vector<double> x(dim);
    for (auto& v : x) v = rng.uniform(-6.0, 6.0);
    double a = rng.uniform(1.0, 4.0);
    double b = rng.uniform(1.0, 4.0);
    double r = rng.uniform_pos(a * admissibility(x));
    double small = gaussian_ball_measure(x, r);
    double large = gaussian_ball_measure(x, b * r);
    double lg_bound = 2.0 * a * a * (2.0 * b + 1.0) * (2.0 * b + 1.0);
    if (std::log(large) > lg_bound + std::log(small) + 1e-10) bad[i] = 1;
  });
  for (int b : bad) res.violations += b;
  res.hard_pass = res.violations == 0;
  std::string csv = "samples,violations\n" +
                    csv_line({std::to_string(count), std::to_string(res.violations)});
  res.artifacts.emplace_back("mm.csv", csv);
  res.summary = "mm: " + std::to_string(count) + " samples, " +
                std::to_string(res.violations) + " violations";
  return res;
}

SuiteResult suite_region(const SuiteConfig&) {
  SuiteResult res;
  res.name = "region";
  std::string csv = "center,scale,tau,k,ratio\n";
  long bad = 0;
  // full-size admissible balls: by k = 3 the annuli reach the gaussian bulk
  // and the ratios decay geometrically
  std::vector<std::pair<double, double>> family;
  for (double c : {0.0, 1.0, 2.0})
    for (double s : {1.0, 0.5}) family.emplace_back(c, s);
  for (auto [c, s] : family) {
    std::vector<double> center{c};
    double m = admissibility(center);
    AdmissibleBall ball{{c}, s * m, s};
    double gb = gaussian_ball_measure(ball.center, ball.radius);
    for (double tau : {1.0, 2.0, 4.0}) {
      double cap = tau * m;
      std::vector<double> ratios;
      for (int k = 0; k <= 6; ++k) {
        double lo = (k == 0) ? 0.0 : std::ldexp(ball.radius, k);
        double hi = std::ldexp(ball.radius, k + 1);
        lo = std::min(lo, cap);
        hi = std::min(hi, cap);
        double measure = 0.0;
        if (hi > lo) {
          measure = gaussian_ball_measure(center, hi) -
                    (lo > 0.0 ? gaussian_ball_measure(center, lo) : 0.0);
        }
        double ratio = measure / (std::pow(2.0, k) * gb);
        ratios.push_back(ratio);
        csv += csv_line({fd(c), fd(s), fd(tau), std::to_string(k), fd(ratio)});
      }
      for (int k = 3; k + 1 <= 6; ++k) {
        if (ratios[k] == 0.0) {
          if (ratios[k + 1] > 0.0) ++bad;
          continue;
        }
        if (ratios[k + 1] / ratios[k] > 1.05) ++bad;
      }
    }
  }
  res.violations = bad;
  res.hard_pass = bad == 0;
  res.artifacts.emplace_back("region.csv", csv);
  res.summary = "region: stabilization violations " + std::to_string(bad);
  return res;
}

// discretized L^2(gamma) operator norm of the masked dual-kernel operator,
// log scale; n = 1
double od_log_norm(const AdmissibleBall& ball, int k, double t, int N, double alpha, int j,
                   int y_points, int x_points) {
  QuadratureRule ygl = gauss_legendre_on(ball.center[0] - ball.radius,
                                         ball.center[0] + ball.radius, y_points);
  double lo = std::ldexp(ball.radius, k), hi = std::ldexp(ball.radius, k + 1);
  std::vector<double> xs, xw;
  for (int side = 0; side < 2; ++side) {
    double a = ball.center[0] + (side == 0 ? lo : -hi);
    double b = ball.center[0] + (side == 0 ? hi : -lo);
    QuadratureRule xgl = gauss_legendre_on(a, b, x_points);
    xs.insert(xs.end(), xgl.nodes.begin(), xgl.nodes.end());
    xw.insert(xw.end(), xgl.weights.begin(), xgl.weights.end());
  }
  std::size_t rows = xs.size(), cols = ygl.nodes.size();
  std::vector<double> logm(rows * cols, -std::numeric_limits<double>::infinity());
  std::vector<double> sgn(rows * cols, 0.0);
  double lmax = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<double> x{xs[r]};
    double half_row = 0.5 * std::log(xw[r] * gamma_density(x));
    for (std::size_t c = 0; c < cols; ++c) {
      std::vector<double> y{ygl.nodes[c]};
      KernelEvaluation kv = kernel_Ktilde(t, N, alpha, j, x, y);
      if (kv.mantissa == 0.0) continue;
      double half_col = 0.5 * (std::log(ygl.weights[c]) - std::log(gamma_density(y)));
      double lv = kv.log_abs() + half_row + half_col;
      logm[r * cols + c] = lv;
      sgn[r * cols + c] = kv.mantissa > 0 ? 1.0 : -1.0;
      lmax = std::max(lmax, lv);
    }
  }
  if (!std::isfinite(lmax)) return -std::numeric_limits<double>::infinity();
  Eigen::MatrixXd M(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      double lv = logm[r * cols + c];
      M(r, c) = std::isfinite(lv) ? sgn[r * cols + c] * std::exp(lv - lmax) : 0.0;
    }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  return lmax + std::log(svd.singularValues()(0));
}

SuiteResult suite_od(const SuiteConfig& cfg) {
  SuiteResult res;
  res.name = "od";
  Rng rng(cfg.seed * 11400714819323198485ull + 3);
  double a = cfg.param("a", 0.5);
  double alpha = cfg.param("alpha", 8.0);
  int N = static_cast<int>(cfg.param("N", 1));
  double c = 1.0 + 0.1 * (rng.uniform() - 0.5);
  std::vector<double> center{c};
  double r = a * admissibility(center) * (0.7 + 0.1 * (rng.uniform() - 0.5));
  AdmissibleBall ball{{c}, r, a};

  std::string csv = "k,t_over_r,log_norm,log_norm_refined\n";
  std::vector<double> xi, yv;
  bool ok = true;
  std::map<double, std::vector<double>> by_t;
  for (double frac : {0.25, 0.5, 1.0}) {
    double t = frac * r;
    for (int k = 1; k <= 4; ++k) {
      double l1 = od_log_norm(ball, k, t, N, alpha, 0, 48, 40);
      double l2 = od_log_norm(ball, k, t, N, alpha, 0, 96, 80);
      // refinement agreement: 3% of the value, or 3% of the log magnitude
      // once the value sits far below double range
      if (std::isfinite(l1) && std::isfinite(l2) &&
          std::abs(l1 - l2) > std::max(std::log(1.03), 0.03 * std::abs(l2)))
        ok = false;
      csv += csv_line({std::to_string(k), fd(frac), fd(l2), fd(l1)});
      xi.push_back(std::pow(4.0, k) / (frac * frac));
      yv.push_back(l2);
      by_t[frac].push_back(l2);
    }
  }
  // monotone decrease in k per t
  for (auto& [frac, vals] : by_t)
    for (std::size_t i = 1; i < vals.size(); ++i)
      if (!(vals[i] < vals[i - 1])) ok = false;
  // least squares log-norm ~ A - c_rate xi
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    sx += xi[i];
    sy += yv[i];
    sxx += xi[i] * xi[i];
    sxy += xi[i] * yv[i];
  }
  double n = static_cast<double>(xi.size());
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double c_rate = -slope;
  ok = ok && c_rate > 0.0;
  res.fitted_constants["od_rate"] = c_rate;
  res.fitted_constants["od_ball_center"] = c;
  res.fitted_constants["od_ball_radius"] = r;
  res.hard_pass = ok;
  res.violations = ok ? 0 : 1;
  res.artifacts.emplace_back("od.csv", csv);
  res.summary = "od: fitted decay rate " + fd(c_rate);
  return res;
}

SuiteResult suite_pu(const SuiteConfig& cfg) {
  SuiteResult res;
  res.name = "pu";
  auto family = small_family(1, static_cast<int>(cfg.param("family", 8)));
  GridFunction grid = tensor_grid_function(1, 10);
  ConeSpec spec;
  spec.t_levels = 12;
  std::vector<double> r_grid;
  for (double r = 0.05; r < 8.0; r *= 1.6) r_grid.push_back(r);
  std::string csv = "id,c_fit\n";
  double worst = 0.0;
  for (const auto& m : family) {
    GridFunction tmax = maximal_function(m.u, spec, grid);
    GridFunction hl = hl_maximal(expansion_function(m.u), 1, grid, r_grid);
    double c_fit = 0.0;
    for (std::size_t i = 0; i < grid.count(); ++i)
      if (hl.values[i] > 0.0) c_fit = std::max(c_fit, tmax.values[i] / hl.values[i]);
    csv += csv_line({m.id, fd(c_fit)});
    worst = std::max(worst, c_fit);
  }
  res.fitted_constants["pu_c"] = worst;
  res.hard_pass = std::isfinite(worst) && worst > 0.0;
  res.artifacts.emplace_back("pu.csv", csv);
  res.summary = "pu: domination constant " + fd(worst);
  return res;
}

SuiteResult suite_glob(const SuiteConfig& cfg) {
  SuiteResult res;
  res.name = "glob";
  auto family = small_family(1, static_cast<int>(cfg.param("family", 6)));
  GridFunction grid = tensor_grid_function(1, 10);
  ConeSpec spec;
  spec.t_levels = 10;
  spec.radii_per_level = 3;
  std::string csv = "id,l1_glob,l1_u,ratio\n";
  double worst = 0.0;
  for (const auto& m : family) {
    RealFunction f = expansion_function(m.u);
    GridFunction glob = maximal_masked(f, 1, 1.0, 1.0, true, spec, grid, 24);
    glob.weights = grid.weights;
    double l1g = glob.l1_gamma();
    double l1u = synthesize_on(m.u, grid).l1_gamma();
    double ratio = l1u > 0 ? l1g / l1u : 0.0;
    worst = std::max(worst, ratio);
    csv += csv_line({m.id, fd(l1g), fd(l1u), fd(ratio)});
  }
  res.fitted_constants["glob_c"] = worst;
  res.hard_pass = std::isfinite(worst);
  res.artifacts.emplace_back("glob.csv", csv);
  res.summary = "glob: L1 constant " + fd(worst);
  return res;
}

SuiteResult suite_molecule(const SuiteConfig& cfg) {
  SuiteResult res;
  res.name = "molecule";
  long count = scaled(cfg.param("atoms", 50), cfg.scale);
  int N = static_cast<int>(cfg.param("N", 1));
  double alpha = cfg.param("alpha", 36.0);
  std::string csv = "seed,center,radius,norm_certificate,tent_norm,relation_err,rate,tilde_rate\n";
  long bad = 0;
  double clause0 = 0.0;
  std::vector<double> tents;
  ConeSpec tent_spec;
  tent_spec.t_levels = 12;
  tent_spec.radii_per_level = 3;
  BallMeasureCache cache;
  for (long i = 0; i < count; ++i) {
    // geometry on a fixed lattice; the seed draws the profile coefficients
    double c = -2.0 + 4.0 * (i % 17) / 16.0;
    double frac = 0.4 + 0.2 * (i % 4);
    AdmissibleBall ball{{c}, 0.0, 2.0};
    ball.radius = 2.0 * admissibility(ball.center) * frac;
    TentAtom atom = make_atom(ball, cfg.seed * 131 + i);
    double tn = tent_norm(atom, tent_spec, 64, &cache);
    tents.push_back(tn);
    AtomMoleculeResult mol = atom_to_molecule(atom, N, alpha, 0);
    double gb = gaussian_ball_measure(ball.center, ball.radius);
    clause0 = std::max(clause0,
                       std::exp(mol.report.log_annulus_norms[0] + 0.5 * std::log(gb)));
    bool ok = mol.relation_max_rel_error < 1e-5 && mol.report.fitted_decay_rate > 0.0 &&
              mol.report.tilde_fitted_decay_rate > 0.0;
    if (!ok) ++bad;
    csv += csv_line({std::to_string(i), fd(ball.center[0]), fd(ball.radius),
                     fd(atom.norm_certificate), fd(tn), fd(mol.relation_max_rel_error),
                     fd(mol.report.fitted_decay_rate), fd(mol.report.tilde_fitted_decay_rate)});
  }
  double tmin = *std::min_element(tents.begin(), tents.end());
  double tmax = *std::max_element(tents.begin(), tents.end());
  res.fitted_constants["tent_norm_spread"] = tmax / tmin;
  res.fitted_constants["clause0_c"] = clause0;
  res.violations = bad;
  res.hard_pass = bad == 0 && tmax / tmin < 20.0;
  res.artifacts.emplace_back("molecule.csv", csv);
  res.summary = "molecule: " + std::to_string(count) + " atoms, " + std::to_string(bad) +
                " failures, tent spread " + fd(tmax / tmin);
  return res;
}

SuiteResult suite_repro(const SuiteConfig& cfg) {
  SuiteResult res;
  res.name = "repro";
  double worst = 0.0;
  long count = scaled(cfg.param("functions", 12), cfg.scale);
  for (long i = 0; i < count; ++i) {
    int dim = 1 + static_cast<int>(i % 2);
    ChaosExpansion u = random_expansion(dim, 6, cfg.seed * 523 + i);
    ReproduceResult r = reproduce(u, 1, 2.0, 36.0, 20.0);
    worst = std::max(worst, (r.reconstruction - u).l2_norm());
  }
  // derived constant against the quadrature oracle
  double bt = 5.0 / 36.0;
  PanelRule panels = log_panels(1e-8, 60.0 / std::sqrt(bt), 32, 16);
  double I = 0.0;
  for (std::size_t i = 0; i < panels.t.size(); ++i) {
    double t = panels.t[i];
    I += panels.w[i] / t * std::pow(-t * t, 2) * std::exp(-bt * t * t);
  }
  double oracle_gap = std::abs(reproducing_constant(1, 2.0, 36.0) * I - 1.0);
  res.fitted_constants["max_reconstruction_error"] = worst;
  res.fitted_constants["constant_oracle_gap"] = oracle_gap;
  res.hard_pass = worst < 1e-7 && oracle_gap < 1e-10;
  res.violations = res.hard_pass ? 0 : 1;
  std::string csv = "max_reconstruction_error,constant_oracle_gap\n" +
                    csv_line({fd(worst), fd(oracle_gap)});
  res.artifacts.emplace_back("repro.csv", csv);
  res.summary = "repro: max error " + fd(worst);
  return res;
}

SuiteResult suite_jinf(const SuiteConfig& cfg) {
  SuiteResult res;
  res.name = "jinf";
  auto family = small_family(1, static_cast<int>(cfg.param("family", 8)));
  GridFunction grid = tensor_grid_function(1, 12);
  std::string csv = "id,l1_J,l1_u,ratio\n";
  double worst = 0.0;
  double conv = 0.0;
  for (const auto& m : family) {
    GridFunction j20 = apply_J_infty(m.u, 1, 2.0, 36.0, 6.0, 20.0, grid);
    GridFunction j25 = apply_J_infty(m.u, 1, 2.0, 36.0, 6.0, 25.0, grid);
    double l1 = j20.l1_gamma();
    double l1u = synthesize_on(m.u, grid).l1_gamma();
    double ratio = l1u > 0 ? l1 / l1u : 0.0;
    worst = std::max(worst, ratio);
    conv = std::max(conv, std::abs(j25.l1_gamma() - l1));
    csv += csv_line({m.id, fd(l1), fd(l1u), fd(ratio)});
  }
  res.fitted_constants["jinf_c"] = worst;
  res.fitted_constants["jinf_tmax_increment"] = conv;
  res.hard_pass = std::isfinite(worst) && conv < 1e-8;
  res.violations = res.hard_pass ? 0 : 1;
  res.artifacts.emplace_back("jinf.csv", csv);
  res.summary = "jinf: L1 constant " + fd(worst);
  return res;
}

SuiteResult suite_dcomp(const SuiteConfig& cfg) {
  SuiteResult res;
  res.name = "dcomp";
  auto family = small_family(1, static_cast<int>(cfg.param("family", 4)));
  GridFunction grid = tensor_grid_function(1, 8);
  std::string csv = "id,b,l1_term,l1_u,ratio\n";
  double worst = 0.0, worst_explore = 0.0;
  // b = 6 is the lemma regime (the masked region is then far below the
  // kernel's reach and the term is numerically zero); b = 1 exercises the
  // mask with live mass
  for (double b : {6.0, 1.0}) {
    DcRemainderParams p;
    p.b = b;
    for (const auto& m : family) {
      GridFunction out = apply_J_remainder_Dc(m.u, p, grid);
      double l1 = out.l1_gamma();
      double l1u = synthesize_on(m.u, grid).l1_gamma();
      double ratio = l1u > 0 ? l1 / l1u : 0.0;
      if (b == 6.0)
        worst = std::max(worst, ratio);
      else
        worst_explore = std::max(worst_explore, ratio);
      csv += csv_line({m.id, fd(b), fd(l1), fd(l1u), fd(ratio)});
    }
  }
  res.fitted_constants["dcomp_c"] = worst;
  res.fitted_constants["dcomp_c_b1"] = worst_explore;
  res.hard_pass = std::isfinite(worst) && std::isfinite(worst_explore);
  res.artifacts.emplace_back("dcomp.csv", csv);
  res.summary = "dcomp: L1 constant " + fd(worst);
  return res;
}

SuiteResult suite_r1(const SuiteConfig& cfg) {
  SuiteResult res;
  res.name = "r1";
  long count = scaled(cfg.param("atoms", 8), cfg.scale);
  int N = static_cast<int>(cfg.param("N", 1));
  double alpha = cfg.param("alpha", 36.0);
  double b = cfg.param("b", 6.0);
  GridFunction grid = tensor_grid_function(1, 10);
  std::string csv = "seed,center,radius,l1_term\n";
  double worst = 0.0;
  for (long i = 0; i < count; ++i) {
    double c = -1.5 + 3.0 * (i % 7) / 6.0;
    double frac = 0.5 + 0.5 * (i % 3) / 2.0;
    AdmissibleBall ball{{c}, 0.0, 2.0};
    ball.radius = 2.0 * admissibility(ball.center) * frac;
    // canonical profiles: the fitted constant is a property of the family
    TentAtom atom = make_atom(ball, 77 + i);
    double acc = 0.0;
    for (std::size_t g = 0; g < grid.count(); ++g) {
      SignedLog v = masked_tail_field_value(atom, N, alpha, 0, b, grid.point(g));
      acc += grid.weights[g] * std::abs(v.value());
    }
    worst = std::max(worst, acc);
    csv += csv_line({std::to_string(i), fd(ball.center[0]), fd(ball.radius), fd(acc)});
  }
  res.fitted_constants["r1_c"] = worst;
  res.hard_pass = std::isfinite(worst);
  res.artifacts.emplace_back("r1.csv", csv);
  res.summary = "r1: max L1 norm " + fd(worst);
  return res;
}

SuiteResult suite_riesz(const SuiteConfig& cfg) {
  SuiteResult res;
  res.name = "riesz";
  bool ok = true;
  // exact 1d identities
  for (int k = 1; k <= 8; ++k) {
    ChaosExpansion rk =
        riesz_apply(ChaosExpansion::unit(MultiIndex({k})), RieszQuery{0, RieszVariant::R});
    ok = ok && rk.coefficients.size() == 1 &&
         std::abs(rk.get(MultiIndex({k - 1})) - std::sqrt(2.0)) < 1e-14;
    ChaosExpansion sk =
        riesz_apply(ChaosExpansion::unit(MultiIndex({k})), RieszQuery{0, RieszVariant::S});
    ok = ok && sk.coefficients.size() == 1 &&
         std::abs(sk.get(MultiIndex({k + 1})) - std::sqrt(2.0 * (k + 1) / double(k))) < 1e-14;
  }
  // adjoint pairing against the operator adjoint M d*_k
  double worst_pair = 0.0;
  for (int i = 0; i < 4; ++i) {
    ChaosExpansion f = random_expansion(2, 5, cfg.seed * 31 + i);
    ChaosExpansion g = random_expansion(2, 5, cfg.seed * 37 + i);
    for (int axis = 0; axis < 2; ++axis) {
      double lhs = 0.0, rhs = 0.0;
      ChaosExpansion rf = riesz_apply(f, RieszQuery{axis, RieszVariant::R});
      ChaosExpansion ag = riesz_R_adjoint(g, axis);
      for (const auto& [beta, c] : rf.coefficients) lhs += c * g.get(beta);
      for (const auto& [beta, c] : ag.coefficients) rhs += c * f.get(beta);
      worst_pair = std::max(worst_pair, std::abs(lhs - rhs));
    }
  }
  ok = ok && worst_pair < 1e-9;
  // dual path agreement
  double worst_path = 0.0;
  ChaosExpansion u = random_expansion(1, 6, cfg.seed * 41);
  for (auto variant : {RieszVariant::R, RieszVariant::S}) {
    ChaosExpansion spec = riesz_apply(u, RieszQuery{0, variant});
    ChaosExpansion integral =
        riesz_apply(u, RieszQuery{0, variant, RieszPath::Integral, 1, 36.0, 20.0});
    for (const auto& [beta, c] : spec.coefficients)
      worst_path =
          std::max(worst_path, std::abs(integral.get(beta) - c) / std::max(1.0, std::abs(c)));
  }
  ok = ok && worst_path < 1e-6;
  // L2 experiment
  auto family = small_family(1, 10);
  RieszL2Report l2 = riesz_l2_norm_experiment(family, 0);
  ok = ok && std::abs(l2.sup_r - std::sqrt(2.0)) < 1e-9;
  // h1 experiment
  ConeSpec spec;
  spec.t_levels = 10;
  spec.radii_per_level = 3;
  GridFunction grid = tensor_grid_function(1, 10);
  auto h1fam = small_family(1, static_cast<int>(cfg.param("family", 6)));
  RieszH1Report h1 = riesz_h1_experiment(h1fam, 0, spec, grid);
  ok = ok && std::isfinite(h1.sup_r) && std::isfinite(h1.sup_s);

  res.fitted_constants["riesz_pairing_gap"] = worst_pair;
  res.fitted_constants["riesz_path_gap"] = worst_path;
  res.fitted_constants["riesz_l2_sup"] = l2.sup_r;
  res.fitted_constants["riesz_h1_sup_R"] = h1.sup_r;
  res.fitted_constants["riesz_h1_sup_S"] = h1.sup_s;
  std::string csv = "id,variant,axis,l2_ratio,l1_h1_ratio\n";
  for (std::size_t i = 0; i < h1.rows.size(); ++i) {
    csv += csv_line({h1.rows[i].id, "R", "0", fd(l2.rows.size() > i ? l2.rows[i].r_ratio : 0.0),
                     fd(h1.rows[i].r_ratio)});
    csv += csv_line({h1.rows[i].id, "S", "0", fd(l2.rows.size() > i ? l2.rows[i].s_ratio : 0.0),
                     fd(h1.rows[i].s_ratio)});
  }
  res.hard_pass = ok;
  res.violations = ok ? 0 : 1;
  res.artifacts.emplace_back("riesz.csv", csv);
  res.summary = "riesz: h1 sup R " + fd(h1.sup_r);
  return res;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"slow2", "est",      "mnp1",  "mm",
                                                 "region", "od",      "pu",    "glob",
                                                 "molecule", "repro", "jinf",  "dcomp",
                                                 "r1",     "riesz"};
  return names;
}

SuiteResult run_suite(const std::string& name, const SuiteConfig& config) {
  SuiteResult res;
  if (name == "slow2") res = suite_slow2(config);
  else if (name == "est") res = suite_est(config);
  else if (name == "mnp1") res = suite_mnp1(config);
  else if (name == "mm") res = suite_mm(config);
  else if (name == "region") res = suite_region(config);
  else if (name == "od") res = suite_od(config);
  else if (name == "pu") res = suite_pu(config);
  else if (name == "glob") res = suite_glob(config);
  else if (name == "molecule") res = suite_molecule(config);
  else if (name == "repro") res = suite_repro(config);
  else if (name == "jinf") res = suite_jinf(config);
  else if (name == "dcomp") res = suite_dcomp(config);
  else if (name == "r1") res = suite_r1(config);
  else if (name == "riesz") res = suite_riesz(config);
  else throw std::invalid_argument("unknown suite: " + name);

  if (!config.results_dir.empty()) {
    std::filesystem::path dir(config.results_dir);
    std::filesystem::create_directories(dir / res.name);
    for (const auto& [fname, content] : res.artifacts)
      io::write_text_file((dir / res.name / fname).string(), content);
    std::string config_repr = "suite=" + res.name + ";seed=" + std::to_string(config.seed) +
                              ";scale=" + fmt_double(config.scale);
    for (const auto& [k, v] : config.params) config_repr += ";" + k + "=" + fmt_double(v);
    std::ostringstream mf;
    mf << "{\n  \"suite\": \"" << res.name << "\",\n  \"seed\": " << config.seed
       << ",\n  \"config_hash\": \"fnv1a64:" << hex64(fnv1a64(config_repr))
       << "\",\n  \"violations\": " << res.violations
       << ",\n  \"hard_pass\": " << (res.hard_pass ? "true" : "false")
       << ",\n  \"artifacts\": {";
    bool first = true;
    for (const auto& [fname, content] : res.artifacts) {
      if (!first) mf << ", ";
      first = false;
      mf << "\"" << fname << "\": \"fnv1a64:" << hex64(fnv1a64(content)) << "\"";
    }
    mf << "}\n}\n";
    io::write_text_file((dir / res.name / "manifest.json").string(), mf.str());
  }
  return res;
}

NormEquivalenceReport norm_equivalence_experiment(const SuiteConfig& config) {
  NormEquivalenceReport rep;
  auto family = norm_experiment_family(1, 1004);
  GridFunction grid = tensor_grid_function(1, static_cast<int>(config.param("grid_order", 14)));
  ConeSpec base;
  base.t_levels = static_cast<int>(config.param("t_levels", 10));
  base.radii_per_level = static_cast<int>(config.param("radii", 3));
  BallMeasureCache cache;

  std::string csv = "function_id,a_prime,resolution,h1_quad,h1_max,ratio\n";
  for (int resolution = 0; resolution < 2; ++resolution) {
    ConeSpec spec = resolution == 0 ? base : base.refined();
    for (double ap : {1.0, 2.0, 4.0}) {
      double lo = 1e300, hi = 0.0;
      for (const auto& m : family) {
        H1Norms n = h1_norms(m.u, 2.0, ap, spec, grid, &cache);
        rep.rows.push_back({m.id, ap, resolution, n.quad, n.max, n.ratio});
        csv += csv_line({m.id, fd(ap), std::to_string(resolution), fd(n.quad), fd(n.max),
                         fd(n.ratio)});
        lo = std::min(lo, n.ratio);
        hi = std::max(hi, n.ratio);
      }
      if (resolution == 0)
        rep.spread_base[ap] = hi / lo;
      else
        rep.spread_refined[ap] = hi / lo;
    }
  }
  rep.constant_row_exact = true;
  for (const auto& row : rep.rows)
    if (row.id == "h_0" && row.ratio != 1.0) rep.constant_row_exact = false;
  rep.spread_bounded = true;
  rep.spread_non_increasing = true;
  for (auto& [ap, s] : rep.spread_base) {
    if (!(s < 50.0) || !(rep.spread_refined[ap] < 50.0)) rep.spread_bounded = false;
    if (!(rep.spread_refined[ap] <= s)) rep.spread_non_increasing = false;
  }
  rep.csv = csv;
  if (!config.results_dir.empty()) {
    std::filesystem::path dir(config.results_dir);
    std::filesystem::create_directories(dir / "norms");
    io::write_text_file((dir / "norms" / "norm_equivalence.csv").string(), csv);
  }
  return rep;
}

RunAllResult run_all(const SuiteConfig& config) {
  RunAllResult all;
  all.all_pass = true;
  std::ostringstream manifest;
  manifest << "{\n  \"seed\": " << config.seed << ",\n  \"scale\": " << fmt_double(config.scale)
           << ",\n";
  std::string config_repr = "seed=" + std::to_string(config.seed) +
                            ";scale=" + fmt_double(config.scale);
  for (const auto& [k, v] : config.params) config_repr += ";" + k + "=" + fmt_double(v);
  manifest << "  \"config_hash\": \"fnv1a64:" << hex64(fnv1a64(config_repr)) << "\",\n";
  manifest << "  \"suites\": {\n";
  bool first = true;
  for (const auto& name : suite_names()) {
    SuiteResult r = run_suite(name, config);
    if (!first) manifest << ",\n";
    first = false;
    manifest << "    \"" << name << "\": {\"violations\": " << r.violations
             << ", \"hard_pass\": " << (r.hard_pass ? "true" : "false") << ", \"fitted\": {";
    bool f2 = true;
    for (const auto& [k, v] : r.fitted_constants) {
      if (!f2) manifest << ", ";
      f2 = false;
      manifest << "\"" << k << "\": " << fmt_double(v);
    }
    manifest << "}, \"artifacts\": {";
    f2 = true;
    for (const auto& [fname, content] : r.artifacts) {
      if (!f2) manifest << ", ";
      f2 = false;
      manifest << "\"" << name << "/" << fname << "\": \"fnv1a64:" << hex64(fnv1a64(content))
               << "\"";
    }
    manifest << "}}";
    all.all_pass = all.all_pass && r.hard_pass;
    all.suites.push_back(std::move(r));
  }
  NormEquivalenceReport norms = norm_equivalence_experiment(config);
  manifest << ",\n    \"norms\": {\"violations\": "
           << ((norms.constant_row_exact && norms.spread_bounded) ? 0 : 1)
           << ", \"hard_pass\": "
           << ((norms.constant_row_exact && norms.spread_bounded) ? "true" : "false")
           << ", \"spread_non_increasing\": "
           << (norms.spread_non_increasing ? "true" : "false") << ", \"fitted\": {";
  bool f3 = true;
  for (auto& [ap, s] : norms.spread_base) {
    if (!f3) manifest << ", ";
    f3 = false;
    manifest << "\"spread_base_a" << fmt_double(ap) << "\": " << fmt_double(s)
             << ", \"spread_refined_a" << fmt_double(ap) << "\": "
             << fmt_double(norms.spread_refined[ap]);
  }
  manifest << "}, \"artifacts\": {\"norms/norm_equivalence.csv\": \"fnv1a64:"
           << hex64(fnv1a64(norms.csv)) << "\"}}";
  // the non-increase of the spread under refinement is reported, not
  // asserted: discrete sups converge to the continuum from below, so the
  // spread approaches its limit from below as well
  all.all_pass = all.all_pass && norms.constant_row_exact && norms.spread_bounded;
  manifest << "\n  }\n}\n";
  all.manifest_json = manifest.str();
  if (!config.results_dir.empty()) {
    std::filesystem::create_directories(config.results_dir);
    io::write_text_file((std::filesystem::path(config.results_dir) / "manifest.json").string(),
                        all.manifest_json);
  }
  return all;
}

}  // namespace gh
