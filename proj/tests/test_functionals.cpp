#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "gausshardy/functionals.hpp"
#include "gausshardy/quadrature.hpp"
#include "gausshardy/semigroup.hpp"

using namespace gh;

namespace {
MultiIndex mi(std::vector<int> e) { return MultiIndex(std::move(e)); }
}

TEST_CASE("maximal function basics") {
  GridFunction grid = tensor_grid_function(1, 12);
  ConeSpec spec;
  SUBCASE("maximal of the constant is exactly one") {
    GridFunction t = maximal_function(ChaosExpansion::constant(1, 1.0), spec, grid);
    for (double v : t.values) CHECK(v == 1.0);
    CHECK(t.l1_gamma() == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("sup dominates the cone-tip axis sample exactly") {
    ChaosExpansion u = ChaosExpansion::unit(mi({1}));
    GridFunction t = maximal_function(u, spec, grid);
    for (std::size_t i = 0; i < grid.count(); ++i) {
      auto x = grid.point(i);
      double tmax = spec.admissibility * admissibility(x);
      // (x, a m(x)) is itself a sample, so the discrete sup dominates it
      double axis_val = std::abs(std::exp(-tmax * tmax) * eval_expansion(u, x));
      CHECK(t.values[i] >= axis_val);
    }
  }
}

TEST_CASE("hardy-littlewood maximal function") {
  GridFunction grid = tensor_grid_function(1, 10);
  std::vector<double> r_grid;
  for (double r = 0.05; r < 8.0; r *= 1.5) r_grid.push_back(r);
  SUBCASE("constant averages to one") {
    GridFunction m = hl_maximal([](std::span<const double>) { return 1.0; }, 1, grid, r_grid);
    for (double v : m.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("bump attains its maximum at the center and caps at sup |u|") {
    ChaosExpansion bump;
    {
      GridFunction g = tensor_grid_function(1, 16);
      for (std::size_t i = 0; i < g.count(); ++i)
        g.values[i] = std::exp(-2.0 * g.point(i)[0] * g.point(i)[0]);
      bump = analyze(g, 6);
    }
    RealFunction f = expansion_function(bump);
    double sup_abs = 0.0;
    for (double x = -4.0; x <= 4.0; x += 0.01)
      sup_abs = std::max(sup_abs, std::abs(f(std::vector<double>{x})));
    std::vector<double> points{0.0, 0.7, 1.5, 2.5};
    GridFunction probe;
    probe.dimension = 1;
    probe.points = points;
    probe.values.assign(points.size(), 0.0);
    GridFunction m = hl_maximal(f, 1, probe, r_grid);
    CHECK(m.values[0] >= m.values[1]);
    CHECK(m.values[1] >= m.values[2]);
    CHECK(m.values[2] >= m.values[3]);
    for (double v : m.values) CHECK(v <= sup_abs * (1.0 + 1e-9));
  }
  SUBCASE("pointwise domination of the non-tangential maximal function") {
    ChaosExpansion u = random_expansion(1, 4, 21);
    ConeSpec spec;
    GridFunction t = maximal_function(u, spec, grid);
    GridFunction m = hl_maximal(expansion_function(u), 1, grid, r_grid);
    double c_fit = 0.0;
    for (std::size_t i = 0; i < grid.count(); ++i) c_fit = std::max(c_fit, t.values[i] / m.values[i]);
    CHECK(std::isfinite(c_fit));
    CHECK(c_fit < 50.0);
  }
}

TEST_CASE("local and global maximal parts") {
  GridFunction grid = tensor_grid_function(1, 8);
  ConeSpec spec;
  spec.t_levels = 12;
  // nonnegative polynomial input so kernel quadrature is exact
  ChaosExpansion u;
  {
    GridFunction g = tensor_grid_function(1, 12);
    for (std::size_t i = 0; i < g.count(); ++i) {
      double x = g.point(i)[0];
      g.values[i] = (1.0 + 0.5 * x) * (1.0 + 0.5 * x) + 0.3;
    }
    u = analyze(g, 4);
  }
  RealFunction f = expansion_function(u);
  SUBCASE("masked parts sum to the full kernel integral at every sample") {
    // per cone sample the masks partition the quadrature nodes, so the sup
    // of the summed parts equals the plain maximal function of u >= 0
    TensorGrid w = gamma_tensor_grid(1, 32);
    double tau = 0.5 * (1.0 + 1.0) * (1.0 + 2.0);
    GridFunction full = maximal_function(u, spec, grid);
    for (std::size_t i = 0; i < grid.count(); ++i) {
      auto x = grid.point(i);
      double best = 0.0;
      for (const auto& s : cone_points(x, spec)) {
        double E = std::exp(-s.t * s.t);
        double sq = std::sqrt(1.0 - E * E);
        double my = admissibility(s.y);
        double loc = 0.0, glob = 0.0;
        for (std::size_t qi = 0; qi < w.count(); ++qi) {
          std::vector<double> z{E * s.y[0] + sq * w.point(qi)[0]};
          double v = w.weights[qi] * std::abs(f(z));
          (dist2(s.y, z) <= tau * my ? loc : glob) += v;
        }
        best = std::max(best, loc + glob);
      }
      CHECK(std::abs(best - full.values[i]) < 1e-8);
    }
  }
  SUBCASE("local + global = full split, and the global part loses mass on constants") {
    GridFunction loc = maximal_masked(f, 1, 1.0, 1.0, false, spec, grid);
    GridFunction glob = maximal_masked(f, 1, 1.0, 1.0, true, spec, grid);
    GridFunction full = maximal_function(u, spec, grid);
    for (std::size_t i = 0; i < grid.count(); ++i) {
      // masks partition each sample, so the sup of sums dominates both parts
      CHECK(loc.values[i] + glob.values[i] >= full.values[i] - 1e-8);
      CHECK(loc.values[i] <= full.values[i] + 1e-8);
    }
    GridFunction glob1 =
        maximal_masked([](std::span<const double>) { return 1.0; }, 1, 1.0, 1.0, true, spec, grid);
    bool some_loss = false;
    for (double v : glob1.values) some_loss = some_loss || v < 0.999999;
    CHECK(some_loss);
  }
}

TEST_CASE("square function") {
  GridFunction grid = tensor_grid_function(1, 10);
  ConeSpec spec;
  SUBCASE("vanishes exactly on constants") {
    GridFunction s = square_function(ChaosExpansion::constant(1, 1.0), 2.0, spec, grid);
    for (double v : s.values) CHECK(v == 0.0);
  }
  SUBCASE("positive for h_1") {
    GridFunction s = square_function(ChaosExpansion::unit(mi({1})), 2.0, spec, grid);
    for (double v : s.values) CHECK(v > 0.0);
  }
  SUBCASE("stable under cone refinement") {
    ChaosExpansion u = random_expansion(1, 4, 33);
    GridFunction a = square_function(u, 2.0, spec, grid);
    GridFunction b = square_function(u, 2.0, spec.refined(), grid);
    a.weights = grid.weights;
    b.weights = grid.weights;
    CHECK(std::abs(a.l1_gamma() - b.l1_gamma()) / b.l1_gamma() < 0.02);
  }
}

TEST_CASE("monotonicity in aperture and admissibility on a filtered sample set") {
  ChaosExpansion u = random_expansion(1, 4, 37);
  std::vector<double> x{0.6};
  ConeSpec big;
  big.aperture = 2.0;
  big.admissibility = 4.0;
  auto samples = cone_points(x, big);
  auto filtered_sup = [&](double A, double a) {
    double best = 0.0;
    for (const auto& s : samples) {
      if (!(dist2(s.y, x) < A * s.t) && dist2(s.y, x) != 0.0) continue;
      if (!(s.t <= a * admissibility(x))) continue;
      ChaosExpansion heat = apply_semigroup(u, SemigroupQuery::heat(s.t * s.t));
      best = std::max(best, std::abs(eval_expansion(heat, s.y)));
    }
    return best;
  };
  double t11 = filtered_sup(1.0, 1.0);
  double t21 = filtered_sup(2.0, 1.0);
  double t14 = filtered_sup(1.0, 4.0);
  CHECK(t21 >= t11);
  CHECK(t14 >= t11);
}

TEST_CASE("h1 norms") {
  GridFunction grid = tensor_grid_function(1, 14);
  ConeSpec spec;
  SUBCASE("constant has ratio exactly one") {
    H1Norms n = h1_norms(ChaosExpansion::constant(1, 1.0), 2.0, 2.0, spec, grid);
    CHECK(n.quad == n.max);
    CHECK(n.ratio == 1.0);
  }
  SUBCASE("h_1 norms finite and positive") {
    H1Norms n = h1_norms(ChaosExpansion::unit(mi({1})), 2.0, 2.0, spec, grid);
    CHECK(n.quad > 0.0);
    CHECK(n.max > 0.0);
    CHECK(std::isfinite(n.ratio));
  }
}

TEST_CASE("tent atoms") {
  AdmissibleBall ball{{1.0}, 0.8, 2.0};
  TentAtom atom = make_atom(ball, 5);
  SUBCASE("support condition holds at every nonzero sample") {
    std::size_t ycount = atom.y_points.size();
    for (std::size_t ti = 0; ti < atom.t_samples.size(); ++ti) {
      for (std::size_t yi = 0; yi < ycount; ++yi) {
        if (atom.profile[ti * ycount + yi] == 0.0) continue;
        std::vector<double> y{atom.y_points[yi]};
        double d_bc = ball.radius - std::abs(y[0] - ball.center[0]);
        CHECK(atom.t_samples[ti] <= std::min(d_bc, admissibility(y)) * (1.0 + 1e-12));
      }
    }
  }
  SUBCASE("normalization certificate in [0.9, 1.0]") {
    CHECK(atom.norm_certificate >= 0.9);
    CHECK(atom.norm_certificate <= 1.0);
  }
  SUBCASE("degenerate balls are rejected") {
    AdmissibleBall tiny{{100000.0}, 1e-10, 2.0};
    CHECK_THROWS_AS(make_atom(tiny, 1), std::domain_error);
  }
  SUBCASE("tent norm is homogeneous and finite") {
    ConeSpec spec;
    spec.t_levels = 12;
    double n1 = tent_norm(atom, spec, 48);
    CHECK(n1 > 0.0);
    TentAtom scaled = atom;
    scaled.amplitude *= 3.0;
    CHECK(tent_norm(scaled, spec, 48) == doctest::Approx(3.0 * n1).epsilon(1e-10));
  }
  SUBCASE("zero field has zero tent norm") {
    ConeSpec spec;
    spec.t_levels = 8;
    TentField zero = [](double, std::span<const double>) { return 0.0; };
    CHECK(tent_norm(zero, ball, spec, 24) == 0.0);
  }
  SUBCASE("triangle inequality on atom pairs") {
    ConeSpec spec;
    spec.t_levels = 12;
    BallMeasureCache cache;
    for (std::uint64_t seed : {21u, 22u}) {
      TentAtom g = make_atom(ball, seed);
      TentField sum = [&](double t, std::span<const double> y) {
        return atom.eval(t, y) + g.eval(t, y);
      };
      double ns = tent_norm(sum, ball, spec, 48, &cache);
      double na = tent_norm(atom, spec, 48, &cache);
      double ng = tent_norm(g, spec, 48, &cache);
      CHECK(ns <= na + ng + 1e-10);
    }
  }
}

TEST_CASE("atom to molecule pipeline") {
  AdmissibleBall ball{{1.0}, 0.4, 2.0};
  TentAtom atom = make_atom(ball, 11);
  AtomMoleculeResult res = atom_to_molecule(atom, 1, 36.0, 0);
  SUBCASE("f equals L^N applied to f_tilde in coefficients") {
    CHECK(res.relation_max_rel_error < 1e-5);
  }
  SUBCASE("annulus norms decay with positive fitted rate") {
    CHECK(res.report.fitted_decay_rate > 0.0);
    CHECK(res.report.tilde_fitted_decay_rate > 0.0);
    for (int k = 2; k <= 4; ++k)
      CHECK(res.report.log_annulus_norms[k] < res.report.log_annulus_norms[k - 1]);
  }
  SUBCASE("zero field satisfies every clause") {
    MoleculeField zero = [](std::span<const double>) { return SignedLog::zero(); };
    MoleculeReport rep = check_molecule(zero, zero, ball, 1, 100.0);
    for (double v : rep.annulus_norms) CHECK(v == 0.0);
  }
  SUBCASE("decay rates stay positive at alpha = 100 and N = 2") {
    AtomMoleculeResult res100 = atom_to_molecule(atom, 2, 100.0, 0);
    CHECK(res100.relation_max_rel_error < 1e-5);
    CHECK(res100.report.fitted_decay_rate > 0.0);
    CHECK(res100.report.tilde_fitted_decay_rate > 0.0);
  }
  SUBCASE("tilde norms carry the r^{2N} scaling against a second run") {
    // same atom, N=2: the k=0 tilde bound scales consistently with r^{2N}
    AtomMoleculeResult res2 = atom_to_molecule(atom, 2, 36.0, 0);
    double r = ball.radius;
    double lhs1 = res.report.log_tilde_annulus_norms[0] - 2.0 * 1 * std::log(r);
    double lhs2 = res2.report.log_tilde_annulus_norms[0] - 2.0 * 2 * std::log(r);
    // both normalized bounds stay within a factor ~50 of each other
    CHECK(std::abs(lhs1 - lhs2) < std::log(50.0));
  }
}

TEST_CASE("molecule pipeline in two dimensions") {
  AdmissibleBall ball{{0.7, -0.3}, 0.5, 2.0};
  TentAtom atom = make_atom(ball, 23);
  CHECK(atom.norm_certificate == doctest::Approx(0.99).epsilon(1e-6));
  MoleculeQuadrature mq;
  mq.t_points_per_decade = 8;
  mq.t_lo_fraction = 1e-2;
  mq.annulus_points = 6;
  mq.k_max = 3;
  AtomMoleculeResult res = atom_to_molecule(atom, 1, 36.0, 1, mq, 16, 6);
  CHECK(res.relation_max_rel_error < 1e-5);
  CHECK(res.report.fitted_decay_rate > 0.0);
  CHECK(res.report.tilde_fitted_decay_rate > 0.0);
}

TEST_CASE("norm experiment family is fixed and well formed") {
  auto fam = norm_experiment_family(1, 7);
  CHECK(fam.size() == 20);
  CHECK(fam[0].id == "h_0");
  auto fam2 = norm_experiment_family(1, 7);
  for (std::size_t i = 0; i < fam.size(); ++i) {
    CHECK(fam[i].id == fam2[i].id);
    CHECK((fam[i].u - fam2[i].u).l2_norm() == 0.0);
  }
}
