#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "gausshardy/riesz.hpp"
#include "gausshardy/semigroup.hpp"

using namespace gh;

namespace {
MultiIndex mi(std::vector<int> e) { return MultiIndex(std::move(e)); }

double coeff_inner(const ChaosExpansion& a, const ChaosExpansion& b) {
  double s = 0.0;
  for (const auto& [beta, c] : a.coefficients) s += c * b.get(beta);
  return s;
}
}

TEST_CASE("multiplier M") {
  CHECK(apply_M(ChaosExpansion::constant(1, 1.0)).coefficients.empty());
  ChaosExpansion m2 = apply_M(ChaosExpansion::unit(mi({2})));
  CHECK(m2.get(mi({2})) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  // M^2 equals the multiplier 1/|beta|
  ChaosExpansion u = random_expansion(2, 4, 71);
  ChaosExpansion twice = apply_M(apply_M(u));
  for (const auto& [beta, c] : u.coefficients) {
    double expect = beta.order() == 0 ? 0.0 : c / beta.order();
    CHECK(twice.get(beta) == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("riesz transforms act exactly on the 1d eigenfunctions") {
  for (int k = 1; k <= 8; ++k) {
    ChaosExpansion rk = riesz_apply(ChaosExpansion::unit(mi({k})), RieszQuery{0, RieszVariant::R});
    CHECK(rk.coefficients.size() == 1);
    CHECK(rk.get(mi({k - 1})) == doctest::Approx(std::sqrt(2.0)).epsilon(4e-16));
    ChaosExpansion sk = riesz_apply(ChaosExpansion::unit(mi({k})), RieszQuery{0, RieszVariant::S});
    CHECK(sk.coefficients.size() == 1);
    CHECK(sk.get(mi({k + 1})) ==
          doctest::Approx(std::sqrt(2.0 * (k + 1) / double(k))).epsilon(4e-16));
  }
  CHECK(riesz_apply(ChaosExpansion::constant(1, 1.0), RieszQuery{}).coefficients.empty());
  ChaosExpansion s1 = riesz_apply(ChaosExpansion::unit(mi({1})), RieszQuery{0, RieszVariant::S});
  CHECK(s1.get(mi({2})) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("adjoint pairing of the riesz transform") {
  // <R_k f, g> = <f, M d*_k g>; note S_k = d*_k M is not the adjoint of R_k
  // because the order multiplier does not commute with the ladder operators
  for (std::uint64_t seed : {81u, 82u, 83u}) {
    ChaosExpansion f = random_expansion(2, 5, seed);
    ChaosExpansion g = random_expansion(2, 5, seed + 100);
    for (int axis : {0, 1}) {
      double lhs = coeff_inner(riesz_apply(f, RieszQuery{axis, RieszVariant::R}), g);
      double rhs = coeff_inner(f, riesz_R_adjoint(g, axis));
      CHECK(std::abs(lhs - rhs) < 1e-9);
    }
  }
  // explicit counterexample for the naive pairing against S_k
  ChaosExpansion h1 = ChaosExpansion::unit(MultiIndex({1}));
  ChaosExpansion h0 = ChaosExpansion::constant(1, 1.0);
  double naive_lhs = coeff_inner(riesz_apply(h1, RieszQuery{0, RieszVariant::R}), h0);
  double naive_rhs = coeff_inner(h1, riesz_apply(h0, RieszQuery{0, RieszVariant::S}));
  CHECK(std::abs(naive_lhs - naive_rhs) > 1.0);
}

TEST_CASE("spectral and integral paths agree") {
  ChaosExpansion u = random_expansion(1, 6, 91);
  for (auto variant : {RieszVariant::R, RieszVariant::S}) {
    ChaosExpansion spec = riesz_apply(u, RieszQuery{0, variant, RieszPath::Spectral});
    ChaosExpansion integral = riesz_apply(u, RieszQuery{0, variant, RieszPath::Integral, 1, 36.0, 20.0});
    for (const auto& [beta, c] : spec.coefficients)
      CHECK(std::abs(integral.get(beta) - c) < 1e-6 * std::max(1.0, std::abs(c)));
  }
}

TEST_CASE("l2 ratio experiment") {
  SUBCASE("n=1 supremum is sqrt(2) when h_1 is present") {
    std::vector<FamilyMember> fam;
    fam.push_back({"h_1", ChaosExpansion::unit(mi({1}))});
    fam.push_back({"h_3", ChaosExpansion::unit(mi({3}))});
    ChaosExpansion noconst = random_expansion(1, 6, 95);
    noconst.coefficients.erase(MultiIndex::zeros(1));
    fam.push_back({"rand", noconst});
    RieszL2Report rep = riesz_l2_norm_experiment(fam, 0);
    CHECK(rep.sup_r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  }
  SUBCASE("constants give ratio zero") {
    std::vector<FamilyMember> fam{{"one", ChaosExpansion::constant(1, 1.0)}};
    RieszL2Report rep = riesz_l2_norm_experiment(fam, 0);
    CHECK(rep.sup_r == 0.0);
    CHECK(rep.sup_s == 0.0);
  }
  SUBCASE("n=2 ratios stay at most 2") {
    std::vector<FamilyMember> fam;
    for (int seed = 0; seed < 6; ++seed)
      fam.push_back({"r" + std::to_string(seed), random_expansion(2, 8, 200 + seed)});
    RieszL2Report rep = riesz_l2_norm_experiment(fam, 0);
    CHECK(rep.sup_r <= std::sqrt(2.0) + 1e-12);
    CHECK(rep.sup_s <= 2.0 + 1e-12);
  }
}

TEST_CASE("h1 ratio experiment produces finite ratios") {
  std::vector<FamilyMember> fam;
  fam.push_back({"one", ChaosExpansion::constant(1, 1.0)});
  fam.push_back({"h_1", ChaosExpansion::unit(mi({1}))});
  fam.push_back({"rand", random_expansion(1, 4, 77)});
  ConeSpec spec;
  spec.t_levels = 12;
  GridFunction grid = tensor_grid_function(1, 12);
  RieszH1Report rep = riesz_h1_experiment(fam, 0, spec, grid);
  CHECK(rep.rows[0].r_ratio == 0.0);  // R annihilates constants
  CHECK(rep.sup_r > 0.0);
  CHECK(std::isfinite(rep.sup_r));
  CHECK(std::isfinite(rep.sup_s));
}

TEST_CASE("h1 ratio sup is stable under cone refinement") {
  std::vector<FamilyMember> fam;
  fam.push_back({"h_1", ChaosExpansion::unit(mi({1}))});
  fam.push_back({"h_2", ChaosExpansion::unit(mi({2}))});
  fam.push_back({"rand", random_expansion(1, 4, 55)});
  ConeSpec base;
  base.t_levels = 10;
  base.radii_per_level = 3;
  GridFunction grid = tensor_grid_function(1, 10);
  RieszH1Report rb = riesz_h1_experiment(fam, 0, base, grid);
  RieszH1Report rr = riesz_h1_experiment(fam, 0, base.refined(), grid);
  CHECK(std::abs(rb.sup_r - rr.sup_r) <= 0.15 * std::max(rb.sup_r, rr.sup_r));
  CHECK(std::abs(rb.sup_s - rr.sup_s) <= 0.15 * std::max(rb.sup_s, rr.sup_s));
}

TEST_CASE("derivative remainder operators") {
  GridFunction grid = tensor_grid_function(1, 10);
  AdmissibleBall ball{{0.8}, 0.4, 2.0};
  TentAtom atom = make_atom(ball, 17);
  SUBCASE("all three vanish on constants") {
    RieszRemainderReport rep = riesz_remainder_bounds(ChaosExpansion::constant(1, 1.0), atom, 0,
                                                      0, 1, 36.0, 6.0, grid);
    CHECK(rep.dc_term_l1 == 0.0);
    CHECK(rep.tail_term_l1 == 0.0);
    CHECK(rep.atom_term_l1 > 0.0);  // the atom term does not involve u
  }
  SUBCASE("finite norms against the predicted dominators") {
    ChaosExpansion u = random_expansion(1, 4, 99);
    RieszRemainderReport rep = riesz_remainder_bounds(u, atom, 0, 0, 1, 36.0, 6.0, grid);
    CHECK(std::isfinite(rep.atom_term_l1));
    CHECK(rep.atom_term_l1 < 100.0);
    CHECK(std::isfinite(rep.dc_ratio));
    CHECK(std::isfinite(rep.tail_ratio));
  }
}
