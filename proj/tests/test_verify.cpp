#include "doctest.h"

#include <stdexcept>

#include "gausshardy/chaos.hpp"
#include "gausshardy/functionals.hpp"
#include "gausshardy/io.hpp"
#include "gausshardy/verify.hpp"

using namespace gh;

TEST_CASE("expansion json round trip") {
  ChaosExpansion c = random_expansion(2, 4, 404);
  ChaosExpansion back = io::expansion_from_json(io::expansion_to_json(c));
  CHECK((back - c).l2_norm() == 0.0);
  CHECK_THROWS_AS(io::expansion_from_json("{\"n\":1}"), io::ParseError);
  CHECK_THROWS_AS(io::expansion_from_json("not json"), io::ParseError);
}

TEST_CASE("grid csv round trip and tensor rule detection") {
  ChaosExpansion c = random_expansion(1, 3, 405);
  GridFunction g = synthesize_on(c, tensor_grid_function(1, 8));
  GridFunction back = io::grid_from_csv(io::grid_to_csv(g));
  REQUIRE(back.count() == g.count());
  for (std::size_t i = 0; i < g.count(); ++i) CHECK(back.values[i] == g.values[i]);
  CHECK(io::attach_tensor_rule(back));
  CHECK(back.rule_order == 8);
  GridFunction off;
  off.dimension = 1;
  off.points = {0.1, 0.9};
  off.values = {1.0, 2.0};
  CHECK_FALSE(io::attach_tensor_rule(off));
}

TEST_CASE("atom json round trip preserves the profile") {
  AdmissibleBall ball{{0.9}, 0.6, 2.0};
  TentAtom atom = make_atom(ball, 31);
  TentAtom back = io::atom_from_json(io::atom_to_json(atom));
  CHECK(back.norm_certificate == atom.norm_certificate);
  for (double t : {0.05, 0.12}) {
    for (double y : {0.7, 0.9, 1.2}) {
      std::vector<double> yv{y};
      CHECK(back.eval(t, yv) == atom.eval(t, yv));
    }
  }
}

TEST_CASE("suite registry and dispatch") {
  CHECK(suite_names().size() == 14);
  CHECK_THROWS_AS(run_suite("unknown", SuiteConfig{}), std::invalid_argument);
}

TEST_CASE("pointwise lemma suites report zero violations at reduced scale") {
  SuiteConfig cfg;
  cfg.seed = 7;
  cfg.scale = 0.05;
  for (const char* name : {"slow2", "mnp1", "mm", "region"}) {
    SuiteResult r = run_suite(name, cfg);
    CHECK(r.violations == 0);
    CHECK(r.hard_pass);
    CHECK(!r.artifacts.empty());
  }
}

TEST_CASE("fitted-constant suites reproduce within 10% across seeds") {
  SuiteConfig a, b;
  a.seed = 11;
  b.seed = 12;
  a.scale = b.scale = 0.2;
  for (const char* name : {"est", "pu", "glob"}) {
    SuiteResult ra = run_suite(name, a);
    SuiteResult rb = run_suite(name, b);
    CHECK(ra.hard_pass);
    for (const auto& [key, va] : ra.fitted_constants) {
      double vb = rb.fitted_constants.at(key);
      CHECK(std::abs(va - vb) <= 0.10 * std::max(std::abs(va), std::abs(vb)));
    }
  }
}

TEST_CASE("determinism: same seed gives identical artifacts across thread counts") {
  SuiteConfig one, four;
  one.seed = four.seed = 9;
  one.scale = four.scale = 0.02;
  one.threads = 1;
  four.threads = 4;
  for (const char* name : {"slow2", "mnp1", "mm"}) {
    SuiteResult r1 = run_suite(name, one);
    SuiteResult r4 = run_suite(name, four);
    REQUIRE(r1.artifacts.size() == r4.artifacts.size());
    for (std::size_t i = 0; i < r1.artifacts.size(); ++i) {
      CHECK(r1.artifacts[i].first == r4.artifacts[i].first);
      CHECK(r1.artifacts[i].second == r4.artifacts[i].second);
    }
  }
}

TEST_CASE("repro suite meets its hard tolerances") {
  SuiteConfig cfg;
  cfg.seed = 3;
  cfg.scale = 0.2;
  SuiteResult r = run_suite("repro", cfg);
  CHECK(r.hard_pass);
  CHECK(r.fitted_constants.at("max_reconstruction_error") < 1e-7);
  CHECK(r.fitted_constants.at("constant_oracle_gap") < 1e-10);
}

TEST_CASE("norm equivalence experiment structure") {
  SuiteConfig cfg;
  cfg.seed = 5;
  cfg.params["t_levels"] = 8;
  cfg.params["radii"] = 2;
  cfg.params["grid_order"] = 10;
  NormEquivalenceReport rep = norm_equivalence_experiment(cfg);
  CHECK(rep.rows.size() == 20 * 3 * 2);
  CHECK(rep.constant_row_exact);
  CHECK(rep.spread_bounded);
  for (auto& [ap, s] : rep.spread_base) CHECK(s >= 1.0);
}
