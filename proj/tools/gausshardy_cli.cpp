#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "gausshardy/chaos.hpp"
#include "gausshardy/functionals.hpp"
#include "gausshardy/geometry.hpp"
#include "gausshardy/io.hpp"
#include "gausshardy/riesz.hpp"
#include "gausshardy/semigroup.hpp"
#include "gausshardy/util.hpp"
#include "gausshardy/verify.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAssert = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitPrecondition = 3;

json parse_params(const std::string& text) {
  if (text.empty()) return json::object();
  try {
    json j = json::parse(text);
    if (!j.is_object()) throw gh::io::ParseError("params must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw gh::io::ParseError(std::string("invalid params JSON: ") + e.what());
  }
}

double jget(const json& j, const std::string& key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}

gh::GridFunction output_grid(const gh::ChaosExpansion& u, int order) {
  return gh::tensor_grid_function(u.dimension, order);
}

int cmd_transform(const std::string& analyze_path, const std::string& synth_path, int degree,
                  int grid_order, const std::string& out) {
  if (analyze_path.empty() == synth_path.empty())
    throw gh::io::ParseError("transform needs exactly one of --analyze / --synthesize");
  if (!analyze_path.empty()) {
    gh::GridFunction g = gh::io::grid_from_csv(gh::io::read_text_file(analyze_path));
    if (!gh::io::attach_tensor_rule(g))
      throw std::domain_error("grid points are not tensor gauss-hermite nodes");
    gh::ChaosExpansion c = gh::analyze(g, degree);
    gh::io::write_text_file(out, gh::io::expansion_to_json(c));
  } else {
    gh::ChaosExpansion c = gh::io::expansion_from_json(gh::io::read_text_file(synth_path));
    gh::GridFunction g = gh::synthesize_on(c, output_grid(c, grid_order));
    gh::io::write_text_file(out, gh::io::grid_to_csv(g));
  }
  return kExitOk;
}

int cmd_operator(const std::string& name, const std::string& input, const json& params,
                 const std::string& path, int grid_order, const std::string& out) {
  gh::ChaosExpansion u = gh::io::expansion_from_json(gh::io::read_text_file(input));
  gh::GridFunction grid = output_grid(u, grid_order);

  auto write_grid = [&](const gh::GridFunction& g) {
    gh::io::write_text_file(out, gh::io::grid_to_csv(g));
  };

  if (name == "semigroup") {
    gh::SemigroupQuery q{jget(params, "t", 1.0), static_cast<int>(jget(params, "N", 0)),
                         jget(params, "alpha", 0.0)};
    if (q.alpha <= 0.0) {
      if (q.N != 0) throw gh::io::ParseError("semigroup with N > 0 needs alpha > 0");
      q = gh::SemigroupQuery::heat(q.t);
    }
    if (path == "spectral") {
      write_grid(gh::synthesize_on(gh::apply_semigroup(u, q), grid));
    } else if (path == "kernel") {
      write_grid(gh::apply_semigroup_kernel(gh::expansion_function(u), q, u.dimension, grid.points));
    } else {
      gh::DualPathResult r = gh::apply_semigroup_both(u, q, grid);
      std::string csv;
      for (int d = 0; d < grid.dimension; ++d) csv += "x" + std::to_string(d + 1) + ",";
      csv += "spectral,kernel,abs_diff\n";
      for (std::size_t i = 0; i < grid.count(); ++i) {
        auto x = grid.point(i);
        for (int d = 0; d < grid.dimension; ++d) csv += gh::fmt_double(x[d]) + ",";
        csv += gh::fmt_double(r.spectral.values[i]) + "," + gh::fmt_double(r.kernel.values[i]) +
               "," + gh::fmt_double(std::abs(r.spectral.values[i] - r.kernel.values[i])) + "\n";
      }
      gh::io::write_text_file(out, csv);
    }
  } else if (name == "gradient") {
    double t = jget(params, "t", 1.0);
    int axis = static_cast<int>(jget(params, "axis", 0));
    write_grid(gh::synthesize_on(gh::apply_gradient_semigroup(u, t)[axis], grid));
  } else if (name == "J_infty") {
    write_grid(gh::apply_J_infty(u, static_cast<int>(jget(params, "N", 1)),
                                 jget(params, "a", 2.0), jget(params, "alpha", 36.0),
                                 jget(params, "b", 6.0), jget(params, "t_max", 20.0), grid));
  } else if (name == "J_dc") {
    gh::DcRemainderParams p;
    p.N = static_cast<int>(jget(params, "N", 1));
    p.a = jget(params, "a", 2.0);
    p.alpha = jget(params, "alpha", 36.0);
    p.b = jget(params, "b", 6.0);
    p.axis = static_cast<int>(jget(params, "axis", 0));
    write_grid(gh::apply_J_remainder_Dc(u, p, grid));
  } else if (name == "riesz_R" || name == "riesz_S") {
    gh::RieszQuery q;
    q.axis = static_cast<int>(jget(params, "axis", 0));
    q.variant = (name == "riesz_R") ? gh::RieszVariant::R : gh::RieszVariant::S;
    q.N = static_cast<int>(jget(params, "N", 1));
    q.alpha = jget(params, "alpha", 36.0);
    q.t_max = jget(params, "t_max", 20.0);
    if (path == "both") {
      q.path = gh::RieszPath::Spectral;
      gh::GridFunction spec = gh::synthesize_on(gh::riesz_apply(u, q), grid);
      q.path = gh::RieszPath::Integral;
      gh::GridFunction integ = gh::synthesize_on(gh::riesz_apply(u, q), grid);
      std::string csv;
      for (int d = 0; d < grid.dimension; ++d) csv += "x" + std::to_string(d + 1) + ",";
      csv += "spectral,integral,abs_diff\n";
      for (std::size_t i = 0; i < grid.count(); ++i) {
        auto x = grid.point(i);
        for (int d = 0; d < grid.dimension; ++d) csv += gh::fmt_double(x[d]) + ",";
        csv += gh::fmt_double(spec.values[i]) + "," + gh::fmt_double(integ.values[i]) + "," +
               gh::fmt_double(std::abs(spec.values[i] - integ.values[i])) + "\n";
      }
      gh::io::write_text_file(out, csv);
    } else {
      q.path = (path == "integral") ? gh::RieszPath::Integral : gh::RieszPath::Spectral;
      write_grid(gh::synthesize_on(gh::riesz_apply(u, q), grid));
    }
  } else if (name == "maximal") {
    gh::ConeSpec spec;
    spec.admissibility = jget(params, "a", 1.0);
    spec.aperture = jget(params, "A", 1.0);
    spec.t_levels = static_cast<int>(jget(params, "t_levels", 24));
    write_grid(gh::maximal_function(u, spec, grid));
  } else if (name == "square") {
    gh::ConeSpec spec;
    spec.t_levels = static_cast<int>(jget(params, "t_levels", 24));
    write_grid(gh::square_function(u, jget(params, "a", 2.0), spec, grid));
  } else {
    throw gh::io::ParseError("unknown operator: " + name);
  }
  return kExitOk;
}

gh::SuiteConfig make_config(std::uint64_t seed, double scale, int threads,
                            const std::string& results_dir, const std::string& config_text) {
  gh::SuiteConfig cfg;
  cfg.seed = seed;
  cfg.scale = scale;
  cfg.threads = threads;
  cfg.results_dir = results_dir;
  if (const char* env = std::getenv("GH_RESULTS_DIR"); env && cfg.results_dir.empty())
    cfg.results_dir = env;
  if (!config_text.empty()) {
    json j = parse_params(config_text);
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.key() == "seed") {
        cfg.seed = it.value().get<std::uint64_t>();
      } else if (it.key() == "scale") {
        cfg.scale = it.value().get<double>();
      } else if (it.key() == "threads") {
        cfg.threads = it.value().get<int>();
      } else if (it.key() == "params") {
        for (auto p = it.value().begin(); p != it.value().end(); ++p)
          cfg.params[p.key()] = p.value().get<double>();
      } else {
        throw gh::io::ParseError("unknown config key: " + it.key());
      }
    }
  }
  return cfg;
}

int cmd_verify(const std::string& suite, const gh::SuiteConfig& cfg) {
  if (suite == "all") {
    gh::RunAllResult all = gh::run_all(cfg);
    for (const auto& r : all.suites)
      std::cout << (r.hard_pass ? "PASS " : "FAIL ") << r.summary << "\n";
    std::cout << (all.all_pass ? "PASS" : "FAIL") << " norms + all suites\n";
    if (cfg.results_dir.empty()) std::cout << all.manifest_json;
    return all.all_pass ? kExitOk : kExitAssert;
  }
  const auto& names = gh::suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end())
    throw gh::io::ParseError("unknown suite: " + suite);
  gh::SuiteResult r = gh::run_suite(suite, cfg);
  std::cout << (r.hard_pass ? "PASS " : "FAIL ") << r.summary << "\n";
  for (const auto& [k, v] : r.fitted_constants) std::cout << "  " << k << " = " << v << "\n";
  return r.hard_pass ? kExitOk : kExitAssert;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "gausshardy: Hermite-chaos calculus, Mehler kernels, maximal/square "
      "functionals, tent atoms, molecules and Riesz transforms for the "
      "Ornstein-Uhlenbeck semigroup under the gaussian measure, plus "
      "numerical verification suites"};
  app.require_subcommand(1);

  // transform
  std::string analyze_path, synth_path, out_path;
  int degree = 6, grid_order = 16;
  CLI::App* transform = app.add_subcommand("transform", "analyze/synthesize between grid CSV and expansion JSON");
  transform->add_option("--analyze", analyze_path, "input grid CSV (points must be tensor gauss-hermite nodes)");
  transform->add_option("--synthesize", synth_path, "input expansion JSON");
  transform->add_option("--degree", degree, "analysis max degree");
  transform->add_option("--grid-order", grid_order, "output tensor grid order per axis");
  transform->add_option("--out", out_path, "output path")->required();

  // operator
  std::string op_name, op_input, op_params, op_path = "spectral";
  int op_grid_order = 16;
  std::string op_out;
  CLI::App* oper = app.add_subcommand(
      "operator",
      "apply an operator: semigroup gradient J_infty J_dc riesz_R riesz_S maximal square");
  oper->add_option("--name", op_name, "operator name")->required();
  oper->add_option("--input", op_input, "input expansion JSON")->required();
  oper->add_option("--params", op_params, "JSON parameter blob");
  oper->add_option("--path", op_path, "spectral | kernel | integral | both");
  oper->add_option("--grid-order", op_grid_order, "output grid order per axis");
  oper->add_option("--out", op_out, "output CSV path")->required();

  // atom
  std::string atom_ball, atom_out;
  std::uint64_t atom_seed = 1;
  CLI::App* atomc = app.add_subcommand("atom", "generate a tent-space atom over an admissible ball");
  atomc->add_option("--ball", atom_ball, "ball JSON {\"center\":[..],\"radius\":r,\"scale\":a}")->required();
  atomc->add_option("--seed", atom_seed, "profile seed");
  atomc->add_option("--out", atom_out, "output atom JSON")->required();

  // molecule
  std::string mol_atom, mol_out;
  int mol_N = 1, mol_axis = 0;
  double mol_alpha = 36.0;
  CLI::App* molc = app.add_subcommand("molecule", "map an atom to a molecule and report annulus decay");
  molc->add_option("--atom", mol_atom, "input atom JSON")->required();
  molc->add_option("--N", mol_N, "operator power");
  molc->add_option("--alpha", mol_alpha, "semigroup scale");
  molc->add_option("--axis", mol_axis, "derivative axis");
  molc->add_option("--out", mol_out, "output report CSV")->required();

  // norms
  std::string norms_input, norms_out, norms_config;
  double norms_a = 2.0, norms_ap = 2.0;
  bool norms_experiment = false;
  std::uint64_t norms_seed = 1;
  CLI::App* normsc = app.add_subcommand("norms", "h1 norms of an expansion, or the norm-equivalence experiment");
  normsc->add_option("--input", norms_input, "input expansion JSON");
  normsc->add_option("--a", norms_a, "square-function admissibility");
  normsc->add_option("--a-prime", norms_ap, "maximal-function admissibility");
  normsc->add_flag("--experiment", norms_experiment, "run the fixed-family norm-equivalence experiment");
  normsc->add_option("--seed", norms_seed, "experiment seed");
  normsc->add_option("--config", norms_config, "experiment config JSON");
  normsc->add_option("--out", norms_out, "output CSV path");

  // verify / all
  std::string v_suite, v_results, v_config;
  std::uint64_t v_seed = 1;
  double v_scale = 1.0;
  int v_threads = 0;
  CLI::App* verifyc = app.add_subcommand("verify", "run a lemma-verification suite (or 'all')");
  std::string suites_help = "suite name: all";
  for (const auto& n : gh::suite_names()) suites_help += " " + n;
  verifyc->add_option("suite", v_suite, suites_help)->required();
  verifyc->add_option("--seed", v_seed, "rng seed");
  verifyc->add_option("--scale", v_scale, "sample-count scale factor");
  verifyc->add_option("--threads", v_threads, "worker threads (0 = machine parallelism)");
  verifyc->add_option("--results-dir", v_results, "artifact output root (or GH_RESULTS_DIR)");
  verifyc->add_option("--config", v_config, "config JSON {seed, scale, threads, params{...}}");

  CLI::App* allc = app.add_subcommand("all", "run every suite plus the norm experiment");
  allc->add_option("--seed", v_seed, "rng seed");
  allc->add_option("--scale", v_scale, "sample-count scale factor");
  allc->add_option("--threads", v_threads, "worker threads");
  allc->add_option("--results-dir", v_results, "artifact output root");
  allc->add_option("--config", v_config, "config JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadInput;
  }

  try {
    if (*transform) return cmd_transform(analyze_path, synth_path, degree, grid_order, out_path);
    if (*oper) return cmd_operator(op_name, op_input, parse_params(op_params), op_path,
                                   op_grid_order, op_out);
    if (*atomc) {
      gh::AdmissibleBall ball = gh::io::ball_from_json(atom_ball);
      gh::TentAtom atom = gh::make_atom(ball, atom_seed);
      gh::io::write_text_file(atom_out, gh::io::atom_to_json(atom));
      return kExitOk;
    }
    if (*molc) {
      gh::TentAtom atom = gh::io::atom_from_json(gh::io::read_text_file(mol_atom));
      gh::AtomMoleculeResult res = gh::atom_to_molecule(atom, mol_N, mol_alpha, mol_axis);
      std::string csv = "k,annulus_norm,tilde_norm,log_annulus_norm,log_tilde_norm\n";
      for (std::size_t k = 0; k < res.report.annulus_norms.size(); ++k)
        csv += std::to_string(k) + "," + gh::fmt_double(res.report.annulus_norms[k]) + "," +
               gh::fmt_double(res.report.tilde_annulus_norms[k]) + "," +
               gh::fmt_double(res.report.log_annulus_norms[k]) + "," +
               gh::fmt_double(res.report.log_tilde_annulus_norms[k]) + "\n";
      gh::io::write_text_file(mol_out, csv);
      std::cout << "relation_max_rel_error = " << res.relation_max_rel_error
                << "\nfitted_decay_rate = " << res.report.fitted_decay_rate
                << "\ntilde_fitted_decay_rate = " << res.report.tilde_fitted_decay_rate << "\n";
      return kExitOk;
    }
    if (*normsc) {
      if (norms_experiment) {
        gh::SuiteConfig cfg = make_config(norms_seed, 1.0, 1, "", norms_config);
        gh::NormEquivalenceReport rep = gh::norm_equivalence_experiment(cfg);
        if (!norms_out.empty()) gh::io::write_text_file(norms_out, rep.csv);
        for (auto& [ap, s] : rep.spread_base)
          std::cout << "a'=" << ap << " spread " << s << " refined "
                    << rep.spread_refined[ap] << "\n";
        return (rep.constant_row_exact && rep.spread_bounded) ? kExitOk : kExitAssert;
      }
      if (norms_input.empty()) throw gh::io::ParseError("norms needs --input or --experiment");
      gh::ChaosExpansion u = gh::io::expansion_from_json(gh::io::read_text_file(norms_input));
      gh::ConeSpec spec;
      gh::GridFunction grid = gh::tensor_grid_function(u.dimension, 14);
      gh::H1Norms n = gh::h1_norms(u, norms_a, norms_ap, spec, grid);
      std::string csv = "h1_quad,h1_max,ratio\n" + gh::fmt_double(n.quad) + "," +
                        gh::fmt_double(n.max) + "," + gh::fmt_double(n.ratio) + "\n";
      if (!norms_out.empty())
        gh::io::write_text_file(norms_out, csv);
      else
        std::cout << csv;
      return kExitOk;
    }
    if (*verifyc) return cmd_verify(v_suite, make_config(v_seed, v_scale, v_threads, v_results, v_config));
    if (*allc) return cmd_verify("all", make_config(v_seed, v_scale, v_threads, v_results, v_config));
  } catch (const gh::io::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::domain_error& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitBadInput;
}
