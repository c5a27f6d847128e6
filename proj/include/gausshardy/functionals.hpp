#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gausshardy/chaos.hpp"
#include "gausshardy/geometry.hpp"
#include "gausshardy/util.hpp"

namespace gh {

/// Non-tangential maximal function: discrete sup of |e^{t^2 L} u(y)| over the
/// cone samples of spec based at each grid point.
GridFunction maximal_function(const ChaosExpansion& u, const ConeSpec& spec,
                              const GridFunction& grid);

/// Hardy-Littlewood maximal function: sup over r_grid of gamma-ball averages
/// of |u|.
GridFunction hl_maximal(const RealFunction& u, int dim, const GridFunction& grid,
                        const std::vector<double>& r_grid);

/// Local/global split of the maximal function: cone sup of
/// int M_{t^2}(y,z) 1_{N_tau or its complement}(y,z) |u(z)| dz with
/// tau = (1+aA)(1+2aA)/2 unless overridden.
GridFunction maximal_masked(const RealFunction& abs_u, int dim, double aperture, double adm,
                            bool global_part, const ConeSpec& spec, const GridFunction& grid,
                            int gh_order = 32, double tau_override = 0.0);

/// Conical square function S_a u on the grid (aperture 1).
GridFunction square_function(const ChaosExpansion& u, double a, const ConeSpec& spec,
                             const GridFunction& grid, BallMeasureCache* cache = nullptr);

struct H1Norms {
  double quad = 0.0;  // |S_a u|_1 + |u|_1
  double max = 0.0;   // |T*_{a'} u|_1
  double ratio = 0.0;
};
H1Norms h1_norms(const ChaosExpansion& u, double a, double a_prime, const ConeSpec& spec,
                 const GridFunction& grid, BallMeasureCache* cache = nullptr);

/// Tent atom over a scale-2 admissible ball: seeded polynomial profile in
/// (t,y) under a smooth support height q(y) <= min(d(y,B^c), m(y)), rescaled
/// so that gamma(B) * int int |F|^2 dy dt/t = 0.99.
struct TentAtom {
  AdmissibleBall ball;
  std::vector<double> t_samples;
  std::vector<double> y_points;  // flattened count*dim
  std::vector<double> profile;   // t_samples.size() rows of y count
  double norm_certificate = 0.0;

  // generator data; eval() reconstructs the profile exactly from these
  std::vector<double> poly_coeffs;
  double lambda = 1.0;
  double amplitude = 1.0;

  double support_height(std::span<const double> y) const;
  double eval(double t, std::span<const double> y) const;
};

TentAtom make_atom(const AdmissibleBall& ball, std::uint64_t seed);

/// t^{1,2}(gamma) norm by nested cone/outer quadrature; the general form
/// takes any field supported in tents over the given ball.
using TentField = std::function<double(double, std::span<const double>)>;
double tent_norm(const TentField& field, const AdmissibleBall& ball, const ConeSpec& spec,
                 int outer_points = 96, BallMeasureCache* cache = nullptr);
double tent_norm(const TentAtom& atom, const ConeSpec& spec, int outer_points = 96,
                 BallMeasureCache* cache = nullptr);

struct MoleculeQuadrature {
  int t_points_per_decade = 16;
  double t_lo_fraction = 1e-3;
  int annulus_points = 24;  // x-quadrature per annulus component
  int k_max = 6;
};

/// f(x) = int_0^{r_B} (t^2 L)^N e^{(t^2/alpha)L} t d*_axis F(t,.) (x) dt/t,
/// evaluated in log scale so far annuli stay meaningful.
SignedLog molecule_field_value(const TentAtom& atom, int N, double alpha, int axis,
                               std::span<const double> x, const MoleculeQuadrature& mq = {});
/// companion with f = L^N f_tilde:
/// f_tilde(x) = int_0^{r_B} t^{2N+1} e^{(t^2/alpha)L} d*_axis F(t,.) (x) dt/t
SignedLog molecule_tilde_value(const TentAtom& atom, int N, double alpha, int axis,
                               std::span<const double> x, const MoleculeQuadrature& mq = {});

/// molecule field restricted to the mask t in [m(x)/b, support height]
/// (the per-point remainder integrand)
SignedLog masked_tail_field_value(const TentAtom& atom, int N, double alpha, int axis, double b,
                                  std::span<const double> x, const MoleculeQuadrature& mq = {});

using MoleculeField = std::function<SignedLog(std::span<const double>)>;

struct MoleculeReport {
  AdmissibleBall ball;
  int N = 1;
  std::vector<double> annulus_norms;       // |1_{C_k} f|_2, linear (0 on underflow)
  std::vector<double> log_annulus_norms;   // always finite unless identically 0
  std::vector<double> tilde_annulus_norms;
  std::vector<double> log_tilde_annulus_norms;
  double fitted_decay_rate = 0.0;        // c in log(|1_{C_k}f|_2 sqrt(gamma B)) ~ A - c 4^k
  double tilde_fitted_decay_rate = 0.0;
  bool holds_at_rate = false;            // fitted rate >= requested C, both fields
};

/// Measures the three molecule clauses over k = 0..k_max; the fit uses
/// k = 1..4.
MoleculeReport check_molecule(const MoleculeField& f, const MoleculeField& f_tilde,
                              const AdmissibleBall& ball, int N, double rate_C,
                              const MoleculeQuadrature& mq = {});

struct AtomMoleculeResult {
  ChaosExpansion f_hat;
  ChaosExpansion f_tilde_hat;
  MoleculeReport report;
  double relation_max_rel_error = 0.0;  // f_hat vs (-|beta|)^N f_tilde_hat
};
AtomMoleculeResult atom_to_molecule(const TentAtom& atom, int N, double alpha, int axis,
                                    const MoleculeQuadrature& mq = {}, int analysis_order = 24,
                                    int analysis_degree = 10);

/// The fixed 20-function family for the norm experiments: h_beta with
/// |beta| <= 3, degree-8 chaos fits of gaussian bumps centered at |x| in
/// {0,1,2,3}, and seeded random degree-<=5 expansions.
struct FamilyMember {
  std::string id;
  ChaosExpansion u;
};
std::vector<FamilyMember> norm_experiment_family(int dim, std::uint64_t seed);

}  // namespace gh
