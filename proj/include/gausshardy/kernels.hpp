#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace gh {

/// 1 - e^{-2s}, stable for small s
double one_minus_exp_m2(double s);

/// Mehler kernel M_t(x,y) = pi^{-n/2} (1-e^{-2t})^{-n/2}
///   exp(-|e^{-t}x - y|^2 / (1-e^{-2t})),
/// the kernel of e^{tL} against Lebesgue measure dy.
/// Rejects t < 1e-6 (numerically a delta).
double mehler(double t, std::span<const double> x, std::span<const double> y);
/// log M_t(x,y); no lower bound on t (used inside composed kernels)
double log_mehler(double t, std::span<const double> x, std::span<const double> y);

/// Polynomial in the 2n+1 variables
///   E = e^{-s}, U_j = (e^{-s}x_j - y_j)/sqrt(1-e^{-2s}), V_j = sqrt(1-e^{-2s}) x_j,
/// with integer coefficients, plus the number of (1-e^{-2s})^{-1/2} prefactor
/// halves. d_s^N M_s = (1-e^{-2s})^{-N} P_N(E,U,V) M_s and
/// d_{x_j} d_s^N M_s = (1-e^{-2s})^{-(N+1/2)} Q_N(E,U,V) M_s.
class KernelPoly {
 public:
  using Expo = std::vector<int>;  // exponents, length 2n+1: [E, U_1..U_n, V_1..V_n]

  int dimension = 1;
  int order = 0;            // N
  int half_prefactor = 0;   // 2N for P_N, 2N+1 for Q_N
  std::map<Expo, long long> terms;

  int degree() const;
  double eval(double E, std::span<const double> U, std::span<const double> V) const;
  std::string to_json() const;

  /// P_N by the four differentiation rules, starting from P_0 = 1; N <= 6.
  static const KernelPoly& P(int N, int n);
  /// Q_N for axis j (derivative in the first kernel argument)
  static const KernelPoly& Q(int N, int n, int j);
  /// -d_{U_k} Q_N + 2 U_k Q_N (first half of t d_{x_k} of the dual kernel)
  static const KernelPoly& dQ(int N, int n, int j, int k);
};

/// value = mantissa * exp(log_scale); keeps under/overflowing kernel values
/// (the dual kernel carries exp(|x|^2-|y|^2)) finite and comparable.
struct KernelEvaluation {
  double mantissa = 0.0;
  double log_scale = 0.0;

  double value() const;
  /// log |value| (-inf when zero)
  double log_abs() const;
};

/// K_{t^2,N,alpha}(x,y) = t^{2N} d_s^N M_s(x,y) at s = t^2/alpha;
/// kernel of (t^2 L)^N e^{(t^2/alpha) L}
KernelEvaluation kernel_K(double t, int N, double alpha, std::span<const double> x,
                          std::span<const double> y);

/// Ktilde_{t^2,N,alpha,j}(x,y) = t^{2N+1} d_{y_j} d_s^N M_s(y,x) at s=t^2/alpha
/// times exp(|x|^2-|y|^2); kernel of (t^2 L)^N e^{(t^2/alpha) L} t d^*_{x_j}
KernelEvaluation kernel_Ktilde(double t, int N, double alpha, int j, std::span<const double> x,
                               std::span<const double> y);

/// t d_{x_k} Ktilde_{t^2,N,alpha,j}(x,y), via the two-polynomial expansion
KernelEvaluation kernel_dK_tilde(double t, int N, double alpha, int j, int k,
                                 std::span<const double> x, std::span<const double> y);

/// Slow-variation comparison between the Mehler Gaussians at times t^2/alpha
/// and t^2. Variant 1 carries the |x|^2 correction, variant 2 the |y|^2 one.
/// Requires alpha > 1 and t in (0,a].
bool check_slow2(double t, double alpha, double a, double C, std::span<const double> x,
                 std::span<const double> y, int variant = 1);

/// log(LHS) - log(RHS without constant) for the three kernel comparison
/// clauses (1: plain Mehler, 2: K, 3: Ktilde). The fitted constant of a
/// sample set is exp(max gap).
double est_clause_log_gap(int clause, double t, int N, double alpha, double a, int j,
                          std::span<const double> x, std::span<const double> y);

/// Same for the derivative dual-kernel bound with its (1+t|x|) factor
/// (alpha >= 4e^8 regime).
double rtest_log_gap(double t, int N, double alpha, int j, int k, std::span<const double> x,
                     std::span<const double> y);

}  // namespace gh
