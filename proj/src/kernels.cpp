#include "gausshardy/kernels.hpp"

#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "gausshardy/util.hpp"

namespace gh {

double one_minus_exp_m2(double s) { return -std::expm1(-2.0 * s); }

namespace {
constexpr double kMinTime = 1e-6;

double sum_sq_scaled(std::span<const double> x, std::span<const double> y, double E) {
  // |E x - y|^2
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double d = E * x[i] - y[i];
    s += d * d;
  }
  return s;
}
}  // namespace

double log_mehler(double t, std::span<const double> x, std::span<const double> y) {
  if (!(t > 0.0)) throw std::invalid_argument("log_mehler: t must be positive");
  if (x.size() != y.size()) throw std::invalid_argument("log_mehler: dimension mismatch");
  double D = one_minus_exp_m2(t);
  double E = std::exp(-t);
  double n = static_cast<double>(x.size());
  return -0.5 * n * std::log(M_PI * D) - sum_sq_scaled(x, y, E) / D;
}

double mehler(double t, std::span<const double> x, std::span<const double> y) {
  if (!(t > 0.0)) throw std::invalid_argument("mehler: t must be positive");
  if (t < kMinTime) throw std::invalid_argument("mehler: t below 1e-6 rejected");
  return std::exp(log_mehler(t, x, y));
}

// ---------------------------------------------------------------------------
// kernel polynomials

namespace {

using Poly = std::map<KernelPoly::Expo, long long>;

void add_term(Poly& p, const KernelPoly::Expo& e, long long c) {
  if (c == 0) return;
  auto it = p.find(e);
  if (it == p.end()) {
    p.emplace(e, c);
  } else {
    it->second += c;
    if (it->second == 0) p.erase(it);
  }
}

// p * coeff * prod(vars^shift)
Poly mul_mono(const Poly& p, const KernelPoly::Expo& shift, long long coeff) {
  Poly out;
  for (const auto& [e, c] : p) {
    KernelPoly::Expo ne = e;
    for (std::size_t i = 0; i < ne.size(); ++i) ne[i] += shift[i];
    add_term(out, ne, c * coeff);
  }
  return out;
}

Poly deriv(const Poly& p, int var) {
  Poly out;
  for (const auto& [e, c] : p) {
    if (e[var] == 0) continue;
    KernelPoly::Expo ne = e;
    ne[var] -= 1;
    add_term(out, ne, c * e[var]);
  }
  return out;
}

void acc(Poly& dst, const Poly& src) {
  for (const auto& [e, c] : src) add_term(dst, e, c);
}

KernelPoly::Expo mono(int nvars, int var, int pow) {
  KernelPoly::Expo e(nvars, 0);
  if (var >= 0) e[var] = pow;
  return e;
}

}  // namespace

int KernelPoly::degree() const {
  int deg = 0;
  for (const auto& [e, c] : terms) {
    int d = 0;
    for (int v : e) d += v;
    deg = std::max(deg, d);
  }
  return deg;
}

double KernelPoly::eval(double E, std::span<const double> U, std::span<const double> V) const {
  int n = dimension;
  double total = 0.0;
  for (const auto& [e, c] : terms) {
    double m = static_cast<double>(c);
    for (int p = 0; p < e[0]; ++p) m *= E;
    for (int j = 0; j < n; ++j) {
      for (int p = 0; p < e[1 + j]; ++p) m *= U[j];
      for (int p = 0; p < e[1 + n + j]; ++p) m *= V[j];
    }
    total += m;
  }
  return total;
}

std::string KernelPoly::to_json() const {
  std::ostringstream os;
  os << "[";
  bool first = true;
  for (const auto& [e, c] : terms) {
    if (!first) os << ",";
    first = false;
    os << "{\"expo\":[";
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (i) os << ",";
      os << e[i];
    }
    os << "],\"coeff\":\"" << c << "\"}";
  }
  os << "]";
  return os.str();
}

const KernelPoly& KernelPoly::P(int N, int n) {
  if (N < 0 || N > 6) throw std::length_error("KernelPoly::P: order capped at 6");
  if (n < 1 || n > 3) throw std::invalid_argument("KernelPoly::P: dimension must be 1..3");
  static std::map<std::pair<int, int>, KernelPoly> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(N, n);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  int nvars = 2 * n + 1;
  const int vE = 0;
  auto vU = [&](int j) { return 1 + j; };
  auto vV = [&](int j) { return 1 + n + j; };

  Poly p;
  add_term(p, mono(nvars, -1, 0), 1);  // P_0 = 1
  for (int step = 0; step < N; ++step) {
    // P_{m+1} = -2m E^2 P_m - E(1-E^2) dP/dE
    //           - sum_j (E V_j + E^2 U_j) dP/dU_j + sum_j E^2 V_j dP/dV_j
    //           + (-n E^2 + sum_j (2 E U_j V_j + 2 E^2 U_j^2)) P_m
    Poly next;
    acc(next, mul_mono(p, mono(nvars, vE, 2), -2 * step));
    Poly dE = deriv(p, vE);
    acc(next, mul_mono(dE, mono(nvars, vE, 1), -1));
    acc(next, mul_mono(dE, mono(nvars, vE, 3), 1));
    for (int j = 0; j < n; ++j) {
      Poly dU = deriv(p, vU(j));
      {
        KernelPoly::Expo sh = mono(nvars, vE, 1);
        sh[vV(j)] += 1;
        acc(next, mul_mono(dU, sh, -1));
      }
      {
        KernelPoly::Expo sh = mono(nvars, vE, 2);
        sh[vU(j)] += 1;
        acc(next, mul_mono(dU, sh, -1));
      }
      Poly dV = deriv(p, vV(j));
      {
        KernelPoly::Expo sh = mono(nvars, vE, 2);
        sh[vV(j)] += 1;
        acc(next, mul_mono(dV, sh, 1));
      }
      {
        KernelPoly::Expo sh = mono(nvars, vE, 1);
        sh[vU(j)] += 1;
        sh[vV(j)] += 1;
        acc(next, mul_mono(p, sh, 2));
      }
      {
        KernelPoly::Expo sh = mono(nvars, vE, 2);
        sh[vU(j)] += 2;
        acc(next, mul_mono(p, sh, 2));
      }
    }
    acc(next, mul_mono(p, mono(nvars, vE, 2), -n));
    p = std::move(next);
  }

  KernelPoly kp;
  kp.dimension = n;
  kp.order = N;
  kp.half_prefactor = 2 * N;
  kp.terms = std::move(p);
  return cache.emplace(key, std::move(kp)).first->second;
}

const KernelPoly& KernelPoly::Q(int N, int n, int j) {
  if (j < 0 || j >= n) throw std::invalid_argument("KernelPoly::Q: bad axis");
  static std::map<std::tuple<int, int, int>, KernelPoly> cache;
  static std::mutex mu;
  const KernelPoly& pn = P(N, n);
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(N, n, j);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  int nvars = 2 * n + 1;
  const int vE = 0;
  int uj = 1 + j;
  int vj = 1 + n + j;
  // Q = E dP/dU_j + (1-E^2) dP/dV_j - 2 E U_j P
  Poly q;
  acc(q, mul_mono(deriv(pn.terms, uj), mono(nvars, vE, 1), 1));
  Poly dV = deriv(pn.terms, vj);
  acc(q, dV);
  acc(q, mul_mono(dV, mono(nvars, vE, 2), -1));
  {
    KernelPoly::Expo sh = mono(nvars, vE, 1);
    sh[uj] += 1;
    acc(q, mul_mono(pn.terms, sh, -2));
  }
  KernelPoly kq;
  kq.dimension = n;
  kq.order = N;
  kq.half_prefactor = 2 * N + 1;
  kq.terms = std::move(q);
  return cache.emplace(key, std::move(kq)).first->second;
}

const KernelPoly& KernelPoly::dQ(int N, int n, int j, int k) {
  if (k < 0 || k >= n) throw std::invalid_argument("KernelPoly::dQ: bad axis");
  static std::map<std::tuple<int, int, int, int>, KernelPoly> cache;
  static std::mutex mu;
  const KernelPoly& qn = Q(N, n, j);
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(N, n, j, k);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  int nvars = 2 * n + 1;
  int uk = 1 + k;
  Poly d;
  acc(d, mul_mono(deriv(qn.terms, uk), mono(nvars, -1, 0), -1));
  acc(d, mul_mono(qn.terms, mono(nvars, uk, 1), 2));
  KernelPoly kd;
  kd.dimension = n;
  kd.order = N;
  kd.half_prefactor = 2 * N + 2;
  kd.terms = std::move(d);
  return cache.emplace(key, std::move(kd)).first->second;
}

// ---------------------------------------------------------------------------
// kernel evaluations

double KernelEvaluation::value() const { return mantissa * std::exp(log_scale); }

double KernelEvaluation::log_abs() const {
  if (mantissa == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(std::abs(mantissa)) + log_scale;
}

namespace {
struct KernelFrame {
  double E, D, sq;
  std::vector<double> U, V;
};

KernelFrame make_frame(double s, std::span<const double> first, std::span<const double> second) {
  KernelFrame f;
  f.E = std::exp(-s);
  f.D = one_minus_exp_m2(s);
  f.sq = std::sqrt(f.D);
  f.U.resize(first.size());
  f.V.resize(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    f.U[i] = (f.E * first[i] - second[i]) / f.sq;
    f.V[i] = f.sq * first[i];
  }
  return f;
}

void check_kernel_args(double t, std::span<const double> x, std::span<const double> y) {
  if (!(t > 0.0)) throw std::invalid_argument("kernel: t must be positive");
  if (t < kMinTime) throw std::invalid_argument("kernel: t below 1e-6 rejected");
  if (x.size() != y.size()) throw std::invalid_argument("kernel: dimension mismatch");
}
}  // namespace

KernelEvaluation kernel_K(double t, int N, double alpha, std::span<const double> x,
                          std::span<const double> y) {
  check_kernel_args(t, x, y);
  if (!(alpha > 0.0)) throw std::invalid_argument("kernel_K: alpha must be positive");
  double s = t * t / alpha;
  KernelFrame f = make_frame(s, x, y);
  const KernelPoly& p = KernelPoly::P(N, static_cast<int>(x.size()));
  KernelEvaluation out;
  out.mantissa = p.eval(f.E, f.U, f.V);
  double n = static_cast<double>(x.size());
  out.log_scale = 2.0 * N * std::log(t) - N * std::log(f.D) - 0.5 * n * std::log(M_PI * f.D) -
                  squared_norm(f.U);
  return out;
}

KernelEvaluation kernel_Ktilde(double t, int N, double alpha, int j, std::span<const double> x,
                               std::span<const double> y) {
  check_kernel_args(t, x, y);
  if (!(alpha > 0.0)) throw std::invalid_argument("kernel_Ktilde: alpha must be positive");
  double s = t * t / alpha;
  // first kernel argument is y (derivative variable), second is x
  KernelFrame f = make_frame(s, y, x);
  const KernelPoly& q = KernelPoly::Q(N, static_cast<int>(x.size()), j);
  KernelEvaluation out;
  out.mantissa = q.eval(f.E, f.U, f.V);
  // M_s(y,x) exp(|x|^2-|y|^2) = M_s(x,y)
  out.log_scale = (2.0 * N + 1.0) * std::log(t) - (N + 0.5) * std::log(f.D) +
                  log_mehler(s, x, y);
  return out;
}

KernelEvaluation kernel_dK_tilde(double t, int N, double alpha, int j, int k,
                                 std::span<const double> x, std::span<const double> y) {
  check_kernel_args(t, x, y);
  if (!(alpha > 0.0)) throw std::invalid_argument("kernel_dK_tilde: alpha must be positive");
  double s = t * t / alpha;
  KernelFrame f = make_frame(s, y, x);
  int n = static_cast<int>(x.size());
  const KernelPoly& q = KernelPoly::Q(N, n, j);
  const KernelPoly& dq = KernelPoly::dQ(N, n, j, k);
  KernelEvaluation out;
  out.mantissa = dq.eval(f.E, f.U, f.V) / f.sq + 2.0 * x[k] * q.eval(f.E, f.U, f.V);
  out.log_scale = (2.0 * N + 2.0) * std::log(t) - (N + 0.5) * std::log(f.D) +
                  log_mehler(s, x, y);
  return out;
}

// ---------------------------------------------------------------------------
// comparison inequalities

bool check_slow2(double t, double alpha, double a, double C, std::span<const double> x,
                 std::span<const double> y, int variant) {
  if (!(alpha > 1.0)) throw std::domain_error("check_slow2: requires alpha > 1");
  if (!(t > 0.0 && t <= a)) throw std::domain_error("check_slow2: requires t in (0,a]");
  if (!(C > 0.0)) throw std::domain_error("check_slow2: requires C > 0");
  double s_a = t * t / alpha;
  double D_a = one_minus_exp_m2(s_a);
  double D_1 = one_minus_exp_m2(t * t);
  double E_a = std::exp(-s_a);
  double E_1 = std::exp(-t * t);
  double lhs = -C * sum_sq_scaled(x, y, E_a) / D_a;
  double carrier = (variant == 1) ? squared_norm(x) : squared_norm(y);
  double rhs = -C * (alpha / (2.0 * std::exp(2.0 * a * a))) * sum_sq_scaled(x, y, E_1) / D_1 +
               C * t * t * t * t * carrier / D_a;
  double slack = 1e-12 * (1.0 + std::abs(lhs) + std::abs(rhs));
  return lhs <= rhs + slack;
}

double est_clause_log_gap(int clause, double t, int N, double alpha, double a, int j,
                          std::span<const double> x, std::span<const double> y) {
  double D_1 = one_minus_exp_m2(t * t);
  double E_1 = std::exp(-t * t);
  double e2a2 = std::exp(2.0 * a * a);
  switch (clause) {
    case 1: {
      double lhs = log_mehler(t * t / alpha, x, y);
      double rhs = -(alpha / (2.0 * e2a2)) * sum_sq_scaled(x, y, E_1) / D_1 +
                   log_mehler(t * t, x, y);
      return lhs - rhs;
    }
    case 2: {
      double lhs = kernel_K(t, N, alpha, x, y).log_abs();
      double rhs = -(alpha / (4.0 * e2a2)) * sum_sq_scaled(x, y, E_1) / D_1 +
                   log_mehler(t * t, x, y);
      return lhs - rhs;
    }
    case 3: {
      double lhs = kernel_Ktilde(t, N, alpha, j, x, y).log_abs();
      double rhs = -(alpha / (4.0 * e2a2)) * sum_sq_scaled(y, x, E_1) / D_1 +
                   log_mehler(t * t, x, y);
      return lhs - rhs;
    }
    default:
      throw std::invalid_argument("est_clause_log_gap: clause must be 1..3");
  }
}

double rtest_log_gap(double t, int N, double alpha, int j, int k, std::span<const double> x,
                     std::span<const double> y) {
  double D_1 = one_minus_exp_m2(t * t);
  double E_1 = std::exp(-t * t);
  double lhs = kernel_dK_tilde(t, N, alpha, j, k, x, y).log_abs();
  double rhs = std::log1p(t * norm2(x)) -
               (alpha / (4.0 * std::exp(8.0))) * sum_sq_scaled(y, x, E_1) / D_1 +
               log_mehler(t * t, x, y);
  return lhs - rhs;
}

}  // namespace gh
