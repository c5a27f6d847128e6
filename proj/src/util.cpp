#include "gausshardy/util.hpp"

#include <atomic>
#include <cstdio>
#include <stdexcept>
#include <thread>

namespace gh {

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  int count = std::min<std::size_t>(threads, n);
  pool.reserve(count);
  for (int t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

std::uint64_t fnv1a64(std::span<const unsigned char> data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char b : data) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t fnv1a64(const std::string& s) {
  return fnv1a64(std::span<const unsigned char>(
      reinterpret_cast<const unsigned char*>(s.data()), s.size()));
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = 0.5 * (a + b);
    return out;
  }
  for (int i = 0; i < count; ++i) out[i] = a + (b - a) * i / (count - 1);
  return out;
}

std::vector<double> geometric_midpoints(double lo, double hi, int count, double* log_step) {
  if (!(lo > 0.0) || !(hi > lo) || count < 1)
    throw std::invalid_argument("geometric_midpoints: need 0 < lo < hi, count >= 1");
  double step = std::log(hi / lo) / count;
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = lo * std::exp(step * (i + 0.5));
  if (log_step) *log_step = step;
  return out;
}

double squared_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(squared_norm(x)); }

double dist2(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(s);
}

}  // namespace gh
