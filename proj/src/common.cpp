#include "svpc/common.hpp"

#include <algorithm>
#include <charconv>
#include <system_error>
#include <thread>
#include <vector>

namespace svpc {

double RandomState::gaussian() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  // u1 in (0, 1] so the log is finite.
  double u1 = 1.0 - uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * 3.14159265358979323846 * u2;
  cached_ = r * std::sin(a);
  has_cached_ = true;
  return r * std::cos(a);
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) throw InternalError("format_double: to_chars failed");
  return std::string(buf, res.ptr);
}

void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  std::size_t hw = std::thread::hardware_concurrency();
  std::size_t workers = std::min<std::size_t>(std::max<std::size_t>(hw, 1), n);
  if (workers <= 1) {
    fn(0, n);
    return;
  }
  std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t b = w * chunk;
    if (b >= n) break;
    std::size_t e = std::min(n, b + chunk);
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace svpc
