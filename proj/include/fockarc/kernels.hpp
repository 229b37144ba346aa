#pragma once

#include <cstdint>
#include <exception>
#include <span>
#include <type_traits>
#include <vector>

namespace fockarc::kernels {

enum class Execution { Serial, Parallel };

/// Symmetric tridiagonal operator restricted to indices [first, first + diag.size()).
/// off[i] couples first+i and first+i+1. Entries outside the window are zero.
struct Band {
  std::int64_t first = 0;
  std::vector<double> diag;
  std::vector<double> off;

  std::int64_t last() const { return first + static_cast<std::int64_t>(diag.size()) - 1; }
};

/// out = band * in over the window. Both spans have diag.size() entries.
void band_apply_serial(const Band& band, std::span<const double> in, std::span<double> out);
void band_apply_parallel(const Band& band, std::span<const double> in, std::span<double> out);

/// <B^steps e_start, e_start>, propagating the vector `steps` times and taking
/// the start coordinate. Serial and parallel results are bitwise identical.
double band_moment(const Band& band, std::int64_t start, int steps, Execution exec = Execution::Serial);

/// Vector after `steps` applications, indexed over the band window.
std::vector<double> band_power_apply(const Band& band, std::int64_t start, int steps, Execution exec);

int max_threads();

/// results[i] = f(i) for i < count. Result order is index order regardless of
/// scheduling; the first exception (by index) is rethrown after the loop.
template <class F>
auto map_indexed(std::size_t count, F&& f, Execution exec) -> std::vector<std::invoke_result_t<F&, std::size_t>> {
  using R = std::invoke_result_t<F&, std::size_t>;
  std::vector<R> results(count);
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<std::int64_t>(count);
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        results[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        results[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace fockarc::kernels
