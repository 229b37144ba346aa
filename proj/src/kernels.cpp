#include "fockarc/kernels.hpp"

#include <omp.h>

#include <stdexcept>

namespace fockarc::kernels {

namespace {

// Below this width the thread fork costs more than the loop.
constexpr std::int64_t kParallelMinWidth = 4096;

inline double row(const Band& band, std::span<const double> in, std::int64_t i, std::int64_t size) {
  double sum = band.diag[i] * in[i];
  if (i > 0) sum += band.off[i - 1] * in[i - 1];
  if (i + 1 < size) sum += band.off[i] * in[i + 1];
  return sum;
}

void check(const Band& band, std::span<const double> in, std::span<double> out) {
  if (band.diag.empty() || band.off.size() + 1 != band.diag.size() || in.size() != band.diag.size() ||
      out.size() != band.diag.size())
    throw std::invalid_argument("band kernel: inconsistent sizes");
}

}  // namespace

void band_apply_serial(const Band& band, std::span<const double> in, std::span<double> out) {
  check(band, in, out);
  const auto size = static_cast<std::int64_t>(band.diag.size());
  for (std::int64_t i = 0; i < size; ++i) out[i] = row(band, in, i, size);
}

void band_apply_parallel(const Band& band, std::span<const double> in, std::span<double> out) {
  check(band, in, out);
  const auto size = static_cast<std::int64_t>(band.diag.size());
#pragma omp parallel for schedule(static) if (size >= kParallelMinWidth)
  for (std::int64_t i = 0; i < size; ++i) out[i] = row(band, in, i, size);
}

std::vector<double> band_power_apply(const Band& band, std::int64_t start, int steps, Execution exec) {
  if (start < band.first || start > band.last()) throw std::out_of_range("band kernel: start outside window");
  if (steps < 0) throw std::invalid_argument("band kernel: negative step count");
  std::vector<double> cur(band.diag.size(), 0.0);
  std::vector<double> next(band.diag.size(), 0.0);
  cur[static_cast<std::size_t>(start - band.first)] = 1.0;
  for (int s = 0; s < steps; ++s) {
    if (exec == Execution::Parallel)
      band_apply_parallel(band, cur, next);
    else
      band_apply_serial(band, cur, next);
    cur.swap(next);
  }
  return cur;
}

double band_moment(const Band& band, std::int64_t start, int steps, Execution exec) {
  return band_power_apply(band, start, steps, exec)[static_cast<std::size_t>(start - band.first)];
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace fockarc::kernels
