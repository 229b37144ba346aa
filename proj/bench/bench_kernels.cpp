// Serial reference vs OpenMP kernels. Prints one line per workload.

#include "fockarc/arcsine.hpp"
#include "fockarc/fock.hpp"
#include "fockarc/orthopoly.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>

using namespace fockarc;
using kernels::Execution;

namespace {

double seconds(const std::function<double()>& work, double& sink) {
  auto start = std::chrono::steady_clock::now();
  sink += work();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void compare(const char* name, const std::function<double(Execution)>& work) {
  double serial_value = 0.0;
  double parallel_value = 0.0;
  double serial = seconds([&] { return work(Execution::Serial); }, serial_value);
  double parallel = seconds([&] { return work(Execution::Parallel); }, parallel_value);
  std::printf("%-28s serial %9.4fs  parallel %9.4fs  speedup %5.2fx  same=%s\n", name, serial, parallel,
              serial / parallel, serial_value == parallel_value ? "yes" : "no");
}

}  // namespace

int main() {
  std::printf("threads: %d\n", kernels::max_threads());
  auto uniform = catalog_sequence("uniform");
  auto gaussian = catalog_sequence("gaussian");

  compare("band moment m=20000", [&](Execution e) { return moment_float(uniform, 5000, 20000, e); });

  std::vector<std::int64_t> levels(2000);
  std::iota(levels.begin(), levels.end(), 0);
  compare("batched levels x2000 m=64", [&](Execution e) {
    auto v = normalized_moments_batch(gaussian, levels, 64, e);
    return std::accumulate(v.begin(), v.end(), 0.0);
  });

  compare("quadrature table n,m<=10", [&](Execution e) {
    QuadratureOptions opts;
    opts.exec = e;
    auto t = quadrature_moment_table(measure_spec(MeasureKind::Gaussian), gaussian, 10, 10, opts);
    return static_cast<double>(t.at(10, 10));
  });

  compare("weight table c=0.1", [&](Execution e) { return DiscreteArcsineLaw::build(0.1, 1e-14, 0, e).total_mass(); });
  return 0;
}
