// Serial against OpenMP index build on one road graph. The serial run is the
// reference; every threaded run must produce the same index.
//
// usage: build_threads [n] [roads] [k] [r] [max_threads] [reps]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "mcroute/index.hpp"
#include "mcroute/lbop.hpp"

using namespace mcroute;

namespace {

double now() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

struct Phases {
  double lbop = 0, skyline = 0, contour = 0;
  double total() const { return lbop + skyline + contour; }
};

Phases time_build(const MultiCostGraph &g, const PartitionLayout &layout, std::size_t r, int threads,
                  PartitionIndex *out) {
  IndexBuildOptions options;
  options.r = r;
  options.k = layout.k;
  options.layout = layout;
  options.threads = threads;
  options.measure_sizes = false;
  *out = build_index(g, options);
  return {out->meta.lbop_seconds, out->meta.skyline_seconds, out->meta.contour_seconds};
}

} // namespace

int main(int argc, char **argv) {
  const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 5000;
  const std::size_t roads = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : n * 6 / 5;
  const std::size_t k = argc > 3 ? std::strtoul(argv[3], nullptr, 10) : 50;
  const std::size_t r = argc > 4 ? std::strtoul(argv[4], nullptr, 10) : 8;
  const int max_threads = argc > 5 ? std::atoi(argv[5]) : omp_get_num_procs();
  const int reps = argc > 6 ? std::atoi(argv[6]) : 3;

  const MultiCostGraph g = generate_road_graph(n, roads, 2, {1, 10}, 7);
  double t = now();
  const PartitionLayout layout = partition_graph(g, k, 7);
  std::printf("graph n=%zu m=%zu  k=%zu r=%zu  partition %.3f s  procs %d\n", g.vertex_count(), g.edge_count(), k, r,
              now() - t, omp_get_num_procs());

  PartitionIndex reference;
  Phases serial;
  for (int i = 0; i < reps; ++i) {
    const Phases p = time_build(g, layout, r, 1, &reference);
    if (i == 0 || p.total() < serial.total()) serial = p;
  }
  std::printf("%8s %10s %10s %10s %10s %8s %6s\n", "threads", "lbop s", "skyline s", "contour s", "total s", "speedup",
              "same");
  std::printf("%8d %10.3f %10.3f %10.3f %10.3f %8.2f %6s\n", 1, serial.lbop, serial.skyline, serial.contour,
              serial.total(), 1.0, "ref");

  int failures = 0;
  for (int threads = 2; threads <= std::max(2, max_threads); threads *= 2) {
    PartitionIndex parallel;
    Phases best;
    for (int i = 0; i < reps; ++i) {
      const Phases p = time_build(g, layout, r, threads, &parallel);
      if (i == 0 || p.total() < best.total()) best = p;
    }
    const bool same = parallel.same_content(reference);
    failures += !same;
    std::printf("%8d %10.3f %10.3f %10.3f %10.3f %8.2f %6s\n", threads, best.lbop, best.skyline, best.contour,
                best.total(), serial.total() / best.total(), same ? "yes" : "NO");
  }
  return failures ? 1 : 0;
}
