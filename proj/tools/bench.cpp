// Benchmark of the OpenMP kernels against their serial reference
// implementations: the sector-supremum grid sweep and Stokes curve tracking.

#include <chrono>
#include <cstdio>

#include "stokeskit/geometry.hpp"
#include "stokeskit/parallel.hpp"
#include "stokeskit/sheafmodel.hpp"

using namespace stokeskit;

namespace {

template <class F> double time_of(F&& fn, int reps = 3) {
    auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) fn();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count() / reps;
}

} // namespace

int main() {
    int threads = apply_thread_cap_from_env();
    std::printf("stokeskit-bench: %d thread(s)\n", threads);

    ExponentialFactor delta = parse_factor("x^-3 + (1+2*i)*x^-2 + i*x^-1");
    Sector sector{Direction::numeric(0.3), Direction::numeric(2.9), 1.0};
    std::vector<double> radii;
    for (int i = 0; i < 48; ++i) radii.push_back(1e-3 * std::pow(100.0, i / 47.0));

    double sink = 0;
    double t_serial = time_of([&] { sink += sector_sup_re_serial(delta, sector, radii, 4096); });
    double t_omp = time_of([&] { sink += sector_sup_re(delta, sector, radii, 4096); });
    std::printf("sector_sup_re     serial %8.4f s   omp %8.4f s   speedup %.2fx\n", t_serial,
                t_omp, t_serial / t_omp);

    ExponentialFactor curve_delta = parse_factor("x^-6 - 1");
    std::vector<double> grid;
    for (int i = 0; i < 4096; ++i)
        grid.push_back(0.5 * std::pow(2e-3, i / 4095.0));
    double c_serial = time_of([&] { sink += stokes_curves_serial(curve_delta, grid)[0].points.back().theta; });
    double c_omp = time_of([&] { sink += stokes_curves(curve_delta, grid)[0].points.back().theta; });
    std::printf("stokes_curves     serial %8.4f s   omp %8.4f s   speedup %.2fx\n", c_serial,
                c_omp, c_serial / c_omp);

    std::printf("checksum %.6f\n", sink);
    return 0;
}
