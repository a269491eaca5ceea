// Wall-time comparison of the serial reference kernels against the
// OpenMP/fast-path implementations. Build target only, not part of ctest.
#include <chrono>
#include <cstdio>

#include <omp.h>

#include "stbc/reference.hpp"

using namespace stbc;
using clock_type = std::chrono::steady_clock;

namespace {

template <class F>
double time_s(F&& f) {
    const auto t0 = clock_type::now();
    f();
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void row(const char* name, double serial, double parallel) {
    std::printf("%-28s %10.3f s %12.3f s %9.1fx\n", name, serial, parallel,
                serial / parallel);
}

} // namespace

int main() {
    const LinearDispersionCode code = make_proposed_code();
    std::printf("threads available: %d\n", omp_get_max_threads());
    std::printf("%-28s %12s %14s %10s\n", "kernel", "serial", "parallel", "speedup");

    double min_serial = 0.0, min_parallel = 0.0;
    MinDetReport r1, r2;
    min_serial = time_s([&] { r1 = ref::min_det_search(code, 4); });
    min_parallel =
        time_s([&] { r2 = min_det_search(code, 4, LatticeSymmetry::block_signs); });
    row("min_det spread 4", min_serial, min_parallel);
    std::printf("  serial %.9f (%lld dets), parallel %.9f (%lld dets)\n", r1.min_abs_det,
                r1.count_examined, r2.min_abs_det, r2.count_examined);

    NvdReport n1, n2;
    const double nvd_serial = time_s([&] { n1 = ref::verify_nvd(2, proposed_phi()); });
    const double nvd_parallel = time_s([&] { n2 = verify_nvd(2, proposed_phi()); });
    row("verify_nvd bound 2", nvd_serial, nvd_parallel);
    std::printf("  both pass: %s\n", n1.pass && n2.pass ? "yes" : "NO");

    SimConfig cfg;
    cfg.snr_db_list = {10.0};
    cfg.max_trials = 65536;
    cfg.target_errors = 65536;
    cfg.master_seed = 1;
    std::vector<CerPoint> c1, c2;
    const double cer_serial = time_s([&] { c1 = ref::run_cer(code, cfg); });
    const double cer_parallel = time_s([&] { c2 = run_cer(code, cfg); });
    row("run_cer 65536 trials", cer_serial, cer_parallel);
    std::printf("  identical counts: %s (%lld errors)\n",
                c1[0].errors == c2[0].errors && c1[0].trials == c2[0].trials ? "yes" : "NO",
                c1[0].errors);
    return 0;
}
