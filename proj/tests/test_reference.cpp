#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "stbc/reference.hpp"

using namespace stbc;

TEST_CASE("serial LU search agrees with the parallel cofactor search") {
    const LinearDispersionCode code = make_proposed_code();
    const MinDetReport serial = ref::min_det_search(code, 2);
    const MinDetReport parallel = min_det_search(code, 2, LatticeSymmetry::none);
    const MinDetReport pruned = min_det_search(code, 2, LatticeSymmetry::block_signs);

    CHECK(serial.count_examined == 6560);
    CHECK(parallel.count_examined == 6560);
    CHECK(std::abs(serial.min_abs_det - parallel.min_abs_det) <= 1e-12 * serial.min_abs_det);
    CHECK(std::abs(serial.min_abs_det - pruned.min_abs_det) <= 1e-12 * serial.min_abs_det);
    // kernels differ (LU vs cofactor), so compare argmins by value
    CHECK(det_difference(code, serial.argmin) ==
          doctest::Approx(serial.min_abs_det).epsilon(1e-12));
}

TEST_CASE("serial certification matches the parallel one field by field") {
    const double ps = proposed_phi();
    const NvdReport s = ref::verify_nvd(2, ps, 4);
    const NvdReport p = verify_nvd(2, ps, 4);
    CHECK(s.pass);
    CHECK(p.pass);
    CHECK(s.lattice_cases == p.lattice_cases);
    CHECK(s.sigma_equal_cases == p.sigma_equal_cases);
    CHECK(s.tight_difference_cases == p.tight_difference_cases);
    CHECK(s.violations_total == p.violations_total);
    CHECK(s.gap_tuples == p.gap_tuples);
    CHECK(s.gap_min == p.gap_min);
    CHECK(s.residues_ok == p.residues_ok);
    CHECK(s.min_det == doctest::Approx(p.min_det).epsilon(1e-15));

    // both spot the same failure at a broken angle
    const NvdReport sb = ref::verify_nvd(2, 0.3, 4);
    const NvdReport pb = verify_nvd(2, 0.3, 4);
    CHECK(!sb.pass);
    CHECK(!pb.pass);
    CHECK(sb.violations_total == pb.violations_total);
}

TEST_CASE("serial and parallel monte carlo produce identical counts") {
    const LinearDispersionCode code = make_proposed_code();
    SimConfig cfg;
    cfg.snr_db_list = {8.0, 14.0};
    cfg.max_trials = 12288;
    cfg.target_errors = 150;  // 14 dB needs more than one chunk
    cfg.master_seed = 11;

    const auto serial = ref::run_cer(code, cfg);
    cfg.threads = 3;
    const auto parallel = run_cer(code, cfg);
    REQUIRE(serial.size() == parallel.size());
    for (size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].trials == parallel[i].trials);
        CHECK(serial[i].errors == parallel[i].errors);
        CHECK(serial[i].cer == parallel[i].cer);
        CHECK(serial[i].metric_evals_total == parallel[i].metric_evals_total);
    }

    SimConfig ex = cfg;
    ex.snr_db_list = {10.0};
    ex.max_trials = 1024;
    ex.target_errors = 1024;
    ex.decoder = DecoderKind::exhaustive;
    const auto se = ref::run_cer(code, ex);
    const auto pe = run_cer(code, ex);
    CHECK(se[0].errors == pe[0].errors);
    CHECK(se[0].trials == pe[0].trials);
    CHECK(se[0].metric_evals_total == pe[0].metric_evals_total);
}

TEST_CASE("default-code overload uses the proposed code") {
    SimConfig cfg;
    cfg.snr_db_list = {10.0};
    cfg.max_trials = 4096;
    cfg.target_errors = 4096;
    cfg.master_seed = 13;
    const auto a = run_cer(cfg);
    const auto b = run_cer(make_proposed_code(), cfg);
    CHECK(a[0].errors == b[0].errors);
    CHECK(a[0].trials == b[0].trials);
}
