#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "stbc/sim.hpp"

using namespace stbc;

TEST_CASE("snr to noise variance") {
    const Constellation q4 = qam_constellation(4);
    const Constellation q16 = qam_constellation(16);
    CHECK(snr_to_n0(0.0, q4, 4) == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(snr_to_n0(10.0, q4, 4) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(snr_to_n0(0.0, q16, 4) == doctest::Approx(40.0).epsilon(1e-12));
    CHECK(snr_to_n0(std::numeric_limits<double>::infinity(), q4, 4) == 0.0);
}

TEST_CASE("config parsing") {
    std::istringstream is(
        "# comment line\n"
        "m = 16\n"
        "nr = 2\n"
        "snr_db_list = 6, 8, 10, inf   # trailing comment\n"
        "max_trials = 50000\n"
        "target_errors = 100\n"
        "master_seed = 99\n"
        "decoder = exhaustive\n"
        "\n"
        "threads = 2\n");
    const SimConfig cfg = parse_sim_config(is);
    CHECK(cfg.m == 16);
    CHECK(cfg.nr == 2);
    REQUIRE(cfg.snr_db_list.size() == 4);
    CHECK(cfg.snr_db_list[0] == 6.0);
    CHECK(cfg.snr_db_list[2] == 10.0);
    CHECK(std::isinf(cfg.snr_db_list[3]));
    CHECK(cfg.max_trials == 50000);
    CHECK(cfg.target_errors == 100);
    CHECK(cfg.master_seed == 99);
    CHECK(cfg.decoder == DecoderKind::exhaustive);
    CHECK(cfg.threads == 2);

    std::istringstream defaults("snr_db_list = 10\n");
    const SimConfig d = parse_sim_config(defaults);
    CHECK(d.m == 4);
    CHECK(d.decoder == DecoderKind::conditional);

    std::istringstream unknown("snr = 10\n");
    CHECK_THROWS_AS(parse_sim_config(unknown), std::invalid_argument);
    std::istringstream bad_value("m = banana\n");
    CHECK_THROWS_AS(parse_sim_config(bad_value), std::invalid_argument);
    std::istringstream no_eq("m 16\n");
    CHECK_THROWS_AS(parse_sim_config(no_eq), std::invalid_argument);
    std::istringstream bad_decoder("decoder = magic\n");
    CHECK_THROWS_AS(parse_sim_config(bad_decoder), std::invalid_argument);
}

TEST_CASE("config validation") {
    SimConfig good;
    good.snr_db_list = {6.0, 8.0};
    validate(good);

    SimConfig bad = good;
    bad.m = 7;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = good;
    bad.nr = 0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = good;
    bad.snr_db_list = {};
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = good;
    bad.snr_db_list = {8.0, 6.0};
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = good;
    bad.snr_db_list = {6.0, 6.0};
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = good;
    bad.target_errors = 0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = good;
    bad.max_trials = 10;
    bad.target_errors = 11;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("symbol draws come from the constellation") {
    const Constellation c = qam_constellation(16);
    Rng g1 = Rng::from_stream(41, 0);
    Rng g2 = Rng::from_stream(41, 0);
    const std::vector<double> a = draw_symbol_vector(c, 8, g1);
    const std::vector<double> b = draw_symbol_vector(c, 8, g2);
    CHECK(a == b);
    for (double x : a) {
        bool found = false;
        for (double level : c.pam) found = found || x == level;
        CHECK(found);
    }
}

TEST_CASE("noiseless runs never err") {
    SimConfig cfg;
    cfg.snr_db_list = {std::numeric_limits<double>::infinity()};
    cfg.max_trials = 4096;
    cfg.target_errors = 1;
    cfg.master_seed = 5;
    const auto pts = run_cer(cfg);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].errors == 0);
    CHECK(pts[0].cer == 0.0);
    CHECK(pts[0].trials == 4096);  // no early stop without errors
    CHECK(pts[0].metric_evals_total == 4 * 4096);
}

TEST_CASE("early stop lands on a chunk boundary") {
    SimConfig cfg;
    cfg.snr_db_list = {0.0};
    cfg.max_trials = 100000;
    cfg.target_errors = 100;
    cfg.master_seed = 6;
    const auto pts = run_cer(cfg);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].trials == 4096);  // plenty of errors in the first chunk
    CHECK(pts[0].errors >= 100);
    CHECK(pts[0].cer == doctest::Approx(double(pts[0].errors) / 4096.0).epsilon(1e-15));
}

TEST_CASE("error rate falls with snr") {
    SimConfig cfg;
    cfg.snr_db_list = {6.0, 12.0};
    cfg.max_trials = 20000;
    cfg.target_errors = 20000;
    cfg.master_seed = 7;
    const auto pts = run_cer(cfg);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].cer > pts[1].cer);
    CHECK(pts[1].cer > 0.0);
}

TEST_CASE("results are byte-identical for any thread count") {
    SimConfig cfg;
    cfg.snr_db_list = {8.0, 14.0};
    cfg.max_trials = 8192;
    cfg.target_errors = 150;
    cfg.master_seed = 8;
    cfg.threads = 1;
    const auto a = run_cer(cfg);
    cfg.threads = 3;
    const auto b = run_cer(cfg);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].trials == b[i].trials);
        CHECK(a[i].errors == b[i].errors);
        CHECK(a[i].cer == b[i].cer);
        CHECK(a[i].metric_evals_total == b[i].metric_evals_total);
    }
}

TEST_CASE("exhaustive decoder spends the full search budget") {
    SimConfig cfg;
    cfg.snr_db_list = {10.0};
    cfg.max_trials = 512;
    cfg.target_errors = 512;
    cfg.master_seed = 9;
    cfg.decoder = DecoderKind::exhaustive;
    const auto pts = run_cer(cfg);
    CHECK(pts[0].metric_evals_total == uint64_t(256) * 512);
}

TEST_CASE("cer csv layout") {
    SimConfig cfg;
    cfg.snr_db_list = {10.0};
    cfg.max_trials = 4096;
    cfg.target_errors = 50;
    const auto pts = run_cer(cfg);
    std::ostringstream os;
    write_cer_csv(os, pts);
    const std::string s = os.str();
    CHECK(s.rfind("snr_db,trials,errors,cer,metric_evals_total\n", 0) == 0);
    int lines = 0;
    for (char ch : s)
        if (ch == '\n') ++lines;
    CHECK(lines == 2);
}

TEST_CASE("decoder agreement on noisy receptions") {
    const AgreementReport r =
        decode_agreement(make_proposed_code(), 4, 1, 2000, {0.5, 2.0, 8.0}, 77);
    CHECK(r.trials == 2000);
    CHECK(r.disagreements == 0);
    CHECK(r.evals_ok);
    CHECK(r.agreement_rate == 1.0);

    CHECK_THROWS_AS(decode_agreement(make_proposed_code(), 4, 1, 0, {1.0}, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(decode_agreement(make_proposed_code(), 4, 1, 10, {}, 1),
                    std::invalid_argument);
}
