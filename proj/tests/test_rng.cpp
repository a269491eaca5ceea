#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "stbc/rng.hpp"

using stbc::Rng;

TEST_CASE("streams are pure functions of their ids") {
    Rng a = Rng::from_stream(42, 1, 2, 3);
    Rng b = Rng::from_stream(42, 1, 2, 3);
    for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());

    Rng c = Rng::from_stream(42, 1, 2, 4);
    Rng d = Rng::from_stream(43, 1, 2, 3);
    Rng e = Rng::from_stream(42, 1, 2, 3);
    CHECK(c.next_u64() != e.next_u64());
    Rng f = Rng::from_stream(42, 1, 2, 3);
    CHECK(d.next_u64() != f.next_u64());
}

TEST_CASE("next_double covers [0,1) with the right mean") {
    Rng g = Rng::from_stream(7, 0);
    double sum = 0.0, lo = 1.0, hi = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = g.next_double();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(std::abs(sum / n - 0.5) < 0.005);
    CHECK(lo < 0.001);
    CHECK(hi > 0.999);
}

TEST_CASE("uniform_pos never returns zero") {
    Rng g = Rng::from_stream(9, 0);
    for (int i = 0; i < 100000; ++i) {
        const double u = g.uniform_pos();
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
    }
}

TEST_CASE("uniform_below stays in range and hits every bucket") {
    Rng g = Rng::from_stream(11, 0);
    int counts[7] = {0};
    for (int i = 0; i < 70000; ++i) {
        const uint64_t k = g.uniform_below(7);
        REQUIRE(k < 7);
        ++counts[k];
    }
    for (int k = 0; k < 7; ++k) CHECK(counts[k] > 9000);  // expect ~10000 each
}

TEST_CASE("next_index on powers of two") {
    Rng g = Rng::from_stream(13, 0);
    for (int i = 0; i < 1000; ++i) CHECK(g.next_index(8) < 8);
}

TEST_CASE("gaussian moments") {
    Rng g = Rng::from_stream(17, 0);
    const int n = 200000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = g.gaussian();
        s1 += x;
        s2 += x * x;
    }
    CHECK(std::abs(s1 / n) < 0.01);
    CHECK(std::abs(s2 / n - 1.0) < 0.02);
}

TEST_CASE("cgaussian carries the requested total variance") {
    Rng g = Rng::from_stream(19, 0);
    const int n = 100000;
    double e2 = 0.0, er = 0.0, ei = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto z = g.cgaussian(4.0);
        e2 += std::norm(z);
        er += z.real();
        ei += z.imag();
    }
    CHECK(std::abs(e2 / n - 4.0) < 0.1);
    CHECK(std::abs(er / n) < 0.05);
    CHECK(std::abs(ei / n) < 0.05);
}
