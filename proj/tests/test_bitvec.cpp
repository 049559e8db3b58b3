#include <doctest.h>

#include "treebench/bitvec.hpp"
#include "treebench/rng.hpp"

using namespace treebench;

TEST_CASE("bitvec basics across word boundaries") {
    BitVec v(130);
    v.set(0);
    v.set(63);
    v.set(64);
    v.set(129);
    CHECK(v.count() == 4);
    CHECK(v.test(63));
    CHECK(!v.test(62));
    v.reset(63);
    CHECK(v.count() == 3);

    BitVec all = BitVec::ones(130);
    CHECK(all.count() == 130);
    CHECK(all.all());
    CHECK(BitVec::count_and(all, v) == 3);
    CHECK(all.and_not(v).count() == 127);
}

TEST_CASE("count_and3 equals materialized intersection") {
    Rng rng(7);
    BitVec a(200), b(200), c(200);
    for (int i = 0; i < 200; ++i) {
        if (rng.coin()) a.set(i);
        if (rng.coin()) b.set(i);
        if (rng.coin()) c.set(i);
    }
    CHECK(BitVec::count_and3(a, b, c) == ((a & b) & c).count());
    CHECK(BitVec::count_and(a, b) == (a & b).count());
}

TEST_CASE("hash128 differs on salt and content") {
    BitVec a(64), b(64);
    a.set(3);
    b.set(4);
    std::uint64_t a1, a2, b1, b2, s1, s2;
    a.hash128(0, a1, a2);
    b.hash128(0, b1, b2);
    a.hash128(1, s1, s2);
    CHECK((a1 != b1 || a2 != b2));
    CHECK((a1 != s1 || a2 != s2));
}

TEST_CASE("rng determinism and ranges") {
    Rng r1(42), r2(42);
    for (int i = 0; i < 100; ++i) {
        CHECK(r1.next_u64() == r2.next_u64());
    }
    Rng r(1);
    for (int i = 0; i < 1000; ++i) {
        double u = r.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        int k = r.uniform_int(17);
        CHECK(k >= 0);
        CHECK(k < 17);
    }
    auto sample = r.sample_without_replacement(10, 10);
    std::sort(sample.begin(), sample.end());
    for (int i = 0; i < 10; ++i) CHECK(sample[i] == i);
}
