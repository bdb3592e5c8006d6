#include <doctest.h>

#include <cmath>
#include <random>

#include "mflab/error.hpp"
#include "mflab/primes.hpp"
#include "oracles.hpp"

using namespace mflab;

TEST_SUITE("primes") {

TEST_CASE("small sieves") {
    auto t = sieve_primes(10);
    CHECK(std::vector<std::uint32_t>(t.begin(), t.end()) == std::vector<std::uint32_t>{2, 3, 5, 7});
    auto two = sieve_primes(2);
    REQUIRE(two.size() == 1);
    CHECK(two[0] == 2);
    CHECK(sieve_primes(3).size() == 2);
}

TEST_CASE("pi(10^6) against the bit sieve") {
    const auto ref = oracle::primes_upto(1'000'000);
    CHECK(ref.size() == 78498);  // frozen from the oracle
    const auto t = sieve_primes(1'000'000);
    REQUIRE(t.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) REQUIRE(t[i] == ref[i]);
}

TEST_CASE("segment size and threads do not change the table") {
    const auto base = sieve_primes(2'000'003);
    for (std::uint64_t seg : {64ull, 1000ull, 1ull << 20}) {
        for (unsigned th : {1u, 3u}) {
            const auto t = sieve_primes(2'000'003, {kDefaultSieveCeiling, seg, th});
            REQUIRE(t.size() == base.size());
            CHECK(std::equal(t.begin(), t.end(), base.begin()));
        }
    }
}

TEST_CASE("every listed element passes trial division") {
    const auto t = sieve_primes(200'000);
    for (auto p : t) REQUIRE(oracle::is_prime_trial(p));
    CHECK(t[0] == 2);
    CHECK(std::is_sorted(t.begin(), t.end()));
    CHECK(std::adjacent_find(t.begin(), t.end()) == t.end());
}

TEST_CASE("sieve errors") {
    CHECK_THROWS_AS(sieve_primes(1), Error);
    try {
        sieve_primes(1);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptyRange);
    }
    try {
        sieve_primes(1000, {100, 0, 1});
        FAIL("expected capacity error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Capacity);
    }
}

TEST_CASE("count_upto and is_prime") {
    const auto t = sieve_primes(1000);
    CHECK(t.count_upto(1.5) == 0);
    CHECK(t.count_upto(2) == 1);
    CHECK(t.count_upto(10.9) == 4);
    CHECK(t.count_upto(1000) == 168);
    CHECK(t.is_prime(997));
    CHECK_FALSE(t.is_prime(999));
}

TEST_CASE("spf examples") {
    const auto s = spf_table(12);
    CHECK(s.spf(12) == 2);
    CHECK(s.spf(9) == 3);
    CHECK(s.spf(7) == 7);
    CHECK(spf_table(2).spf(2) == 2);
    CHECK_THROWS_AS(s.spf(13), Error);
}

TEST_CASE("spf against trial division at random indices") {
    const auto s = spf_table(100'000);
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<std::uint64_t> pick(2, 100'000);
    for (int i = 0; i < 1000; ++i) {
        const auto n = pick(rng);
        REQUIRE(s.spf(n) == oracle::trial_factor(n).front().first);
    }
}

TEST_CASE("spf invariants and full factorization up to 1e5") {
    const auto s = spf_table(100'000);
    for (std::uint64_t n = 2; n <= 100'000; ++n) {
        const auto q = s[n];
        REQUIRE(n % q == 0);
        REQUIRE(oracle::is_prime_trial(q));
        std::uint64_t prod = 1;
        const auto fac = s.factorize(n);
        const auto ref = oracle::trial_factor(n);
        REQUIRE(fac.size() == ref.size());
        for (std::size_t i = 0; i < fac.size(); ++i) {
            REQUIRE(fac[i].p == ref[i].first);
            REQUIRE(fac[i].k == ref[i].second);
            for (unsigned k = 0; k < fac[i].k; ++k) prod *= fac[i].p;
        }
        REQUIRE(prod == n);
    }
}

TEST_CASE("reciprocal prime sums") {
    const auto t = sieve_primes(1'000'000);
    CHECK(sum_reciprocal_primes(2, t) == 0.5);
    CHECK(sum_reciprocal_primes(10, t) == doctest::Approx(1.0 / 2 + 1.0 / 3 + 1.0 / 5 + 1.0 / 7).epsilon(1e-15));
    const double oracle_value = double(oracle::reciprocal_prime_sum(1'000'000));
    CHECK(sum_reciprocal_primes(1e6, t) == doctest::Approx(oracle_value).epsilon(1e-14));
    CHECK(std::abs(sum_reciprocal_primes(1e6, t) - (std::log(std::log(1e6)) + kMertensConstant)) < 0.01);

    double prev = 0.0;
    for (double x = 100; x <= 1e6; x *= 1.07) {
        const double v = sum_reciprocal_primes(x, t);
        CHECK(v >= prev);
        CHECK(std::abs(v - (std::log(std::log(x)) + kMertensConstant)) <= 0.05);
        prev = v;
    }
    try {
        sum_reciprocal_primes(2e6, t);
        FAIL("expected coverage error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Coverage);
    }
}

}
