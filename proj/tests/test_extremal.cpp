#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "mflab/error.hpp"
#include "mflab/extremal.hpp"
#include "mflab/halasz.hpp"
#include "oracles.hpp"

using namespace mflab;

namespace {

const PrimeTable& primes() {
    static const PrimeTable t = sieve_primes(1'000'000);
    return t;
}

ExtremalSpec reference_spec() { return build_extremal_spec(KappaDesc::parse("power:0.25"), 20.0, 3); }

}  // namespace

TEST_SUITE("extremal") {

TEST_CASE("kappa vocabulary") {
    CHECK(KappaDesc::parse("const:2")(5.0) == 2.0);
    CHECK(KappaDesc::parse("power:0.25")(16.0) == doctest::Approx(2.0));
    CHECK(KappaDesc::parse("loglog-fraction:1")(std::exp(2.0)) == doctest::Approx(std::exp(1.0) / 2.0));
    CHECK(KappaDesc::parse("power:0.25").to_string() == "power:0.25");
    for (const char* bad : {"power:0.5", "power:-1", "const:0", "bogus:1", "power", "power:x"}) {
        CHECK_THROWS_AS(KappaDesc::parse(bad), Error);
    }
}

TEST_CASE("regularize: constant and power are fixed points") {
    const auto c = regularize_kappa([](double) { return 1.0; });
    for (std::size_t i = 0; i < c.grid().size(); ++i) {
        CHECK(c.kappa0_nodes()[i] == 1.0);
        CHECK(c.kappa1_nodes()[i] == doctest::Approx(1.0).epsilon(1e-14));
    }
    const auto p = regularize_kappa(KappaDesc::parse("power:0.25"));
    for (std::size_t i = 0; i < p.grid().size(); i += 97) {
        const double raw = std::pow(p.grid()[i], 0.25);
        CHECK(p.kappa0_nodes()[i] == doctest::Approx(raw).epsilon(1e-14));
        CHECK(p.kappa1_nodes()[i] == doctest::Approx(raw).epsilon(1e-12));
    }
}

TEST_CASE("regularize: oscillating raw against a running-max oracle") {
    auto raw = [](double u) { return 1.0 + std::sin(u) / 2.0; };
    const auto k = regularize_kappa(raw);
    const auto& g = k.grid();
    double running = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        running = std::max(running, raw(g[i]));
        REQUIRE(k.kappa0_nodes()[i] == running);
        REQUIRE(k.kappa1_nodes()[i] + 1e-12 >= k.kappa0_nodes()[i]);
        REQUIRE(k.kappa0_nodes()[i] >= raw(g[i]));
        if (i > 0) {
            REQUIRE(k.kappa0_nodes()[i] >= k.kappa0_nodes()[i - 1]);
            REQUIRE(k.kappa1_nodes()[i] + 1e-12 >= k.kappa1_nodes()[i - 1]);
            REQUIRE(k.kappa1_nodes()[i] / std::sqrt(g[i]) <= k.kappa1_nodes()[i - 1] / std::sqrt(g[i - 1]) + 1e-12);
        }
    }
    // interpolation between nodes stays between neighbours; constant beyond the top
    CHECK(k.kappa0(g[10] * 0.5 + g[11] * 0.5) >= k.kappa0_nodes()[10]);
    CHECK(k.kappa1(100.0) == k.kappa1_nodes().back());
    CHECK_THROWS_AS(k.kappa0(0.01), Error);
    CHECK_THROWS_AS(regularize_kappa([](double u) { return u - 1.0; }), Error);
}

TEST_CASE("alpha examples") {
    const auto one = alpha_from_kappa(regularize_kappa([](double) { return 1.0; }), 1.0);
    CHECK(one(4.0) == doctest::Approx((1.0 + std::log(4.0 + std::exp(-1.0)) + 1.0) / 2.0).epsilon(1e-14));
    CHECK(one(4.0) == doctest::Approx(1.7371388187986454).epsilon(1e-14));

    const auto p = alpha_from_kappa(regularize_kappa(KappaDesc::parse("power:0.25")), 1.0);
    CHECK(p(25.0) < p(4.0));

    const auto small = alpha_from_kappa(regularize_kappa([](double) { return 0.01; }), 0.0);
    CHECK(small(100.0) == doctest::Approx(0.4618842230185679).epsilon(1e-12));

    CHECK_THROWS_AS(one(std::log(std::log(15.0))), Error);
    CHECK_THROWS_AS(alpha_from_kappa(regularize_kappa([](double) { return 1.0; }), -1.0), Error);
}

TEST_CASE("alpha invariants on the grid") {
    for (const char* spec : {"const:1", "power:0.25", "loglog-fraction:0.5"}) {
        const auto k = regularize_kappa(KappaDesc::parse(spec));
        const auto a = alpha_from_kappa(k, 1.0);
        double prev = INFINITY;
        for (double u : k.grid()) {
            if (u < kLogLogSixteen) continue;
            const double v = a(u);
            REQUIRE(v > 0.0);
            REQUIRE(v <= prev);
            REQUIRE(v * std::sqrt(u) >= k.kappa1(u) - 1e-12);
            prev = v;
        }
    }
}

TEST_CASE("blocks") {
    const auto spec = reference_spec();
    REQUIRE(spec.J() == 3);
    CHECK(spec.blocks[0].log_upper == doctest::Approx(8.9744118548129639).epsilon(1e-15));
    CHECK(std::exp(spec.blocks[0].log_upper) == doctest::Approx(7898.3713171366756).epsilon(1e-12));
    CHECK(spec.blocks[1].log_x == doctest::Approx(9.9744118548129639).epsilon(1e-15));
    for (std::size_t j = 0; j + 1 < spec.J(); ++j) {
        CHECK(spec.blocks[j].log_upper < spec.blocks[j + 1].log_x);
        CHECK(spec.blocks[j + 1].log_x == spec.blocks[j].log_upper + 1.0);
    }
    const auto alpha = alpha_from_kappa(regularize_kappa(KappaDesc::parse("power:0.25")), 1.0);
    for (const auto& b : spec.blocks) CHECK(b.a == std::sqrt(alpha(std::log(b.log_upper))));
    CHECK(spec.l2_sum() <= spec.l2_budget);

    CHECK(build_extremal_spec(KappaDesc::parse("power:0.25"), 20.0, 1).J() == 1);
    CHECK_THROWS_AS(build_extremal_spec(KappaDesc::parse("power:0.25"), 15.0, 1), Error);

    try {
        build_extremal_spec(KappaDesc::parse("power:0.25"), 20.0, 40, 1.0, 1e9);
        FAIL("expected capacity error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Capacity);
        CHECK(std::string(e.what()).find("maximal feasible J = 9") != std::string::npos);
    }
    try {
        build_extremal_spec(KappaDesc::parse("power:0.25"), 20.0, 3, 1.0, 1.0);
        FAIL("expected budget failure");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Verification);
    }
}

TEST_CASE("spec JSON") {
    const auto spec = reference_spec();
    const auto back = ExtremalSpec::from_json(spec.to_json());
    CHECK(back.to_json() == spec.to_json());
    CHECK(back.hash() == spec.hash());
    CHECK(spec.hash().size() == 16);
    CHECK(back.blocks[2].a == spec.blocks[2].a);

    const std::string path = "extremal_spec_roundtrip.json";
    save_extremal_spec(spec, path);
    CHECK(load_extremal_spec(path).hash() == spec.hash());
    std::remove(path.c_str());

    CHECK_THROWS_AS(ExtremalSpec::from_json("{"), Error);
    CHECK_THROWS_AS(ExtremalSpec::from_json(R"({"x1": 20, "J": 2, "blocks": []})"), Error);
    CHECK_THROWS_AS(ExtremalSpec::from_json(R"({"x1": 20, "J": 1, "blocks": [{"log_x": 2.995732273553991, "log_upper": 5, "a": 1}]})"), Error);
    CHECK_THROWS_AS(load_extremal_spec("does/not/exist.json"), Error);
}

TEST_CASE("theta examples") {
    const auto spec = reference_spec();
    const double a1 = spec.blocks[0].a;
    CHECK(-std::sin(std::log(41.0)) == doctest::Approx(0.541).epsilon(1e-3));
    CHECK(theta_at(spec, 41) == doctest::Approx(a1 / std::sqrt(std::log(std::log(41.0)))).epsilon(1e-15));
    CHECK(-std::sin(std::log(37.0)) == doctest::Approx(0.453).epsilon(1e-3));
    CHECK(theta_at(spec, 37) == 0.0);
    CHECK(theta_at(spec, 7) == 0.0);   // below x_1
    CHECK(theta_at(spec, 8111) == 0.0);  // between upper_1 and x_2
    CHECK(block_of(spec, 19) == -1);
    CHECK(block_of(spec, 23) == 0);
    CHECK(block_of(spec, 7907) == -1);
    CHECK(block_of(spec, 21481) == 1);
}

TEST_CASE("window selection against direct evaluation") {
    const auto spec = reference_spec();
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::size_t> pick(0, primes().size() - 1);
    for (int i = 0; i < 1000; ++i) {
        const std::uint64_t p = primes()[pick(rng)];
        const double lp = std::log(double(p));
        bool member = false;
        for (const auto& b : spec.blocks) member = member || (b.log_x <= lp && lp < b.log_upper);
        const bool window = -std::sin(lp) >= 0.5;
        REQUIRE((theta_at(spec, p) != 0.0) == (member && window));
    }
}

TEST_CASE("the extremal function") {
    const auto spec = reference_spec();
    const auto f = extremal_function(spec);
    CHECK(f.label() == "extremal:" + spec.hash());
    CHECK(f.flags().completely_multiplicative);
    CHECK(f.at_prime(37) == Complex(-1.0, -0.0));
    const double th = theta_at(spec, 41);
    CHECK(std::abs(f.at_prime(41) + std::polar(1.0, th)) <= 1e-15);
    CHECK(std::abs(f.at(41, 3) - std::pow(f.at_prime(41), 3)) <= 1e-15);
    const auto report = class_check(f, 100'000);
    CHECK(report.in_M);
    CHECK(report.completely_multiplicative);
}

TEST_CASE("psum examples") {
    ExtremalSpec zero = reference_spec();
    for (auto& b : zero.blocks) b.a = 0.0;
    CHECK(verify_psum(zero, 100'000, primes()).observed == 0.0);

    const auto one_block = build_extremal_spec(KappaDesc::parse("power:0.25"), 20.0, 1);
    const auto r = verify_psum(one_block, 7898, primes());
    const double a = one_block.blocks[0].a;
    const double mertens_oracle = double(oracle::reciprocal_prime_sum(7898));
    double direct = 0.0;
    for (std::uint64_t p : oracle::primes_upto(7898)) {
        if (p >= 41 && p <= 317) direct += a * a / std::log(std::log(double(p))) / double(p);
    }
    CHECK(r.observed == doctest::Approx(direct).epsilon(1e-13));
    CHECK(r.observed <= a * a * mertens_oracle / std::log(std::log(20.0)));
    CHECK(r.majorant == doctest::Approx(a * a * mertens_oracle / std::log(std::log(20.0))).epsilon(1e-13));

    const auto two = verify_psum(build_extremal_spec(KappaDesc::parse("power:0.25"), 20.0, 2), 1'000'000, primes());
    for (std::size_t i = 1; i < two.partial_sums.size(); ++i) {
        CHECK(two.partial_sums[i].partial_sum >= two.partial_sums[i - 1].partial_sum);
    }
    CHECK_THROWS_AS(verify_psum(one_block, 2'000'000, primes()), Error);
}

TEST_CASE("psum majorant chain over generated specs") {
    for (double x1 : {16.0, 20.0, 50.0}) {
        for (unsigned J = 1; J <= 3; ++J) {
            for (const char* kappa : {"power:0.25", "const:1", "loglog-fraction:0.5"}) {
                const auto spec = build_extremal_spec(KappaDesc::parse(kappa), x1, J);
                const auto r = verify_psum(spec, 1'000'000, primes());
                CHECK(r.passes());
            }
        }
    }
}

TEST_CASE("reciprocal prime interval bound") {
    for (auto [a, b] : {std::pair{20.0, 7898.0}, {100.0, 1e6}, {2.5, 3.5}, {1000.0, 1001.0}, {21477.0, 1e6}}) {
        double s = 0.0;
        for (std::size_t i = 0; i < primes().size(); ++i) {
            const double p = primes()[i];
            if (p > a && p <= b) s += 1.0 / p;
        }
        CHECK(s <= reciprocal_prime_interval_bound(std::log(a), std::log(b)));
    }
}

TEST_CASE("lower bound mechanics in block 1") {
    const auto spec = reference_spec();
    const TruncationPlan plan{100'000, 100'000, 10'000};
    const auto r = verify_logF_lower(spec, 0, plan, primes());
    CHECK(r.sigma == doctest::Approx(1.0 + 1.0 / (std::log(20.0) * std::log(20.0))));
    CHECK(r.first_selected == 41);
    CHECK(r.last_selected == 317);
    std::size_t count = 0;
    for (std::uint64_t p : oracle::primes_upto(7898)) {
        if (p >= 20 && -std::sin(std::log(double(p))) >= 0.5) {
            ++count;
            CHECK(p >= 41);
            CHECK(p <= 317);
        }
    }
    CHECK(r.selected == count);
    CHECK(r.selection_guarantee());
    CHECK(r.window_term >= r.half_theta_sum);
    CHECK(r.half_theta_sum >= r.coarse_lower);
    CHECK(std::isfinite(r.re_log_F_error));

    ExtremalSpec zero = spec;
    zero.blocks[0].a = 0.0;
    CHECK(verify_logF_lower(zero, 0, plan, primes()).window_term == 0.0);

    try {
        verify_logF_lower(spec, 1, plan, primes());
        FAIL("expected coverage error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Coverage);
    }
    CHECK_THROWS_AS(verify_logF_lower(spec, 3, plan, primes()), Error);
}

TEST_CASE("taylor remainder and the zero-direction sum") {
    const auto spec = reference_spec();
    const auto t = verify_taylor(spec, 100'000, primes());
    CHECK(t.checked > 0);
    CHECK(t.passes());

    const auto f = extremal_function(spec);
    const auto dir = HalaszDirection::zero();
    double half_psum = 0.0;
    for (std::size_t i = 0; i < primes().count_upto(100'000); ++i) {
        const std::uint64_t p = primes()[i];
        const double th = theta_at(spec, p);
        const double term = pole_term_numerator(f.at_prime(p), dir, p) / double(p);
        REQUIRE(term <= th * th / (2.0 * double(p)) + 1e-18);
        half_psum += th * th / (2.0 * double(p));
    }
    CHECK(pole_sum(f, dir, 100'000, primes()).total() <= half_psum + 1e-12);
}

TEST_CASE("pole tail hint dominates the observable tail") {
    const auto spec = reference_spec();
    const auto f = extremal_function(spec);
    const auto dir = HalaszDirection::zero();
    const double full = pole_sum(f, dir, 1'000'000, primes()).total();
    for (std::uint64_t P : {10ull, 1000ull, 30'000ull, 500'000ull}) {
        const double head = pole_sum(f, dir, P, primes()).total();
        CHECK(full - head <= f.pole_tail_bound(dir, P));
    }
    CHECK(std::isinf(f.pole_tail_bound(HalaszDirection::pole(), 100)));
}

}
