// Independent reference implementations used by the tests. None of these
// touch the library's sieves or evaluators; they are deliberately naive.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace oracle {

// Plain sieve of Eratosthenes over a vector<bool>.
inline std::vector<bool> bit_sieve(std::uint64_t n) {
    std::vector<bool> is(n + 1, true);
    is[0] = false;
    if (n >= 1) is[1] = false;
    for (std::uint64_t i = 2; i * i <= n; ++i) {
        if (!is[i]) continue;
        for (std::uint64_t j = i * i; j <= n; j += i) is[j] = false;
    }
    return is;
}

inline std::vector<std::uint64_t> primes_upto(std::uint64_t n) {
    const auto is = bit_sieve(n);
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 2; i <= n; ++i)
        if (is[i]) out.push_back(i);
    return out;
}

inline bool is_prime_trial(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// (p, k) pairs by trial division, ascending p.
inline std::vector<std::pair<std::uint64_t, unsigned>> trial_factor(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, unsigned>> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        unsigned k = 0;
        while (n % d == 0) {
            n /= d;
            ++k;
        }
        if (k) out.emplace_back(d, k);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

// mu(n), lambda(n), odd_one(n) straight from the factorization.
inline int moebius(std::uint64_t n) {
    int v = 1;
    for (auto [p, k] : trial_factor(n)) {
        if (k > 1) return 0;
        v = -v;
    }
    return v;
}

inline int liouville(std::uint64_t n) {
    unsigned omega = 0;
    for (auto [p, k] : trial_factor(n)) omega += k;
    return omega % 2 ? -1 : 1;
}

inline int odd_one(std::uint64_t n) { return n % 2 ? 1 : 0; }

// sum_{p <= x} 1/p in long double, ascending.
inline long double reciprocal_prime_sum(std::uint64_t x) {
    long double s = 0;
    for (auto p : primes_upto(x)) s += 1.0L / p;
    return s;
}

// zeta(s) for real s > 1: sum_{n <= N} n^{-s} plus the tail bracketed by
// int_{N+1}^inf and int_N^inf. Returns {lo, hi}.
inline std::pair<long double, long double> zeta_real_bracket(long double s, std::uint64_t N) {
    long double sum = 0;
    for (std::uint64_t n = N; n >= 1; --n) sum += std::pow((long double)n, -s);
    const long double lo = std::pow((long double)(N + 1), 1 - s) / (s - 1);
    const long double hi = std::pow((long double)N, 1 - s) / (s - 1);
    return {sum + lo, sum + hi};
}

}  // namespace oracle
