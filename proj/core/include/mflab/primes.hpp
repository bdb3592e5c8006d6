// primes.hpp
// Prime tables, smallest-prime-factor tables and reciprocal prime sums.
//
// Tables are immutable once built; every query is const and safe to share
// across threads.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mflab {

// Mertens' constant M in sum_{p<=x} 1/p = log log x + M + o(1).
inline constexpr double kMertensConstant = 0.26149721284764278;

inline constexpr std::uint64_t kDefaultSieveCeiling = std::uint64_t{1} << 32;
// 2^27 entries of uint32_t is 512 MiB.
inline constexpr std::uint64_t kDefaultSpfCeiling = std::uint64_t{1} << 27;

struct SieveOptions {
    std::uint64_t ceiling = kDefaultSieveCeiling;
    // Odd numbers per segment; 0 picks max(sqrt(limit), 2^15).
    std::uint64_t segment_size = 0;
    unsigned threads = 1;
};

std::uint64_t isqrt(std::uint64_t n) noexcept;

class PrimeTable {
public:
    PrimeTable() = default;
    PrimeTable(std::uint64_t limit, std::vector<std::uint32_t> primes)
        : limit_(limit), primes_(std::move(primes)) {}

    std::uint64_t limit() const noexcept { return limit_; }
    std::span<const std::uint32_t> primes() const noexcept { return primes_; }
    std::size_t size() const noexcept { return primes_.size(); }
    std::uint32_t operator[](std::size_t i) const noexcept { return primes_[i]; }

    // Number of listed primes <= x (pi(x) for x <= limit).
    std::size_t count_upto(double x) const noexcept;
    bool is_prime(std::uint64_t n) const;

    auto begin() const noexcept { return primes_.begin(); }
    auto end() const noexcept { return primes_.end(); }

private:
    std::uint64_t limit_ = 0;
    std::vector<std::uint32_t> primes_;
};

// All primes <= limit, by a segmented odd-only sieve of Eratosthenes.
// Memory is O(sqrt(limit) + segment) plus the output.
PrimeTable sieve_primes(std::uint64_t limit, const SieveOptions& options = {});

struct PrimePower {
    std::uint64_t p;
    unsigned k;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

class SpfTable {
public:
    SpfTable() = default;
    SpfTable(std::uint64_t limit, std::vector<std::uint32_t> spf)
        : limit_(limit), spf_(std::move(spf)) {}

    std::uint64_t limit() const noexcept { return limit_; }
    // Smallest prime factor of n, 2 <= n <= limit. Unchecked.
    std::uint32_t operator[](std::uint64_t n) const noexcept { return spf_[n]; }
    std::uint32_t spf(std::uint64_t n) const;

    // Prime-power decomposition in ascending prime order.
    std::vector<PrimePower> factorize(std::uint64_t n) const;

private:
    std::uint64_t limit_ = 0;
    std::vector<std::uint32_t> spf_;
};

SpfTable spf_table(std::uint64_t limit, std::uint64_t ceiling = kDefaultSpfCeiling);

// sum_{p <= x} 1/p, accumulated in ascending order.
double sum_reciprocal_primes(double x, const PrimeTable& table);

}  // namespace mflab
