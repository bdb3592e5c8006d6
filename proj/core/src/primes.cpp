// primes.cpp
// Segmented sieve over odd numbers. Base primes up to sqrt(limit) come from a
// plain sieve; each segment marks odd composites only. Segments may be sieved
// on several threads, but their outputs are concatenated in segment order.

#include "mflab/primes.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "mflab/error.hpp"

namespace mflab {

std::uint64_t isqrt(std::uint64_t n) noexcept {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

namespace {

std::vector<std::uint32_t> simple_sieve(std::uint64_t limit) {
    std::vector<std::uint32_t> out;
    if (limit < 2) return out;
    std::vector<char> composite(limit + 1, 0);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
    }
    return out;
}

// Odd primes in [lo, hi], lo odd. base holds the odd primes <= sqrt(hi).
void sieve_segment(std::uint64_t lo, std::uint64_t hi,
                   std::span<const std::uint32_t> base,
                   std::vector<std::uint32_t>& out) {
    const std::uint64_t count = (hi - lo) / 2 + 1;
    std::vector<char> composite(count, 0);
    for (std::uint32_t p32 : base) {
        const std::uint64_t p = p32;
        if (p * p > hi) break;
        std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
        if (start % 2 == 0) start += p;
        for (std::uint64_t m = start; m <= hi; m += 2 * p) composite[(m - lo) / 2] = 1;
    }
    for (std::uint64_t i = 0; i < count; ++i) {
        if (!composite[i]) out.push_back(static_cast<std::uint32_t>(lo + 2 * i));
    }
}

}  // namespace

std::size_t PrimeTable::count_upto(double x) const noexcept {
    if (x < 2.0) return 0;
    if (x >= static_cast<double>(limit_)) return primes_.size();
    const auto bound = static_cast<std::uint64_t>(std::floor(x));
    return static_cast<std::size_t>(
        std::upper_bound(primes_.begin(), primes_.end(), bound) - primes_.begin());
}

bool PrimeTable::is_prime(std::uint64_t n) const {
    if (n > limit_) {
        fail(ErrorKind::Coverage,
             "is_prime(" + std::to_string(n) + ") beyond table limit " + std::to_string(limit_));
    }
    return std::binary_search(primes_.begin(), primes_.end(), n);
}

PrimeTable sieve_primes(std::uint64_t limit, const SieveOptions& options) {
    if (limit < 2) {
        fail(ErrorKind::EmptyRange, "sieve limit " + std::to_string(limit) + " < 2");
    }
    if (limit > options.ceiling) {
        fail(ErrorKind::Capacity, "sieve limit " + std::to_string(limit) +
                                      " exceeds ceiling " + std::to_string(options.ceiling));
    }

    const std::uint64_t root = isqrt(limit);
    const std::vector<std::uint32_t> small = simple_sieve(root);
    const std::span<const std::uint32_t> odd_base =
        small.empty() ? std::span<const std::uint32_t>{} : std::span(small).subspan(1);

    std::vector<std::uint32_t> primes{2};
    if (limit < 3) return PrimeTable(limit, std::move(primes));

    const std::uint64_t odd_per_segment =
        options.segment_size ? options.segment_size : std::max<std::uint64_t>(root, 1 << 15);
    const std::uint64_t span = 2 * odd_per_segment;
    const std::uint64_t segments = (limit - 3) / span + 1;
    const unsigned threads = std::max(1u, options.threads);

    // Rough pi(limit) guess to avoid repeated growth.
    primes.reserve(static_cast<std::size_t>(1.1 * limit / std::max(1.0, std::log(limit))) + 16);

    std::vector<std::vector<std::uint32_t>> batch(threads);
    for (std::uint64_t first = 0; first < segments; first += threads) {
        const std::uint64_t last = std::min(segments, first + threads);
        auto work = [&](std::uint64_t seg) {
            const std::uint64_t lo = 3 + seg * span;
            const std::uint64_t hi = std::min(limit, lo + span - 2);
            auto& out = batch[seg - first];
            out.clear();
            sieve_segment(lo, hi, odd_base, out);
        };
        if (last - first == 1) {
            work(first);
        } else {
            std::vector<std::jthread> pool;
            for (std::uint64_t seg = first; seg < last; ++seg) pool.emplace_back(work, seg);
        }
        for (std::uint64_t seg = first; seg < last; ++seg) {
            const auto& out = batch[seg - first];
            primes.insert(primes.end(), out.begin(), out.end());
        }
    }
    primes.shrink_to_fit();
    return PrimeTable(limit, std::move(primes));
}

std::uint32_t SpfTable::spf(std::uint64_t n) const {
    if (n < 2 || n > limit_) {
        fail(ErrorKind::Coverage, "spf(" + std::to_string(n) + ") outside table [2, " +
                                      std::to_string(limit_) + "]");
    }
    return spf_[n];
}

std::vector<PrimePower> SpfTable::factorize(std::uint64_t n) const {
    std::vector<PrimePower> out;
    if (n == 1) return out;
    spf(n);  // range check
    while (n > 1) {
        const std::uint64_t p = spf_[n];
        unsigned k = 0;
        while (n % p == 0) {
            n /= p;
            ++k;
        }
        out.push_back({p, k});
    }
    return out;
}

SpfTable spf_table(std::uint64_t limit, std::uint64_t ceiling) {
    if (limit < 2) {
        fail(ErrorKind::EmptyRange, "spf limit " + std::to_string(limit) + " < 2");
    }
    if (limit > ceiling) {
        fail(ErrorKind::Capacity, "spf limit " + std::to_string(limit) +
                                      " exceeds ceiling " + std::to_string(ceiling));
    }
    // Linear sieve: every composite is struck exactly once, by its smallest prime.
    std::vector<std::uint32_t> spf(limit + 1, 0);
    std::vector<std::uint32_t> primes;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (spf[i] == 0) {
            spf[i] = static_cast<std::uint32_t>(i);
            primes.push_back(static_cast<std::uint32_t>(i));
        }
        for (std::uint32_t p : primes) {
            if (p > spf[i] || i * p > limit) break;
            spf[i * p] = p;
        }
    }
    return SpfTable(limit, std::move(spf));
}

double sum_reciprocal_primes(double x, const PrimeTable& table) {
    if (x > static_cast<double>(table.limit())) {
        fail(ErrorKind::Coverage, "reciprocal prime sum up to " + std::to_string(x) +
                                      " beyond table limit " + std::to_string(table.limit()));
    }
    const std::size_t n = table.count_upto(x);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += 1.0 / table[i];
    return sum;
}

}  // namespace mflab
