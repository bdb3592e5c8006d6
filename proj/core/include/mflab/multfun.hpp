// multfun.hpp
// Multiplicative functions f with |f(n)| <= 1, their evaluation through an
// SPF table or a segmented sieve, and streaming summatory functions
// S_f(x) = sum_{n <= x} f(n).

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mflab/direction.hpp"
#include "mflab/primes.hpp"

namespace mflab {

using Complex = std::complex<double>;

// Value of f at p^k, k >= 1.
using PrimePowerRule = std::function<Complex(std::uint64_t p, unsigned k)>;

// Upper bound on sum_{p > P} (1 + eps0 Re(f(p) p^{-i t0})) / p, or +inf when
// nothing is known. Lets near-one-line evaluations bound their prime tails.
using PoleTailBound = std::function<double(const HalaszDirection&, std::uint64_t P)>;

inline constexpr double kUnknownTail = std::numeric_limits<double>::infinity();

struct FunctionClass {
    bool completely_multiplicative = false;
    bool claims_M = true;   // |f(n)| <= 1
    bool claims_M2 = false; // additionally f(2^k) = 0 for k >= 1
};

class MultiplicativeFunction {
public:
    // Prime powers p^k with p below this bound are tabulated at construction.
    static constexpr std::uint64_t kMemoPrimeLimit = 1 << 16;

    MultiplicativeFunction(std::string label, PrimePowerRule rule, FunctionClass flags,
                           PoleTailBound pole_tail = {});

    // f(p^k) for prime p. k = 0 gives 1. For completely multiplicative f the
    // rule is consulted at k = 1 only and f(p)^k is formed by repeated products.
    Complex at(std::uint64_t p, unsigned k) const;
    Complex at_prime(std::uint64_t p) const { return at(p, 1); }

    const std::string& label() const noexcept { return impl_->label; }
    const FunctionClass& flags() const noexcept { return impl_->flags; }
    double pole_tail_bound(const HalaszDirection& direction, std::uint64_t P) const;

    const PrimePowerRule& rule() const noexcept { return impl_->rule; }
    const PoleTailBound& pole_tail() const noexcept { return impl_->pole_tail; }

private:
    struct Impl {
        std::string label;
        PrimePowerRule rule;
        FunctionClass flags;
        PoleTailBound pole_tail;
        std::vector<std::uint32_t> memo_offset;  // indexed by p; ~0u for non-primes
        std::vector<Complex> memo;               // memo[offset + k - 1] = f(p^k)
        std::vector<std::uint8_t> memo_kmax;     // indexed by p
    };

    Complex compute(std::uint64_t p, unsigned k) const;

    std::shared_ptr<const Impl> impl_;
};

// n^{-it}-twist: f(p^k) = base(p^k) p^{-ikt}. Class flags are inherited.
MultiplicativeFunction twist(const MultiplicativeFunction& base, double t);

// f(n) by factoring n through the table; value_at(f, 1, ...) = 1.
Complex value_at(const MultiplicativeFunction& f, std::uint64_t n, const SpfTable& spf);

// Fills out[i] = f(lo + i) for lo >= 1 by segmented trial extraction with
// base_primes (which must contain every prime <= sqrt(lo + out.size() - 1)).
// Products are formed in ascending prime order, matching value_at bit-for-bit.
void evaluate_range(const MultiplicativeFunction& f, std::uint64_t lo,
                    std::span<const std::uint32_t> base_primes, std::span<Complex> out);

class CheckpointGrid {
public:
    enum class Kind { Geometric, Explicit, Dense };

    // floor(r^i) for i >= 0, together with every power of ten and the limit.
    static CheckpointGrid geometric(double ratio);
    static CheckpointGrid explicit_points(std::vector<std::uint64_t> points);
    // Every integer 1..limit.
    static CheckpointGrid dense();
    // Geometric with ratio 2^{1/4}.
    static CheckpointGrid default_grid();

    Kind kind() const noexcept { return kind_; }
    double ratio() const noexcept { return ratio_; }

    // Ascending, deduplicated points <= limit.
    std::vector<std::uint64_t> points(std::uint64_t limit) const;
    std::string describe() const;

private:
    Kind kind_ = Kind::Geometric;
    double ratio_ = 0.0;
    std::vector<std::uint64_t> explicit_;
};

struct Checkpoint {
    std::uint64_t x;
    Complex S;
};

struct SummatoryTrace {
    std::string function_label;
    std::uint64_t limit = 0;
    bool dense = false;  // checkpoint at every integer 1..limit
    std::vector<Checkpoint> checkpoints;

    // S_f(x) at a recorded checkpoint.
    Complex at(std::uint64_t x) const;
};

struct SummatoryOptions {
    std::uint64_t segment_size = 1 << 16;
    std::uint64_t ceiling = kDefaultSieveCeiling;
    unsigned threads = 1;
};

// Streams n = 1..limit in segments and records S_f at the grid points.
// Accumulation is compensated and runs in n order, so the result does not
// depend on segment size or thread count.
SummatoryTrace summatory_trace(const MultiplicativeFunction& f, std::uint64_t limit,
                               const CheckpointGrid& grid, const SummatoryOptions& options = {});

struct ClassViolation {
    std::string property;  // "M", "M2", "completely-multiplicative"
    PrimePower where;
    Complex value;
};

struct ClassReport {
    std::string label;
    std::uint64_t sample_limit = 0;
    FunctionClass claimed;
    bool in_M = true;
    bool in_M2 = true;
    bool completely_multiplicative = true;
    std::vector<ClassViolation> violations;

    // Second alternative of the Halasz criterion: f(2^k) = -2^{ikt}.
    double t = 0.0;
    unsigned two_adic_checked = 0;  // k = 1..two_adic_checked were tested
    std::optional<unsigned> two_adic_first_failure;
    bool two_adic_alternative() const noexcept {
        return two_adic_checked > 0 && !two_adic_first_failure.has_value();
    }

    // Every claimed flag holds on the sample.
    bool passes() const noexcept;
    std::string summary() const;
};

inline constexpr double kClassTolerance = 1e-12;
inline constexpr double kTwoAdicTolerance = 1e-9;

// Checks all prime powers <= sample_limit against the class flags, and tests
// f(2^k) = -2^{ikt} for every k with 2^k <= sample_limit.
ClassReport class_check(const MultiplicativeFunction& f, std::uint64_t sample_limit,
                        double t = 0.0);

// True when f(2^k) = -2^{ikt} for k = 1..K (tolerance kTwoAdicTolerance);
// returns the first failing k otherwise.
std::optional<unsigned> two_adic_failure(const MultiplicativeFunction& f, double t, unsigned K);

}  // namespace mflab
