// dirichlet.hpp
// Error-bounded evaluation right of the one-line: zeta(s), the Dirichlet
// series F(s) = sum f(n) n^{-s}, log F(s) through local Euler factors, and
// F(s) through partial summation of S_f.
//
// Every EvalResult carries an error bound that is rigorous given |f(n)| <= 1
// and the method's stated assumptions. Tail bounds come from integral
// comparison and are crude near sigma = 1; they are reported, not hidden.

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string_view>

#include "mflab/direction.hpp"
#include "mflab/multfun.hpp"
#include "mflab/primes.hpp"

namespace mflab {

class ComplexPoint {
public:
    ComplexPoint(double sigma, double t);

    double sigma() const noexcept { return sigma_; }
    double t() const noexcept { return t_; }
    Complex s() const noexcept { return {sigma_, t_}; }
    // sigma + i (t + dt)
    ComplexPoint shifted(double dt) const { return {sigma_, t_ + dt}; }

private:
    double sigma_;
    double t_;
};

enum class Method { TruncatedSeries, EulerProduct, PartialSummation, EulerMaclaurin };
std::string_view to_string(Method method) noexcept;

struct EvalResult {
    Complex value;
    double error_bound = 0.0;
    Method method = Method::TruncatedSeries;

    // |a - b| <= bound_a + bound_b
    bool overlaps(const EvalResult& other) const noexcept;
};

struct TruncationPlan {
    std::uint64_t series_cutoff = 1'000'000;     // N
    std::uint64_t prime_cutoff = 1'000'000;      // P
    std::uint64_t exact_factor_cutoff = 10'000;  // primes up to here use exact local logs

    void validate() const;
};

// Euler-Maclaurin with the B2 and B4 corrections; the cutoff is chosen so the
// remainder bound is at most 1e-10.
EvalResult zeta(const ComplexPoint& s);

// sum_{n <= N} f(n) n^{-s}, tail bounded by N^{1-sigma}/(sigma-1).
EvalResult F_truncated(const MultiplicativeFunction& f, const ComplexPoint& s,
                       const TruncationPlan& plan, const SpfTable& spf);

// s * int_1^X S_f(y) y^{-s-1} dy, integrated exactly between integer steps of
// S_f. Needs a dense trace covering floor(X). Tail bounded by |s| X^{1-sigma}/(sigma-1).
EvalResult F_partial_summation(const SummatoryTrace& trace, const ComplexPoint& s, double X);

// Principal log of sum_{k <= kmax} f(p^k) p^{-ks}. kmax = 0 picks the
// smallest kmax whose geometric tail is <= 1e-14.
Complex euler_factor_log(const MultiplicativeFunction& f, std::uint64_t p, const ComplexPoint& s,
                         unsigned kmax = 0);

struct PrimeSumResult {
    Complex value;             // sum_{p <= P} f(p) p^{-s}
    Complex defect;            // sum_{p <= exact cutoff} [log F_p(s) - f(p) p^{-s}]
    double prime_tail_bound;   // |sum_{p > P} f(p) p^{-s}|
    double defect_tail_bound;  // |sum_{p > exact cutoff} [log F_p - f(p) p^{-s}]|
    double defect_majorant;    // bound on |sum over all p of the defect terms|
    double error_bound;        // for value + defect as an estimate of log F(s)

    Complex log_F() const noexcept { return value + defect; }
    EvalResult as_log_F() const noexcept { return {log_F(), error_bound, Method::EulerProduct}; }
    // exp(value + defect), with the log-scale bound pushed through exp.
    EvalResult as_F() const;
};

PrimeSumResult log_F_prime_sum(const MultiplicativeFunction& f, const ComplexPoint& s,
                               const TruncationPlan& plan, const PrimeTable& table);

// Product of exact local factors over p <= P. With an anchor (eps0, t0) the
// product is taken relative to zeta(s - i t0)^{-eps0}:
//   F(s) = zeta(s - i t0)^{-eps0} * prod_p F_p(s) zeta_p(s - i t0)^{eps0},
// whose tail is controlled by f's pole-tail bound in that direction. This is
// what makes sigma close to 1 tractable for functions near +-p^{i t0}.
EvalResult F_euler_product(const MultiplicativeFunction& f, const ComplexPoint& s,
                           const TruncationPlan& plan, const PrimeTable& table,
                           std::optional<HalaszDirection> anchor = std::nullopt);

// Bounds shared by the prime-sum diagnostics.
namespace bounds {

// sum_{n > P} n^{-a} <= P^{1-a}/(a-1), a > 1.
double power_tail(double P, double a);

// Bound on |log F_p(s) - f(p) p^{-s}| given q = p^{-sigma} <= 1/3.
double local_log_second_order(double q, bool completely_multiplicative);

// Bound on sum_{p > P} |log F_p(s) - f(p) p^{-s}|, P >= 2.
double defect_tail(double P, double sigma, bool completely_multiplicative);

// Bound on sum_{p > P} |f(p) p^{-s} + eps0 p^{i t0 - s}| via Cauchy-Schwarz
// against f's pole tail; falls back to 2 sum_{n>P} n^{-sigma} if unknown.
double anchored_first_order_tail(const MultiplicativeFunction& f, const HalaszDirection& d,
                                 std::uint64_t P, double sigma);

}  // namespace bounds

}  // namespace mflab
