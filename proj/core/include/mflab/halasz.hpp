// halasz.hpp
// Finite-cutoff diagnostics around the Halasz pole/zero dichotomy:
// the criterion sums sum_p (1 + eps0 Re(f(p) p^{-i t0}))/p, the angle
// decomposition eps0 f(p) p^{-i t0} = -|f(p)| e^{i theta_p}, the prime-sum
// defect eps0 sum_p f(p) p^{-s} + log zeta(s - i t0), and the ratios
//   |F(sigma + i t0)|^{eps0} / (sigma - 1)
//   |S_f(x)| log x / (x exp(c sqrt(log log x))).
//
// Limits are asymptotic; nothing here proves one. Each routine evaluates the
// relevant quantity on a finite grid with the error bounds of dirichlet.hpp.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mflab/dirichlet.hpp"
#include "mflab/direction.hpp"
#include "mflab/multfun.hpp"
#include "mflab/primes.hpp"

namespace mflab {

inline constexpr double kNonnegativeTolerance = 1e-12;

// 1 + eps0 Re(f(p) p^{-i t0}) for a single prime.
double pole_term_numerator(Complex fp, const HalaszDirection& direction, std::uint64_t p);

struct PoleSumPoint {
    std::uint64_t P;
    double partial_sum;
};

struct PoleSumSeries {
    HalaszDirection direction;
    std::uint64_t cutoff = 0;
    std::vector<PoleSumPoint> points;
    double min_term = 0.0;

    double total() const noexcept { return points.empty() ? 0.0 : points.back().partial_sum; }
};

// Partial sums of sum_{p <= P} (1 + eps0 Re(f(p) p^{-i t0}))/p at grid points.
// Throws ErrorKind::Verification if a term is below -1e-12.
PoleSumSeries pole_sum(const MultiplicativeFunction& f, const HalaszDirection& direction,
                       std::uint64_t P, const PrimeTable& table,
                       const CheckpointGrid& grid = CheckpointGrid::default_grid());

struct ThetaValue {
    std::uint64_t p = 0;
    double theta = 0.0;            // in (-pi, pi]
    double modulus = 0.0;          // |f(p)|
    double gap = 0.0;              // 1 + eps0 Re(f(p) p^{-i t0})
    double cosine_bound = 0.0;     // |f(p)| (1 - cos theta)
    double quadratic_bound = 0.0;  // |f(p)| theta^2 / (2 pi)
    bool degenerate = false;       // f(p) = 0; theta set to 0

    bool chain_holds(double tolerance = kNonnegativeTolerance) const noexcept {
        return gap + tolerance >= cosine_bound && cosine_bound + tolerance >= quadratic_bound;
    }
};

ThetaValue theta_decomposition(Complex fp, const HalaszDirection& direction, std::uint64_t p);
ThetaValue theta_decomposition(const MultiplicativeFunction& f, const HalaszDirection& direction,
                               std::uint64_t p);

struct LemmaDefect {
    ComplexPoint point;
    // D evaluated prime by prime: sum_{p <= P} [eps0 f(p) p^{-s} + log zeta_p(s - i t0)]
    // plus a tail bound from f's pole tail.
    EvalResult D;
    // eps0 * (sum_{p <= P} f(p) p^{-s}) + log zeta(s - i t0): same quantity, but
    // its bound carries the full prime tail and is large near sigma = 1.
    EvalResult direct;
    double normalizer = 1.0;  // sqrt(log 1/(sigma-1))
    double ratio = 0.0;       // |D| / normalizer
    double ratio_error = 0.0;
};

LemmaDefect lemma_defect(const MultiplicativeFunction& f, const HalaszDirection& direction,
                         const ComplexPoint& s, const TruncationPlan& plan, const PrimeTable& table);

struct Theorem1Row {
    double sigma;
    double t;
    EvalResult F;
    std::optional<double> ratio;  // empty: |F| not resolved from its error bound
    double ratio_error;
};

// |F(sigma + i t0)|^{eps0} / (sigma - 1) for each sigma in (1, 3/2], F from the
// Euler product anchored at the probed direction.
std::vector<Theorem1Row> theorem1_ratio(const MultiplicativeFunction& f,
                                        const HalaszDirection& direction,
                                        const std::vector<double>& sigma_grid,
                                        const TruncationPlan& plan, const PrimeTable& table);

struct Theorem2Row {
    std::uint64_t x;
    double ratio;
};

// |S_f(x)| log x / (x exp(c sqrt(log log x))) at every checkpoint x >= 16.
std::vector<Theorem2Row> theorem2_ratio(const SummatoryTrace& trace, double c);

enum class CriterionVerdict { SumSide, TwoAdicSide, Fails, Indeterminate };
std::string_view to_string(CriterionVerdict verdict) noexcept;

struct CriterionReport {
    std::string label;
    double t = 0.0;
    std::uint64_t P = 0;
    unsigned K = 0;
    PoleSumSeries sum_side{HalaszDirection::pole(), 0, {}, 0.0};
    // Growth of the partial sum over the last decade, against the growth of
    // log log over the same decade.
    double last_decade_growth = 0.0;
    double last_decade_loglog = 0.0;
    bool sum_diverges = false;
    bool sum_converges = false;
    std::optional<unsigned> two_adic_failure;
    CriterionVerdict verdict = CriterionVerdict::Indeterminate;

    std::string text() const;
};

// Growth >= kDivergenceFactor * delta(log log) over the last decade reads as
// divergence; growth <= kConvergenceFactor * delta reads as convergence.
inline constexpr double kDivergenceFactor = 0.5;
inline constexpr double kConvergenceFactor = 0.05;

CriterionReport criterion_report(const MultiplicativeFunction& f, double t, std::uint64_t P,
                                 unsigned K, const PrimeTable& table);

}  // namespace mflab
