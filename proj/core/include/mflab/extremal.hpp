// extremal.hpp
// Construction of the completely multiplicative f with f(p) = -e^{i theta_p}
// that shows the exp(c sqrt(log log x)) factor in the zero-case bound for
// S_f cannot be replaced by exp(kappa(x)) for any kappa = o(sqrt(log log x)).
//
// Pipeline:
//   kappa --regularize--> kappa0 (running max) --> kappa1 (kappa1/sqrt(loglog) nonincreasing)
//         --> alpha(X) with exp(kappa(X)) (loglog X + 1/e) e^{C0} = exp(alpha(X) sqrt(loglog X))
//         --> blocks [x_j, x_j^{log x_j}), a_j = sqrt(alpha(x_j^{log x_j}))
//         --> theta_p = a_j / sqrt(log log p) on x_j <= p < x_j^{log x_j} with -sin(log p) >= 1/2.
//
// Every function of x is parametrised by u = log log x so that x up to
// e^{e^{40}} and beyond stays representable. Blocks store log x_j and
// log x_j^{log x_j} = (log x_j)^2.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "mflab/dirichlet.hpp"
#include "mflab/halasz.hpp"
#include "mflab/multfun.hpp"
#include "mflab/primes.hpp"

namespace mflab {

// log log 3, the left end of kappa's domain [3, inf).
inline const double kLogLogThree = std::log(std::log(3.0));
inline const double kLogLogSixteen = std::log(std::log(16.0));

// kappa vocabulary: const:<c>, power:<e> = (log log x)^e with 0 <= e < 1/2,
// loglog-fraction:<c> = c sqrt(log log x) / max(1, log log log x).
struct KappaDesc {
    enum class Kind { Constant, Power, LogLogFraction };
    Kind kind = Kind::Power;
    double param = 0.25;

    static KappaDesc parse(std::string_view text);
    std::string to_string() const;
    double operator()(double loglog_x) const;
};

struct KappaGrid {
    double loglog_min = kLogLogThree;
    double loglog_max = 40.0;  // X_max = e^{e^40}
    std::size_t nodes = 4097;  // uniform in log(log log x)

    std::vector<double> points() const;
};

class KappaFunction {
public:
    KappaFunction(std::function<double(double)> raw, std::vector<double> grid,
                  std::vector<double> kappa0, std::vector<double> kappa1);

    // All arguments are u = log log x, u >= grid().front().
    double raw(double u) const { return raw_(u); }
    double kappa0(double u) const;
    double kappa1(double u) const;

    const std::vector<double>& grid() const noexcept { return grid_; }
    const std::vector<double>& kappa0_nodes() const noexcept { return kappa0_; }
    const std::vector<double>& kappa1_nodes() const noexcept { return kappa1_; }
    double loglog_max() const noexcept { return grid_.back(); }

private:
    double interpolate(const std::vector<double>& values, double u) const;

    std::function<double(double)> raw_;
    std::vector<double> grid_;
    std::vector<double> kappa0_;
    std::vector<double> kappa1_;
};

// kappa0 = running max of raw on the grid; kappa1(u) = sqrt(u) max_{v >= u} kappa0(v)/sqrt(v)
// with the sup truncated at the top of the grid. Beyond it both are held constant.
KappaFunction regularize_kappa(std::function<double(double)> raw, const KappaGrid& grid = {});

class AlphaFunction {
public:
    static constexpr double kFloor = 1e-6;

    AlphaFunction(KappaFunction kappa, double C0, std::string kappa_spec);

    // alpha at X with u = log log X >= log log 16; nonincreasing in u.
    double operator()(double loglog_X) const;
    // (kappa1(X) + log(log log X + 1/e) + C0) / sqrt(log log X), before the
    // nonincreasing envelope.
    double formula(double loglog_X) const;

    double C0() const noexcept { return C0_; }
    const KappaFunction& kappa() const noexcept { return kappa_; }
    const std::string& kappa_spec() const noexcept { return kappa_spec_; }

private:
    KappaFunction kappa_;
    double C0_;
    std::string kappa_spec_;
    std::vector<double> envelope_;  // suffix max of formula() over kappa grid nodes
};

AlphaFunction alpha_from_kappa(const KappaFunction& kappa, double C0, std::string kappa_spec = "");

struct Block {
    double log_x;
    double log_upper;  // (log x_j)^2
    double a;
};

inline constexpr double kDefaultL2Budget = 16.0;

struct ExtremalSpec {
    double x1 = 20.0;
    double C0 = 1.0;
    double l2_budget = kDefaultL2Budget;
    std::string kappa_spec;
    double loglog_max = 40.0;
    std::size_t grid_nodes = 4097;
    std::vector<Block> blocks;

    std::size_t J() const noexcept { return blocks.size(); }
    double l2_sum() const noexcept;
    // Throws ErrorKind::Usage on a violated invariant.
    void validate() const;
    // Canonical JSON text; stable across runs.
    std::string to_json() const;
    static ExtremalSpec from_json(std::string_view text);
    // FNV-1a of to_json(), as 16 hex digits.
    std::string hash() const;
};

// log x_{j+1} = (log x_j)^2 + 1. Throws ErrorKind::Capacity (reporting the
// largest feasible J) once (log x_j)^2 leaves the double range.
ExtremalSpec choose_blocks(const AlphaFunction& alpha, unsigned J, double x1,
                           double l2_budget = kDefaultL2Budget);

// Everything from a kappa description: regularize, alpha, blocks.
ExtremalSpec build_extremal_spec(const KappaDesc& kappa, double x1, unsigned J, double C0 = 1.0,
                                 double l2_budget = kDefaultL2Budget, const KappaGrid& grid = {});

ExtremalSpec load_extremal_spec(const std::string& path);
void save_extremal_spec(const ExtremalSpec& spec, const std::string& path);

// -sin(log p) >= 1/2, i.e. -Re(i p^{-i}) >= 1/2.
bool in_sine_window(std::uint64_t p);

// Index of the block containing p, or -1.
int block_of(const ExtremalSpec& spec, std::uint64_t p);

double theta_at(const ExtremalSpec& spec, std::uint64_t p);

// Completely multiplicative, f(p) = -e^{i theta_p}, class M, label extremal:<hash>.
MultiplicativeFunction extremal_function(const ExtremalSpec& spec);

// Upper bound on sum_{a < p < b} 1/p for 1 < a < b (Rosser-Schoenfeld),
// with both ends given as logarithms.
double reciprocal_prime_interval_bound(double log_a, double log_b);

struct PsumReport {
    std::uint64_t cutoff = 0;
    double observed = 0.0;         // sum_{p <= P} theta_p^2 / p
    std::vector<double> block_terms;  // a_j^2 sum_{p <= min(upper_j, P)} 1/p / log log x_j
    double majorant = 0.0;         // sum of block_terms
    double majorant_full = 0.0;    // same with sum_{p <= upper_j} 1/p bounded analytically
    double l2_sum = 0.0;
    std::vector<PoleSumPoint> partial_sums;  // sum_{p <= P'} theta_p^2/p at grid points

    bool observed_within_majorant() const noexcept { return observed <= majorant * (1 + 1e-12); }
    bool majorant_within_full() const noexcept { return majorant <= majorant_full * (1 + 1e-12); }
    bool full_within_l2() const noexcept { return majorant_full <= 4.0 * l2_sum * (1 + 1e-12); }
    bool passes() const noexcept {
        return observed_within_majorant() && majorant_within_full() && full_within_l2();
    }
    std::string text() const;
};

PsumReport verify_psum(const ExtremalSpec& spec, std::uint64_t P, const PrimeTable& table);

struct LowerBoundReport {
    std::size_t block = 0;  // zero-based j
    double sigma = 0.0;     // 1 + 1/(log x_j)^2, with t = 1
    std::size_t selected = 0;
    std::uint64_t first_selected = 0;
    std::uint64_t last_selected = 0;
    double window_term = 0.0;     // W_j = sum theta_p (-sin log p) p^{-sigma}
    double half_theta_sum = 0.0;  // (1/2) sum theta_p p^{-sigma}
    double coarse_lower = 0.0;    // a_j / (2 sqrt(log log upper_j)) sum p^{-sigma}
    double re_log_F = 0.0;        // log |F(s)|
    double re_log_F_error = 0.0;
    double target = 0.0;          // a_j sqrt(log log x_j); reported only

    bool selection_guarantee() const noexcept {
        return window_term + 1e-15 >= half_theta_sum && half_theta_sum + 1e-15 >= coarse_lower;
    }
    std::string text() const;
};

LowerBoundReport verify_logF_lower(const ExtremalSpec& spec, std::size_t j,
                                   const TruncationPlan& plan, const PrimeTable& table);

struct TaylorReport {
    std::size_t checked = 0;
    double worst_slack = 0.0;  // max over selected p of |f(p) - (-1 - i theta)| - theta^2/2
    bool passes() const noexcept { return worst_slack <= 1e-15; }
};

// -e^{i theta} = -1 - i theta + O(theta^2) with remainder at most theta^2/2.
TaylorReport verify_taylor(const ExtremalSpec& spec, std::uint64_t P, const PrimeTable& table);

}  // namespace mflab
