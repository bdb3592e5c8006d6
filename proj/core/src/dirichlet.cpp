#include "mflab/dirichlet.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mflab/error.hpp"
#include "mflab/summation.hpp"

namespace mflab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kZetaTarget = 1e-10;
constexpr double kFactorTailTarget = 1e-14;
constexpr double kSingularFactor = 1e-12;

// n^{-s}
inline Complex inv_power(double n, const Complex& s) { return std::exp(-s * std::log(n)); }

// Relative rounding budget for one n^{-s} evaluation.
inline double power_rounding(double n, const Complex& s) {
    return 8.0 * kEps * (std::abs(s) * std::log(std::max(n, 2.0)) + 4.0);
}

// Bound on |value| given |log| error delta: |exp(L + e) - exp(L)| <= |exp(L)| (e^delta - 1).
inline double exp_error(double magnitude, double delta) {
    if (!std::isfinite(delta)) return std::numeric_limits<double>::infinity();
    return magnitude * std::expm1(delta);
}

void require_M(const MultiplicativeFunction& f, const char* op) {
    if (!f.flags().claims_M) {
        fail(ErrorKind::Domain, std::string(op) + " requires |f(n)| <= 1; '" + f.label() +
                                    "' does not claim class M");
    }
}

}  // namespace

ComplexPoint::ComplexPoint(double sigma, double t) : sigma_(sigma), t_(t) {
    if (!(sigma > 1.0) || !std::isfinite(sigma) || !std::isfinite(t)) {
        fail(ErrorKind::Domain, "evaluation point needs sigma > 1, got sigma = " +
                                    std::to_string(sigma));
    }
}

std::string_view to_string(Method method) noexcept {
    switch (method) {
        case Method::TruncatedSeries: return "truncated-series";
        case Method::EulerProduct: return "euler-product";
        case Method::PartialSummation: return "partial-summation";
        case Method::EulerMaclaurin: return "euler-maclaurin";
    }
    return "unknown";
}

bool EvalResult::overlaps(const EvalResult& other) const noexcept {
    return std::abs(value - other.value) <= error_bound + other.error_bound;
}

void TruncationPlan::validate() const {
    if (series_cutoff < 2 || prime_cutoff < 2) {
        fail(ErrorKind::Usage, "truncation plan needs N >= 2 and P >= 2");
    }
    if (exact_factor_cutoff < 2 || exact_factor_cutoff > prime_cutoff) {
        fail(ErrorKind::Usage, "truncation plan needs 2 <= exact_factor_cutoff <= P");
    }
}

EvalResult zeta(const ComplexPoint& point) {
    const Complex s = point.s();
    const double sigma = point.sigma();

    // Remainder after the B4 term is at most |T3| |s+5|/(sigma+5), where
    // T3 = B6/6! s(s+1)(s+2)(s+3)(s+4) N^{-s-5} and B6/6! = 1/30240.
    const double rising5 = std::abs(s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0));
    const double shape = rising5 / 30240.0 * std::abs(s + 5.0) / (sigma + 5.0);
    double N = std::max(10.0, std::ceil(std::abs(point.t())));
    while (shape * std::pow(N, -sigma - 5.0) > kZetaTarget) N *= 2.0;
    const double remainder = shape * std::pow(N, -sigma - 5.0);

    CompensatedComplexSum sum;
    double magnitude = 0.0;
    double rounding = 0.0;
    const auto n_max = static_cast<std::uint64_t>(N);
    for (std::uint64_t n = 1; n < n_max; ++n) {
        const Complex term = inv_power(double(n), s);
        sum.add(term);
        magnitude += std::abs(term);
        rounding += std::abs(term) * power_rounding(double(n), s);
    }
    const Complex nps = inv_power(N, s);  // N^{-s}
    const Complex main = N * nps / (s - 1.0);
    const Complex half = 0.5 * nps;
    const Complex t1 = s * nps / (12.0 * N);
    const Complex t2 = -s * (s + 1.0) * (s + 2.0) * nps / (720.0 * N * N * N);
    sum.add(main);
    sum.add(half);
    sum.add(t1);
    sum.add(t2);
    const double tail_mag = std::abs(main) + std::abs(half) + std::abs(t1) + std::abs(t2);
    rounding += tail_mag * power_rounding(N, s) + 4.0 * kEps * (magnitude + tail_mag);

    return {sum.value(), remainder + rounding, Method::EulerMaclaurin};
}

EvalResult F_truncated(const MultiplicativeFunction& f, const ComplexPoint& point,
                       const TruncationPlan& plan, const SpfTable& spf) {
    require_M(f, "F_truncated");
    plan.validate();
    const std::uint64_t N = plan.series_cutoff;
    if (N > spf.limit()) {
        fail(ErrorKind::Coverage, "series cutoff " + std::to_string(N) + " beyond spf limit " +
                                      std::to_string(spf.limit()));
    }
    const Complex s = point.s();
    const double sigma = point.sigma();
    CompensatedComplexSum sum;
    double rounding = 0.0;
    for (std::uint64_t n = 1; n <= N; ++n) {
        const Complex fn = value_at(f, n, spf);
        if (fn == Complex{}) continue;
        const Complex term = fn * inv_power(double(n), s);
        sum.add(term);
        rounding += std::abs(term) * power_rounding(double(n), s);
    }
    const double tail = bounds::power_tail(double(N), sigma);
    return {sum.value(), tail + rounding, Method::TruncatedSeries};
}

EvalResult F_partial_summation(const SummatoryTrace& trace, const ComplexPoint& point, double X) {
    if (!(X >= 1.0) || !std::isfinite(X)) {
        fail(ErrorKind::Domain, "partial summation needs X >= 1");
    }
    const auto top = static_cast<std::uint64_t>(std::floor(X));
    if (!trace.dense || trace.limit < top || trace.checkpoints.size() < top) {
        fail(ErrorKind::Coverage, "partial summation to X = " + std::to_string(X) +
                                      " needs a dense trace up to " + std::to_string(top));
    }
    const Complex s = point.s();
    const double sigma = point.sigma();

    // On [n, n+1), S_f(y) = S(n) and s * int y^{-s-1} dy = n^{-s} - (n+1)^{-s}.
    CompensatedComplexSum sum;
    double rounding = 0.0;
    Complex left = Complex{1.0, 0.0};  // 1^{-s}
    for (std::uint64_t n = 1; n < top; ++n) {
        const Complex right = inv_power(double(n + 1), s);
        const Complex S = trace.checkpoints[n - 1].S;
        const Complex term = S * (left - right);
        sum.add(term);
        rounding += std::abs(S) * (std::abs(left) + std::abs(right)) *
                    power_rounding(double(n + 1), s);
        left = right;
    }
    if (top >= 1) {
        const Complex S = trace.checkpoints[top - 1].S;
        const Complex right = inv_power(X, s);
        sum.add(S * (left - right));
        rounding += std::abs(S) * (std::abs(left) + std::abs(right)) * power_rounding(X, s);
    }
    const double tail = std::abs(s) * std::pow(X, 1.0 - sigma) / (sigma - 1.0);
    return {sum.value(), tail + rounding, Method::PartialSummation};
}

Complex euler_factor_log(const MultiplicativeFunction& f, std::uint64_t p, const ComplexPoint& point,
                         unsigned kmax) {
    if (p < 2) fail(ErrorKind::Domain, "euler_factor_log needs a prime p >= 2");
    const double sigma = point.sigma();
    const double q = std::pow(double(p), -sigma);
    if (kmax == 0) {
        kmax = 1;
        while (std::pow(q, kmax + 1) / (1.0 - q) > kFactorTailTarget) ++kmax;
    }
    const Complex z = inv_power(double(p), point.s());
    Complex zk{1.0, 0.0};
    CompensatedComplexSum factor;
    factor.add(Complex{1.0, 0.0});
    for (unsigned k = 1; k <= kmax; ++k) {
        zk *= z;
        factor.add(f.at(p, k) * zk);
    }
    const Complex local = factor.value();
    if (std::abs(local) < kSingularFactor) {
        fail(ErrorKind::Singular, "local factor of '" + f.label() + "' at p = " +
                                      std::to_string(p) + " vanishes");
    }
    return std::log(local);
}

EvalResult PrimeSumResult::as_F() const {
    const Complex v = std::exp(log_F());
    return {v, exp_error(std::abs(v), error_bound), Method::EulerProduct};
}

namespace bounds {

double power_tail(double P, double a) {
    return std::pow(P, 1.0 - a) / (a - 1.0);
}

double local_log_second_order(double q, bool completely_multiplicative) {
    if (completely_multiplicative) return q * q / (2.0 * (1.0 - q));
    return q * q / (1.0 - q) * (1.0 + 1.0 / (2.0 * (1.0 - 2.0 * q)));
}

double defect_tail(double P, double sigma, bool completely_multiplicative) {
    // The per-prime bound is c(q) q^2 with c increasing in q, so use the
    // largest q in the tail, q = (P+1)^{-sigma}.
    const double q_max = std::pow(P + 1.0, -sigma);
    const double c = local_log_second_order(q_max, completely_multiplicative) / (q_max * q_max);
    return c * power_tail(P, 2.0 * sigma);
}

double anchored_first_order_tail(const MultiplicativeFunction& f, const HalaszDirection& d,
                                 std::uint64_t P, double sigma) {
    const double pole_tail = f.pole_tail_bound(d, P);
    if (!std::isfinite(pole_tail)) return 2.0 * power_tail(double(P), sigma);
    // |1 + z|^2 <= 2 (1 + Re z) for |z| <= 1, then Cauchy-Schwarz.
    return std::sqrt(2.0 * std::max(0.0, pole_tail)) *
           std::sqrt(power_tail(double(P), 2.0 * sigma - 1.0));
}

}  // namespace bounds

PrimeSumResult log_F_prime_sum(const MultiplicativeFunction& f, const ComplexPoint& point,
                               const TruncationPlan& plan, const PrimeTable& table) {
    require_M(f, "log_F_prime_sum");
    plan.validate();
    if (plan.prime_cutoff > table.limit()) {
        fail(ErrorKind::Coverage, "prime cutoff " + std::to_string(plan.prime_cutoff) +
                                      " beyond prime table limit " + std::to_string(table.limit()));
    }
    const Complex s = point.s();
    const double sigma = point.sigma();
    const bool cm = f.flags().completely_multiplicative;

    CompensatedComplexSum value;
    CompensatedComplexSum defect;
    CompensatedSum majorant;
    double rounding = 0.0;
    const std::size_t count = table.count_upto(double(plan.prime_cutoff));
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t p = table[i];
        const Complex term = f.at_prime(p) * inv_power(double(p), s);
        value.add(term);
        rounding += std::abs(term) * power_rounding(double(p), s);
        const double q = std::pow(double(p), -sigma);
        if (p <= plan.exact_factor_cutoff) {
            const Complex d = euler_factor_log(f, p, point) - term;
            defect.add(d);
            rounding += 8.0 * kEps * (1.0 + std::abs(d));
            // p = 2 may sit outside the q <= 1/3 regime of the analytic bound.
            majorant.add(p == 2 && !cm ? std::abs(d) : bounds::local_log_second_order(q, cm));
        } else {
            majorant.add(bounds::local_log_second_order(q, cm));
        }
    }

    PrimeSumResult r;
    r.value = value.value();
    r.defect = defect.value();
    r.prime_tail_bound = bounds::power_tail(double(plan.prime_cutoff), sigma);
    r.defect_tail_bound = bounds::defect_tail(double(plan.exact_factor_cutoff), sigma, cm);
    r.defect_majorant =
        majorant.value() + bounds::defect_tail(double(plan.prime_cutoff), sigma, cm) + rounding;
    r.error_bound = r.prime_tail_bound + r.defect_tail_bound + rounding;
    return r;
}

EvalResult F_euler_product(const MultiplicativeFunction& f, const ComplexPoint& point,
                           const TruncationPlan& plan, const PrimeTable& table,
                           std::optional<HalaszDirection> anchor) {
    require_M(f, "F_euler_product");
    plan.validate();
    const std::uint64_t P = plan.prime_cutoff;
    if (P > table.limit()) {
        fail(ErrorKind::Coverage, "prime cutoff " + std::to_string(P) +
                                      " beyond prime table limit " + std::to_string(table.limit()));
    }
    const double sigma = point.sigma();
    const bool cm = f.flags().completely_multiplicative;
    const std::size_t count = table.count_upto(double(P));

    CompensatedComplexSum log_sum;
    double rounding = 0.0;
    if (!anchor) {
        for (std::size_t i = 0; i < count; ++i) {
            const Complex l = euler_factor_log(f, table[i], point);
            log_sum.add(l);
            rounding += 8.0 * kEps * (1.0 + std::abs(l));
        }
        const double tail = bounds::power_tail(double(P), sigma) +
                            bounds::defect_tail(double(P), sigma, cm);
        const Complex v = std::exp(log_sum.value());
        return {v, exp_error(std::abs(v), tail + rounding), Method::EulerProduct};
    }

    const int eps0 = anchor->epsilon0();
    const Complex w = point.shifted(-anchor->t0()).s();
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t p = table[i];
        const Complex lf = euler_factor_log(f, p, point);
        const Complex lz = -std::log(1.0 - inv_power(double(p), w));  // log zeta_p(w)
        const Complex r = lf + double(eps0) * lz;
        log_sum.add(r);
        rounding += 8.0 * kEps * (1.0 + std::abs(lf) + std::abs(lz));
    }
    const double tail =
        bounds::anchored_first_order_tail(f, *anchor, P, sigma) +
        bounds::defect_tail(double(P), sigma, cm) + bounds::defect_tail(double(P), sigma, true);

    const EvalResult z = zeta(ComplexPoint(sigma, point.t() - anchor->t0()));
    const double z_abs = std::abs(z.value);
    const double rho = z.error_bound / z_abs;
    const Complex zpow = eps0 == 1 ? 1.0 / z.value : z.value;
    const double zpow_rel = eps0 == 1 ? (rho < 1.0 ? rho / (1.0 - rho)
                                                   : std::numeric_limits<double>::infinity())
                                      : rho;
    const Complex v = zpow * std::exp(log_sum.value());
    const double mag = std::abs(v);
    const double err = mag * ((1.0 + zpow_rel) * std::exp(tail + rounding) - 1.0);
    return {v, err, Method::EulerProduct};
}

}  // namespace mflab
