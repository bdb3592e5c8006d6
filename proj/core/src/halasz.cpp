#include "mflab/halasz.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mflab/error.hpp"
#include "mflab/summation.hpp"

namespace mflab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

inline Complex unit_twist(double t0, std::uint64_t p) {
    return std::polar(1.0, -t0 * std::log(double(p)));  // p^{-i t0}
}

void require_cutoff(std::uint64_t P, const PrimeTable& table) {
    if (P > table.limit()) {
        fail(ErrorKind::Coverage, "prime cutoff " + std::to_string(P) +
                                      " beyond prime table limit " + std::to_string(table.limit()));
    }
}

}  // namespace

double pole_term_numerator(Complex fp, const HalaszDirection& direction, std::uint64_t p) {
    return 1.0 + direction.epsilon0() * (fp * unit_twist(direction.t0(), p)).real();
}

PoleSumSeries pole_sum(const MultiplicativeFunction& f, const HalaszDirection& direction,
                       std::uint64_t P, const PrimeTable& table, const CheckpointGrid& grid) {
    require_cutoff(P, table);
    PoleSumSeries series{direction, P, {}, std::numeric_limits<double>::infinity()};
    const std::vector<std::uint64_t> marks = grid.points(P);
    const std::size_t count = table.count_upto(double(P));

    CompensatedSum sum;
    std::size_t i = 0;
    for (std::uint64_t mark : marks) {
        for (; i < count && table[i] <= mark; ++i) {
            const std::uint64_t p = table[i];
            const double numerator = pole_term_numerator(f.at_prime(p), direction, p);
            if (numerator < -kNonnegativeTolerance) {
                fail(ErrorKind::Verification,
                     "negative criterion term at p = " + std::to_string(p) + " for '" +
                         f.label() + "' (|f(p)| > 1?)");
            }
            series.min_term = std::min(series.min_term, numerator / double(p));
            sum.add(numerator / double(p));
        }
        series.points.push_back({mark, sum.value()});
    }
    if (count == 0) series.min_term = 0.0;
    return series;
}

ThetaValue theta_decomposition(Complex fp, const HalaszDirection& direction, std::uint64_t p) {
    ThetaValue v;
    v.p = p;
    v.modulus = std::abs(fp);
    const Complex z = double(direction.epsilon0()) * fp * unit_twist(direction.t0(), p);
    v.gap = 1.0 + z.real();
    if (v.modulus == 0.0) {
        v.degenerate = true;
        return v;
    }
    double theta = std::arg(-z);
    if (theta <= -std::numbers::pi) theta = std::numbers::pi;
    v.theta = theta;
    v.cosine_bound = v.modulus * (1.0 - std::cos(theta));
    v.quadratic_bound = v.modulus * theta * theta / (2.0 * std::numbers::pi);
    return v;
}

ThetaValue theta_decomposition(const MultiplicativeFunction& f, const HalaszDirection& direction,
                               std::uint64_t p) {
    return theta_decomposition(f.at_prime(p), direction, p);
}

LemmaDefect lemma_defect(const MultiplicativeFunction& f, const HalaszDirection& direction,
                         const ComplexPoint& point, const TruncationPlan& plan,
                         const PrimeTable& table) {
    const double sigma = point.sigma();
    if (sigma - 1.0 > std::exp(-1.0) * (1.0 + 1e-12)) {
        fail(ErrorKind::Domain, "lemma defect needs sigma - 1 <= 1/e so that log 1/(sigma-1) >= 1");
    }
    plan.validate();
    require_cutoff(plan.prime_cutoff, table);

    const Complex s = point.s();
    const Complex w = point.shifted(-direction.t0()).s();
    const double eps0 = direction.epsilon0();
    CompensatedComplexSum local;
    double rounding = 0.0;
    const std::size_t count = table.count_upto(double(plan.prime_cutoff));
    for (std::size_t i = 0; i < count; ++i) {
        const double p = table[i];
        const Complex a = eps0 * f.at_prime(table[i]) * std::exp(-s * std::log(p));
        const Complex b = -std::log(1.0 - std::exp(-w * std::log(p)));
        local.add(a + b);
        rounding += 8.0 * kEps * (std::abs(a) + std::abs(b)) *
                    (std::abs(s) * std::log(p) + 4.0);
    }
    const double tail = bounds::anchored_first_order_tail(f, direction, plan.prime_cutoff, sigma) +
                        bounds::defect_tail(double(plan.prime_cutoff), sigma, true);

    LemmaDefect out{point, {local.value(), tail + rounding, Method::EulerProduct}, {}, 1.0, 0.0, 0.0};

    const PrimeSumResult primes = log_F_prime_sum(f, point, plan, table);
    const EvalResult z = zeta(ComplexPoint(sigma, point.t() - direction.t0()));
    const double rho = z.error_bound / std::abs(z.value);
    const double log_err = rho < 1.0 ? -std::log1p(-rho) : std::numeric_limits<double>::infinity();
    out.direct = {eps0 * primes.value + std::log(z.value), primes.prime_tail_bound + log_err,
                  Method::EulerProduct};

    out.normalizer = std::sqrt(std::max(1.0, std::log(1.0 / (sigma - 1.0))));
    out.ratio = std::abs(out.D.value) / out.normalizer;
    out.ratio_error = out.D.error_bound / out.normalizer;
    return out;
}

std::vector<Theorem1Row> theorem1_ratio(const MultiplicativeFunction& f,
                                        const HalaszDirection& direction,
                                        const std::vector<double>& sigma_grid,
                                        const TruncationPlan& plan, const PrimeTable& table) {
    std::vector<Theorem1Row> rows;
    rows.reserve(sigma_grid.size());
    for (double sigma : sigma_grid) {
        if (!(sigma > 1.0 && sigma <= 1.5)) {
            fail(ErrorKind::Domain, "theorem1 grid needs sigma in (1, 3/2], got " +
                                        std::to_string(sigma));
        }
        const ComplexPoint point(sigma, direction.t0());
        const EvalResult F = F_euler_product(f, point, plan, table, direction);
        const double mag = std::abs(F.value);
        const double gap = sigma - 1.0;
        Theorem1Row row{sigma, direction.t0(), F, std::nullopt,
                        std::numeric_limits<double>::infinity()};
        if (F.error_bound < mag) {
            if (direction.epsilon0() == 1) {
                row.ratio = mag / gap;
                row.ratio_error = F.error_bound / gap;
            } else {
                row.ratio = 1.0 / (mag * gap);
                row.ratio_error = F.error_bound / (mag * (mag - F.error_bound) * gap);
            }
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<Theorem2Row> theorem2_ratio(const SummatoryTrace& trace, double c) {
    if (!(c > 0.0)) fail(ErrorKind::Domain, "theorem2 ratio needs c > 0");
    std::vector<Theorem2Row> rows;
    for (const auto& cp : trace.checkpoints) {
        if (cp.x < 16) continue;
        const double x = double(cp.x);
        const double lx = std::log(x);
        rows.push_back({cp.x, std::abs(cp.S) * lx / (x * std::exp(c * std::sqrt(std::log(lx))))});
    }
    return rows;
}

std::string_view to_string(CriterionVerdict verdict) noexcept {
    switch (verdict) {
        case CriterionVerdict::SumSide: return "criterion satisfied (sum side)";
        case CriterionVerdict::TwoAdicSide: return "criterion satisfied (2-adic side)";
        case CriterionVerdict::Fails: return "criterion fails";
        case CriterionVerdict::Indeterminate: return "indeterminate at this cutoff";
    }
    return "unknown";
}

CriterionReport criterion_report(const MultiplicativeFunction& f, double t, std::uint64_t P,
                                 unsigned K, const PrimeTable& table) {
    require_cutoff(P, table);
    CriterionReport r;
    r.label = f.label();
    r.t = t;
    r.P = P;
    r.K = K;
    const HalaszDirection direction = HalaszDirection::pole(t);
    r.sum_side = pole_sum(f, direction, P, table);

    if (P >= 100) {
        const std::uint64_t lower = P / 10;
        CompensatedSum growth;
        const std::size_t lo = table.count_upto(double(lower));
        const std::size_t hi = table.count_upto(double(P));
        for (std::size_t i = lo; i < hi; ++i) {
            const std::uint64_t p = table[i];
            growth.add(pole_term_numerator(f.at_prime(p), direction, p) / double(p));
        }
        r.last_decade_growth = growth.value();
        r.last_decade_loglog = std::log(std::log(double(P))) - std::log(std::log(double(lower)));
        r.sum_diverges = r.last_decade_growth >= kDivergenceFactor * r.last_decade_loglog;
        r.sum_converges = r.last_decade_growth <= kConvergenceFactor * r.last_decade_loglog;
    }
    r.two_adic_failure = K > 0 ? two_adic_failure(f, t, K) : std::optional<unsigned>{0};

    if (K > 0 && !r.two_adic_failure) {
        r.verdict = CriterionVerdict::TwoAdicSide;
    } else if (r.sum_diverges) {
        r.verdict = CriterionVerdict::SumSide;
    } else if (r.sum_converges) {
        r.verdict = CriterionVerdict::Fails;
    } else {
        r.verdict = CriterionVerdict::Indeterminate;
    }
    return r;
}

std::string CriterionReport::text() const {
    std::ostringstream os;
    os.precision(17);
    os << "function: " << label << "\n";
    os << "t: " << t << "\n";
    os << "prime_cutoff: " << P << "\n";
    os << "two_adic_k_max: " << K << "\n";
    for (const auto& pt : sum_side.points) {
        os << "partial_sum[" << pt.P << "]: " << pt.partial_sum << "\n";
    }
    os << "last_decade_growth: " << last_decade_growth << "\n";
    os << "last_decade_loglog: " << last_decade_loglog << "\n";
    os << "sum_side: "
       << (sum_diverges ? "diverging" : sum_converges ? "converging" : "undecided") << "\n";
    if (K == 0) {
        os << "two_adic_side: not tested\n";
    } else if (two_adic_failure) {
        os << "two_adic_side: fails at k = " << *two_adic_failure << "\n";
    } else {
        os << "two_adic_side: holds for k <= " << K << "\n";
    }
    os << "verdict: " << to_string(verdict) << "\n";
    return os.str();
}

}  // namespace mflab
