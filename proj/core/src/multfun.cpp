#include "mflab/multfun.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "mflab/error.hpp"
#include "mflab/summation.hpp"

namespace mflab {

namespace {

constexpr std::uint32_t kNoMemo = ~std::uint32_t{0};
constexpr std::uint64_t kMemoPowerCap = std::uint64_t{1} << 62;

}  // namespace

MultiplicativeFunction::MultiplicativeFunction(std::string label, PrimePowerRule rule,
                                               FunctionClass flags, PoleTailBound pole_tail) {
    if (!rule) fail(ErrorKind::Usage, "multiplicative function '" + label + "' has no rule");
    auto impl = std::make_shared<Impl>();
    impl->label = std::move(label);
    impl->rule = std::move(rule);
    impl->flags = flags;
    impl->pole_tail = std::move(pole_tail);
    impl_ = impl;

    impl->memo_offset.assign(kMemoPrimeLimit, kNoMemo);
    impl->memo_kmax.assign(kMemoPrimeLimit, 0);
    const PrimeTable small = sieve_primes(kMemoPrimeLimit - 1);
    for (std::uint32_t p : small) {
        impl->memo_offset[p] = static_cast<std::uint32_t>(impl->memo.size());
        unsigned k = 0;
        for (std::uint64_t pk = p; pk <= kMemoPowerCap / p; pk *= p) {
            ++k;
            impl->memo.push_back(compute(p, k));
        }
        impl->memo_kmax[p] = static_cast<std::uint8_t>(k);
    }
}

Complex MultiplicativeFunction::compute(std::uint64_t p, unsigned k) const {
    if (k == 0) return {1.0, 0.0};
    if (!impl_->flags.completely_multiplicative) return impl_->rule(p, k);
    const Complex fp = impl_->rule(p, 1);
    Complex v = fp;
    for (unsigned i = 1; i < k; ++i) v *= fp;
    return v;
}

Complex MultiplicativeFunction::at(std::uint64_t p, unsigned k) const {
    if (k == 0) return {1.0, 0.0};
    if (p < kMemoPrimeLimit) {
        const std::uint32_t offset = impl_->memo_offset[p];
        if (offset != kNoMemo && k <= impl_->memo_kmax[p]) return impl_->memo[offset + k - 1];
    }
    return compute(p, k);
}

double MultiplicativeFunction::pole_tail_bound(const HalaszDirection& direction,
                                               std::uint64_t P) const {
    if (!impl_->pole_tail) return kUnknownTail;
    return impl_->pole_tail(direction, P);
}

MultiplicativeFunction twist(const MultiplicativeFunction& base, double t) {
    std::ostringstream label;
    label << "twist:" << t << ":" << base.label();
    auto rule = [base, t](std::uint64_t p, unsigned k) {
        return base.at(p, k) * std::polar(1.0, -static_cast<double>(k) * t * std::log(double(p)));
    };
    // f(p) p^{-i t0} = base(p) p^{-i (t + t0)}.
    PoleTailBound tail;
    if (base.pole_tail()) {
        tail = [base, t](const HalaszDirection& d, std::uint64_t P) {
            return base.pole_tail_bound(HalaszDirection(d.epsilon0(), d.t0() + t), P);
        };
    }
    return MultiplicativeFunction(label.str(), std::move(rule), base.flags(), std::move(tail));
}

Complex value_at(const MultiplicativeFunction& f, std::uint64_t n, const SpfTable& spf) {
    if (n == 0) fail(ErrorKind::Domain, "f(0) is undefined");
    if (n == 1) return {1.0, 0.0};
    if (n > spf.limit()) {
        fail(ErrorKind::Coverage, "value_at(" + std::to_string(n) + ") beyond spf limit " +
                                      std::to_string(spf.limit()));
    }
    Complex v{1.0, 0.0};
    while (n > 1) {
        const std::uint64_t p = spf[n];
        unsigned k = 0;
        do {
            n /= p;
            ++k;
        } while (n % p == 0);
        v *= f.at(p, k);
    }
    return v;
}

void evaluate_range(const MultiplicativeFunction& f, std::uint64_t lo,
                    std::span<const std::uint32_t> base_primes, std::span<Complex> out) {
    if (lo == 0) fail(ErrorKind::Domain, "evaluate_range starts at n = 0");
    if (out.empty()) return;
    const std::uint64_t hi = lo + out.size() - 1;
    std::vector<std::uint64_t> rest(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        rest[i] = lo + i;
        out[i] = Complex{1.0, 0.0};
    }
    for (std::uint32_t p32 : base_primes) {
        const std::uint64_t p = p32;
        if (p * p > hi) break;
        for (std::uint64_t m = (lo + p - 1) / p * p; m <= hi; m += p) {
            const std::size_t i = m - lo;
            unsigned k = 0;
            do {
                rest[i] /= p;
                ++k;
            } while (rest[i] % p == 0);
            out[i] *= f.at(p, k);
        }
    }
    // Whatever is left has no factor <= sqrt(n), so it is a single prime.
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (rest[i] > 1) out[i] *= f.at(rest[i], 1);
    }
}

CheckpointGrid CheckpointGrid::geometric(double ratio) {
    if (!(ratio > 1.0) || !std::isfinite(ratio)) {
        fail(ErrorKind::Usage, "geometric grid ratio must be > 1");
    }
    CheckpointGrid g;
    g.kind_ = Kind::Geometric;
    g.ratio_ = ratio;
    return g;
}

CheckpointGrid CheckpointGrid::explicit_points(std::vector<std::uint64_t> points) {
    if (points.empty()) fail(ErrorKind::Usage, "explicit checkpoint list is empty");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i] == 0 || (i > 0 && points[i] <= points[i - 1])) {
            fail(ErrorKind::Usage, "explicit checkpoints must be positive and strictly ascending");
        }
    }
    CheckpointGrid g;
    g.kind_ = Kind::Explicit;
    g.explicit_ = std::move(points);
    return g;
}

CheckpointGrid CheckpointGrid::dense() {
    CheckpointGrid g;
    g.kind_ = Kind::Dense;
    return g;
}

CheckpointGrid CheckpointGrid::default_grid() { return geometric(std::pow(2.0, 0.25)); }

std::vector<std::uint64_t> CheckpointGrid::points(std::uint64_t limit) const {
    std::vector<std::uint64_t> out;
    switch (kind_) {
        case Kind::Dense:
            out.resize(limit);
            for (std::uint64_t i = 0; i < limit; ++i) out[i] = i + 1;
            return out;
        case Kind::Explicit:
            if (!explicit_.empty() && explicit_.back() > limit) {
                fail(ErrorKind::Coverage, "checkpoint " + std::to_string(explicit_.back()) +
                                              " beyond limit " + std::to_string(limit));
            }
            return explicit_;
        case Kind::Geometric:
            break;
    }
    const double top = static_cast<double>(limit);
    for (int i = 0;; ++i) {
        const double v = std::pow(ratio_, i);
        if (v > top * (1.0 + 1e-12)) break;
        const auto x = static_cast<std::uint64_t>(std::floor(v * (1.0 + 1e-12)));
        if (x >= 1 && x <= limit) out.push_back(x);
    }
    for (std::uint64_t d = 1; d <= limit; d *= 10) {
        out.push_back(d);
        if (d > limit / 10) break;
    }
    out.push_back(limit);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string CheckpointGrid::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::Geometric:
            os.precision(17);
            os << "geometric:" << ratio_;
            break;
        case Kind::Dense:
            os << "dense";
            break;
        case Kind::Explicit:
            os << "list:";
            for (std::size_t i = 0; i < explicit_.size(); ++i) os << (i ? "," : "") << explicit_[i];
            break;
    }
    return os.str();
}

Complex SummatoryTrace::at(std::uint64_t x) const {
    auto it = std::lower_bound(checkpoints.begin(), checkpoints.end(), x,
                               [](const Checkpoint& c, std::uint64_t v) { return c.x < v; });
    if (it == checkpoints.end() || it->x != x) {
        fail(ErrorKind::Coverage, "trace has no checkpoint at x = " + std::to_string(x));
    }
    return it->S;
}

SummatoryTrace summatory_trace(const MultiplicativeFunction& f, std::uint64_t limit,
                               const CheckpointGrid& grid, const SummatoryOptions& options) {
    if (limit < 1) fail(ErrorKind::Domain, "summatory limit must be >= 1");
    if (limit > options.ceiling) {
        fail(ErrorKind::Capacity, "summatory limit " + std::to_string(limit) +
                                      " exceeds ceiling " + std::to_string(options.ceiling));
    }
    if (options.segment_size == 0) fail(ErrorKind::Usage, "segment size must be positive");

    SummatoryTrace trace;
    trace.function_label = f.label();
    trace.limit = limit;
    trace.dense = grid.kind() == CheckpointGrid::Kind::Dense;

    const std::vector<std::uint64_t> points = grid.points(limit);
    trace.checkpoints.reserve(points.size());
    const std::uint64_t root = isqrt(limit);
    const PrimeTable base = root >= 2 ? sieve_primes(root) : PrimeTable{};

    const std::uint64_t seg = options.segment_size;
    const std::uint64_t segments = (limit - 1) / seg + 1;
    const unsigned threads = std::max(1u, options.threads);
    std::vector<std::vector<Complex>> values(threads);

    CompensatedComplexSum sum;
    std::size_t next = 0;
    for (std::uint64_t first = 0; first < segments; first += threads) {
        const std::uint64_t last = std::min(segments, first + threads);
        auto work = [&](std::uint64_t s) {
            const std::uint64_t lo = 1 + s * seg;
            const std::uint64_t hi = std::min(limit, lo + seg - 1);
            auto& buf = values[s - first];
            buf.resize(hi - lo + 1);
            evaluate_range(f, lo, base.primes(), buf);
        };
        if (last - first == 1) {
            work(first);
        } else {
            std::vector<std::jthread> pool;
            for (std::uint64_t s = first; s < last; ++s) pool.emplace_back(work, s);
        }
        for (std::uint64_t s = first; s < last; ++s) {
            const std::uint64_t lo = 1 + s * seg;
            const auto& buf = values[s - first];
            for (std::size_t i = 0; i < buf.size(); ++i) {
                sum.add(buf[i]);
                const std::uint64_t n = lo + i;
                if (next < points.size() && points[next] == n) {
                    trace.checkpoints.push_back({n, sum.value()});
                    ++next;
                }
            }
        }
    }
    return trace;
}

std::optional<unsigned> two_adic_failure(const MultiplicativeFunction& f, double t, unsigned K) {
    for (unsigned k = 1; k <= K; ++k) {
        const Complex target = -std::polar(1.0, static_cast<double>(k) * t * std::log(2.0));
        if (std::abs(f.at(2, k) - target) > kTwoAdicTolerance) return k;
    }
    return std::nullopt;
}

bool ClassReport::passes() const noexcept {
    return (!claimed.claims_M || in_M) && (!claimed.claims_M2 || in_M2) &&
           (!claimed.completely_multiplicative || completely_multiplicative);
}

std::string ClassReport::summary() const {
    auto verdict = [](bool claimed_flag, bool holds) {
        std::string s = holds ? "pass" : "fail";
        s += claimed_flag ? " (claimed)" : " (not claimed)";
        return s;
    };
    std::ostringstream os;
    os << "function: " << label << "\n";
    os << "sample_limit: " << sample_limit << "\n";
    os << "M: " << verdict(claimed.claims_M, in_M) << "\n";
    os << "M2: " << verdict(claimed.claims_M2, in_M2) << "\n";
    os << "completely_multiplicative: "
       << verdict(claimed.completely_multiplicative, completely_multiplicative) << "\n";
    for (const auto& v : violations) {
        os << "violation: " << v.property << " at (p=" << v.where.p << ", k=" << v.where.k
           << ") value=" << v.value.real() << (v.value.imag() < 0 ? "" : "+") << v.value.imag()
           << "i\n";
    }
    os << "two_adic_t: " << t << "\n";
    if (two_adic_alternative()) {
        os << "two_adic_alternative: holds for k <= " << two_adic_checked << "\n";
    } else {
        os << "two_adic_alternative: fails";
        if (two_adic_first_failure) os << " at k = " << *two_adic_first_failure;
        os << "\n";
        os << "note: divergence alternative required\n";
    }
    os << "overall: " << (passes() ? "pass" : "fail") << "\n";
    return os.str();
}

ClassReport class_check(const MultiplicativeFunction& f, std::uint64_t sample_limit, double t) {
    if (sample_limit < 2) fail(ErrorKind::Domain, "class_check sample limit must be >= 2");
    ClassReport report;
    report.label = f.label();
    report.sample_limit = sample_limit;
    report.claimed = f.flags();
    report.t = t;

    const PrimeTable primes = sieve_primes(sample_limit);
    for (std::uint32_t p32 : primes) {
        const std::uint64_t p = p32;
        const Complex fp = f.rule()(p, 1);
        Complex power = fp;
        unsigned k = 1;
        for (std::uint64_t pk = p; pk <= sample_limit; ++k) {
            const Complex v = f.at(p, k);
            if (std::abs(v) > 1.0 + kClassTolerance) {
                if (report.in_M) report.violations.push_back({"M", {p, k}, v});
                report.in_M = false;
            }
            if (p == 2 && std::abs(v) > kClassTolerance) {
                if (report.in_M2 && f.flags().claims_M2) {
                    report.violations.push_back({"M2", {p, k}, v});
                }
                report.in_M2 = false;
            }
            if (k > 1) {
                power *= fp;
                const Complex direct = f.rule()(p, k);
                if (std::abs(direct - power) > kClassTolerance * std::max(1.0, std::abs(power))) {
                    if (report.completely_multiplicative && f.flags().completely_multiplicative) {
                        report.violations.push_back({"completely-multiplicative", {p, k}, direct});
                    }
                    report.completely_multiplicative = false;
                }
            }
            if (pk > sample_limit / p) break;
            pk *= p;
        }
    }

    unsigned K = 0;
    for (std::uint64_t pk = 2; pk <= sample_limit; pk *= 2) {
        ++K;
        if (pk > sample_limit / 2) break;
    }
    report.two_adic_checked = K;
    report.two_adic_first_failure = two_adic_failure(f, t, K);
    return report;
}

}  // namespace mflab
