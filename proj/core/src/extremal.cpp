#include "mflab/extremal.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "mflab/error.hpp"
#include "mflab/summation.hpp"

namespace mflab {

namespace {

using json = nlohmann::ordered_json;

double parse_double(std::string_view text, std::string_view what) {
    double v = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || text.empty()) {
        fail(ErrorKind::Usage, "cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
    }
    return v;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

KappaDesc KappaDesc::parse(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        fail(ErrorKind::Usage, "kappa spec '" + std::string(text) +
                                   "' must be const:<c>, power:<e> or loglog-fraction:<c>");
    }
    const std::string_view name = text.substr(0, colon);
    KappaDesc d;
    d.param = parse_double(text.substr(colon + 1), "kappa parameter");
    if (name == "const") {
        d.kind = Kind::Constant;
        if (!(d.param > 0.0)) fail(ErrorKind::Usage, "const kappa must be positive");
    } else if (name == "power") {
        d.kind = Kind::Power;
        if (!(d.param >= 0.0 && d.param < 0.5)) {
            fail(ErrorKind::Usage, "power kappa needs 0 <= e < 1/2 to be o(sqrt(log log x))");
        }
    } else if (name == "loglog-fraction") {
        d.kind = Kind::LogLogFraction;
        if (!(d.param > 0.0)) fail(ErrorKind::Usage, "loglog-fraction kappa must be positive");
    } else {
        fail(ErrorKind::Usage, "unknown kappa family '" + std::string(name) +
                                   "'; expected const, power or loglog-fraction");
    }
    return d;
}

std::string KappaDesc::to_string() const {
    switch (kind) {
        case Kind::Constant: return "const:" + format_double(param);
        case Kind::Power: return "power:" + format_double(param);
        case Kind::LogLogFraction: return "loglog-fraction:" + format_double(param);
    }
    return {};
}

double KappaDesc::operator()(double u) const {
    switch (kind) {
        case Kind::Constant: return param;
        case Kind::Power: return std::pow(u, param);
        case Kind::LogLogFraction: return param * std::sqrt(u) / std::max(1.0, std::log(u));
    }
    return 0.0;
}

std::vector<double> KappaGrid::points() const {
    if (!(loglog_min > 0.0 && loglog_max > loglog_min) || nodes < 2) {
        fail(ErrorKind::Usage, "kappa grid needs 0 < loglog_min < loglog_max and >= 2 nodes");
    }
    std::vector<double> out(nodes);
    const double a = std::log(loglog_min);
    const double b = std::log(loglog_max);
    for (std::size_t i = 0; i < nodes; ++i) {
        out[i] = std::exp(a + (b - a) * double(i) / double(nodes - 1));
    }
    out.front() = loglog_min;
    out.back() = loglog_max;
    return out;
}

KappaFunction::KappaFunction(std::function<double(double)> raw, std::vector<double> grid,
                             std::vector<double> kappa0, std::vector<double> kappa1)
    : raw_(std::move(raw)), grid_(std::move(grid)), kappa0_(std::move(kappa0)),
      kappa1_(std::move(kappa1)) {}

double KappaFunction::interpolate(const std::vector<double>& values, double u) const {
    if (u < grid_.front() * (1.0 - 1e-12)) {
        fail(ErrorKind::Domain, "kappa evaluated below x = 3 (log log x = " + format_double(u) + ")");
    }
    if (u >= grid_.back()) return values.back();
    if (u <= grid_.front()) return values.front();
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), u);
    const std::size_t hi = static_cast<std::size_t>(it - grid_.begin());
    const std::size_t lo = hi - 1;
    const double w = (u - grid_[lo]) / (grid_[hi] - grid_[lo]);
    return values[lo] + w * (values[hi] - values[lo]);
}

double KappaFunction::kappa0(double u) const { return interpolate(kappa0_, u); }
double KappaFunction::kappa1(double u) const { return interpolate(kappa1_, u); }

KappaFunction regularize_kappa(std::function<double(double)> raw, const KappaGrid& grid) {
    std::vector<double> nodes = grid.points();
    const std::size_t n = nodes.size();
    std::vector<double> k0(n);
    std::vector<double> k1(n);
    double running = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = raw(nodes[i]);
        if (!(v > 0.0) || !std::isfinite(v)) {
            fail(ErrorKind::Domain, "kappa must be positive and finite; got " + format_double(v) +
                                        " at log log x = " + format_double(nodes[i]));
        }
        running = std::max(running, v);
        k0[i] = running;
    }
    double best = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        best = std::max(best, k0[i] / std::sqrt(nodes[i]));
        k1[i] = std::sqrt(nodes[i]) * best;
    }
    return KappaFunction(std::move(raw), std::move(nodes), std::move(k0), std::move(k1));
}

AlphaFunction::AlphaFunction(KappaFunction kappa, double C0, std::string kappa_spec)
    : kappa_(std::move(kappa)), C0_(C0), kappa_spec_(std::move(kappa_spec)) {
    if (!(C0 >= 0.0) || !std::isfinite(C0)) fail(ErrorKind::Domain, "C0 must be >= 0");
    const auto& g = kappa_.grid();
    envelope_.resize(g.size());
    double best = 0.0;
    for (std::size_t i = g.size(); i-- > 0;) {
        const double u = g[i];
        const double value = (kappa_.kappa1_nodes()[i] + std::log(u + std::exp(-1.0)) + C0_) /
                             std::sqrt(u);
        best = std::max(best, value);
        envelope_[i] = best;
    }
}

double AlphaFunction::formula(double u) const {
    return (kappa_.kappa1(u) + std::log(u + std::exp(-1.0)) + C0_) / std::sqrt(u);
}

double AlphaFunction::operator()(double u) const {
    if (u < kLogLogSixteen * (1.0 - 1e-12)) {
        fail(ErrorKind::Domain, "alpha needs X >= 16 (log log X = " + format_double(u) + ")");
    }
    const auto& g = kappa_.grid();
    double value = formula(u);
    if (u < g.back()) {
        const auto it = std::upper_bound(g.begin(), g.end(), u);
        value = std::max(value, envelope_[static_cast<std::size_t>(it - g.begin())]);
    }
    return std::max(value, kFloor);
}

AlphaFunction alpha_from_kappa(const KappaFunction& kappa, double C0, std::string kappa_spec) {
    return AlphaFunction(kappa, C0, std::move(kappa_spec));
}

double ExtremalSpec::l2_sum() const noexcept {
    double s = 0.0;
    for (const auto& b : blocks) s += b.a * b.a;
    return s;
}

void ExtremalSpec::validate() const {
    auto bad = [](const std::string& why) { fail(ErrorKind::Usage, "invalid extremal spec: " + why); };
    if (!(x1 >= 16.0)) bad("x1 must be >= 16");
    if (blocks.empty()) bad("no blocks");
    if (std::abs(blocks.front().log_x - std::log(x1)) > 1e-12 * std::log(x1)) {
        bad("first block does not start at x1");
    }
    for (std::size_t j = 0; j < blocks.size(); ++j) {
        const Block& b = blocks[j];
        if (!std::isfinite(b.log_x) || !std::isfinite(b.log_upper)) bad("non-finite block bound");
        if (std::abs(b.log_upper - b.log_x * b.log_x) > 1e-12 * b.log_upper) {
            bad("block " + std::to_string(j + 1) + " upper end is not x_j^{log x_j}");
        }
        if (!(b.a >= 0.0) || !std::isfinite(b.a)) bad("a_j must be finite and >= 0");
        if (j + 1 < blocks.size() && !(b.log_upper < blocks[j + 1].log_x)) {
            bad("block " + std::to_string(j + 1) + " overlaps the next block");
        }
    }
    if (l2_sum() > l2_budget) {
        bad("sum of a_j^2 = " + format_double(l2_sum()) + " exceeds budget " +
            format_double(l2_budget));
    }
}

std::string ExtremalSpec::to_json() const {
    json doc;
    doc["x1"] = x1;
    doc["J"] = blocks.size();
    doc["C0"] = C0;
    doc["l2_budget"] = l2_budget;
    json arr = json::array();
    for (const auto& b : blocks) {
        arr.push_back(json{{"log_x", b.log_x}, {"log_upper", b.log_upper}, {"a", b.a}});
    }
    doc["blocks"] = arr;
    doc["alpha_desc"] = json{
        {"formula", "(kappa1(X) + log(loglog X + 1/e) + C0) / sqrt(loglog X)"},
        {"envelope", "nonincreasing (sup over loglog Y >= loglog X)"},
        {"C0", C0},
        {"floor", AlphaFunction::kFloor},
    };
    doc["kappa_desc"] = json{
        {"spec", kappa_spec},
        {"loglog_max", loglog_max},
        {"grid_nodes", grid_nodes},
    };
    return doc.dump(2) + "\n";
}

ExtremalSpec ExtremalSpec::from_json(std::string_view text) {
    ExtremalSpec spec;
    try {
        const json doc = json::parse(text);
        spec.x1 = doc.at("x1").get<double>();
        spec.C0 = doc.value("C0", 1.0);
        spec.l2_budget = doc.value("l2_budget", kDefaultL2Budget);
        const auto J = doc.at("J").get<std::size_t>();
        for (const auto& b : doc.at("blocks")) {
            spec.blocks.push_back(
                {b.at("log_x").get<double>(), b.at("log_upper").get<double>(), b.at("a").get<double>()});
        }
        if (J != spec.blocks.size()) {
            fail(ErrorKind::Usage, "extremal spec J = " + std::to_string(J) + " but " +
                                       std::to_string(spec.blocks.size()) + " blocks listed");
        }
        if (doc.contains("kappa_desc")) {
            const auto& k = doc.at("kappa_desc");
            spec.kappa_spec = k.value("spec", std::string{});
            spec.loglog_max = k.value("loglog_max", 40.0);
            spec.grid_nodes = k.value("grid_nodes", std::size_t{4097});
        }
    } catch (const json::exception& e) {
        fail(ErrorKind::Usage, std::string("malformed extremal spec JSON: ") + e.what());
    }
    spec.validate();
    return spec;
}

std::string ExtremalSpec::hash() const {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : to_json()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

ExtremalSpec choose_blocks(const AlphaFunction& alpha, unsigned J, double x1, double l2_budget) {
    if (!(x1 >= 16.0)) fail(ErrorKind::Domain, "x1 must be >= 16 so that log log x1 >= 1");
    if (J < 1) fail(ErrorKind::Domain, "need at least one block");
    ExtremalSpec spec;
    spec.x1 = x1;
    spec.C0 = alpha.C0();
    spec.l2_budget = l2_budget;
    spec.kappa_spec = alpha.kappa_spec();
    spec.loglog_max = alpha.kappa().loglog_max();
    spec.grid_nodes = alpha.kappa().grid().size();

    double log_x = std::log(x1);
    for (unsigned j = 0; j < J; ++j) {
        const double log_upper = log_x * log_x;
        if (!std::isfinite(log_upper) || !std::isfinite(log_x)) {
            fail(ErrorKind::Capacity, "block " + std::to_string(j + 1) +
                                          " leaves the log-form range; maximal feasible J = " +
                                          std::to_string(j));
        }
        spec.blocks.push_back({log_x, log_upper, std::sqrt(alpha(std::log(log_upper)))});
        log_x = log_upper + 1.0;
    }
    if (spec.l2_sum() > l2_budget) {
        fail(ErrorKind::Verification, "sum of a_j^2 = " + format_double(spec.l2_sum()) +
                                          " exceeds the declared budget " + format_double(l2_budget));
    }
    spec.validate();
    return spec;
}

ExtremalSpec build_extremal_spec(const KappaDesc& kappa, double x1, unsigned J, double C0,
                                 double l2_budget, const KappaGrid& grid) {
    KappaFunction k = regularize_kappa(kappa, grid);
    const AlphaFunction alpha = alpha_from_kappa(k, C0, kappa.to_string());
    return choose_blocks(alpha, J, x1, l2_budget);
}

ExtremalSpec load_extremal_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Usage, "cannot open extremal spec '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return ExtremalSpec::from_json(buf.str());
}

void save_extremal_spec(const ExtremalSpec& spec, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Usage, "cannot write extremal spec '" + path + "'");
    out << spec.to_json();
}

bool in_sine_window(std::uint64_t p) { return -std::sin(std::log(double(p))) >= 0.5; }

int block_of(const ExtremalSpec& spec, std::uint64_t p) {
    const double lp = std::log(double(p));
    for (std::size_t j = 0; j < spec.blocks.size(); ++j) {
        if (lp >= spec.blocks[j].log_x && lp < spec.blocks[j].log_upper) return int(j);
    }
    return -1;
}

double theta_at(const ExtremalSpec& spec, std::uint64_t p) {
    if (p < 2) return 0.0;
    const int j = block_of(spec, p);
    if (j < 0 || !in_sine_window(p)) return 0.0;
    return spec.blocks[std::size_t(j)].a / std::sqrt(std::log(std::log(double(p))));
}

double reciprocal_prime_interval_bound(double log_a, double log_b) {
    if (!(log_a > 0.0) || !(log_b > log_a)) return 0.0;
    // Rosser-Schoenfeld: for x > 1,
    //   log log x + M - 1/(2 log^2 x) < sum_{p <= x} 1/p < log log x + M + 1/log^2 x.
    return std::log(log_b) - std::log(log_a) + 1.0 / (log_b * log_b) +
           1.0 / (2.0 * log_a * log_a);
}

MultiplicativeFunction extremal_function(const ExtremalSpec& spec) {
    spec.validate();
    auto shared = std::make_shared<const ExtremalSpec>(spec);
    auto rule = [shared](std::uint64_t p, unsigned k) {
        const Complex fp = -std::polar(1.0, theta_at(*shared, p));
        Complex v = fp;
        for (unsigned i = 1; i < k; ++i) v *= fp;
        return v;
    };
    // sum_{p > P} (1 - cos theta_p)/p <= sum_{p > P} theta_p^2 / (2p), block by block.
    auto tail = [shared](const HalaszDirection& d, std::uint64_t P) {
        if (d.epsilon0() != 1 || d.t0() != 0.0) return kUnknownTail;
        const double log_P = std::log(double(std::max<std::uint64_t>(P, 2)));
        double total = 0.0;
        for (const auto& b : shared->blocks) {
            const double lo = std::max(b.log_x - 1e-9, log_P);
            if (lo >= b.log_upper) continue;
            total += b.a * b.a / (2.0 * std::log(lo)) *
                     reciprocal_prime_interval_bound(lo, b.log_upper);
        }
        return total;
    };
    return MultiplicativeFunction("extremal:" + spec.hash(), std::move(rule),
                                  FunctionClass{true, true, false}, std::move(tail));
}

PsumReport verify_psum(const ExtremalSpec& spec, std::uint64_t P, const PrimeTable& table) {
    if (P > table.limit()) {
        fail(ErrorKind::Coverage, "psum cutoff " + std::to_string(P) + " beyond prime table limit " +
                                      std::to_string(table.limit()));
    }
    spec.validate();
    PsumReport r;
    r.cutoff = P;
    r.l2_sum = spec.l2_sum();

    const std::vector<std::uint64_t> marks = CheckpointGrid::default_grid().points(P);
    const std::size_t count = table.count_upto(double(P));
    CompensatedSum sum;
    std::size_t i = 0;
    for (std::uint64_t mark : marks) {
        for (; i < count && table[i] <= mark; ++i) {
            const double theta = theta_at(spec, table[i]);
            if (theta != 0.0) sum.add(theta * theta / double(table[i]));
        }
        r.partial_sums.push_back({mark, sum.value()});
    }
    r.observed = sum.value();

    const double log_P = std::log(double(P));
    for (const auto& b : spec.blocks) {
        const double loglog_x = std::log(b.log_x);
        double term = 0.0;
        if (b.log_x <= log_P) {
            const double top = std::min(std::exp(b.log_upper), double(P));
            term = b.a * b.a * sum_reciprocal_primes(top, table) / loglog_x;
        }
        r.block_terms.push_back(term);
        r.majorant += term;
        const double full_mertens = std::log(b.log_upper) + kMertensConstant +
                                    1.0 / (b.log_upper * b.log_upper);
        r.majorant_full += b.a * b.a * full_mertens / loglog_x;
    }
    return r;
}

std::string PsumReport::text() const {
    std::ostringstream os;
    os.precision(17);
    os << "psum_cutoff: " << cutoff << "\n";
    os << "psum_observed: " << observed << "\n";
    for (std::size_t j = 0; j < block_terms.size(); ++j) {
        os << "psum_block_term[" << j + 1 << "]: " << block_terms[j] << "\n";
    }
    os << "psum_majorant: " << majorant << "\n";
    os << "psum_majorant_full: " << majorant_full << "\n";
    os << "psum_l2_sum: " << l2_sum << "\n";
    os << "psum_four_l2: " << 4.0 * l2_sum << "\n";
    os << "psum_observed_le_majorant: " << (observed_within_majorant() ? "pass" : "FAIL") << "\n";
    os << "psum_majorant_le_full: " << (majorant_within_full() ? "pass" : "FAIL") << "\n";
    os << "psum_full_le_four_l2: " << (full_within_l2() ? "pass" : "FAIL") << "\n";
    return os.str();
}

LowerBoundReport verify_logF_lower(const ExtremalSpec& spec, std::size_t j,
                                   const TruncationPlan& plan, const PrimeTable& table) {
    if (j >= spec.blocks.size()) {
        fail(ErrorKind::Usage, "block index " + std::to_string(j + 1) + " out of range (J = " +
                                   std::to_string(spec.blocks.size()) + ")");
    }
    const Block& b = spec.blocks[j];
    if (b.log_upper > std::log(double(table.limit()))) {
        fail(ErrorKind::Coverage, "block " + std::to_string(j + 1) + " ends at exp(" +
                                      format_double(b.log_upper) + ") beyond prime table limit " +
                                      std::to_string(table.limit()));
    }
    LowerBoundReport r;
    r.block = j;
    r.sigma = 1.0 + 1.0 / (b.log_x * b.log_x);

    CompensatedSum window;
    CompensatedSum half;
    CompensatedSum plain;
    const std::size_t count = table.count_upto(std::exp(b.log_upper));
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t p = table[i];
        if (block_of(spec, p) != int(j)) continue;
        const double theta = theta_at(spec, p);
        if (theta == 0.0) continue;
        const double lp = std::log(double(p));
        const double weight = std::exp(-r.sigma * lp);
        window.add(theta * -std::sin(lp) * weight);
        half.add(0.5 * theta * weight);
        plain.add(weight);
        if (r.selected == 0) r.first_selected = p;
        r.last_selected = p;
        ++r.selected;
    }
    r.window_term = window.value();
    r.half_theta_sum = half.value();
    r.coarse_lower = b.a / (2.0 * std::sqrt(std::log(b.log_upper))) * plain.value();

    // Re log F = log |F|, with F from the Euler product anchored at 1/zeta(s):
    // f(p) = -1 off the windows, so the anchored tail is small.
    const MultiplicativeFunction f = extremal_function(spec);
    const EvalResult F =
        F_euler_product(f, ComplexPoint(r.sigma, 1.0), plan, table, HalaszDirection::zero());
    const double mag = std::abs(F.value);
    // F's bound is |F| ((1 + r) e^tau - 1) for a log-scale tail tau, so the
    // log-scale error is log1p(bound/|F|).
    r.re_log_F = std::log(mag);
    r.re_log_F_error = std::log1p(F.error_bound / mag);
    r.target = b.a * std::sqrt(std::log(b.log_x));
    return r;
}

std::string LowerBoundReport::text() const {
    std::ostringstream os;
    os.precision(17);
    os << "lower_block: " << block + 1 << "\n";
    os << "lower_sigma: " << sigma << "\n";
    os << "lower_t: 1\n";
    os << "lower_selected_primes: " << selected << "\n";
    os << "lower_first_selected: " << first_selected << "\n";
    os << "lower_last_selected: " << last_selected << "\n";
    os << "lower_window_term: " << window_term << "\n";
    os << "lower_half_theta_sum: " << half_theta_sum << "\n";
    os << "lower_coarse_bound: " << coarse_lower << "\n";
    os << "lower_selection_guarantee: " << (selection_guarantee() ? "pass" : "FAIL") << "\n";
    os << "lower_re_log_F: " << re_log_F << "\n";
    os << "lower_re_log_F_error: " << re_log_F_error << "\n";
    os << "lower_target_a_sqrt_loglog_x: " << target << " (reported, not asserted)\n";
    return os.str();
}

TaylorReport verify_taylor(const ExtremalSpec& spec, std::uint64_t P, const PrimeTable& table) {
    if (P > table.limit()) {
        fail(ErrorKind::Coverage, "taylor cutoff beyond prime table limit");
    }
    TaylorReport r;
    r.worst_slack = -std::numeric_limits<double>::infinity();
    const std::size_t count = table.count_upto(double(P));
    for (std::size_t i = 0; i < count; ++i) {
        const double theta = theta_at(spec, table[i]);
        if (theta == 0.0) continue;
        const Complex fp = -std::polar(1.0, theta);
        const double slack = std::abs(fp - Complex{-1.0, -theta}) - theta * theta / 2.0;
        r.worst_slack = std::max(r.worst_slack, slack);
        ++r.checked;
    }
    if (r.checked == 0) r.worst_slack = 0.0;
    return r;
}

}  // namespace mflab
