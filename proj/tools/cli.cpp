#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "mflab/csv.hpp"
#include "mflab/dirichlet.hpp"
#include "mflab/error.hpp"
#include "mflab/extremal.hpp"
#include "mflab/function_spec.hpp"
#include "mflab/halasz.hpp"
#include "mflab/multfun.hpp"
#include "mflab/primes.hpp"

namespace mflab::cli {

namespace {

double to_real(const std::string& text, const std::string& what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
        fail(ErrorKind::Usage, "malformed " + what + " '" + text + "'");
    }
    return v;
}

std::uint64_t to_count(const std::string& text, const std::string& what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        fail(ErrorKind::Usage, "malformed " + what + " '" + text + "'");
    }
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep)) parts.push_back(cur);
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

CheckpointGrid parse_grid(const std::string& text) {
    if (text == "default") return CheckpointGrid::default_grid();
    if (text == "dense") return CheckpointGrid::dense();
    if (text.starts_with("geometric:")) {
        const double r = to_real(text.substr(10), "grid ratio");
        if (!(r > 1.0)) fail(ErrorKind::Usage, "geometric grid ratio must exceed 1");
        return CheckpointGrid::geometric(r);
    }
    if (text.starts_with("explicit:")) {
        std::vector<std::uint64_t> pts;
        for (const auto& s : split(text.substr(9), ',')) pts.push_back(to_count(s, "grid point"));
        return CheckpointGrid::explicit_points(std::move(pts));
    }
    fail(ErrorKind::Usage, "grid '" + text + "' must be default, dense, geometric:<r> or explicit:<x1,x2,...>");
}

// Flags in the order given, as "key=value" words, for the provenance line.
class Provenance {
public:
    explicit Provenance(std::string subcommand) : text_("mflab " + std::move(subcommand)) {}
    template <class T>
    Provenance& add(const std::string& key, const T& value) {
        std::ostringstream os;
        os.precision(17);
        os << value;
        text_ += " " + key + "=" + os.str();
        return *this;
    }
    const std::string& str() const noexcept { return text_; }

private:
    std::string text_;
};

void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << content;
    } else {
        write_text_file(path, content);
    }
}

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Capacity:
        case ErrorKind::Coverage: return 3;
        case ErrorKind::Verification: return 1;
        default: return 2;
    }
}

TruncationPlan make_plan(std::uint64_t N, std::uint64_t P, std::uint64_t exact) {
    TruncationPlan plan{N, P, std::min(exact, P)};
    plan.validate();
    return plan;
}

struct Common {
    std::string function;
    std::string out;
    std::uint64_t prime_cutoff = 1'000'000;
    std::uint64_t series_cutoff = 1'000'000;
    std::uint64_t exact_cutoff = 10'000;
    std::string sigma = "1.001:1.5:20:geometric";
    double t = 0.0;
    double t0 = 0.0;
    int epsilon = -1;
};

int cmd_sum(const Common& c, std::uint64_t limit, const std::string& grid_text,
            std::uint64_t segment, unsigned threads, std::ostream& out) {
    const MultiplicativeFunction f = parse_function_spec(c.function);
    const CheckpointGrid grid = parse_grid(grid_text);
    SummatoryOptions opts;
    opts.segment_size = segment;
    opts.threads = threads;
    const SummatoryTrace trace = summatory_trace(f, limit, grid, opts);
    // Threads and segment size do not change the output; they stay out of the provenance.
    Provenance prov("sum");
    prov.add("function", c.function).add("limit", limit).add("grid", grid.describe());
    emit(c.out, trace_csv(trace, prov.str()), out);
    return 0;
}

int cmd_eval(const Common& c, const std::string& method, const std::string& anchor,
             std::ostream& out) {
    const MultiplicativeFunction f = parse_function_spec(c.function);
    const std::vector<double> sigmas = parse_sigma_grid(c.sigma);
    const TruncationPlan plan = make_plan(c.series_cutoff, c.prime_cutoff, c.exact_cutoff);
    std::optional<HalaszDirection> dir;
    if (anchor == "pole") dir = HalaszDirection::pole(c.t0);
    else if (anchor == "zero") dir = HalaszDirection::zero(c.t0);
    else if (anchor != "none") fail(ErrorKind::Usage, "--anchor must be none, pole or zero");

    std::vector<EvalRow> rows;
    if (method == "euler-product" || method == "log-prime-sum") {
        const PrimeTable table = sieve_primes(plan.prime_cutoff);
        for (double s : sigmas) {
            const ComplexPoint p(s, c.t);
            rows.push_back({s, c.t,
                            method == "euler-product"
                                ? F_euler_product(f, p, plan, table, dir)
                                : log_F_prime_sum(f, p, plan, table).as_log_F()});
        }
    } else if (method == "truncated") {
        const SpfTable spf = spf_table(plan.series_cutoff);
        for (double s : sigmas) rows.push_back({s, c.t, F_truncated(f, ComplexPoint(s, c.t), plan, spf)});
    } else if (method == "partial-summation") {
        const SummatoryTrace trace =
            summatory_trace(f, plan.series_cutoff, CheckpointGrid::dense());
        for (double s : sigmas) {
            rows.push_back({s, c.t,
                            F_partial_summation(trace, ComplexPoint(s, c.t), double(plan.series_cutoff))});
        }
    } else {
        fail(ErrorKind::Usage,
             "--method must be euler-product, log-prime-sum, truncated or partial-summation");
    }
    Provenance prov("eval-f");
    prov.add("function", c.function).add("method", method).add("sigma", c.sigma).add("t", c.t);
    if (method == "euler-product") prov.add("anchor", anchor).add("t0", c.t0);
    prov.add("N", plan.series_cutoff).add("P", plan.prime_cutoff).add("exact_cutoff", plan.exact_factor_cutoff);
    emit(c.out, eval_csv(rows, prov.str()), out);
    return 0;
}

int cmd_criterion(const Common& c, unsigned K, const std::string& csv_path, std::ostream& out) {
    const MultiplicativeFunction f = parse_function_spec(c.function);
    const PrimeTable table = sieve_primes(std::max<std::uint64_t>(c.prime_cutoff, 2));
    const CriterionReport report = criterion_report(f, c.t, c.prime_cutoff, K, table);
    Provenance prov("criterion");
    prov.add("function", c.function).add("t", c.t).add("P", c.prime_cutoff).add("k_max", K);
    emit(c.out, "# " + prov.str() + "\n" + report.text(), out);
    if (!csv_path.empty()) write_text_file(csv_path, pole_sum_csv(report.sum_side, prov.str()));
    return 0;
}

int cmd_lemma(const Common& c, std::ostream& out) {
    const MultiplicativeFunction f = parse_function_spec(c.function);
    const HalaszDirection dir(c.epsilon, c.t0);
    const TruncationPlan plan = make_plan(c.series_cutoff, c.prime_cutoff, c.exact_cutoff);
    const PrimeTable table = sieve_primes(plan.prime_cutoff);
    std::vector<LemmaDefect> rows;
    for (double s : parse_sigma_grid(c.sigma)) {
        rows.push_back(lemma_defect(f, dir, ComplexPoint(s, c.t), plan, table));
    }
    Provenance prov("lemma");
    prov.add("function", c.function).add("epsilon", c.epsilon).add("t0", c.t0).add("t", c.t)
        .add("sigma", c.sigma).add("P", plan.prime_cutoff).add("exact_cutoff", plan.exact_factor_cutoff);
    emit(c.out, lemma_csv(rows, prov.str()), out);
    return 0;
}

int cmd_thm1(const Common& c, std::ostream& out) {
    const MultiplicativeFunction f = parse_function_spec(c.function);
    const HalaszDirection dir(c.epsilon, c.t0);
    const TruncationPlan plan = make_plan(c.series_cutoff, c.prime_cutoff, c.exact_cutoff);
    const PrimeTable table = sieve_primes(plan.prime_cutoff);
    const auto rows = theorem1_ratio(f, dir, parse_sigma_grid(c.sigma), plan, table);
    Provenance prov("thm1");
    prov.add("function", c.function).add("epsilon", c.epsilon).add("t0", c.t0).add("sigma", c.sigma)
        .add("P", plan.prime_cutoff).add("exact_cutoff", plan.exact_factor_cutoff);
    emit(c.out, theorem1_csv(rows, prov.str()), out);
    return 0;
}

int cmd_thm2(const Common& c, const std::string& trace_path, std::uint64_t limit,
             const std::string& grid_text, double cval, std::ostream& out) {
    SummatoryTrace trace;
    Provenance prov("thm2");
    if (!trace_path.empty()) {
        trace = read_trace_csv(trace_path);
        prov.add("trace", trace_path);
    } else {
        if (c.function.empty()) fail(ErrorKind::Usage, "thm2 needs --function or --trace");
        if (limit < 16) fail(ErrorKind::Usage, "thm2 needs --limit >= 16");
        const CheckpointGrid grid = parse_grid(grid_text);
        trace = summatory_trace(parse_function_spec(c.function), limit, grid);
        prov.add("function", c.function).add("limit", limit).add("grid", grid.describe());
    }
    prov.add("c", cval);
    emit(c.out, theorem2_csv(theorem2_ratio(trace, cval), prov.str()), out);
    return 0;
}

int cmd_extremal_build(const std::string& kappa, double x1, unsigned J, double C0, double budget,
                       const std::string& path, std::ostream& out) {
    const ExtremalSpec spec = build_extremal_spec(KappaDesc::parse(kappa), x1, J, C0, budget);
    emit(path, spec.to_json(), out);
    return 0;
}

int cmd_extremal_verify(const std::string& path, std::uint64_t cutoff, const std::string& report_path,
                        std::ostream& out) {
    const ExtremalSpec spec = load_extremal_spec(path);
    const PrimeTable table = sieve_primes(std::max<std::uint64_t>(cutoff, 2));
    const MultiplicativeFunction f = extremal_function(spec);
    std::ostringstream os;
    os.precision(17);
    os << "# mflab extremal-verify spec=" << path << " cutoff=" << cutoff << "\n";
    os << "spec_hash: " << spec.hash() << "\n";
    os << "kappa: " << spec.kappa_spec << "\n";
    os << "kappa_sup_truncated_at_loglog: " << spec.loglog_max << "\n";
    os << "blocks: " << spec.J() << "\n";
    bool ok = true;

    const PsumReport psum = verify_psum(spec, cutoff, table);
    os << psum.text();
    ok = ok && psum.passes();

    const TaylorReport taylor = verify_taylor(spec, cutoff, table);
    os << "taylor_checked_primes: " << taylor.checked << "\n";
    os << "taylor_worst_slack: " << taylor.worst_slack << "\n";
    os << "taylor_remainder_bound: " << (taylor.passes() ? "pass" : "FAIL") << "\n";
    ok = ok && taylor.passes();

    const PoleSumSeries zero_sum = pole_sum(f, HalaszDirection::zero(), cutoff, table);
    const bool zero_ok = zero_sum.total() <= psum.observed / 2.0 + 1e-12;
    os << "zero_direction_pole_sum: " << zero_sum.total() << "\n";
    os << "zero_direction_le_half_psum: " << (zero_ok ? "pass" : "FAIL") << "\n";
    ok = ok && zero_ok;

    const ClassReport cls = class_check(f, std::min<std::uint64_t>(cutoff, 100'000));
    os << "class_M: " << (cls.in_M ? "pass" : "FAIL") << "\n";
    ok = ok && cls.in_M;

    const TruncationPlan plan = make_plan(cutoff, cutoff, 10'000);
    for (std::size_t j = 0; j < spec.J(); ++j) {
        if (spec.blocks[j].log_upper > std::log(double(cutoff))) {
            os << "lower_block_" << j + 1 << ": skipped (block ends beyond cutoff)\n";
            continue;
        }
        const LowerBoundReport lb = verify_logF_lower(spec, j, plan, table);
        os << lb.text();
        ok = ok && lb.selection_guarantee();
    }
    os << "verdict: " << (ok ? "pass" : "FAIL") << "\n";
    emit(report_path, os.str(), out);
    if (!ok) fail(ErrorKind::Verification, "extremal spec failed a mechanical check; see report");
    return 0;
}

}  // namespace

std::vector<double> parse_sigma_grid(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3 && parts.size() != 4) {
        fail(ErrorKind::Usage, "sigma grid '" + text + "' must be start:end:count[:geometric|linear]");
    }
    const double a = to_real(parts[0], "sigma start");
    const double b = to_real(parts[1], "sigma end");
    const std::uint64_t n = to_count(parts[2], "sigma count");
    const std::string spacing = parts.size() == 4 ? parts[3] : "geometric";
    if (!(a > 1.0) || !(b >= a) || n < 1 || (n == 1 && a != b)) {
        fail(ErrorKind::Usage, "sigma grid needs 1 < start <= end and count >= 1 (count 1 only if start = end)");
    }
    if (spacing != "geometric" && spacing != "linear") {
        fail(ErrorKind::Usage, "sigma spacing must be geometric or linear");
    }
    std::vector<double> out(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        const double w = n == 1 ? 0.0 : double(i) / double(n - 1);
        out[i] = spacing == "linear"
                     ? a + (b - a) * w
                     : 1.0 + (a - 1.0) * std::pow((b - 1.0) / (a - 1.0), w);
    }
    out.front() = a;
    out.back() = b;
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"mflab: numerical laboratory for multiplicative functions", "mflab"};
    app.require_subcommand(1);

    Common c;
    auto add_function = [&](CLI::App* sub, bool required = true) {
        auto* opt = sub->add_option("--function,-f", c.function,
                                    "one | moebius | liouville | odd_one | twist:<t>:<base> | extremal:<path>");
        if (required) opt->required();
    };
    auto add_out = [&](CLI::App* sub) {
        sub->add_option("--out,-o", c.out, "output file (default: stdout)");
    };
    auto add_plan = [&](CLI::App* sub) {
        sub->add_option("--prime-cutoff,-P", c.prime_cutoff, "prime cutoff P")->capture_default_str();
        sub->add_option("--exact-cutoff", c.exact_cutoff, "primes below use exact local logs")
            ->capture_default_str();
    };
    auto add_direction = [&](CLI::App* sub) {
        sub->add_option("--epsilon", c.epsilon, "-1 (pole) or +1 (zero)")->capture_default_str();
        sub->add_option("--t0", c.t0, "direction t0")->capture_default_str();
    };
    auto add_sigma = [&](CLI::App* sub) {
        sub->add_option("--sigma", c.sigma, "start:end:count[:geometric|linear]")->capture_default_str();
    };

    std::uint64_t limit = 0;
    std::string grid = "default";
    std::uint64_t segment = 1 << 16;
    unsigned threads = 1;
    auto* sum = app.add_subcommand("sum", "summatory trace S_f(x) as CSV");
    add_function(sum);
    add_out(sum);
    sum->add_option("--limit", limit, "largest x")->required();
    sum->add_option("--grid", grid, "default | dense | geometric:<r> | explicit:<x1,...>")->capture_default_str();
    sum->add_option("--segment", segment, "segment size (does not affect output)")->capture_default_str();
    sum->add_option("--threads", threads, "worker threads (does not affect output)")->capture_default_str();

    std::string method = "euler-product";
    std::string anchor = "none";
    auto* eval = app.add_subcommand("eval-f", "F(s) or log F(s) on a sigma grid as CSV");
    add_function(eval);
    add_out(eval);
    add_plan(eval);
    add_sigma(eval);
    eval->add_option("--t", c.t, "imaginary part of s")->capture_default_str();
    eval->add_option("--series-cutoff,-N", c.series_cutoff, "series cutoff N")->capture_default_str();
    eval->add_option("--method", method, "euler-product | log-prime-sum | truncated | partial-summation")
        ->capture_default_str();
    eval->add_option("--anchor", anchor, "none | pole | zero (euler-product only)")->capture_default_str();
    eval->add_option("--t0", c.t0, "anchor t0")->capture_default_str();

    unsigned K = 20;
    std::string csv_path;
    auto* crit = app.add_subcommand("criterion", "Halasz criterion report at t");
    add_function(crit);
    add_out(crit);
    crit->add_option("--t", c.t, "direction t")->capture_default_str();
    crit->add_option("--prime-cutoff,-P", c.prime_cutoff, "prime cutoff P")->capture_default_str();
    crit->add_option("--k-max", K, "test f(2^k) = -2^{ikt} for k <= K (0 skips)")->capture_default_str();
    crit->add_option("--csv", csv_path, "also write P,partial_sum CSV here");

    auto* lemma = app.add_subcommand("lemma", "prime-sum defect D on a sigma grid as CSV");
    add_function(lemma);
    add_out(lemma);
    add_plan(lemma);
    add_direction(lemma);
    add_sigma(lemma);
    lemma->add_option("--t", c.t, "imaginary part of s")->capture_default_str();

    auto* thm1 = app.add_subcommand("thm1", "|F|^{eps0}/(sigma-1) on a sigma grid as CSV");
    add_function(thm1);
    add_out(thm1);
    add_plan(thm1);
    add_direction(thm1);
    add_sigma(thm1);

    std::string trace_path;
    double cval = 1.0;
    std::uint64_t thm2_limit = 1'000'000;
    auto* thm2 = app.add_subcommand("thm2", "|S_f(x)| log x / (x exp(c sqrt(log log x))) as CSV");
    add_function(thm2, false);
    add_out(thm2);
    thm2->add_option("--trace", trace_path, "read S_f from a `sum` CSV instead of computing it");
    thm2->add_option("--limit", thm2_limit, "largest x")->capture_default_str();
    thm2->add_option("--grid", grid, "checkpoint grid")->capture_default_str();
    thm2->add_option("--c", cval, "constant c > 0")->capture_default_str();

    std::string kappa = "power:0.25";
    double x1 = 20.0, C0 = 1.0, budget = kDefaultL2Budget;
    unsigned J = 3;
    auto* build = app.add_subcommand("extremal-build", "construct an extremal spec as JSON");
    add_out(build);
    build->add_option("--kappa", kappa, "const:<c> | power:<e> | loglog-fraction:<c>")->capture_default_str();
    build->add_option("--x1", x1, "first block start, >= 16")->capture_default_str();
    build->add_option("--J", J, "number of blocks")->capture_default_str();
    build->add_option("--C0", C0, "slack constant")->capture_default_str();
    build->add_option("--l2-budget", budget, "declared bound on sum a_j^2")->capture_default_str();

    std::string spec_path;
    std::uint64_t cutoff = 100'000;
    auto* verify = app.add_subcommand("extremal-verify", "check the construction's mechanics");
    add_out(verify);
    verify->add_option("spec", spec_path, "spec JSON from extremal-build")->required();
    verify->add_option("--cutoff", cutoff, "prime cutoff")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error:usage: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*sum) return cmd_sum(c, limit, grid, segment, threads, out);
        if (*eval) return cmd_eval(c, method, anchor, out);
        if (*crit) return cmd_criterion(c, K, csv_path, out);
        if (*lemma) return cmd_lemma(c, out);
        if (*thm1) return cmd_thm1(c, out);
        if (*thm2) return cmd_thm2(c, trace_path, thm2_limit, grid, cval, out);
        if (*build) return cmd_extremal_build(kappa, x1, J, C0, budget, c.out, out);
        if (*verify) return cmd_extremal_verify(spec_path, cutoff, c.out, out);
    } catch (const Error& e) {
        err << "error:" << to_string(e.kind()) << ": " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::bad_alloc&) {
        err << "error:capacity: out of memory\n";
        return 3;
    }
    err << "error:usage: no subcommand\n";
    return 2;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace mflab::cli
