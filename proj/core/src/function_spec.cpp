#include "mflab/function_spec.hpp"

#include <charconv>
#include <cmath>

#include "mflab/error.hpp"
#include "mflab/extremal.hpp"

namespace mflab {

namespace {

// Pole tail that vanishes in exactly one direction. `two_term` is the p = 2
// contribution, for functions whose only deviation sits at p = 2.
PoleTailBound exact_direction(int epsilon0, double two_term = 0.0) {
    return [epsilon0, two_term](const HalaszDirection& d, std::uint64_t P) {
        if (d.epsilon0() != epsilon0 || d.t0() != 0.0) return kUnknownTail;
        return P < 2 ? two_term : 0.0;
    };
}

double parse_real(std::string_view text) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
        fail(ErrorKind::Usage, "malformed number '" + std::string(text) + "' in function spec; valid specs: " +
                                   valid_function_specs());
    }
    return v;
}

void expect_params(std::string_view name, const std::vector<double>& params, std::size_t n) {
    if (params.size() != n) {
        fail(ErrorKind::Usage, "builtin '" + std::string(name) + "' takes " + std::to_string(n) +
                                   " parameter(s), got " + std::to_string(params.size()));
    }
}

}  // namespace

std::vector<std::string> builtin_names() {
    return {"one", "moebius", "liouville", "odd_one", "twist", "extremal-ref"};
}

std::string valid_function_specs() {
    return "one, moebius, liouville, odd_one, twist:<t>:<base>, extremal:<path>";
}

MultiplicativeFunction builtin(std::string_view name, const std::vector<double>& params) {
    if (name == "one") {
        expect_params(name, params, 0);
        return MultiplicativeFunction(
            "one", [](std::uint64_t, unsigned) { return Complex{1.0, 0.0}; },
            FunctionClass{true, true, false}, exact_direction(-1));
    }
    if (name == "moebius") {
        expect_params(name, params, 0);
        return MultiplicativeFunction(
            "moebius", [](std::uint64_t, unsigned k) { return Complex{k == 1 ? -1.0 : 0.0, 0.0}; },
            FunctionClass{false, true, false}, exact_direction(1));
    }
    if (name == "liouville") {
        expect_params(name, params, 0);
        return MultiplicativeFunction(
            "liouville", [](std::uint64_t, unsigned k) { return Complex{k % 2 ? -1.0 : 1.0, 0.0}; },
            FunctionClass{true, true, false}, exact_direction(1));
    }
    if (name == "odd_one") {
        expect_params(name, params, 0);
        return MultiplicativeFunction(
            "odd_one", [](std::uint64_t p, unsigned) { return Complex{p == 2 ? 0.0 : 1.0, 0.0}; },
            FunctionClass{false, true, true}, exact_direction(-1, 0.5));
    }
    if (name == "twist") {
        expect_params(name, params, 1);
        if (!std::isfinite(params[0])) fail(ErrorKind::Usage, "twist parameter must be finite");
        return twist(builtin("one"), params[0]);
    }
    if (name == "extremal-ref") {
        if (!params.empty()) expect_params(name, params, 3);
        const double x1 = params.empty() ? 20.0 : params[0];
        const double J = params.empty() ? 3.0 : params[1];
        const double C0 = params.empty() ? 1.0 : params[2];
        if (!(J >= 1.0) || J != std::floor(J)) fail(ErrorKind::Usage, "extremal-ref J must be a positive integer");
        return extremal_function(
            build_extremal_spec(KappaDesc::parse("power:0.25"), x1, unsigned(J), C0));
    }
    fail(ErrorKind::Usage, "unknown builtin '" + std::string(name) +
                               "'; expected one, moebius, liouville, odd_one, twist or extremal-ref");
}

MultiplicativeFunction parse_function_spec(std::string_view text) {
    if (text == "one" || text == "moebius" || text == "liouville" || text == "odd_one") {
        return builtin(text);
    }
    if (text.starts_with("twist:")) {
        const std::string_view rest = text.substr(6);
        const auto colon = rest.find(':');
        if (colon == std::string_view::npos) {
            fail(ErrorKind::Usage, "twist needs twist:<t>:<base>; valid specs: " + valid_function_specs());
        }
        const double t = parse_real(rest.substr(0, colon));
        return twist(parse_function_spec(rest.substr(colon + 1)), t);
    }
    if (text.starts_with("extremal:")) {
        const std::string path(text.substr(9));
        if (path.empty()) fail(ErrorKind::Usage, "extremal:<path> needs a path; valid specs: " + valid_function_specs());
        return extremal_function(load_extremal_spec(path));
    }
    fail(ErrorKind::Usage, "unknown function spec '" + std::string(text) +
                               "'; valid specs: " + valid_function_specs());
}

}  // namespace mflab
