// function_spec.hpp
// Builtin multiplicative functions and the small text language the CLI uses
// to name them: one, moebius, liouville, odd_one, twist:<t>:<base>,
// extremal:<path>.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mflab/multfun.hpp"

namespace mflab {

// name is one of one, moebius, liouville, odd_one, twist, extremal-ref.
//   twist:        params = {t}, gives n^{-it}
//   extremal-ref: params = {} or {x1, J, C0}; kappa = power:0.25, defaults 20, 3, 1
MultiplicativeFunction builtin(std::string_view name, const std::vector<double>& params = {});

std::vector<std::string> builtin_names();

// Throws ErrorKind::Usage listing valid_function_specs() on anything unknown.
MultiplicativeFunction parse_function_spec(std::string_view text);

std::string valid_function_specs();

}  // namespace mflab
