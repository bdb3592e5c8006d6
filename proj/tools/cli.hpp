// cli.hpp
// The mflab batch tool. run() never throws: failures go to `err` as
// "error:<kind>: message" and come back as exit codes
//   0 ok, 1 verification failed, 2 usage/domain, 3 capacity/coverage.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mflab::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// sigma grid "a:b:n[:geometric|linear]". Geometric spacing is in sigma - 1.
std::vector<double> parse_sigma_grid(const std::string& text);

}  // namespace mflab::cli
