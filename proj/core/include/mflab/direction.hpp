// direction.hpp
// A Halasz direction (epsilon0, t0): epsilon0 = -1 probes a pole-like point
// 1 + i t0 of F, epsilon0 = +1 a zero-like one.

#pragma once

#include <string>

#include "mflab/error.hpp"

namespace mflab {

class HalaszDirection {
public:
    HalaszDirection(int epsilon0, double t0) : epsilon0_(epsilon0), t0_(t0) {
        if (epsilon0 != 1 && epsilon0 != -1) {
            fail(ErrorKind::Domain, "epsilon0 must be +1 or -1, got " + std::to_string(epsilon0));
        }
    }

    int epsilon0() const noexcept { return epsilon0_; }
    double t0() const noexcept { return t0_; }

    static HalaszDirection pole(double t0 = 0.0) { return {-1, t0}; }
    static HalaszDirection zero(double t0 = 0.0) { return {1, t0}; }

    friend bool operator==(const HalaszDirection&, const HalaszDirection&) = default;

private:
    int epsilon0_;
    double t0_;
};

}  // namespace mflab
