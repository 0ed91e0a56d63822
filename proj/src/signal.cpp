#include "qfractal/signal.hpp"

#include <cmath>

#include "qfractal/error.hpp"

namespace qfractal {

const char* to_string(AxisKind kind) {
    switch (kind) {
        case AxisKind::space: return "space";
        case AxisKind::time: return "time";
        case AxisKind::trajectory: return "trajectory";
        case AxisKind::synthetic: return "synthetic";
    }
    return "unknown";
}

int dyadic_exponent_of(std::size_t n) {
    if (n == 0 || (n & (n - 1)) != 0) return -1;
    int m = 0;
    while ((std::size_t{1} << m) < n) ++m;
    return m;
}

SampledSignal::SampledSignal(std::vector<double> values, Axis axis, std::string label)
    : values_(std::move(values)), axis_(axis), label_(std::move(label)) {
    exponent_ = dyadic_exponent_of(values_.size());
    if (exponent_ < 0) {
        throw ValidationError("sampled signal length " + std::to_string(values_.size()) +
                              " is not a power of two");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw ValidationError("sampled signal contains a non-finite value");
    }
}

}  // namespace qfractal
