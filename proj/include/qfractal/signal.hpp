#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace qfractal {

enum class AxisKind { space, time, trajectory, synthetic };

const char* to_string(AxisKind kind);

struct Axis {
    AxisKind kind = AxisKind::synthetic;
    double start = 0.0;
    double step = 1.0;
};

/// Real curve sampled at 2^M uniform points. The constructor enforces the
/// power-of-two length and finiteness of every value.
class SampledSignal {
public:
    SampledSignal(std::vector<double> values, Axis axis, std::string label = {});

    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    int dyadic_exponent() const { return exponent_; }
    const Axis& axis() const { return axis_; }
    const std::string& label() const { return label_; }

    double operator[](std::size_t i) const { return values_[i]; }
    double axis_value(std::size_t i) const { return axis_.start + axis_.step * static_cast<double>(i); }

private:
    std::vector<double> values_;
    Axis axis_;
    std::string label_;
    int exponent_ = 0;
};

/// Returns M when n == 2^M, otherwise -1.
int dyadic_exponent_of(std::size_t n);

}  // namespace qfractal
