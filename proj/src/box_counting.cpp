#include <algorithm>
#include <cmath>

#include "qfractal/dimension.hpp"
#include "qfractal/error.hpp"

namespace qfractal {

BoxCountEstimate box_counting_dimension(const SampledSignal& signal, int drop_coarse, int drop_fine) {
    const int m = signal.dyadic_exponent();
    if (m < 8) throw ValidationError("box counting needs at least 2^8 samples");
    const auto& v = signal.values();
    const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
    const double lo = *lo_it;
    const double range = *hi_it - lo;

    BoxCountEstimate out;
    out.k_min = 1 + drop_coarse;
    out.k_max = m - drop_fine;
    if (out.k_max - out.k_min < 2) throw InsufficientScalesError("box counting window has fewer than 3 sizes");
    if (!(range > 0.0)) {
        // a flat graph is covered by one row of boxes at every size
        out.counts.resize(static_cast<std::size_t>(m) + 1);
        for (int k = 0; k <= m; ++k) out.counts[static_cast<std::size_t>(k)] = std::ldexp(1.0, k);
        return out;
    }

    const std::size_t n = v.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = (v[i] - lo) / range;

    out.counts.resize(static_cast<std::size_t>(m) + 1);
    for (int k = 0; k <= m; ++k) {
        const auto boxes = static_cast<long long>(1) << k;
        const std::size_t width = n >> k;
        double total = 0.0;
        for (long long c = 0; c < boxes; ++c) {
            const std::size_t begin = static_cast<std::size_t>(c) * width;
            // include the first sample of the next column so the interpolated graph is covered
            const std::size_t end = std::min(n, begin + width + 1);
            const auto [a, b] = std::minmax_element(y.begin() + static_cast<std::ptrdiff_t>(begin),
                                                    y.begin() + static_cast<std::ptrdiff_t>(end));
            const auto row = [&](double val) {
                return std::min(static_cast<long long>(std::floor(val * static_cast<double>(boxes))), boxes - 1);
            };
            total += static_cast<double>(row(*b) - row(*a) + 1);
        }
        out.counts[static_cast<std::size_t>(k)] = total;
    }

    const auto npts = static_cast<double>(out.k_max - out.k_min + 1);
    double mx = 0.0;
    double my = 0.0;
    for (int k = out.k_min; k <= out.k_max; ++k) {
        mx += k;
        my += std::log2(out.counts[static_cast<std::size_t>(k)]);
    }
    mx /= npts;
    my /= npts;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (int k = out.k_min; k <= out.k_max; ++k) {
        const double dy = std::log2(out.counts[static_cast<std::size_t>(k)]) - my;
        sxx += (k - mx) * (k - mx);
        sxy += (k - mx) * dy;
        syy += dy * dy;
    }
    out.dimension = sxy / sxx;
    const double ssr = std::max(0.0, syy - out.dimension * sxy);
    out.stderr_ = std::sqrt(ssr / (npts - 2.0) / sxx);
    out.r2 = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
    return out;
}

}  // namespace qfractal
