#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library: each oracle re-derives its quantity by a different route
// (quadrature instead of closed forms, dense matrices instead of filter
// cascades, long double direct sums instead of recurrences).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

namespace oracle {

using ld = long double;
constexpr ld kPi = 3.141592653589793238462643383279502884L;

// ---- quadrature --------------------------------------------------------------

/// Composite Gauss-Legendre (5 nodes) over [a, b] with `panels` panels.
inline ld integrate(const std::function<ld(ld)>& f, ld a, ld b, int panels) {
    static const ld xs[5] = {0.0L, -0.5384693101056830910363144207002088L, 0.5384693101056830910363144207002088L,
                             -0.9061798459386639927976268782993930L, 0.9061798459386639927976268782993930L};
    static const ld ws[5] = {0.5688888888888888888888888888888889L, 0.4786286704993664680412915148356382L,
                             0.4786286704993664680412915148356382L, 0.2369268850561890875144385241979621L,
                             0.2369268850561890875144385241979621L};
    const ld h = (b - a) / panels;
    ld sum = 0.0L;
    for (int p = 0; p < panels; ++p) {
        const ld mid = a + (p + 0.5L) * h;
        for (int k = 0; k < 5; ++k) sum += ws[k] * f(mid + 0.5L * h * xs[k]);
    }
    return 0.5L * h * sum;
}

struct SquareSpec {
    double center, width;
    std::complex<double> amplitude;
};

/// <phi_n | psi_0> for a superposition of normalized squares, by quadrature
/// over each square (integrand is smooth there). L = 1.
inline std::complex<ld> square_overlap(const std::vector<SquareSpec>& squares, int n) {
    ld norm = 0.0L;
    for (const auto& s : squares) norm += std::norm(std::complex<ld>(s.amplitude.real(), s.amplitude.imag()));
    norm = std::sqrt(norm);
    std::complex<ld> c = 0.0L;
    for (const auto& s : squares) {
        const ld a = s.center - 0.5L * s.width, b = s.center + 0.5L * s.width;
        const ld height = 1.0L / std::sqrt(static_cast<ld>(s.width));
        const ld v = integrate([&](ld x) { return std::sqrt(2.0L) * std::sin(n * kPi * (x + 0.5L)) * height; }, a, b,
                               std::max(64, 8 * n));
        c += std::complex<ld>(s.amplitude.real(), s.amplitude.imag()) / norm * v;
    }
    return c;
}

// ---- direct field sums -----------------------------------------------------

struct Field {
    std::complex<ld> psi, dpsi;
};

/// Psi and d_x Psi by direct long double summation; L = hbar = m = 1.
inline Field field(const std::vector<std::complex<double>>& c, ld x, ld t) {
    Field f{0.0L, 0.0L};
    const ld e1 = kPi * kPi / 2.0L;
    for (std::size_t k = 0; k < c.size(); ++k) {
        const ld n = static_cast<ld>(k + 1);
        const ld arg = n * kPi * (x + 0.5L);
        const ld ph = -n * n * e1 * t;
        const std::complex<ld> cn(c[k].real(), c[k].imag());
        const std::complex<ld> rot(std::cos(ph), std::sin(ph));
        f.psi += cn * rot * (std::sqrt(2.0L) * std::sin(arg));
        f.dpsi += cn * rot * (std::sqrt(2.0L) * n * kPi * std::cos(arg));
    }
    return f;
}

inline ld density(const std::vector<std::complex<double>>& c, ld x, ld t) { return std::norm(field(c, x, t).psi); }

inline ld current(const std::vector<std::complex<double>>& c, ld x, ld t) {
    const Field f = field(c, x, t);
    return (std::conj(f.psi) * f.dpsi).imag();
}

/// Revival period as the least common multiple of the pairwise beat periods
/// 2 pi / (E_n - E_m), found by searching the smallest integer q with all
/// (n^2 - m^2) q / D integral for D = the smallest positive gap. L = 1.
inline double revival_by_beats(const std::vector<int>& occupied) {
    // period of e^{-i (n^2 - n0^2) E1 t} is 2 pi / ((n^2 - n0^2) E1); the common
    // period is 2 pi / (E1 g) where g divides all gaps. Brute-force g.
    const int n0 = occupied.front();
    long long best = 0;
    long long gmax = 0;
    for (int n : occupied) gmax = std::max<long long>(gmax, 1LL * n * n - 1LL * n0 * n0);
    for (long long g = gmax; g >= 1; --g) {
        bool divides = true;
        for (int n : occupied) {
            if ((1LL * n * n - 1LL * n0 * n0) % g != 0) {
                divides = false;
                break;
            }
        }
        if (divides) {
            best = g;
            break;
        }
    }
    const double e1 = static_cast<double>(kPi * kPi / 2.0L);
    return 2.0 * static_cast<double>(kPi) / (e1 * static_cast<double>(best));
}

// ---- dense wavelet matrix --------------------------------------------------

/// One analysis level as an explicit n x n matrix: rows 0..n/2-1 lowpass,
/// rows n/2..n-1 highpass, periodic wrap.
inline std::vector<std::vector<double>> analysis_matrix(const std::vector<double>& h, std::size_t n) {
    const std::size_t K = h.size();
    std::vector<double> g(K);
    for (std::size_t k = 0; k < K; ++k) g[k] = ((k % 2) ? -1.0 : 1.0) * h[K - 1 - k];
    std::vector<std::vector<double>> W(n, std::vector<double>(n, 0.0));
    for (std::size_t r = 0; r < n / 2; ++r) {
        for (std::size_t m = 0; m < K; ++m) {
            W[r][(2 * r + m) % n] += h[m];
            W[n / 2 + r][(2 * r + m) % n] += g[m];
        }
    }
    return W;
}

inline std::vector<double> matvec(const std::vector<std::vector<double>>& W, const std::vector<double>& x) {
    std::vector<double> y(W.size(), 0.0);
    for (std::size_t i = 0; i < W.size(); ++i) {
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += W[i][j] * x[j];
    }
    return y;
}

/// Level energies (finest first) of the full cascade built from dense matrices.
inline std::vector<double> level_energies(const std::vector<double>& h, std::vector<double> x, int levels) {
    std::vector<double> out;
    for (int j = 0; j < levels; ++j) {
        const auto y = matvec(analysis_matrix(h, x.size()), x);
        const std::size_t half = x.size() / 2;
        double e = 0.0;
        for (std::size_t i = half; i < y.size(); ++i) e += y[i] * y[i];
        out.push_back(e);
        x.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(half));
    }
    return out;
}

// ---- regression ------------------------------------------------------------

struct Line {
    double slope, intercept, slope_stderr, r2;
};

/// OLS via the normal equations in long double.
inline Line ols(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    ld sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += static_cast<ld>(x[i]) * x[i];
        sxy += static_cast<ld>(x[i]) * y[i];
    }
    const ld det = n * sxx - sx * sx;
    const ld b = (n * sxy - sx * sy) / det;
    const ld a = (sy - b * sx) / n;
    ld sse = 0, sst = 0;
    const ld ybar = sy / n;
    for (std::size_t i = 0; i < n; ++i) {
        const ld r = y[i] - (a + b * x[i]);
        sse += r * r;
        sst += (y[i] - ybar) * (y[i] - ybar);
    }
    const ld var = n > 2 ? sse / (n - 2) : 0.0L;
    const ld se = std::sqrt(var * n / det);
    return {static_cast<double>(b), static_cast<double>(a), static_cast<double>(se),
            static_cast<double>(sst > 0 ? 1.0L - sse / sst : 1.0L)};
}

// ---- misc --------------------------------------------------------------------

/// splitmix64 stream mapped to uniform doubles in [0, 1).
class Uniform {
public:
    explicit Uniform(std::uint64_t seed) : s_(seed) {}
    double operator()() {
        std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    }
    double gauss() {  // Box-Muller
        const double u1 = std::max((*this)(), 1e-300), u2 = (*this)();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * static_cast<double>(kPi) * u2);
    }

private:
    std::uint64_t s_;
};

inline std::vector<double> noise(std::size_t n, std::uint64_t seed) {
    Uniform u(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = u.gauss();
    return v;
}

}  // namespace oracle
