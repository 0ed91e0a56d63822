#pragma once

// Recurrence-based evaluation of psi and d_x psi. Spatial harmonics and
// eigenphases are advanced by complex rotation inside blocks of kBlock terms,
// and the block seeds by a coarser rotation across blocks, so rounding grows
// with kBlock + N / kBlock rather than N. kLanes blocks are advanced together
// (coefficients stored lane-interleaved) so the inner loop vectorizes.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "qfractal/well.hpp"

namespace qfractal::detail {

inline constexpr std::size_t kBlock = 32;
inline constexpr std::size_t kLanes = 8;

struct Field {
    complex psi;
    complex dpsi;
};

/// exp(-i n^2 a) for n = 1..count written into out[0..count).
inline void phase_table(double a, std::size_t count, complex* out) {
    for (std::size_t start = 0; start < count; start += kBlock) {
        const double n0 = static_cast<double>(start + 1);
        double zr = std::cos(n0 * n0 * a), zi = -std::sin(n0 * n0 * a);
        double wr = std::cos((2.0 * n0 + 1.0) * a), wi = -std::sin((2.0 * n0 + 1.0) * a);
        const double rr = std::cos(2.0 * a), ri = -std::sin(2.0 * a);
        const std::size_t end = std::min(count, start + kBlock);
        for (std::size_t k = start; k < end; ++k) {
            out[k] = {zr, zi};
            const double nzr = zr * wr - zi * wi;
            zi = zr * wi + zi * wr;
            zr = nzr;
            const double nwr = wr * rr - wi * ri;
            wi = wr * ri + wi * rr;
            wr = nwr;
        }
    }
}

class FieldEvaluator {
public:
    explicit FieldEvaluator(const SpectralState& state)
        : coeffs_(state.coefficients()),
          length_(state.config().length),
          phase_rate_(state.config().ground_energy() / state.config().hbar),
          norm_(std::sqrt(2.0 / state.config().length)) {
        const std::size_t count = coeffs_.size();
        groups_ = (count + kGroup - 1) / kGroup;
        re_.assign(groups_ * kGroup, 0.0);
        im_.assign(groups_ * kGroup, 0.0);
        // lane-interleaved: term n = g*kGroup + l*kBlock + j + 1 lives at g*kGroup + j*kLanes + l
        for (std::size_t k = 0; k < count; ++k) {
            const std::size_t g = k / kGroup, r = k % kGroup;
            const std::size_t idx = g * kGroup + (r % kBlock) * kLanes + r / kBlock;
            re_[idx] = coeffs_[k].real();
            im_[idx] = coeffs_[k].imag();
        }
    }

    /// psi and d_x psi at (x, t).
    Field at(double x, double t) const {
        const double theta = std::numbers::pi * (x / length_ + 0.5);
        const double a = phase_rate_ * t;
        const double rot_r = std::cos(theta), rot_i = std::sin(theta);
        const double pr = std::cos(2.0 * a), pi_ = -std::sin(2.0 * a);

        // Block-start seeds by a second rotation recurrence over blocks of K terms:
        //   harm(n0 + K)  = harm(n0) rot^K
        //   z(n0 + K)     = z(n0) W,   W advances by exp(-2 i K^2 a)
        //   w(n0 + K)     = w(n0) exp(-2 i K a)
        const double K = static_cast<double>(kBlock);
        const complex rot_k = std::polar(1.0, K * theta);
        const complex w_step = std::polar(1.0, -2.0 * K * a);
        const complex big_step = std::polar(1.0, -2.0 * K * K * a);
        complex harm = std::polar(1.0, theta);
        complex z = std::polar(1.0, -a);
        complex w = std::polar(1.0, -3.0 * a);
        complex big = std::polar(1.0, -(2.0 * K + K * K) * a);

        alignas(64) double psi_r[kLanes] = {}, psi_i[kLanes] = {}, dpsi_r[kLanes] = {}, dpsi_i[kLanes] = {};
        alignas(64) double hr[kLanes], hi[kLanes], zr[kLanes], zi[kLanes], wr[kLanes], wi[kLanes], nn[kLanes];
        for (std::size_t g = 0; g < groups_; ++g) {
            for (std::size_t l = 0; l < kLanes; ++l) {
                hr[l] = harm.real();
                hi[l] = harm.imag();
                zr[l] = z.real();
                zi[l] = z.imag();
                wr[l] = w.real();
                wi[l] = w.imag();
                nn[l] = static_cast<double>(g * kGroup + l * kBlock + 1);
                harm = cmul(harm, rot_k);
                z = cmul(z, big);
                big = cmul(big, big_step);
                w = cmul(w, w_step);
            }
            const double* cre = re_.data() + g * kGroup;
            const double* cim = im_.data() + g * kGroup;
            for (std::size_t j = 0; j < kBlock; ++j) {
#pragma omp simd
                for (std::size_t l = 0; l < kLanes; ++l) {
                    const double cr = cre[j * kLanes + l], ci = cim[j * kLanes + l];
                    // b = c_n exp(-i n^2 a)
                    const double br = cr * zr[l] - ci * zi[l];
                    const double bi = cr * zi[l] + ci * zr[l];
                    psi_r[l] += br * hi[l];
                    psi_i[l] += bi * hi[l];
                    const double nc = nn[l] * hr[l];
                    dpsi_r[l] += br * nc;
                    dpsi_i[l] += bi * nc;

                    const double nhr = hr[l] * rot_r - hi[l] * rot_i;
                    hi[l] = hr[l] * rot_i + hi[l] * rot_r;
                    hr[l] = nhr;
                    const double nzr = zr[l] * wr[l] - zi[l] * wi[l];
                    zi[l] = zr[l] * wi[l] + zi[l] * wr[l];
                    zr[l] = nzr;
                    const double nwr = wr[l] * pr - wi[l] * pi_;
                    wi[l] = wr[l] * pi_ + wi[l] * pr;
                    wr[l] = nwr;
                    nn[l] += 1.0;
                }
            }
        }
        double sr = 0.0, si = 0.0, dr = 0.0, di = 0.0;
        for (std::size_t l = 0; l < kLanes; ++l) {
            sr += psi_r[l];
            si += psi_i[l];
            dr += dpsi_r[l];
            di += dpsi_i[l];
        }
        const double scale = std::numbers::pi / length_;
        return {norm_ * complex{sr, si}, norm_ * scale * complex{dr, di}};
    }

    /// psi at x for time-evolved coefficients b_n = c_n exp(-i E_n t / hbar).
    complex psi_from(const std::vector<complex>& evolved, double x) const {
        const double theta = std::numbers::pi * (x / length_ + 0.5);
        const double rot_r = std::cos(theta), rot_i = std::sin(theta);
        double psi_r = 0.0, psi_i = 0.0;
        const std::size_t count = evolved.size();
        for (std::size_t start = 0; start < count; start += kBlock) {
            const double n0 = static_cast<double>(start + 1);
            double hr = std::cos(n0 * theta), hi = std::sin(n0 * theta);
            const std::size_t end = std::min(count, start + kBlock);
            for (std::size_t k = start; k < end; ++k) {
                psi_r += evolved[k].real() * hi;
                psi_i += evolved[k].imag() * hi;
                const double nhr = hr * rot_r - hi * rot_i;
                hi = hr * rot_i + hi * rot_r;
                hr = nhr;
            }
        }
        return norm_ * complex{psi_r, psi_i};
    }

    std::vector<complex> evolved(double t) const {
        std::vector<complex> out(coeffs_.size());
        phase_table(phase_rate_ * t, coeffs_.size(), out.data());
        for (std::size_t k = 0; k < coeffs_.size(); ++k) out[k] *= coeffs_[k];
        return out;
    }

private:
    static constexpr std::size_t kGroup = kBlock * kLanes;

    static complex cmul(complex a, complex b) {
        return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
    }

    std::vector<complex> coeffs_;
    std::vector<double> re_;
    std::vector<double> im_;
    std::size_t groups_ = 0;
    double length_;
    double phase_rate_;
    double norm_;
};

}  // namespace qfractal::detail
