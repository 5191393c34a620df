#include "zzbwave/spectrum.hpp"

#include <cmath>

#include "zzbwave/dct.hpp"
#include "zzbwave/errors.hpp"

namespace zzbwave {

Spectrum dct_forward(const AcfVector& r, int b_dis) {
    return Spectrum(r.grid, dct4(r.r), b_dis);
}

AcfVector dct_inverse(const Spectrum& p) {
    return AcfVector(p.grid, dct4(p.coeffs));
}

AcfVector make_sinc_acf(const Grid& grid, int b_dis) {
    if (b_dis < 1 || b_dis > grid.n)
        throw ArgumentError("make_sinc_acf: b_dis out of range");
    Eigen::VectorXd p = Eigen::VectorXd::Zero(grid.n);
    p.head(b_dis).setOnes();
    Eigen::VectorXd r = dct4(p);
    if (!(r[0] > 0.0)) throw NumericalError("make_sinc_acf: nonpositive peak");
    r /= r[0];
    return AcfVector(grid, std::move(r));
}

AcfVector make_single_tone_acf(const Grid& grid, int b_dis) {
    if (b_dis < 1 || b_dis > grid.n)
        throw ArgumentError("make_single_tone_acf: b_dis out of range");
    Eigen::VectorXd p = Eigen::VectorXd::Zero(grid.n);
    p[b_dis - 1] = 1.0;
    Eigen::VectorXd r = dct4(p);
    if (!(r[0] > 0.0)) throw NumericalError("make_single_tone_acf: nonpositive peak");
    r /= r[0];
    return AcfVector(grid, std::move(r));
}

SpectralStats rms_bandwidth(const Spectrum& p) {
    double total = 0.0, m1 = 0.0, m2 = 0.0;
    for (int k = 0; k < p.grid.n; ++k) {
        const double pk = p.coeffs[k];
        if (pk < 0.0 && pk > -1e-12) continue;
        if (pk < 0.0) throw ArgumentError("rms_bandwidth: negative spectral coefficient");
        const double fk = freq_of_index(p.grid, k + 1);
        total += pk;
        m1 += fk * pk;
        m2 += fk * fk * pk;
    }
    if (!(total > 0.0)) throw DegenerateSpectrumError("rms_bandwidth: zero total power");
    SpectralStats s;
    s.total_power = total;
    s.mean_frequency = m1 / total;
    s.rms_bandwidth = std::sqrt(m2 / total);
    return s;
}

double crb(const Spectrum& p, double snr) {
    if (!(snr > 0.0)) throw ArgumentError("crb: need snr > 0");
    const SpectralStats s = rms_bandwidth(p);
    const double beta2 = s.rms_bandwidth * s.rms_bandwidth;
    if (!(beta2 > 0.0)) throw DegenerateSpectrumError("crb: zero RMS bandwidth");
    return 1.0 / (8.0 * M_PI * M_PI * beta2 * snr);
}

} // namespace zzbwave
