#pragma once

#include <Eigen/Dense>

#include "zzbwave/grid.hpp"

namespace zzbwave {

// Sampled normalized autocorrelation on a lag grid; r[0] corresponds to lag 0
// and equals 1 for a normalized waveform.
struct AcfVector {
    Grid grid;
    Eigen::VectorXd r;

    AcfVector() = default;
    AcfVector(Grid g, Eigen::VectorXd r_) : grid(std::move(g)), r(std::move(r_)) {
        if (r.size() != grid.n) throw ArgumentError("AcfVector: length mismatch with grid");
    }
};

// DCT-IV coefficients of an AcfVector (discrete PSD) plus the band limit index.
struct Spectrum {
    Grid grid;
    Eigen::VectorXd coeffs;
    int b_dis = 0;

    Spectrum() = default;
    Spectrum(Grid g, Eigen::VectorXd c, int b_dis_)
        : grid(std::move(g)), coeffs(std::move(c)), b_dis(b_dis_) {
        if (coeffs.size() != grid.n) throw ArgumentError("Spectrum: length mismatch with grid");
        if (b_dis < 1 || b_dis > grid.n) throw ArgumentError("Spectrum: b_dis out of range");
    }
};

struct SpectralStats {
    double rms_bandwidth = 0.0;
    double total_power = 0.0;
    double mean_frequency = 0.0;
};

// Frequency of DCT-IV bin k (1-based), cycles per distance unit.
inline double freq_of_index(const Grid& g, int k) {
    return (2.0 * k - 1.0) / (4.0 * g.n * g.dx);
}

Spectrum dct_forward(const AcfVector& r, int b_dis);
AcfVector dct_inverse(const Spectrum& p);

// Flat spectrum over bins 1..b_dis, scaled so r[0] = 1.
AcfVector make_sinc_acf(const Grid& grid, int b_dis);

// Single spectral bin at b_dis, scaled so r[0] = 1.
AcfVector make_single_tone_acf(const Grid& grid, int b_dis);

// beta = sqrt(sum f_k^2 p_k / sum p_k) together with total power and mean frequency.
SpectralStats rms_bandwidth(const Spectrum& p);

// CRB = 1 / (8 pi^2 beta^2 SNR), distance^2 (propagation speed c = 1).
double crb(const Spectrum& p, double snr);

} // namespace zzbwave
