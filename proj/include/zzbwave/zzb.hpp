#pragma once

#include <vector>

#include <Eigen/Dense>

#include "zzbwave/spectrum.hpp"

namespace zzbwave {

// Linear-scale SNR with dB conversion helpers.
struct SnrValue {
    double linear = 1.0;

    SnrValue() = default;
    explicit SnrValue(double linear_) : linear(linear_) {
        if (!(linear > 0.0)) throw ArgumentError("SnrValue: need linear > 0");
    }
    static SnrValue from_db(double db) { return SnrValue(std::pow(10.0, db / 10.0)); }
    double db() const { return 10.0 * std::log10(linear); }
};

struct ZzbEval {
    double value = 0.0;
    Eigen::VectorXd gradient;
    Eigen::VectorXd hessian_diag;
};

// Gaussian tail probability Q(z).
double q_function(double z);

// zeta(r) = dx * sum_i x_i Q( sqrt( SNR (1 - r_i) / 2 ) ).
double zzb_objective(const AcfVector& r, SnrValue snr);

// Analytic gradient of zzb_objective; entry 0 is pinned to 0.
Eigen::VectorXd zzb_gradient(const AcfVector& r, SnrValue snr);

// Diagonal of the Hessian of zzb_objective; entry 0 is pinned to 0.
Eigen::VectorXd zzb_hessian_diag(const AcfVector& r, SnrValue snr);

ZzbEval zzb_eval(const AcfVector& r, SnrValue snr);

std::vector<double> zzb_curve(const AcfVector& r, const std::vector<SnrValue>& snrs);

} // namespace zzbwave
