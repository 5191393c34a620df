#include "zzbwave/zzb.hpp"

#include <cmath>

namespace zzbwave {

namespace {

constexpr double kGradGuard = 1e-12; // floor on u = SNR(1-r)/2 near the r = 1 singularity
constexpr double kSqrt2Pi = 2.5066282746310002;

} // namespace

double q_function(double z) {
    return 0.5 * std::erfc(z / M_SQRT2);
}

double zzb_objective(const AcfVector& r, SnrValue snr) {
    const Grid& g = r.grid;
    double acc = 0.0;
    for (int i = 0; i < g.n; ++i) {
        double u = 1.0 - r.r[i];
        if (u < 0.0) u = 0.0;
        acc += g.x[i] * q_function(std::sqrt(snr.linear * u / 2.0));
    }
    return g.dx * acc;
}

Eigen::VectorXd zzb_gradient(const AcfVector& r, SnrValue snr) {
    const Grid& g = r.grid;
    Eigen::VectorXd out(g.n);
    out[0] = 0.0;
    const double s = snr.linear;
    for (int i = 1; i < g.n; ++i) {
        double d = 1.0 - r.r[i];
        if (d < 0.0) d = 0.0;
        double u = s * d / 2.0;
        if (u < kGradGuard) u = kGradGuard;
        out[i] = g.dx * g.x[i] * (s / 4.0) * std::exp(-u / 2.0) / (kSqrt2Pi * std::sqrt(u));
    }
    return out;
}

Eigen::VectorXd zzb_hessian_diag(const AcfVector& r, SnrValue snr) {
    const Grid& g = r.grid;
    Eigen::VectorXd out(g.n);
    out[0] = 0.0;
    const double s = snr.linear;
    for (int i = 1; i < g.n; ++i) {
        double d = 1.0 - r.r[i];
        if (d < 0.0) d = 0.0;
        double u = s * d / 2.0;
        if (u < kGradGuard) u = kGradGuard;
        const double su = std::sqrt(u);
        out[i] = g.dx * g.x[i] * (s * s / 16.0) * std::exp(-u / 2.0) *
                 (1.0 / su + 1.0 / (u * su)) / kSqrt2Pi;
    }
    return out;
}

ZzbEval zzb_eval(const AcfVector& r, SnrValue snr) {
    ZzbEval e;
    e.value = zzb_objective(r, snr);
    e.gradient = zzb_gradient(r, snr);
    e.hessian_diag = zzb_hessian_diag(r, snr);
    return e;
}

std::vector<double> zzb_curve(const AcfVector& r, const std::vector<SnrValue>& snrs) {
    if (snrs.empty()) throw ArgumentError("zzb_curve: empty SNR list");
    std::vector<double> out;
    out.reserve(snrs.size());
    for (const auto& s : snrs) out.push_back(zzb_objective(r, s));
    return out;
}

} // namespace zzbwave
