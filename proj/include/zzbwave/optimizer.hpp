#pragma once

#include <vector>

#include "zzbwave/projection.hpp"
#include "zzbwave/zzb.hpp"

namespace zzbwave {

struct ArmijoConfig {
    double c1 = 1e-4;
    double shrink = 0.5;
    double alpha_init = 1.0;
    int max_shrinks = 60;
};

struct DesignConfig {
    SnrValue snr_d;
    int b_dis = 40;
    double sigma = 0.0; // 0 selects 0.5 / max_i hessian_diag(r0)
    int max_iters = 500;
    ProjectionConfig projection{2000, 1e-11};
    ArmijoConfig armijo;
    double stop_tol = 1e-9;
};

struct IterRecord {
    int iter = 0;
    double objective = 0.0;
    double alpha = 0.0;
    double pg_norm = 0.0;
};

struct DesignResult {
    AcfVector waveform;
    double objective = 0.0;
    std::vector<double> objective_trace;
    std::vector<IterRecord> iteration_log;
    int iterations = 0;
    bool converged = false;
    double projected_gradient_norm = 0.0;
};

// Gradient projection with Armijo backtracking on the feasible set
// S = T intersect F; r0 is projected onto S first if needed.
DesignResult design_waveform(const DesignConfig& cfg, const AcfVector& r0);

// Largest alpha in { alpha_init * shrink^j } satisfying the sufficient-decrease
// condition along d = u - r; returns 0 when d is not a descent direction.
double armijo_step(const AcfVector& r, const Eigen::VectorXd& u, SnrValue snr,
                   const ArmijoConfig& cfg, const Eigen::VectorXd& gradient,
                   double objective_at_r);

// || r - P_S(r - sigma grad) || / sigma; zero at the constrained optimum.
double projected_gradient_norm(const AcfVector& r, const DesignConfig& cfg);

} // namespace zzbwave
