#pragma once

#include <string>

#include <Eigen/Dense>

namespace zzbwave {

struct ProjectionConfig {
    int max_dykstra_iters = 200;
    double residual_tol = 1e-10;
};

struct DykstraResult {
    Eigen::VectorXd value;
    bool converged = false;
    int sweeps = 0;
    double residual = 0.0;
};

struct FeasibilityReport {
    bool feasible = false;
    double peak_dev = 0.0;      // |r_1 - 1|
    double bound_excess = 0.0;  // max_i (r_i - 1), 0 if none exceed
    double spectrum_min = 0.0;  // most negative DCT coefficient, 0 if none negative
    double band_leak = 0.0;     // max |coeff_k| for k > b_dis
    std::string worst;          // constraint family with the largest violation
};

// Euclidean projection onto T = { r : r_1 = 1, r_i <= 1 }.
Eigen::VectorXd project_T(const Eigen::VectorXd& x);

// Euclidean projection onto F = { r : (Cr)_k >= 0, (Cr)_k = 0 for k > b_dis }.
Eigen::VectorXd project_F(const Eigen::VectorXd& x, int b_dis);

// Dykstra's alternating projections onto T and F with correction terms,
// stopping when successive iterates differ by less than residual_tol in
// max-norm; a final project_T pass pins r_1 = 1 exactly.
DykstraResult dykstra_project(const Eigen::VectorXd& x, int b_dis,
                              const ProjectionConfig& cfg = {});

FeasibilityReport is_feasible(const Eigen::VectorXd& r, int b_dis, double tol);

} // namespace zzbwave
