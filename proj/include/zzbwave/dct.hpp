#pragma once

#include <Eigen/Dense>

namespace zzbwave {

// Orthogonal DCT-IV: [C]_{kn} = sqrt(2/N) cos(pi (2k-1)(2n-1) / (4N)), 1-based.
// C is symmetric and self-inverse, so the same transform maps both directions.
// Backed by FFTW (REDFT11) with a process-wide plan cache; safe to call from
// multiple threads once a plan for the given size exists.
Eigen::VectorXd dct4(const Eigen::VectorXd& v);

// Dense transform matrix, intended for small sizes and for cross-checking dct4.
Eigen::MatrixXd dct4_matrix(int n);

} // namespace zzbwave
