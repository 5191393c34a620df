#include "zzbwave/dct.hpp"

#include <cmath>
#include <mutex>
#include <unordered_map>

#include <fftw3.h>

#include "zzbwave/errors.hpp"

namespace zzbwave {

namespace {

std::mutex g_plan_mutex;
std::unordered_map<int, fftw_plan> g_plans;

fftw_plan plan_for(int n) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto it = g_plans.find(n);
    if (it != g_plans.end()) return it->second;
    std::vector<double> in(n), out(n);
    fftw_plan p = fftw_plan_r2r_1d(n, in.data(), out.data(), FFTW_REDFT11,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw NumericalError("dct4: FFTW plan creation failed");
    g_plans.emplace(n, p);
    return p;
}

} // namespace

Eigen::VectorXd dct4(const Eigen::VectorXd& v) {
    const int n = static_cast<int>(v.size());
    if (n < 1) throw ArgumentError("dct4: empty input");
    fftw_plan p = plan_for(n);
    Eigen::VectorXd in = v;
    Eigen::VectorXd out(n);
    // REDFT11 computes 2 sum v_j cos(pi(2j+1)(2k+1)/(4n)); rescale to the
    // orthonormal convention.
    fftw_execute_r2r(p, in.data(), out.data());
    out *= 1.0 / std::sqrt(2.0 * n);
    return out;
}

Eigen::MatrixXd dct4_matrix(int n) {
    if (n < 1) throw ArgumentError("dct4_matrix: need n >= 1");
    Eigen::MatrixXd C(n, n);
    const double s = std::sqrt(2.0 / n);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            C(k, j) = s * std::cos(M_PI * (2.0 * k + 1.0) * (2.0 * j + 1.0) / (4.0 * n));
    return C;
}

} // namespace zzbwave
