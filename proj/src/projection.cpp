#include "zzbwave/projection.hpp"

#include <cmath>
#include <limits>

#include "zzbwave/dct.hpp"
#include "zzbwave/errors.hpp"

namespace zzbwave {

Eigen::VectorXd project_T(const Eigen::VectorXd& x) {
    Eigen::VectorXd o = x.cwiseMin(1.0);
    o[0] = 1.0;
    return o;
}

Eigen::VectorXd project_F(const Eigen::VectorXd& x, int b_dis) {
    const int n = static_cast<int>(x.size());
    if (b_dis < 1 || b_dis > n) throw ArgumentError("project_F: b_dis out of range");
    Eigen::VectorXd p = dct4(x);
    for (int k = 0; k < n; ++k) {
        if (k >= b_dis || p[k] < 0.0) p[k] = 0.0;
    }
    return dct4(p);
}

DykstraResult dykstra_project(const Eigen::VectorXd& x, int b_dis,
                              const ProjectionConfig& cfg) {
    if (cfg.max_dykstra_iters < 1 || !(cfg.residual_tol > 0.0))
        throw ArgumentError("dykstra_project: invalid config");
    const int n = static_cast<int>(x.size());
    Eigen::VectorXd cur = x;
    Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd q = Eigen::VectorXd::Zero(n);

    DykstraResult res;
    res.converged = false;
    res.residual = std::numeric_limits<double>::infinity();
    int k = 0;
    for (; k < cfg.max_dykstra_iters; ++k) {
        Eigen::VectorXd a = project_T(cur + p);
        p = cur + p - a;
        Eigen::VectorXd next = project_F(a + q, b_dis);
        q = a + q - next;
        res.residual = (next - cur).cwiseAbs().maxCoeff();
        cur = std::move(next);
        if (res.residual < cfg.residual_tol) {
            res.converged = true;
            ++k;
            break;
        }
    }
    res.sweeps = k;
    res.value = project_T(cur);
    return res;
}

FeasibilityReport is_feasible(const Eigen::VectorXd& r, int b_dis, double tol) {
    if (!(tol > 0.0)) throw ArgumentError("is_feasible: need tol > 0");
    const int n = static_cast<int>(r.size());
    if (b_dis < 1 || b_dis > n) throw ArgumentError("is_feasible: b_dis out of range");

    FeasibilityReport rep;
    rep.peak_dev = std::abs(r[0] - 1.0);
    for (int i = 1; i < n; ++i)
        if (r[i] - 1.0 > rep.bound_excess) rep.bound_excess = r[i] - 1.0;

    Eigen::VectorXd p = dct4(r);
    for (int k = 0; k < n; ++k) {
        if (p[k] < rep.spectrum_min) rep.spectrum_min = p[k];
        if (k >= b_dis && std::abs(p[k]) > rep.band_leak) rep.band_leak = std::abs(p[k]);
    }

    struct { const char* name; double v; } fams[] = {
        {"peak (r_1 = 1)", rep.peak_dev},
        {"bound (r <= 1)", rep.bound_excess},
        {"spectrum nonnegativity", -rep.spectrum_min},
        {"band limit", rep.band_leak},
    };
    double worst_v = -1.0;
    for (const auto& f : fams) {
        if (f.v > worst_v) {
            worst_v = f.v;
            rep.worst = f.name;
        }
    }
    rep.feasible = rep.peak_dev <= tol && rep.bound_excess <= tol &&
                   -rep.spectrum_min <= tol && rep.band_leak <= tol;
    return rep;
}

} // namespace zzbwave
