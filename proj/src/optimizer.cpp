#include "zzbwave/optimizer.hpp"

#include <cmath>

#include "zzbwave/errors.hpp"

namespace zzbwave {

namespace {

constexpr double kFeasTol = 1e-8;

void validate(const DesignConfig& cfg) {
    if (cfg.b_dis < 1) throw ArgumentError("design: b_dis must be positive");
    if (cfg.max_iters < 1) throw ArgumentError("design: max_iters must be positive");
    if (cfg.sigma < 0.0) throw ArgumentError("design: sigma must be nonnegative");
    if (!(cfg.stop_tol > 0.0)) throw ArgumentError("design: stop_tol must be positive");
    const ArmijoConfig& a = cfg.armijo;
    if (!(a.c1 > 0.0 && a.c1 < 1.0)) throw ArgumentError("design: armijo c1 in (0,1)");
    if (!(a.shrink > 0.0 && a.shrink < 1.0)) throw ArgumentError("design: armijo shrink in (0,1)");
    if (!(a.alpha_init > 0.0 && a.alpha_init <= 1.0))
        throw ArgumentError("design: armijo alpha_init in (0,1]");
}

double resolve_sigma(const DesignConfig& cfg, const AcfVector& r) {
    if (cfg.sigma > 0.0) return cfg.sigma;
    const double hmax = zzb_hessian_diag(r, cfg.snr_d).maxCoeff();
    if (!(hmax > 0.0)) throw NumericalError("design: degenerate curvature estimate");
    return 0.5 / hmax;
}

} // namespace

double armijo_step(const AcfVector& r, const Eigen::VectorXd& u, SnrValue snr,
                   const ArmijoConfig& cfg, const Eigen::VectorXd& gradient,
                   double objective_at_r) {
    const Eigen::VectorXd d = u - r.r;
    const double slope = gradient.dot(d);
    if (slope >= 0.0) return 0.0;
    double alpha = cfg.alpha_init;
    AcfVector trial = r;
    for (int j = 0; j <= cfg.max_shrinks; ++j) {
        trial.r = r.r + alpha * d;
        const double z = zzb_objective(trial, snr);
        if (!std::isfinite(z)) throw NumericalError("armijo_step: non-finite objective");
        if (z <= objective_at_r + cfg.c1 * alpha * slope) return alpha;
        alpha *= cfg.shrink;
    }
    return 0.0;
}

DesignResult design_waveform(const DesignConfig& cfg, const AcfVector& r0) {
    validate(cfg);
    const Grid& grid = r0.grid;
    const int n = grid.n;
    if (cfg.b_dis > n) throw ArgumentError("design: b_dis exceeds grid size");

    AcfVector r = r0;
    if (!is_feasible(r.r, cfg.b_dis, kFeasTol).feasible)
        r.r = dykstra_project(r.r, cfg.b_dis, cfg.projection).value;

    const double sigma = resolve_sigma(cfg, r);
    const double sqrt_n = std::sqrt(static_cast<double>(n));

    DesignResult res;
    res.objective_trace.push_back(zzb_objective(r, cfg.snr_d));
    if (!std::isfinite(res.objective_trace.back()))
        throw NumericalError("design: non-finite objective at start");

    bool converged = false;
    double pg_norm = 0.0;
    int iter = 0;
    for (; iter < cfg.max_iters; ++iter) {
        const Eigen::VectorXd g = zzb_gradient(r, cfg.snr_d);
        const Eigen::VectorXd u = dykstra_project(r.r - sigma * g, cfg.b_dis, cfg.projection).value;
        const Eigen::VectorXd d = u - r.r;
        const double dnorm = d.norm();
        pg_norm = dnorm / sigma;
        if (dnorm / sqrt_n < cfg.stop_tol) {
            converged = true;
            break;
        }
        const double alpha =
            armijo_step(r, u, cfg.snr_d, cfg.armijo, g, res.objective_trace.back());
        if (alpha == 0.0) {
            // Either a stationarity signal (non-descent direction) or the
            // backtracking budget ran out at a numerically flat point.
            converged = true;
            break;
        }
        r.r += alpha * d;
        r.r[0] = 1.0;
        const double z = zzb_objective(r, cfg.snr_d);
        if (!std::isfinite(z)) throw NumericalError("design: non-finite objective");
        res.objective_trace.push_back(z);
        res.iteration_log.push_back({iter + 1, z, alpha, pg_norm});
        const size_t m = res.objective_trace.size();
        if (m > 10) {
            const double prev = res.objective_trace[m - 11];
            if (prev - z < cfg.stop_tol * std::max(std::abs(prev), 1e-300)) {
                ++iter;
                converged = true;
                break;
            }
        }
    }

    // Tight cleanup so the returned waveform meets the feasibility contract
    // even when per-iteration projections ran on a looser budget.
    ProjectionConfig tight{50000, 1e-13};
    r.r = dykstra_project(r.r, cfg.b_dis, tight).value;

    res.waveform = r;
    res.objective = zzb_objective(r, cfg.snr_d);
    res.iterations = iter;
    res.converged = converged;
    res.projected_gradient_norm = pg_norm;
    return res;
}

double projected_gradient_norm(const AcfVector& r, const DesignConfig& cfg) {
    const double sigma = resolve_sigma(cfg, r);
    const Eigen::VectorXd g = zzb_gradient(r, cfg.snr_d);
    const Eigen::VectorXd u = dykstra_project(r.r - sigma * g, cfg.b_dis, cfg.projection).value;
    return (r.r - u).norm() / sigma;
}

} // namespace zzbwave
