#include "zzbwave/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "zzbwave/dct.hpp"
#include "zzbwave/errors.hpp"

namespace zzbwave {

namespace {

constexpr double kJitter = 1e-10;

Eigen::MatrixXd toeplitz_from_acf(const AcfVector& r, double snr) {
    const int n = r.grid.n;
    Eigen::MatrixXd t(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            const double v = r.r[i - j] / snr;
            t(i, j) = v;
            t(j, i) = v;
        }
    return t;
}

// Scalar Cholesky used only to locate the failing leading minor for the
// error message after Eigen's factorization reports failure.
int failing_minor(const Eigen::MatrixXd& a) {
    const int n = static_cast<int>(a.rows());
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        double d = a(j, j) - l.row(j).head(j).squaredNorm();
        if (!(d > 0.0)) return j + 1;
        l(j, j) = std::sqrt(d);
        for (int i = j + 1; i < n; ++i)
            l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
    }
    return 0;
}

} // namespace

AcfInterpolant::AcfInterpolant(const AcfVector& r, int terms) : grid_(r.grid) {
    const int n = grid_.n;
    const int m = terms < 0 ? n : terms;
    if (m < 1 || m > n) throw ArgumentError("AcfInterpolant: bad term count");
    const Eigen::VectorXd p = dct4(r.r);
    const double scale = std::sqrt(2.0 / n);
    w_.resize(m);
    omega_.resize(m);
    for (int k = 0; k < m; ++k) {
        w_[k] = p[k] * scale;
        omega_[k] = 2.0 * M_PI * freq_of_index(grid_, k + 1);
    }
}

double AcfInterpolant::operator()(double lag) const {
    if (lag < 0.0 || lag > grid_.eps_max + 1e-12)
        throw ArgumentError("evaluate_acf_at: lag outside [0, eps_max]");
    const double t = lag + grid_.dx / 2.0;
    double acc = 0.0;
    for (int k = 0; k < w_.size(); ++k) acc += w_[k] * std::cos(omega_[k] * t);
    return acc;
}

double evaluate_acf_at(const AcfVector& r, double lag) {
    return AcfInterpolant(r)(lag);
}

GaussianNoiseSampler::GaussianNoiseSampler(const AcfVector& r, SnrValue snr,
                                           NoiseMethod method)
    : method_(method) {
    const int n = r.grid.n;
    Eigen::MatrixXd sigma = toeplitz_from_acf(r, snr.linear);
    if (method == NoiseMethod::exact_cholesky) {
        sigma.diagonal().array() += kJitter;
        Eigen::LLT<Eigen::MatrixXd> llt(sigma);
        if (llt.info() != Eigen::Success) {
            throw CovarianceError(
                "synth_noise: covariance not positive definite after jitter "
                "(leading minor " + std::to_string(failing_minor(sigma)) + ")",
                failing_minor(sigma));
        }
        factor_ = llt.matrixL();
        lower_triangular_ = true;
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
        if (es.info() != Eigen::Success)
            throw NumericalError("synth_noise: eigendecomposition failed");
        min_eig_ = es.eigenvalues().minCoeff() * snr.linear; // report unscaled
        Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        factor_ = es.eigenvectors() * lam.asDiagonal();
        lower_triangular_ = false;
    }
    (void)n;
}

void GaussianNoiseSampler::draw(PhiloxStream& stream, Eigen::VectorXd& out) const {
    const int n = static_cast<int>(factor_.rows());
    Eigen::VectorXd z(n);
    for (int i = 0; i < n; ++i) z[i] = stream.normal();
    if (lower_triangular_)
        out.noalias() = factor_.triangularView<Eigen::Lower>() * z;
    else
        out.noalias() = factor_ * z;
}

double GaussianNoiseSampler::pair_cov(int i, int j) const {
    return factor_.row(i).dot(factor_.row(j));
}

double estimate_delay(const Eigen::VectorXd& z, const Grid& grid) {
    if (z.size() != grid.n) throw ArgumentError("estimate_delay: length mismatch");
    int best = 0;
    double bestv = z[0];
    for (int i = 1; i < grid.n; ++i) {
        if (z[i] > bestv) {
            bestv = z[i];
            best = i;
        }
    }
    return grid.x[best];
}

namespace {

// Signal tables for fast per-trial evaluation of R(|x_j - d|):
// rows with x_j >= d use the half-shifted basis at x_j, rows with x_j < d the
// unshifted one, so each trial costs four cosine vectors and two block GEMVs.
struct SignalTables {
    Eigen::MatrixXd cos_ge, sin_ge, cos_lt, sin_lt; // n x m
    Eigen::VectorXd w, omega;
    const Grid* grid;

    SignalTables(const AcfInterpolant& itp, const Grid& g) : grid(&g) {
        const int n = g.n;
        const int m = static_cast<int>(itp.weights().size());
        w = itp.weights();
        omega.resize(m);
        for (int k = 0; k < m; ++k) omega[k] = 2.0 * M_PI * freq_of_index(g, k + 1);
        cos_ge.resize(n, m);
        sin_ge.resize(n, m);
        cos_lt.resize(n, m);
        sin_lt.resize(n, m);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < m; ++k) {
                const double a_ge = omega[k] * (g.x[j] + g.dx / 2.0);
                const double a_lt = omega[k] * g.x[j];
                cos_ge(j, k) = std::cos(a_ge);
                sin_ge(j, k) = std::sin(a_ge);
                cos_lt(j, k) = std::cos(a_lt);
                sin_lt(j, k) = std::sin(a_lt);
            }
    }

    void eval(double d, Eigen::VectorXd& out) const {
        const int n = grid->n;
        const int m = static_cast<int>(w.size());
        Eigen::VectorXd a(m), b(m), a2(m), b2(m);
        for (int k = 0; k < m; ++k) {
            const double td = omega[k] * d;
            const double td2 = omega[k] * (d + grid->dx / 2.0);
            a[k] = w[k] * std::cos(td);
            b[k] = w[k] * std::sin(td);
            a2[k] = w[k] * std::cos(td2);
            b2[k] = w[k] * std::sin(td2);
        }
        // first row index with x_j >= d
        int split = static_cast<int>(std::ceil(d / grid->dx - 1e-12));
        split = std::clamp(split, 0, n);
        if (split > 0) {
            out.head(split).noalias() = cos_lt.topRows(split) * a2;
            out.head(split).noalias() += sin_lt.topRows(split) * b2;
        }
        if (split < n) {
            out.tail(n - split).noalias() = cos_ge.bottomRows(n - split) * a;
            out.tail(n - split).noalias() += sin_ge.bottomRows(n - split) * b;
        }
    }
};

} // namespace

std::vector<std::pair<double, double>> SimResult::cdf() const {
    std::vector<std::pair<double, double>> out;
    out.reserve(abs_errors.size());
    const double n = static_cast<double>(abs_errors.size());
    for (size_t i = 0; i < abs_errors.size(); ++i)
        out.emplace_back(abs_errors[i], static_cast<double>(i + 1) / n);
    return out;
}

SimResult monte_carlo_mse(const AcfVector& r, const SimConfig& cfg) {
    if (cfg.trials < 1) throw ArgumentError("monte_carlo_mse: trials must be >= 1");
    const Grid& grid = r.grid;
    const int n = grid.n;

    const GaussianNoiseSampler sampler(r, cfg.snr, cfg.noise_method);
    const AcfInterpolant itp(r, std::min(cfg.b_dis, n));
    const SignalTables tables(itp, grid);

    std::vector<double> errors(cfg.trials);
    auto run_range = [&](long lo, long hi) {
        Eigen::VectorXd sig(n), noise(n), z(n);
        for (long t = lo; t < hi; ++t) {
            PhiloxStream stream(cfg.seed, static_cast<uint64_t>(t));
            const double d = stream.uniform() * grid.eps_max;
            tables.eval(d, sig);
            sampler.draw(stream, noise);
            z = sig + noise;
            errors[t] = estimate_delay(z, grid) - d;
        }
    };

    int workers = cfg.workers > 0
                      ? cfg.workers
                      : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    workers = static_cast<int>(std::min<long>(workers, cfg.trials));
    if (workers <= 1) {
        run_range(0, cfg.trials);
    } else {
        std::vector<std::thread> pool;
        const long per = (cfg.trials + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const long lo = w * per;
            const long hi = std::min<long>(lo + per, cfg.trials);
            if (lo >= hi) break;
            pool.emplace_back(run_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    // Reduction in trial-index order keeps the result worker-count invariant.
    double sum = 0.0;
    for (double e : errors) sum += e * e;
    const double mse = sum / static_cast<double>(cfg.trials);
    double var = 0.0;
    for (double e : errors) {
        const double d = e * e - mse;
        var += d * d;
    }
    var /= std::max<long>(1, cfg.trials - 1);
    const double half = 1.96 * std::sqrt(var / static_cast<double>(cfg.trials));

    SimResult res;
    res.mse = mse;
    res.ci_lo = mse - half;
    res.ci_hi = mse + half;
    res.trials = cfg.trials;
    res.seed = cfg.seed;
    res.snr_db = cfg.snr.db();
    res.abs_errors.resize(errors.size());
    std::transform(errors.begin(), errors.end(), res.abs_errors.begin(),
                   [](double e) { return std::abs(e); });
    std::sort(res.abs_errors.begin(), res.abs_errors.end());
    return res;
}

CdfTable error_cdf_report(const std::vector<std::string>& ids,
                          const std::vector<const SimResult*>& results) {
    if (results.empty() || ids.size() != results.size())
        throw ArgumentError("error_cdf_report: empty or mismatched inputs");
    CdfTable table;
    table.ids = ids;

    std::vector<double> grid;
    for (const SimResult* r : results)
        grid.insert(grid.end(), r->abs_errors.begin(), r->abs_errors.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    table.errors = grid;

    const int ng = static_cast<int>(grid.size());
    const int nw = static_cast<int>(results.size());
    table.cum.resize(ng, nw);
    for (int w = 0; w < nw; ++w) {
        const auto& es = results[w]->abs_errors;
        const double n = static_cast<double>(es.size());
        for (int i = 0; i < ng; ++i) {
            const auto it = std::upper_bound(es.begin(), es.end(), grid[i]);
            table.cum(i, w) = static_cast<double>(it - es.begin()) / n;
        }
    }

    for (int a = 0; a < nw; ++a)
        for (int b = a + 1; b < nw; ++b) {
            int prev = 0;
            for (int i = 0; i < ng; ++i) {
                const double d = table.cum(i, a) - table.cum(i, b);
                const int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
                if (s != 0 && prev != 0 && s != prev)
                    table.crossovers.push_back({a, b, grid[i], s});
                if (s != 0) prev = s;
            }
        }
    return table;
}

TwoPointReport two_point_check(const AcfVector& r, const std::vector<double>& rho_targets,
                               const std::vector<SnrValue>& snrs, long trials, uint64_t seed,
                               NoiseMethod method) {
    if (trials < 1) throw ArgumentError("two_point_check: trials must be >= 1");
    const Grid& grid = r.grid;
    TwoPointReport report;
    report.all_pass = true;

    uint64_t stream_salt = 0;
    for (SnrValue snr : snrs) {
        const GaussianNoiseSampler sampler(r, snr, method);
        for (double target : rho_targets) {
            int m = 1;
            double best = std::abs(r.r[1] - target);
            for (int i = 2; i < grid.n; ++i) {
                const double dev = std::abs(r.r[i] - target);
                if (dev < best) {
                    best = dev;
                    m = i;
                }
            }
            const double rho = r.r[m];
            const double p_theory = q_function(std::sqrt(snr.linear * (1.0 - rho) / 2.0));

            const double v11 = sampler.pair_cov(0, 0);
            const double v22 = sampler.pair_cov(m, m);
            const double v12 = sampler.pair_cov(0, m);
            // 2x2 Cholesky of the sampler's own pair covariance
            const double l11 = std::sqrt(v11);
            const double l21 = v12 / l11;
            const double l22 = std::sqrt(std::max(v22 - l21 * l21, 0.0));

            long wrong = 0;
            for (long t = 0; t < trials; ++t) {
                PhiloxStream stream(seed, (stream_salt << 32) | static_cast<uint64_t>(t));
                const double z1 = stream.normal();
                const double z2 = stream.normal();
                const double nu1 = l11 * z1;
                const double nu2 = l21 * z1 + l22 * z2;
                if (rho + nu2 > 1.0 + nu1) ++wrong;
            }
            ++stream_salt;

            TwoPointCell cell;
            cell.lag = grid.x[m];
            cell.rho = rho;
            cell.snr_db = snr.db();
            cell.p_theory = p_theory;
            cell.p_hat = static_cast<double>(wrong) / static_cast<double>(trials);
            cell.trials = trials;
            cell.ci99_half = 2.5758 * std::sqrt(p_theory * (1.0 - p_theory) /
                                                static_cast<double>(trials));
            cell.pass = std::abs(cell.p_hat - p_theory) <= cell.ci99_half;
            report.all_pass = report.all_pass && cell.pass;
            report.cells.push_back(cell);
        }
    }
    return report;
}

} // namespace zzbwave
