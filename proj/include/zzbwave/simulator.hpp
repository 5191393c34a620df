#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "zzbwave/rng.hpp"
#include "zzbwave/spectrum.hpp"
#include "zzbwave/zzb.hpp"

namespace zzbwave {

enum class NoiseMethod { exact_cholesky, spectral_approx };

struct SimConfig {
    SnrValue snr;
    long trials = 1;
    uint64_t seed = 0;
    NoiseMethod noise_method = NoiseMethod::exact_cholesky;
    int b_dis = 40;
    int workers = 0; // 0 = hardware concurrency
};

struct SimResult {
    double mse = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    long trials = 0;
    uint64_t seed = 0;
    double snr_db = 0.0;
    std::vector<double> abs_errors; // sorted ascending

    // Empirical CDF of |error| as (error, cumulative probability) pairs.
    std::vector<std::pair<double, double>> cdf() const;
};

// Evaluates the finite cosine expansion of a sampled ACF at an off-grid lag;
// reproduces r_i exactly at grid points.
class AcfInterpolant {
public:
    // terms = number of leading cosine terms to keep; -1 keeps all n.
    explicit AcfInterpolant(const AcfVector& r, int terms = -1);
    double operator()(double lag) const;
    const Grid& grid() const { return grid_; }
    const Eigen::VectorXd& weights() const { return w_; }

private:
    Grid grid_;
    Eigen::VectorXd w_;     // p_k * sqrt(2/N)
    Eigen::VectorXd omega_; // 2 pi f_k
};

double evaluate_acf_at(const AcfVector& r, double lag);

// Correlated Gaussian noise with covariance Toeplitz(r)/SNR.
//   exact_cholesky: Cholesky of the jittered Toeplitz matrix; raises
//     CovarianceError (with the offending leading minor) when indefinite.
//   spectral_approx: synthesis from the nonnegative part of the covariance
//     operator's spectrum (eigenvalues clipped at zero). Identical in law to
//     exact_cholesky whenever the Toeplitz matrix is already PSD, and the
//     closest PSD surrogate otherwise; documented as approximate.
class GaussianNoiseSampler {
public:
    GaussianNoiseSampler(const AcfVector& r, SnrValue snr, NoiseMethod method);

    // Consumes n normal draws from the stream.
    void draw(PhiloxStream& stream, Eigen::VectorXd& out) const;

    // Model covariance entry actually used for sampling (after jitter/clip).
    double pair_cov(int i, int j) const;

    double min_eigenvalue() const { return min_eig_; } // spectral_approx only
    NoiseMethod method() const { return method_; }

private:
    Eigen::MatrixXd factor_; // noise = factor * standard normals
    NoiseMethod method_;
    double min_eig_ = 0.0;
    bool lower_triangular_ = false;
};

// Correlator-peak delay estimate: x[argmax z], first index on ties.
double estimate_delay(const Eigen::VectorXd& z, const Grid& grid);

// Matched-filter Monte Carlo: per trial, d ~ U[0, eps_max],
// z_j = R(|x_j - d|) + noise_j, dhat = argmax; reports MSE with a 95% CI and
// the sorted absolute errors. Per-trial substreams keyed by (seed, trial)
// make the result identical under any worker count.
SimResult monte_carlo_mse(const AcfVector& r, const SimConfig& cfg);

struct CdfCrossover {
    int wf_a = 0;
    int wf_b = 0;
    double error = 0.0;
    int direction = 0; // +1: a-b difference goes negative to positive
};

struct CdfTable {
    std::vector<std::string> ids;
    std::vector<double> errors;
    Eigen::MatrixXd cum; // errors.size() x ids.size()
    std::vector<CdfCrossover> crossovers;
};

CdfTable error_cdf_report(const std::vector<std::string>& ids,
                          const std::vector<const SimResult*>& results);

struct TwoPointCell {
    double lag = 0.0;
    double rho = 0.0;
    double snr_db = 0.0;
    double p_theory = 0.0;
    double p_hat = 0.0;
    long trials = 0;
    double ci99_half = 0.0;
    bool pass = false;
};

struct TwoPointReport {
    std::vector<TwoPointCell> cells;
    bool all_pass = false;
};

// Binary-hypothesis discrimination at grid lags picked to span the given
// correlation targets: empirical sign-test error rate of Z(tau1) - Z(tau2)
// against Q(sqrt(SNR (1 - rho) / 2)), 99% binomial CI. Pins the noise
// covariance scaling and doubles as the spectral_approx eligibility check.
TwoPointReport two_point_check(const AcfVector& r, const std::vector<double>& rho_targets,
                               const std::vector<SnrValue>& snrs, long trials, uint64_t seed,
                               NoiseMethod method);

} // namespace zzbwave
