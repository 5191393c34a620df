#include <doctest.h>

#include <cmath>
#include <vector>

#include "zzbwave/rng.hpp"
#include "zzbwave/spectrum.hpp"
#include "zzbwave/zzb.hpp"

using namespace zzbwave;

namespace {

// Extended-precision objective used as the finite-difference oracle, so the
// difference quotients keep enough significant digits at small steps.
long double objective_ld(const AcfVector& acf, double snr) {
    const long double dx = acf.grid.dx;
    long double sum = 0.0L;
    for (int i = 0; i < acf.grid.n; ++i) {
        long double u = 1.0L - static_cast<long double>(acf.r[i]);
        if (u < 0.0L) u = 0.0L;
        const long double z = sqrtl(snr * u / 2.0L);
        sum += static_cast<long double>(acf.grid.x[i]) * 0.5L * erfcl(z / sqrtl(2.0L));
    }
    return dx * sum;
}

AcfVector test_waveform(int n, double eps_max, uint64_t stream) {
    PhiloxStream rng(77, stream);
    const Grid g(n, eps_max);
    Eigen::VectorXd r(n);
    r[0] = 1.0;
    for (int i = 1; i < n; ++i) r[i] = 0.9 * (2.0 * rng.uniform() - 1.0);
    return AcfVector(g, r);
}

} // namespace

TEST_CASE("q_function hits tabulated values") {
    CHECK(q_function(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(q_function(1.0) == doctest::Approx(0.15865525393145705).epsilon(1e-14));
    CHECK(q_function(3.0) == doctest::Approx(0.0013498980316300933).epsilon(1e-12));
    CHECK(q_function(-1.0) == doctest::Approx(1.0 - 0.15865525393145705).epsilon(1e-14));
    CHECK(q_function(40.0) >= 0.0);
    CHECK(q_function(40.0) < 1e-300);
}

TEST_CASE("snr converts between dB and linear") {
    CHECK(SnrValue::from_db(10.0).linear == doctest::Approx(10.0).epsilon(1e-14));
    CHECK(SnrValue::from_db(0.0).linear == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(SnrValue::from_db(13.0).db() == doctest::Approx(13.0).epsilon(1e-12));
    CHECK_THROWS_AS(SnrValue(0.0), ArgumentError);
    CHECK_THROWS_AS(SnrValue(-3.0), ArgumentError);
}

TEST_CASE("objective agrees with an extended-precision evaluation") {
    const AcfVector acf = test_waveform(64, 2.0, 1);
    for (double snr_db : {0.0, 10.0, 18.0, 30.0}) {
        const SnrValue snr = SnrValue::from_db(snr_db);
        const double got = zzb_objective(acf, snr);
        const double want = static_cast<double>(objective_ld(acf, snr.linear));
        CHECK(got == doctest::Approx(want).epsilon(1e-13));
    }
}

TEST_CASE("objective of a fully coherent waveform integrates x/2") {
    // r = 1 everywhere makes every Q-term 1/2, so zeta = dx * sum x_i / 2.
    const Grid g(101, 2.0);
    const AcfVector ones(g, Eigen::VectorXd::Ones(101));
    double expect = 0.0;
    for (double xi : g.x) expect += xi;
    expect *= 0.5 * g.dx;
    CHECK(zzb_objective(ones, SnrValue::from_db(12.0)) ==
          doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("gradient matches central finite differences") {
    const AcfVector acf = test_waveform(48, 2.0, 2);
    const SnrValue snr = SnrValue::from_db(14.0);
    const Eigen::VectorXd g = zzb_gradient(acf, snr);
    CHECK(g[0] == 0.0);
    const double h = 1e-6;
    for (int i : {1, 2, 7, 23, 47}) {
        AcfVector plus = acf, minus = acf;
        plus.r[i] += h;
        minus.r[i] -= h;
        const long double fd =
            (objective_ld(plus, snr.linear) - objective_ld(minus, snr.linear)) /
            (2.0L * h);
        CHECK(g[i] == doctest::Approx(static_cast<double>(fd)).epsilon(1e-7));
    }
}

TEST_CASE("hessian diagonal matches second differences") {
    const AcfVector acf = test_waveform(48, 2.0, 3);
    const SnrValue snr = SnrValue::from_db(14.0);
    const Eigen::VectorXd h2 = zzb_hessian_diag(acf, snr);
    CHECK(h2[0] == 0.0);
    const double h = 2e-5;
    for (int i : {1, 5, 19, 40}) {
        AcfVector plus = acf, minus = acf;
        plus.r[i] += h;
        minus.r[i] -= h;
        const long double fd = (objective_ld(plus, snr.linear) -
                                2.0L * objective_ld(acf, snr.linear) +
                                objective_ld(minus, snr.linear)) /
                               (static_cast<long double>(h) * h);
        CHECK(h2[i] == doctest::Approx(static_cast<double>(fd)).epsilon(1e-4));
    }
}

TEST_CASE("gradient stays finite at the coherence boundary") {
    const Grid g(16, 2.0);
    Eigen::VectorXd r = Eigen::VectorXd::Ones(16);
    const AcfVector acf(g, r);
    const Eigen::VectorXd grad = zzb_gradient(acf, SnrValue::from_db(20.0));
    const Eigen::VectorXd hess = zzb_hessian_diag(acf, SnrValue::from_db(20.0));
    for (int i = 0; i < 16; ++i) {
        CHECK(std::isfinite(grad[i]));
        CHECK(std::isfinite(hess[i]));
    }
}

TEST_CASE("bundled evaluation is consistent with the parts") {
    const AcfVector acf = test_waveform(32, 2.0, 4);
    const SnrValue snr = SnrValue::from_db(9.0);
    const ZzbEval ev = zzb_eval(acf, snr);
    CHECK(ev.value == zzb_objective(acf, snr));
    CHECK((ev.gradient - zzb_gradient(acf, snr)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((ev.hessian_diag - zzb_hessian_diag(acf, snr)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("bound decreases with snr and the curve matches pointwise calls") {
    const Grid g(200, 2.0);
    const AcfVector acf = make_sinc_acf(g, 20);
    std::vector<SnrValue> snrs;
    for (double db = 0.0; db <= 30.0; db += 3.0) snrs.push_back(SnrValue::from_db(db));
    const std::vector<double> curve = zzb_curve(acf, snrs);
    REQUIRE(curve.size() == snrs.size());
    for (size_t i = 0; i < snrs.size(); ++i) {
        CHECK(curve[i] == zzb_objective(acf, snrs[i]));
        if (i > 0) CHECK(curve[i] < curve[i - 1]);
    }
    CHECK_THROWS_AS(zzb_curve(acf, {}), ArgumentError);
}
