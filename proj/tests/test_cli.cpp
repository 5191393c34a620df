#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "zzbwave/cli.hpp"
#include "zzbwave/csv.hpp"
#include "zzbwave/optimizer.hpp"
#include "zzbwave/waveform_io.hpp"

using namespace zzbwave;
namespace fs = std::filesystem;

namespace {

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"zzbwave"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

// Step size referenced to the curvature at the canonical start; the default is
// too conservative for small test budgets.
std::string ref_sigma(int n, int b, double snr_db) {
    const Grid g(n, 2.0);
    const double hmax =
        zzb_hessian_diag(make_sinc_acf(g, b), SnrValue::from_db(snr_db)).maxCoeff();
    return std::to_string(16.0 / hmax);
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("zzbwave_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string sub(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    return std::string((std::istreambuf_iterator<char>(in)), {});
}

} // namespace

TEST_CASE("design command writes waveform, trace, and manifest") {
    TempDir dir;
    const std::string out = dir.sub("d12");
    const int code = run({"design", "--snr-d-db", "12", "--n", "96", "--b-dis", "8",
                          "--sigma", ref_sigma(96, 8, 12.0), "--max-iters", "600",
                          "--out", out});
    CHECK(code == 0);
    CHECK(fs::exists(out + "/waveform.json"));
    CHECK(fs::exists(out + "/trace.csv"));
    CHECK(fs::exists(out + "/manifest.json"));

    const WaveformFile wf = read_waveform_file(out + "/waveform.json");
    CHECK(wf.n == 96);
    CHECK(wf.b_dis == 8);
    CHECK(wf.converged);
    REQUIRE(wf.snr_d_db.has_value());
    CHECK(*wf.snr_d_db == 12.0);

    const CsvTable trace = read_csv(out + "/trace.csv");
    CHECK(trace.column("objective") >= 0);
    CHECK(trace.rows.size() >= 1);

    const std::string manifest = slurp(out + "/manifest.json");
    CHECK(manifest.find("\"command\": \"design\"") != std::string::npos);
    CHECK(manifest.find("waveform.json") != std::string::npos);
}

TEST_CASE("design resumed from its own output stops quickly") {
    TempDir dir;
    const std::string sigma = ref_sigma(96, 8, 12.0);
    const std::string first = dir.sub("a");
    REQUIRE(run({"design", "--snr-d-db", "12", "--n", "96", "--b-dis", "8", "--sigma",
                 sigma, "--max-iters", "600", "--out", first}) == 0);
    const std::string second = dir.sub("b");
    CHECK(run({"design", "--snr-d-db", "12", "--init", "file:" + first + "/waveform.json",
               "--sigma", sigma, "--max-iters", "600", "--out", second}) == 0);
    const WaveformFile wf = read_waveform_file(second + "/waveform.json");
    CHECK(wf.iterations <= 11);
}

TEST_CASE("design exits 2 when the budget runs out") {
    TempDir dir;
    const std::string out = dir.sub("starved");
    const int code = run({"design", "--snr-d-db", "15", "--n", "96", "--b-dis", "8",
                          "--max-iters", "2", "--out", out});
    CHECK(code == 2);
    CHECK(fs::exists(out + "/waveform.json")); // outputs written regardless
    CHECK_FALSE(read_waveform_file(out + "/waveform.json").converged);
}

TEST_CASE("missing required flags exit 1") {
    CHECK(run({"design", "--snr-d-db", "15"}) == 1);
    CHECK(run({"eval", "--waveform", "sinc"}) == 1);
    CHECK(run({"bogus"}) == 1);
    CHECK(run({}) == 1);
}

TEST_CASE("eval writes an mse table with bound columns") {
    TempDir dir;
    const std::string out = dir.sub("eval");
    const int code = run({"eval", "--waveform", "sinc", "--snr-db-range", "10:5:20",
                          "--trials", "200", "--seed", "3", "--n", "64", "--b-dis", "10",
                          "--out", out});
    CHECK(code == 0);
    const CsvTable t = read_csv(out + "/mse.csv");
    require_columns(t, {"snr_db", "waveform_id", "mse", "ci_lo", "ci_hi", "trials",
                        "seed", "zzb", "crb"},
                    "test");
    CHECK(t.rows.size() == 3);
    CHECK(t.rows[0][t.column("waveform_id")] == "sinc");
    CHECK(t.rows[0][t.column("trials")] == "200");
    // The bound columns must be positive and below-or-near the estimate.
    for (const auto& row : t.rows) {
        CHECK(std::stod(row[t.column("zzb")]) > 0.0);
        CHECK(std::stod(row[t.column("crb")]) > 0.0);
    }
}

TEST_CASE("eval runs are reproducible and honor the env seed fallback") {
    TempDir dir;
    const std::string a = dir.sub("a"), b = dir.sub("b"), c = dir.sub("c");
    const std::vector<std::string> base{"eval",      "--waveform", "sinc",
                                        "--snr-db-range", "12:1:12", "--trials",
                                        "150",       "--n",        "64",
                                        "--b-dis",   "10"};
    auto with_out = [&](const std::string& out, const std::vector<std::string>& extra) {
        std::vector<std::string> args = base;
        args.insert(args.end(), extra.begin(), extra.end());
        args.insert(args.end(), {"--out", out});
        return args;
    };
    REQUIRE(run(with_out(a, {"--seed", "77"})) == 0);
    REQUIRE(run(with_out(b, {"--seed", "77"})) == 0);
    CHECK(slurp(a + "/mse.csv") == slurp(b + "/mse.csv"));

    ::setenv("ZZBWAVE_SEED", "77", 1);
    REQUIRE(run(with_out(c, {})) == 0);
    ::unsetenv("ZZBWAVE_SEED");
    CHECK(slurp(a + "/mse.csv") == slurp(c + "/mse.csv"));
}

TEST_CASE("eval rejects a zero trial budget") {
    TempDir dir;
    CHECK(run({"eval", "--waveform", "sinc", "--snr-db-range", "10:1:12", "--trials",
               "0", "--out", dir.sub("x")}) == 1);
}

TEST_CASE("eval rejects an unreadable waveform path") {
    TempDir dir;
    CHECK(run({"eval", "--waveform", dir.sub("nope.json"), "--snr-db-range", "10:1:12",
               "--trials", "50", "--out", dir.sub("x")}) == 1);
}

TEST_CASE("eval emits a cdf when asked") {
    TempDir dir;
    const std::string out = dir.sub("cdf");
    REQUIRE(run({"eval", "--waveform", "tone", "--snr-db-range", "10:1:10", "--trials",
                 "120", "--n", "64", "--b-dis", "10", "--cdf-at-db", "10", "--noise",
                 "spectral", "--out", out}) == 0);
    const CsvTable t = read_csv(out + "/cdf.csv");
    require_columns(t, {"waveform_id", "abs_error", "cum_prob"}, "test");
    CHECK(t.rows.size() == 120);
}

TEST_CASE("adaptive produces a bank, table, and envelope") {
    TempDir dir;
    const std::string out = dir.sub("bank");
    const int code =
        run({"adaptive", "--snr-d-list", "8,12", "--snr-db-range", "8:4:16", "--trials",
             "150", "--seed", "5", "--n", "96", "--b-dis", "8", "--sigma",
             ref_sigma(96, 8, 12.0), "--max-iters", "800", "--out", out});
    CHECK(code == 0);
    CHECK(fs::exists(out + "/bank.json"));
    const CsvTable table = read_csv(out + "/mse_table.csv");
    require_columns(table, {"snr_d_db", "snr_db", "mse", "ci_lo", "ci_hi"}, "test");
    CHECK(table.rows.size() == 2 * 3);
    const CsvTable env = read_csv(out + "/adaptive_envelope.csv");
    require_columns(env, {"snr_db", "best_snr_d_db", "mse"}, "test");
    CHECK(env.rows.size() == 3);
    // Envelope is the pointwise minimum over bank rows.
    for (const auto& erow : env.rows) {
        const double snr = std::stod(erow[env.column("snr_db")]);
        const double best = std::stod(erow[env.column("mse")]);
        for (const auto& trow : table.rows)
            if (std::stod(trow[table.column("snr_db")]) == snr)
                CHECK(best <= std::stod(trow[table.column("mse")]) + 1e-15);
    }
}

TEST_CASE("adaptive requires exactly one snr-d source and a nonempty list") {
    TempDir dir;
    CHECK(run({"adaptive", "--snr-db-range", "8:4:16", "--trials", "50", "--out",
               dir.sub("x")}) == 1);
    CHECK(run({"adaptive", "--snr-d-list", "8", "--snr-d-grid", "8:1:10",
               "--snr-db-range", "8:4:16", "--trials", "50", "--out", dir.sub("y")}) == 1);
    CHECK(run({"adaptive", "--snr-d-list", ",", "--snr-db-range", "8:4:16", "--trials",
               "50", "--out", dir.sub("z")}) == 1);
}

TEST_CASE("plot renders mse and cdf csvs and validates schemas") {
    TempDir dir;
    const std::string out = dir.sub("eval");
    REQUIRE(run({"eval", "--waveform", "sinc", "--snr-db-range", "10:2:14", "--trials",
                 "100", "--n", "64", "--b-dis", "10", "--cdf-at-db", "12", "--out",
                 out}) == 0);

    const std::string mse_svg = dir.sub("mse.svg");
    CHECK(run({"plot", "--kind", "mse", "--in", out + "/mse.csv", "--out", mse_svg}) == 0);
    CHECK(slurp(mse_svg).find("<svg") != std::string::npos);

    const std::string cdf_svg = dir.sub("cdf.svg");
    CHECK(run({"plot", "--kind", "cdf", "--in", out + "/cdf.csv", "--out", cdf_svg}) == 0);

    // Wrong schema for the requested kind exits 1.
    CHECK(run({"plot", "--kind", "cdf", "--in", out + "/mse.csv", "--out",
               dir.sub("bad.svg")}) == 1);
    CHECK(run({"plot", "--kind", "nope", "--in", out + "/mse.csv", "--out",
               dir.sub("bad2.svg")}) == 1);

    // Empty CSV exits 1.
    const std::string empty = dir.sub("empty.csv");
    std::ofstream(empty) << "";
    CHECK(run({"plot", "--kind", "mse", "--in", empty, "--out", dir.sub("e.svg")}) == 1);
}

TEST_CASE("plot renders waveform documents as psd and acf charts") {
    TempDir dir;
    const std::string d = dir.sub("design");
    REQUIRE(run({"design", "--snr-d-db", "12", "--n", "96", "--b-dis", "8", "--sigma",
                 ref_sigma(96, 8, 12.0), "--max-iters", "400", "--out", d}) == 0);
    CHECK(run({"plot", "--kind", "psd", "--in", d + "/waveform.json", "--out",
               dir.sub("psd.svg")}) == 0);
    CHECK(run({"plot", "--kind", "acf", "--in", d + "/waveform.json", "--out",
               dir.sub("acf.svg")}) == 0);
}
