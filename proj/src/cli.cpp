#include "zzbwave/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "zzbwave/adaptive.hpp"
#include "zzbwave/csv.hpp"
#include "zzbwave/errors.hpp"
#include "zzbwave/optimizer.hpp"
#include "zzbwave/simulator.hpp"
#include "zzbwave/svg.hpp"
#include "zzbwave/waveform_io.hpp"

namespace zzbwave {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitBudget = 2;
constexpr int kExitNumerical = 3;

std::vector<double> parse_range(const std::string& spec) {
    double lo = 0, step = 0, hi = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(spec);
    if (!(is >> lo >> c1 >> step >> c2 >> hi) || c1 != ':' || c2 != ':' ||
        !(is >> std::ws).eof())
        throw ArgumentError("bad range '" + spec + "', expected lo:step:hi");
    if (!(step > 0.0) || hi < lo) throw ArgumentError("bad range '" + spec + "'");
    std::vector<double> out;
    for (double v = lo; v <= hi + step * 1e-9; v += step) out.push_back(v);
    return out;
}

std::vector<double> parse_list(const std::string& spec) {
    std::vector<double> out;
    std::istringstream is(spec);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (tok.empty()) continue;
        try {
            size_t pos = 0;
            out.push_back(std::stod(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ArgumentError("bad number '" + tok + "' in list");
        }
    }
    if (out.empty()) throw ArgumentError("empty list '" + spec + "'");
    return out;
}

uint64_t resolve_seed(const std::string& flag_value) {
    std::string text = flag_value;
    if (text.empty()) {
        if (const char* env = std::getenv("ZZBWAVE_SEED")) text = env;
    }
    if (text.empty()) return 0;
    try {
        size_t pos = 0;
        const uint64_t v = std::stoull(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ArgumentError("seed is not a valid unsigned integer: '" + text + "'");
    }
}

void write_manifest(const fs::path& dir, const std::string& command, const json& config,
                    uint64_t seed, const std::vector<std::string>& outputs, double wall_ms) {
    json j;
    j["command"] = command;
    j["config"] = config;
    j["seed"] = seed;
    j["tool_version"] = kToolVersion;
    j["outputs"] = outputs;
    j["wall_ms"] = wall_ms;
    std::ofstream out(dir / "manifest.json");
    if (!out) throw ArgumentError("cannot write manifest in " + dir.string());
    out << j.dump(2) << "\n";
}

WaveformFile to_file(const DesignResult& res, int b_dis, std::optional<double> snr_d_db) {
    WaveformFile wf;
    wf.n = res.waveform.grid.n;
    wf.eps_max = res.waveform.grid.eps_max;
    wf.b_dis = b_dis;
    wf.snr_d_db = snr_d_db;
    wf.r = res.waveform.r;
    wf.spectrum = dct_forward(res.waveform, b_dis).coeffs;
    wf.objective = res.objective;
    wf.iterations = res.iterations;
    wf.converged = res.converged;
    return wf;
}

struct NamedWaveform {
    std::string id;
    AcfVector acf;
    int b_dis = 0;
};

NamedWaveform load_waveform(const std::string& spec, int n, double eps_max, int b_dis) {
    if (spec == "sinc") return {"sinc", make_sinc_acf(Grid(n, eps_max), b_dis), b_dis};
    if (spec == "tone")
        return {"tone", make_single_tone_acf(Grid(n, eps_max), b_dis), b_dis};
    WaveformFile wf = read_waveform_file(spec);
    return {fs::path(spec).stem().string(), wf.acf(), wf.b_dis};
}

NoiseMethod resolve_noise(const std::string& flag, const AcfVector& r, SnrValue snr,
                          std::string& resolved) {
    if (flag == "exact") {
        resolved = "exact_cholesky";
        return NoiseMethod::exact_cholesky;
    }
    if (flag == "spectral") {
        resolved = "spectral_approx";
        return NoiseMethod::spectral_approx;
    }
    if (flag != "auto") throw ArgumentError("--noise must be exact, spectral or auto");
    try {
        GaussianNoiseSampler probe(r, snr, NoiseMethod::exact_cholesky);
        resolved = "exact_cholesky";
        return NoiseMethod::exact_cholesky;
    } catch (const CovarianceError&) {
        resolved = "spectral_approx";
        return NoiseMethod::spectral_approx;
    }
}

struct DesignFlags {
    double snr_d_db = 0;
    int n = 1000, b_dis = 40, max_iters = 500, dykstra_iters = 2000;
    double eps_max = 2.0, sigma = 0.0, tol = 1e-9;
    std::string init = "sinc", out_dir;
};

int do_design(const DesignFlags& f) {
    const auto t0 = Clock::now();
    int n = f.n, b_dis = f.b_dis;
    double eps_max = f.eps_max;
    if (n < 2) throw ArgumentError("--n must be at least 2");
    if (f.max_iters < 1) throw ArgumentError("--max-iters must be positive");
    if (f.dykstra_iters < 1) throw ArgumentError("--dykstra-iters must be positive");
    if (!(f.tol > 0)) throw ArgumentError("--tol must be positive");

    std::optional<AcfVector> start;
    if (f.init.rfind("file:", 0) == 0) {
        WaveformFile wf = read_waveform_file(f.init.substr(5));
        n = wf.n;
        eps_max = wf.eps_max;
        b_dis = wf.b_dis;
        start = wf.acf();
    } else if (f.init != "sinc") {
        throw ArgumentError("--init must be 'sinc' or 'file:<path>'");
    }
    if (b_dis < 1 || b_dis > n) throw ArgumentError("--b-dis must be in [1, n]");

    Grid grid(n, eps_max);
    if (!start) start = make_sinc_acf(grid, b_dis);

    DesignConfig cfg;
    cfg.snr_d = SnrValue::from_db(f.snr_d_db);
    cfg.b_dis = b_dis;
    cfg.sigma = f.sigma;
    cfg.max_iters = f.max_iters;
    cfg.projection = ProjectionConfig{f.dykstra_iters, 1e-11};
    cfg.stop_tol = f.tol;

    const DesignResult res = design_waveform(cfg, *start);

    fs::create_directories(f.out_dir);
    const fs::path dir(f.out_dir);
    write_waveform_file((dir / "waveform.json").string(), to_file(res, b_dis, f.snr_d_db));
    CsvTable trace;
    trace.header = {"iter", "objective", "alpha", "pg_norm"};
    for (const auto& rec : res.iteration_log)
        trace.rows.push_back({std::to_string(rec.iter), format_double(rec.objective),
                              format_double(rec.alpha), format_double(rec.pg_norm)});
    write_csv((dir / "trace.csv").string(), trace);

    json config{{"snr_d_db", f.snr_d_db}, {"n", n},
                {"b_dis", b_dis},         {"eps_max", eps_max},
                {"sigma", f.sigma},       {"max_iters", f.max_iters},
                {"dykstra_iters", f.dykstra_iters},
                {"tol", f.tol},           {"init", f.init}};
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    write_manifest(dir, "design", config, 0, {"waveform.json", "trace.csv"}, ms);

    std::cout << "design: objective " << res.objective << ", iterations "
              << res.iterations << ", "
              << (res.converged ? "converged" : "budget exhausted") << "\n";
    return res.converged ? kExitOk : kExitBudget;
}

struct EvalFlags {
    std::string waveform;
    std::string range;
    long trials = 0;
    std::string seed_text;
    std::optional<double> cdf_at_db;
    std::string noise = "auto";
    int n = 1000, b_dis = 40, workers = 0;
    double eps_max = 2.0;
    std::string out_dir;
};

int do_eval(const EvalFlags& f) {
    const auto t0 = Clock::now();
    if (f.trials < 1) throw ArgumentError("--trials must be positive");
    const uint64_t seed = resolve_seed(f.seed_text);
    const std::vector<double> snrs_db = parse_range(f.range);

    const NamedWaveform wf = load_waveform(f.waveform, f.n, f.eps_max, f.b_dis);
    const Spectrum spec = dct_forward(wf.acf, wf.b_dis);

    fs::create_directories(f.out_dir);
    const fs::path dir(f.out_dir);

    CsvTable mse;
    mse.header = {"snr_db",  "waveform_id", "mse",  "ci_lo", "ci_hi",
                  "trials",  "seed",        "zzb",  "crb"};
    std::string resolved;
    std::optional<SimResult> cdf_result;
    for (double snr_db : snrs_db) {
        const SnrValue snr = SnrValue::from_db(snr_db);
        SimConfig cfg;
        cfg.snr = snr;
        cfg.trials = f.trials;
        cfg.seed = seed;
        cfg.b_dis = wf.b_dis;
        cfg.workers = f.workers;
        cfg.noise_method = resolve_noise(f.noise, wf.acf, snr, resolved);
        const SimResult res = monte_carlo_mse(wf.acf, cfg);
        mse.rows.push_back({format_double(snr_db), wf.id, format_double(res.mse),
                            format_double(res.ci_lo), format_double(res.ci_hi),
                            std::to_string(res.trials), std::to_string(res.seed),
                            format_double(zzb_objective(wf.acf, snr)),
                            format_double(crb(spec, snr.linear))});
        if (f.cdf_at_db && std::abs(snr_db - *f.cdf_at_db) < 1e-9) cdf_result = res;
    }
    write_csv((dir / "mse.csv").string(), mse);
    std::vector<std::string> outputs{"mse.csv"};

    if (f.cdf_at_db) {
        if (!cdf_result) {
            SimConfig cfg;
            cfg.snr = SnrValue::from_db(*f.cdf_at_db);
            cfg.trials = f.trials;
            cfg.seed = seed;
            cfg.b_dis = wf.b_dis;
            cfg.workers = f.workers;
            cfg.noise_method = resolve_noise(f.noise, wf.acf, cfg.snr, resolved);
            cdf_result = monte_carlo_mse(wf.acf, cfg);
        }
        CsvTable cdf;
        cdf.header = {"waveform_id", "abs_error", "cum_prob"};
        for (const auto& [e, p] : cdf_result->cdf())
            cdf.rows.push_back({wf.id, format_double(e), format_double(p)});
        write_csv((dir / "cdf.csv").string(), cdf);
        outputs.push_back("cdf.csv");
    }

    json config{{"waveform", f.waveform},
                {"snr_db_range", f.range},
                {"trials", f.trials},
                {"noise", f.noise},
                {"noise_resolved", resolved},
                {"n", f.n},
                {"b_dis", f.b_dis},
                {"eps_max", f.eps_max},
                {"workers", f.workers}};
    if (f.cdf_at_db) config["cdf_at_db"] = *f.cdf_at_db;
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    write_manifest(dir, "eval", config, seed, outputs, ms);
    std::cout << "eval: " << mse.rows.size() << " SNR points for " << wf.id << "\n";
    return kExitOk;
}

struct AdaptiveFlags {
    std::string snr_d_list;
    std::string snr_d_grid;
    std::string range;
    long trials = 0;
    std::string seed_text;
    int n = 1000, b_dis = 40, max_iters = 500, dykstra_iters = 2000, workers = 0;
    double eps_max = 2.0, sigma = 0.0, tol = 1e-9;
    std::string out_dir;
};

int do_adaptive(const AdaptiveFlags& f) {
    const auto t0 = Clock::now();
    if (f.trials < 1) throw ArgumentError("--trials must be positive");
    if (f.snr_d_list.empty() == f.snr_d_grid.empty())
        throw ArgumentError("give exactly one of --snr-d-list or --snr-d-grid");
    const uint64_t seed = resolve_seed(f.seed_text);

    const std::vector<double> snr_d_db =
        f.snr_d_list.empty() ? parse_range(f.snr_d_grid) : parse_list(f.snr_d_list);
    const std::vector<double> op_db = parse_range(f.range);

    Grid grid(f.n, f.eps_max);
    std::vector<SnrValue> snr_d, ops;
    for (double v : snr_d_db) snr_d.push_back(SnrValue::from_db(v));
    for (double v : op_db) ops.push_back(SnrValue::from_db(v));

    DesignConfig dcfg;
    dcfg.b_dis = f.b_dis;
    dcfg.sigma = f.sigma;
    dcfg.max_iters = f.max_iters;
    dcfg.projection = ProjectionConfig{f.dykstra_iters, 1e-11};
    dcfg.stop_tol = f.tol;

    SimConfig scfg;
    scfg.trials = f.trials;
    scfg.seed = seed;
    scfg.workers = f.workers;

    const WaveformBank bank = build_bank(snr_d, grid, dcfg, scfg, ops);

    fs::create_directories(f.out_dir);
    const fs::path dir(f.out_dir);
    std::vector<std::string> outputs;

    json index;
    index["operating_snr_db"] = op_db;
    index["entries"] = json::array();
    for (size_t e = 0; e < bank.entries.size(); ++e) {
        const BankEntry& entry = bank.entries[e];
        std::ostringstream name;
        name << "wf_" << entry.snr_d.db() << "db.json";
        write_waveform_file((dir / name.str()).string(),
                            to_file(entry.design, f.b_dis, entry.snr_d.db()));
        outputs.push_back(name.str());
        index["entries"].push_back({{"snr_d_db", entry.snr_d.db()},
                                    {"file", name.str()},
                                    {"converged", entry.design.converged},
                                    {"objective", entry.design.objective},
                                    {"valid", entry.valid}});
    }
    {
        std::ofstream out(dir / "bank.json");
        if (!out) throw ArgumentError("cannot write bank.json");
        out << index.dump(2) << "\n";
        outputs.push_back("bank.json");
    }

    CsvTable table;
    table.header = {"snr_d_db", "snr_db", "mse", "ci_lo", "ci_hi", "trials", "seed"};
    for (size_t e = 0; e < bank.entries.size(); ++e)
        for (size_t s = 0; s < bank.operating_snrs.size(); ++s) {
            const SimResult& r = bank.mse_table[e][s];
            table.rows.push_back({format_double(bank.entries[e].snr_d.db()),
                                  format_double(r.snr_db), format_double(r.mse),
                                  format_double(r.ci_lo), format_double(r.ci_hi),
                                  std::to_string(r.trials), std::to_string(r.seed)});
        }
    write_csv((dir / "mse_table.csv").string(), table);
    outputs.push_back("mse_table.csv");

    CsvTable env;
    env.header = {"snr_db", "best_snr_d_db", "mse", "ci_lo", "ci_hi"};
    const std::vector<Selection> sels = adaptive_envelope(bank);
    for (size_t s = 0; s < sels.size(); ++s) {
        const SimResult& r = bank.mse_table[sels[s].entry_index][s];
        env.rows.push_back({format_double(bank.operating_snrs[s].db()),
                            format_double(sels[s].snr_d_db), format_double(r.mse),
                            format_double(r.ci_lo), format_double(r.ci_hi)});
    }
    write_csv((dir / "adaptive_envelope.csv").string(), env);
    outputs.push_back("adaptive_envelope.csv");

    json config{{"snr_d_db", snr_d_db}, {"operating_snr_db", op_db},
                {"trials", f.trials},   {"n", f.n},
                {"b_dis", f.b_dis},     {"eps_max", f.eps_max},
                {"max_iters", f.max_iters}, {"tol", f.tol},
                {"workers", f.workers}};
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    write_manifest(dir, "adaptive", config, seed, outputs, ms);

    bool all_converged = true;
    for (const auto& e : bank.entries) all_converged = all_converged && e.design.converged;
    std::cout << "adaptive: " << bank.entries.size() << " designs, "
              << op_db.size() << " operating SNRs\n";
    return all_converged ? kExitOk : kExitBudget;
}

struct PlotFlags {
    std::string kind;
    std::vector<std::string> inputs;
    std::string out_file;
};

int do_plot(const PlotFlags& f) {
    if (f.inputs.empty()) throw ArgumentError("--in is required");
    std::vector<SvgSeries> series;
    bool log_y = false;
    std::string title, xlabel, ylabel;

    if (f.kind == "mse") {
        const CsvTable t = read_csv(f.inputs.front());
        require_columns(t, {"snr_db", "waveform_id", "mse", "zzb", "crb"}, "mse plot");
        const int cs = t.column("snr_db"), cw = t.column("waveform_id");
        std::vector<std::string> ids;
        for (const auto& row : t.rows)
            if (std::find(ids.begin(), ids.end(), row[cw]) == ids.end())
                ids.push_back(row[cw]);
        for (const auto& id : ids)
            for (const char* col : {"mse", "zzb", "crb"}) {
                SvgSeries s;
                s.label = std::string(col) + " " + id;
                for (const auto& row : t.rows) {
                    if (row[cw] != id) continue;
                    s.x.push_back(std::stod(row[cs]));
                    s.y.push_back(std::stod(row[t.column(col)]));
                }
                series.push_back(std::move(s));
            }
        log_y = true;
        title = "MSE vs SNR";
        xlabel = "SNR (dB)";
        ylabel = "MSE";
    } else if (f.kind == "cdf") {
        const CsvTable t = read_csv(f.inputs.front());
        require_columns(t, {"waveform_id", "abs_error", "cum_prob"}, "cdf plot");
        const int cw = t.column("waveform_id"), ce = t.column("abs_error"),
                  cp = t.column("cum_prob");
        std::vector<std::string> ids;
        for (const auto& row : t.rows)
            if (std::find(ids.begin(), ids.end(), row[cw]) == ids.end())
                ids.push_back(row[cw]);
        for (const auto& id : ids) {
            SvgSeries s;
            s.label = id;
            for (const auto& row : t.rows) {
                if (row[cw] != id) continue;
                s.x.push_back(std::stod(row[ce]));
                s.y.push_back(std::stod(row[cp]));
            }
            series.push_back(std::move(s));
        }
        title = "CDF of absolute ranging error";
        xlabel = "absolute error";
        ylabel = "cumulative probability";
    } else if (f.kind == "psd" || f.kind == "acf") {
        for (const auto& path : f.inputs) {
            const WaveformFile wf = read_waveform_file(path);
            SvgSeries s;
            s.label = fs::path(path).stem().string();
            if (f.kind == "psd") {
                const int upto = std::min(wf.n, wf.b_dis + 10);
                for (int k = 0; k < upto; ++k) {
                    s.x.push_back(k + 1);
                    s.y.push_back(wf.spectrum[k]);
                }
            } else {
                const Grid g(wf.n, wf.eps_max);
                for (int i = 0; i < wf.n; ++i) {
                    s.x.push_back(g.x[i]);
                    s.y.push_back(wf.r[i]);
                }
            }
            series.push_back(std::move(s));
        }
        title = f.kind == "psd" ? "Discrete PSD" : "Normalized ACF";
        xlabel = f.kind == "psd" ? "spectral bin" : "lag";
        ylabel = f.kind == "psd" ? "coefficient" : "correlation";
    } else {
        throw ArgumentError("--kind must be one of mse, cdf, psd, acf");
    }

    if (series.empty() || series.front().x.empty())
        throw ArgumentError("plot: no data rows in input");
    write_line_chart(f.out_file, title, xlabel, ylabel, series, log_y);
    std::cout << "plot: wrote " << f.out_file << "\n";
    return kExitOk;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"ZZB-optimal ranging waveform design and evaluation"};
    app.require_subcommand(1);

    DesignFlags df;
    CLI::App* design = app.add_subcommand("design", "design a waveform for one SNR_D");
    design->add_option("--snr-d-db", df.snr_d_db, "design SNR in dB")->required();
    design->add_option("--n", df.n, "grid size");
    design->add_option("--b-dis", df.b_dis, "band limit index");
    design->add_option("--eps-max", df.eps_max, "maximum ranging error");
    design->add_option("--sigma", df.sigma, "pre-projection step (0 = auto)");
    design->add_option("--max-iters", df.max_iters, "iteration budget");
    design->add_option("--dykstra-iters", df.dykstra_iters, "projection sweep budget");
    design->add_option("--tol", df.tol, "stopping tolerance");
    design->add_option("--init", df.init, "sinc or file:<path>");
    design->add_option("--out", df.out_dir, "output directory")->required();

    EvalFlags ef;
    CLI::App* eval = app.add_subcommand("eval", "Monte Carlo MSE versus bounds");
    eval->add_option("--waveform", ef.waveform, "path, 'sinc' or 'tone'")->required();
    eval->add_option("--snr-db-range", ef.range, "lo:step:hi in dB")->required();
    eval->add_option("--trials", ef.trials, "Monte Carlo trials per SNR")->required();
    eval->add_option("--seed", ef.seed_text, "RNG seed (default: ZZBWAVE_SEED or 0)");
    double cdf_at = 0;
    CLI::Option* cdf_opt = eval->add_option("--cdf-at-db", cdf_at, "emit error CDF at this SNR");
    eval->add_option("--noise", ef.noise, "exact | spectral | auto");
    eval->add_option("--n", ef.n, "grid size for benchmark waveforms");
    eval->add_option("--b-dis", ef.b_dis, "band limit for benchmark waveforms");
    eval->add_option("--eps-max", ef.eps_max, "maximum ranging error");
    eval->add_option("--workers", ef.workers, "worker threads (0 = auto)");
    eval->add_option("--out", ef.out_dir, "output directory")->required();

    AdaptiveFlags af;
    CLI::App* adaptive = app.add_subcommand("adaptive", "bank of designs plus envelope");
    adaptive->add_option("--snr-d-list", af.snr_d_list, "comma list of design SNRs (dB)");
    adaptive->add_option("--snr-d-grid", af.snr_d_grid, "lo:step:hi design SNRs (dB)");
    adaptive->add_option("--snr-db-range", af.range, "operating SNR grid (dB)")->required();
    adaptive->add_option("--trials", af.trials, "trials per table cell")->required();
    adaptive->add_option("--seed", af.seed_text, "RNG seed (default: ZZBWAVE_SEED or 0)");
    adaptive->add_option("--n", af.n, "grid size");
    adaptive->add_option("--b-dis", af.b_dis, "band limit index");
    adaptive->add_option("--eps-max", af.eps_max, "maximum ranging error");
    adaptive->add_option("--sigma", af.sigma, "pre-projection step (0 = auto)");
    adaptive->add_option("--max-iters", af.max_iters, "design iteration budget");
    adaptive->add_option("--dykstra-iters", af.dykstra_iters, "projection sweep budget");
    adaptive->add_option("--tol", af.tol, "design stopping tolerance");
    adaptive->add_option("--workers", af.workers, "worker threads (0 = auto)");
    adaptive->add_option("--out", af.out_dir, "output directory")->required();

    PlotFlags pf;
    CLI::App* plot = app.add_subcommand("plot", "render CSV/waveform artifacts to SVG");
    plot->add_option("--kind", pf.kind, "mse | cdf | psd | acf")->required();
    plot->add_option("--in", pf.inputs, "input file(s)")->required();
    plot->add_option("--out", pf.out_file, "output SVG path")->required();

    try {
        app.parse(argc, const_cast<char**>(argv));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (design->parsed()) return do_design(df);
        if (eval->parsed()) {
            if (cdf_opt->count() > 0) ef.cdf_at_db = cdf_at;
            return do_eval(ef);
        }
        if (adaptive->parsed()) return do_adaptive(af);
        if (plot->parsed()) return do_plot(pf);
        return kExitUsage;
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const CovarianceError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const DegenerateSpectrumError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

} // namespace zzbwave
