#include "zzbwave/waveform_io.hpp"

#include <fstream>

#include <json.hpp>

#include "zzbwave/errors.hpp"

namespace zzbwave {

using nlohmann::json;

void write_waveform_file(const std::string& path, const WaveformFile& wf) {
    json j;
    j["version"] = wf.version;
    j["n"] = wf.n;
    j["eps_max"] = wf.eps_max;
    j["b_dis"] = wf.b_dis;
    if (wf.snr_d_db)
        j["snr_d_db"] = *wf.snr_d_db;
    else
        j["snr_d_db"] = nullptr;
    j["r"] = std::vector<double>(wf.r.data(), wf.r.data() + wf.r.size());
    j["spectrum"] =
        std::vector<double>(wf.spectrum.data(), wf.spectrum.data() + wf.spectrum.size());
    j["meta"] = {{"objective", wf.objective},
                 {"iterations", wf.iterations},
                 {"converged", wf.converged}};
    std::ofstream out(path);
    if (!out) throw ArgumentError("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
    if (!out) throw ArgumentError("write failed: " + path);
}

WaveformFile read_waveform_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open waveform file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ArgumentError("invalid waveform JSON in " + path + ": " + e.what());
    }
    try {
        WaveformFile wf;
        wf.version = j.at("version").get<int>();
        if (wf.version != 1)
            throw ArgumentError("unsupported waveform file version in " + path);
        wf.n = j.at("n").get<int>();
        wf.eps_max = j.at("eps_max").get<double>();
        wf.b_dis = j.at("b_dis").get<int>();
        if (!j.at("snr_d_db").is_null()) wf.snr_d_db = j.at("snr_d_db").get<double>();
        const auto rv = j.at("r").get<std::vector<double>>();
        const auto sv = j.at("spectrum").get<std::vector<double>>();
        if (static_cast<int>(rv.size()) != wf.n || static_cast<int>(sv.size()) != wf.n)
            throw ArgumentError("waveform array length mismatch in " + path);
        wf.r = Eigen::Map<const Eigen::VectorXd>(rv.data(), rv.size());
        wf.spectrum = Eigen::Map<const Eigen::VectorXd>(sv.data(), sv.size());
        const auto& meta = j.at("meta");
        wf.objective = meta.at("objective").get<double>();
        wf.iterations = meta.at("iterations").get<int>();
        wf.converged = meta.at("converged").get<bool>();
        return wf;
    } catch (const json::exception& e) {
        throw ArgumentError("malformed waveform file " + path + ": " + e.what());
    }
}

} // namespace zzbwave
