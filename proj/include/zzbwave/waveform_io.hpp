#pragma once

#include <optional>
#include <string>

#include "zzbwave/spectrum.hpp"

namespace zzbwave {

// On-disk waveform document (JSON, version 1): grid parameters, ACF samples,
// spectrum, and design metadata. Doubles round-trip exactly.
struct WaveformFile {
    int version = 1;
    int n = 0;
    double eps_max = 0.0;
    int b_dis = 0;
    std::optional<double> snr_d_db; // absent for benchmark waveforms
    Eigen::VectorXd r;
    Eigen::VectorXd spectrum;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;

    AcfVector acf() const { return AcfVector(Grid(n, eps_max), r); }
};

void write_waveform_file(const std::string& path, const WaveformFile& wf);
WaveformFile read_waveform_file(const std::string& path);

} // namespace zzbwave
