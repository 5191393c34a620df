#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zzbwave/optimizer.hpp"
#include "zzbwave/simulator.hpp"

namespace zzbwave {

struct BankEntry {
    SnrValue snr_d;
    DesignResult design;
    bool valid = false; // converged designs only participate in selection
};

struct WaveformBank {
    Grid grid;
    int b_dis = 0;
    std::vector<BankEntry> entries;
    std::vector<SnrValue> operating_snrs;
    // mse_table[e][s]: simulated result of entry e at operating SNR s
    std::vector<std::vector<SimResult>> mse_table;
};

struct Selection {
    int entry_index = -1;
    double snr_d_db = 0.0;
    double mse = 0.0;
    bool nearest_neighbor = false; // operating SNR off the table grid
};

// One design per SNR_D plus a simulated MSE table over the operating grid.
// Noise synthesis per waveform: exact Cholesky when the Toeplitz covariance
// admits it, spectral clipping otherwise.
WaveformBank build_bank(const std::vector<SnrValue>& snr_d_list, const Grid& grid,
                        const DesignConfig& design_template, const SimConfig& sim_template,
                        const std::vector<SnrValue>& operating_snrs,
                        const std::optional<AcfVector>& init = std::nullopt);

// Minimum point-estimate MSE at the operating SNR; ties toward lower SNR_D.
Selection select_waveform(const WaveformBank& bank, SnrValue operating_snr);

// Pointwise-minimum MSE across valid entries, one selection per grid SNR.
std::vector<Selection> adaptive_envelope(const WaveformBank& bank);

} // namespace zzbwave
