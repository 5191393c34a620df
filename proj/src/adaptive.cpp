#include "zzbwave/adaptive.hpp"

#include <cmath>
#include <limits>

#include "zzbwave/errors.hpp"

namespace zzbwave {

namespace {

bool covariance_is_psd(const AcfVector& r, SnrValue snr) {
    try {
        GaussianNoiseSampler probe(r, snr, NoiseMethod::exact_cholesky);
        return true;
    } catch (const CovarianceError&) {
        return false;
    }
}

} // namespace

WaveformBank build_bank(const std::vector<SnrValue>& snr_d_list, const Grid& grid,
                        const DesignConfig& design_template, const SimConfig& sim_template,
                        const std::vector<SnrValue>& operating_snrs,
                        const std::optional<AcfVector>& init) {
    if (snr_d_list.empty()) throw ArgumentError("build_bank: empty SNR_D list");
    if (operating_snrs.empty()) throw ArgumentError("build_bank: empty operating grid");

    WaveformBank bank;
    bank.grid = grid;
    bank.b_dis = design_template.b_dis;
    bank.operating_snrs = operating_snrs;

    const AcfVector start = init ? *init : make_sinc_acf(grid, design_template.b_dis);
    for (SnrValue sd : snr_d_list) {
        DesignConfig cfg = design_template;
        cfg.snr_d = sd;
        BankEntry entry{sd, design_waveform(cfg, start), false};
        entry.valid = entry.design.converged;
        bank.entries.push_back(std::move(entry));
    }

    for (const BankEntry& entry : bank.entries) {
        std::vector<SimResult> row;
        row.reserve(operating_snrs.size());
        const bool psd = covariance_is_psd(entry.design.waveform, operating_snrs.front());
        for (SnrValue snr : operating_snrs) {
            SimConfig cfg = sim_template;
            cfg.snr = snr;
            cfg.b_dis = design_template.b_dis;
            cfg.noise_method =
                psd ? NoiseMethod::exact_cholesky : NoiseMethod::spectral_approx;
            row.push_back(monte_carlo_mse(entry.design.waveform, cfg));
        }
        bank.mse_table.push_back(std::move(row));
    }
    return bank;
}

Selection select_waveform(const WaveformBank& bank, SnrValue operating_snr) {
    if (bank.entries.empty()) throw ArgumentError("select_waveform: empty bank");
    bool any_valid = false;
    for (const auto& e : bank.entries) any_valid = any_valid || e.valid;
    if (!any_valid) throw ArgumentError("select_waveform: no converged bank entry");

    int col = -1;
    bool nn = true;
    double best_gap = std::numeric_limits<double>::infinity();
    for (size_t s = 0; s < bank.operating_snrs.size(); ++s) {
        const double gap = std::abs(bank.operating_snrs[s].db() - operating_snr.db());
        if (gap < best_gap) {
            best_gap = gap;
            col = static_cast<int>(s);
        }
    }
    if (best_gap < 1e-9) nn = false;

    Selection sel;
    sel.nearest_neighbor = nn;
    for (size_t e = 0; e < bank.entries.size(); ++e) {
        if (!bank.entries[e].valid) continue;
        const double mse = bank.mse_table[e][col].mse;
        const bool better =
            sel.entry_index < 0 || mse < sel.mse ||
            (mse == sel.mse &&
             bank.entries[e].snr_d.db() < bank.entries[sel.entry_index].snr_d.db());
        if (better) {
            sel.entry_index = static_cast<int>(e);
            sel.mse = mse;
            sel.snr_d_db = bank.entries[e].snr_d.db();
        }
    }
    return sel;
}

std::vector<Selection> adaptive_envelope(const WaveformBank& bank) {
    std::vector<Selection> out;
    out.reserve(bank.operating_snrs.size());
    for (SnrValue snr : bank.operating_snrs) out.push_back(select_waveform(bank, snr));
    return out;
}

} // namespace zzbwave
