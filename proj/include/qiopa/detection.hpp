#pragma once

#include "qiopa/channels.hpp"
#include "qiopa/universality.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace qiopa {

enum class Detector : int { Da = 0, Db = 1, DbStar = 2, D2 = 3, D2Star = 4, DT = 5 };

// Per-detector quantum efficiencies, a dark-count probability per coincidence
// window, and the k1 beam-splitter ratio.
struct DetectorModel {
    std::array<double, 6> qe{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
    double dark_prob = 0.0;
    double beamsplitter_ratio = 0.5;

    static DetectorModel ideal() { return {}; }

    static DetectorModel uniform(double qe_all, double dark = 0.0, double bs = 0.5) {
        DetectorModel m;
        m.qe.fill(qe_all);
        m.dark_prob = dark;
        m.beamsplitter_ratio = bs;
        m.validate();
        return m;
    }

    double qe_of(Detector d) const { return qe[static_cast<int>(d)]; }

    void validate() const {
        for (double q : qe)
            if (q < 0.0 || q > 1.0) throw Error(ErrorKind::invalid_arguments, "QE outside [0,1]");
        if (dark_prob < 0.0 || dark_prob > 1.0)
            throw Error(ErrorKind::invalid_arguments, "dark probability outside [0,1]");
        if (beamsplitter_ratio < 0.0 || beamsplitter_ratio > 1.0)
            throw Error(ErrorKind::invalid_arguments, "beam-splitter ratio outside [0,1]");
    }
};

struct ExperimentConfig {
    PolarizationQubit qubit;
    AmplifierParams params{0.11, 0.0};
    std::int64_t trials = 100000;
    std::uint64_t seed = 1;
    double z_offset = 0.0;
    double z_sigma = 1.0;
    double n2_contamination = 0.0; // relative weight of the unwanted N=2 injection
    int cutoff = 12;

    void validate() const {
        if (trials < 1) throw Error(ErrorKind::insufficient_statistics, "trials must be >= 1");
        if (z_sigma <= 0.0) throw Error(ErrorKind::invalid_arguments, "z_sigma must be > 0");
        if (n2_contamination < 0.0 || n2_contamination > 1.0)
            throw Error(ErrorKind::invalid_arguments, "contamination weight outside [0,1]");
    }
};

// Gaussian pulse-overlap envelope: 1 means fully injected, 0 pure SPDC.
inline double injection_overlap(double z_offset, double z_sigma) {
    if (z_sigma <= 0.0) throw Error(ErrorKind::invalid_arguments, "z_sigma must be > 0");
    return std::exp(-z_offset * z_offset / (2.0 * z_sigma * z_sigma));
}

enum class ExperimentMode { clone, unot };

struct RunCounts {
    std::int64_t trials = 0;
    std::int64_t signal = 0;
    std::int64_t noise = 0;
};

struct ExperimentResult {
    ExperimentMode mode = ExperimentMode::clone;
    RunCounts counts;
    double r_hat = 0.0;
    double r_se = 0.0;
    double f_hat = 0.0;
    double f_se = 0.0;
    FidelityReport report; // estimated pair filled per mode, leakage from source state
};

namespace detail {

struct SectorTable {
    std::vector<double> cdf;
    std::vector<OccupationKet> kets;

    explicit SectorTable(const StateVector& s) {
        double acc = 0.0;
        for (const auto& [k, a] : s.amplitudes()) {
            acc += std::norm(a);
            cdf.push_back(acc);
            kets.push_back(k);
        }
    }

    // samples a ket; nullptr means the draw fell into truncation loss
    const OccupationKet* sample(double u) const {
        auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) return nullptr;
        return &kets[static_cast<std::size_t>(it - cdf.begin())];
    }
};

inline bool detector_clicks(Rng& rng, int photons, double qe, double dark) {
    bool hit = false;
    for (int i = 0; i < photons; ++i) {
        if (qe >= 1.0) { hit = true; break; }
        if (rng.u01() < qe) { hit = true; break; }
    }
    if (!hit && dark > 0.0) hit = rng.u01() < dark;
    return hit;
}

} // namespace detail

// Monte-Carlo model of the self-injected coincidence experiment.  Each trial
// draws the source (injected evolution vs SPDC, per the overlap envelope),
// samples an output occupation ket in the analyzer basis aligned with the
// injected qubit, routes the k1 photons through the beam splitter, and applies
// Bernoulli efficiencies and dark counts per detector.
//
// Clone mode counts [D2,DT,Da,Db] against [D2,DT,Da,Db*]; the estimator
// R = signal / (2 noise) removes the factor-two beam-splitter acceptance
// difference between the |Psi Psi> and |Psi Psi_perp> patterns, so it
// estimates the sector weight ratio (2 for the ideal amplifier).
// U-NOT mode counts [D2,DT,Da,Db] against [D2*,DT,Da,Db] with equal
// acceptances: R* = signal / noise.
inline ExperimentResult simulate_experiment(const ExperimentConfig& config, const DetectorModel& det,
                                            ExperimentMode mode) {
    config.validate();
    det.validate();

    const Su2Element analyzer = Su2Element::taking_h_to(config.qubit).inverse();
    const StateVector injected = apply_polarization_rotation(
        evolve_qubit(config.qubit, config.params, config.cutoff), analyzer, RotationTarget::both);
    const StateVector spdc = apply_polarization_rotation(spdc_output(config.params, config.cutoff),
                                                         analyzer, RotationTarget::both);
    detail::SectorTable injected_table(injected);
    detail::SectorTable spdc_table(spdc);

    std::optional<detail::SectorTable> n2_table;
    if (config.n2_contamination > 0.0) {
        StateVector two(config.cutoff);
        two.accumulate(OccupationKet(2, 0, 0, 0), 1.0);
        two = apply_polarization_rotation(two, Su2Element::taking_h_to(config.qubit), RotationTarget::k1);
        const StateVector evolved = evolution_oracle(two, config.params, config.cutoff);
        n2_table.emplace(apply_polarization_rotation(evolved, analyzer, RotationTarget::both));
    }

    const double p_inject = injection_overlap(config.z_offset, config.z_sigma);
    const double bs = det.beamsplitter_ratio;
    const double dark = det.dark_prob;

    Rng rng(config.seed);
    RunCounts counts;
    counts.trials = config.trials;

    for (std::int64_t t = 0; t < config.trials; ++t) {
        const detail::SectorTable* table = &spdc_table;
        if (p_inject >= 1.0 || rng.u01() < p_inject) {
            table = &injected_table;
            if (n2_table && rng.u01() < config.n2_contamination) table = &*n2_table;
        }
        const OccupationKet* ket = table->sample(rng.u01());
        int n1_pi = 0, n1_perp = 0, n2_pi = 0, n2_perp = 0;
        if (ket) {
            n1_pi = (*ket)[Mode::k1h];
            n1_perp = (*ket)[Mode::k1v];
            n2_pi = (*ket)[Mode::k2h];
            n2_perp = (*ket)[Mode::k2v];
        }

        // k1 beam splitter: photons route to arm a with probability bs
        int a_pi = 0, b_pi = 0, a_perp = 0, b_perp = 0;
        for (int i = 0; i < n1_pi; ++i) (rng.u01() < bs ? a_pi : b_pi)++;
        for (int i = 0; i < n1_perp; ++i) (rng.u01() < bs ? a_perp : b_perp)++;

        const bool trigger = detail::detector_clicks(rng, 1, det.qe_of(Detector::DT), dark);

        if (mode == ExperimentMode::clone) {
            // polarization analysis on both arms; no PBS on k2
            const bool da = detail::detector_clicks(rng, a_pi, det.qe_of(Detector::Da), dark);
            const bool db = detail::detector_clicks(rng, b_pi, det.qe_of(Detector::Db), dark);
            const bool db_star = detail::detector_clicks(rng, b_perp, det.qe_of(Detector::DbStar), dark);
            const bool d2 = detail::detector_clicks(rng, n2_pi + n2_perp, det.qe_of(Detector::D2), dark);
            if (trigger && da && d2) {
                if (db) ++counts.signal;
                if (db_star) ++counts.noise;
            }
        } else {
            // plain beam splitter on k1; PBS on k2 with the flipped port on D2
            const bool da = detail::detector_clicks(rng, a_pi + a_perp, det.qe_of(Detector::Da), dark);
            const bool db = detail::detector_clicks(rng, b_pi + b_perp, det.qe_of(Detector::Db), dark);
            const bool d2 = detail::detector_clicks(rng, n2_perp, det.qe_of(Detector::D2), dark);
            const bool d2_star = detail::detector_clicks(rng, n2_pi, det.qe_of(Detector::D2Star), dark);
            if (trigger && da && db) {
                if (d2) ++counts.signal;
                if (d2_star) ++counts.noise;
            }
        }
    }

    if (counts.noise == 0)
        throw InsufficientStatisticsError("no counts in the noise denominator", counts.signal,
                                          counts.noise);

    ExperimentResult res;
    res.mode = mode;
    res.counts = counts;
    const double s = static_cast<double>(counts.signal);
    const double n = static_cast<double>(counts.noise);
    const double rel = std::sqrt(1.0 / s + 1.0 / n);
    if (mode == ExperimentMode::clone) {
        res.r_hat = s / (2.0 * n);
        res.r_se = res.r_hat * rel;
        res.f_hat = fidelity_from_ratio(res.r_hat);
        res.f_se = 2.0 / std::pow(2.0 * res.r_hat + 2.0, 2.0) * res.r_se;
        res.report.F = res.f_hat;
        res.report.R = res.r_hat;
    } else {
        res.r_hat = s / n;
        res.r_se = res.r_hat * rel;
        res.f_hat = unot_from_ratio(res.r_hat);
        res.f_se = res.r_se / std::pow(res.r_hat + 1.0, 2.0);
        res.report.F_star = res.f_hat;
        res.report.R_star = res.r_hat;
    }
    res.report.leakage = injected.leakage();
    return res;
}

inline ExperimentResult simulate_cloning_run(const ExperimentConfig& config, const DetectorModel& det) {
    return simulate_experiment(config, det, ExperimentMode::clone);
}

inline ExperimentResult simulate_unot_run(const ExperimentConfig& config, const DetectorModel& det) {
    return simulate_experiment(config, det, ExperimentMode::unot);
}

struct ZScanRow {
    double z = 0.0;
    std::int64_t counts_signal = 0;
    std::int64_t counts_noise = 0;
    double r_hat = 0.0; // NaN when the denominator is empty
};

// One simulate run per grid point; the per-point seed is seed XOR point index
// so scans are reproducible piecewise.
inline std::vector<ZScanRow> z_scan(const ExperimentConfig& config, const DetectorModel& det,
                                    const std::vector<double>& z_grid,
                                    ExperimentMode mode = ExperimentMode::clone) {
    if (z_grid.empty()) throw Error(ErrorKind::invalid_arguments, "empty z grid");
    std::vector<ZScanRow> rows;
    rows.reserve(z_grid.size());
    for (std::size_t i = 0; i < z_grid.size(); ++i) {
        ExperimentConfig point = config;
        point.z_offset = z_grid[i];
        point.seed = config.seed ^ static_cast<std::uint64_t>(i);
        ZScanRow row;
        row.z = z_grid[i];
        try {
            const ExperimentResult res = simulate_experiment(point, det, mode);
            row.counts_signal = res.counts.signal;
            row.counts_noise = res.counts.noise;
            row.r_hat = res.r_hat;
        } catch (const InsufficientStatisticsError& e) {
            row.counts_signal = e.signal_counts;
            row.counts_noise = e.noise_counts;
            row.r_hat = std::numeric_limits<double>::quiet_NaN();
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace qiopa
