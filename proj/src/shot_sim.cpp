#include "pcqc/shot_sim.hpp"

#include <cmath>

namespace pcqc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t delta_index,
                       std::uint64_t shot_index, std::uint64_t draw) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ (delta_index * 0x9E3779B97F4A7C15ULL));
    h = splitmix64(h ^ (shot_index * 0xBF58476D1CE4E5B9ULL));
    h = splitmix64(h ^ (draw * 0x94D049BB133111EBULL));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

std::vector<ShotRecord> simulate_shots(const TeleportConfig& teleport_config,
                                       const ReadoutConfig& readout_config,
                                       const QubitState& input_a,
                                       const std::vector<double>& deltas,
                                       const ShotOptions& options) {
    if (options.n_per_delta < 1) {
        throw ConfigError("simulate_shots: n_per_delta must be >= 1");
    }
    if (options.detector_efficiency < 0.0 || options.detector_efficiency > 1.0 ||
        options.zone_loss < 0.0 || options.zone_loss > 1.0) {
        throw ConfigError("simulate_shots: probabilities must lie in [0, 1]");
    }
    // The dynamics is deterministic; only the two measurements are sampled.
    const TeleportOutcome tele = run_teleport(teleport_config, input_a, 1);
    const double p_accept =
        options.detector_efficiency * tele.success_probability;
    const double survival =
        (1.0 - options.zone_loss) * (1.0 - options.zone_loss);

    std::vector<ShotRecord> records;
    records.reserve(deltas.size() * static_cast<std::size_t>(options.n_per_delta));
    for (std::uint32_t d = 0; d < deltas.size(); ++d) {
        const TransferMatrix transfer =
            composite_transfer(readout_config, deltas[d]);
        const double p1 =
            survival * excitation_probability(tele.b_qubit, transfer);
        for (std::uint32_t s = 0;
             s < static_cast<std::uint32_t>(options.n_per_delta); ++s) {
            ShotRecord rec;
            rec.delta = deltas[d];
            rec.delta_index = d;
            rec.shot_index = s;
            rec.atom_a_excited =
                counter_uniform(options.seed, d, s, 0) < p_accept;
            if (rec.atom_a_excited) {
                rec.atom_b_excited = counter_uniform(options.seed, d, s, 1) < p1;
            }
            records.push_back(rec);
        }
    }
    return records;
}

EstimationReport estimate(const std::vector<ShotRecord>& records,
                          const std::vector<double>& deltas,
                          const std::vector<TransferMatrix>& transfers) {
    if (deltas.size() < 4 || transfers.size() != deltas.size()) {
        throw ConfigError("estimate: need >= 4 detunings with matching transfers");
    }
    std::vector<DeltaEstimate> per(deltas.size());
    for (std::size_t d = 0; d < deltas.size(); ++d) {
        per[d].delta = deltas[d];
    }
    long total = 0, accepted_total = 0;
    std::vector<long> excited(deltas.size(), 0);
    for (const ShotRecord& rec : records) {
        if (rec.delta_index >= per.size()) {
            throw ConfigError("estimate: record delta_index out of range");
        }
        DeltaEstimate& e = per[rec.delta_index];
        ++e.n_total;
        ++total;
        if (rec.atom_a_excited) {
            ++e.n_accepted;
            ++accepted_total;
            if (rec.atom_b_excited) ++excited[rec.delta_index];
        }
    }

    std::vector<RamseyMeasurement> ms(deltas.size());
    for (std::size_t d = 0; d < deltas.size(); ++d) {
        DeltaEstimate& e = per[d];
        if (e.n_accepted == 0) {
            throw InsufficientDataError(
                "estimate: no accepted shots at detuning " +
                std::to_string(e.delta) + " rad/s");
        }
        e.p1_hat = static_cast<double>(excited[d]) / e.n_accepted;
        e.standard_error =
            std::sqrt(std::max(e.p1_hat * (1.0 - e.p1_hat), 1e-12) /
                      e.n_accepted);
        ms[d].delta = e.delta;
        ms[d].p1 = e.p1_hat;
        ms[d].sigma = e.standard_error;
        ms[d].transfer = transfers[d];
    }

    EstimationReport report;
    report.per_delta = std::move(per);
    report.tomography = tomography_invert(ms);
    report.theta_ci = report.tomography.theta_sigma;
    report.phi_ci = report.tomography.phi_sigma;
    report.acceptance_fraction =
        total > 0 ? static_cast<double>(accepted_total) / total : 0.0;
    return report;
}

EstimationReport run_shot_pipeline(const TeleportConfig& teleport_config,
                                   const ReadoutConfig& readout_config,
                                   const QubitState& input_a,
                                   const std::vector<double>& deltas,
                                   const ShotOptions& options) {
    const std::vector<ShotRecord> records = simulate_shots(
        teleport_config, readout_config, input_a, deltas, options);
    std::vector<TransferMatrix> transfers;
    transfers.reserve(deltas.size());
    for (double delta : deltas) {
        transfers.push_back(composite_transfer(readout_config, delta));
    }
    EstimationReport report = estimate(records, deltas, transfers);
    const TeleportOutcome tele = run_teleport(teleport_config, input_a, 1);
    report.exact_accept_probability =
        options.detector_efficiency * tele.success_probability;
    return report;
}

}  // namespace pcqc
