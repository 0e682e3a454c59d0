#pragma once

#include <cstdint>
#include <vector>

#include "pcqc/readout.hpp"
#include "pcqc/teleport.hpp"

namespace pcqc {

/// Counter-based generator: each (seed, delta_index, shot_index, draw) maps
/// to one uniform in [0, 1) independently of evaluation order.
double counter_uniform(std::uint64_t seed, std::uint64_t delta_index,
                       std::uint64_t shot_index, std::uint64_t draw);

struct ShotRecord {
    double delta = 0.0;          // rad/s
    bool atom_a_excited = false;  // accept / discard flag
    bool atom_b_excited = false;  // meaningful only when accepted
    std::uint32_t delta_index = 0;
    std::uint32_t shot_index = 0;
};

struct ShotOptions {
    std::uint64_t seed = 0;
    int n_per_delta = 1;
    double detector_efficiency = 1.0;  // atom-A detector
    double zone_loss = 0.0;  // per-zone spontaneous-emission loss probability
};

struct DeltaEstimate {
    double delta = 0.0;
    long n_total = 0;
    long n_accepted = 0;
    double p1_hat = 0.0;
    double standard_error = 0.0;
};

struct EstimationReport {
    std::vector<DeltaEstimate> per_delta;
    TomographyResult tomography;
    double theta_ci = 0.0;  // one-sigma half width
    double phi_ci = 0.0;
    double acceptance_fraction = 0.0;
    double exact_accept_probability = 0.0;
};

std::vector<ShotRecord> simulate_shots(const TeleportConfig& teleport_config,
                                       const ReadoutConfig& readout_config,
                                       const QubitState& input_a,
                                       const std::vector<double>& deltas,
                                       const ShotOptions& options);

EstimationReport estimate(const std::vector<ShotRecord>& records,
                          const std::vector<double>& deltas,
                          const std::vector<TransferMatrix>& transfers);

/// Forward model plus sampling plus estimation in one call.
EstimationReport run_shot_pipeline(const TeleportConfig& teleport_config,
                                   const ReadoutConfig& readout_config,
                                   const QubitState& input_a,
                                   const std::vector<double>& deltas,
                                   const ShotOptions& options);

}  // namespace pcqc
