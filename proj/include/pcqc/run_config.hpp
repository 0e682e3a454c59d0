#pragma once

#include <string>
#include <vector>

#include "pcqc/readout.hpp"
#include "pcqc/teleport.hpp"

namespace pcqc {

/// Everything a run needs, filled with the chip's published parameter set
/// by default. Parsed from a sectioned key = value text file; any key can
/// be overridden through the environment (PCQC_SECTION_KEY).
struct RunConfig {
    PhysicalParams physical;

    CavityModel cavity;
    std::string cavity_profile_file;  // overrides the analytic model when set

    WaveguideModel waveguide1{};
    WaveguideModel waveguide2{2.0, 6.0, 18.0, 18.0};

    double g_b_target = 9.0 * kPi / 4.0;   // rad, atom-B pulse area over 18a
    double g_a_target = 7.0 * kPi / 4.0;   // rad, expected atom-A pulse area
    double zone_area_target = kPi / 2.0;   // rad, per readout zone

    std::vector<double> deltas;      // rad/s; empty means auto-select
    double delta_range_factor = 4.0;  // search range in units of average Rabi

    int shots_per_delta = 100000;
    std::uint64_t seed = 12345;
    double detector_efficiency = 1.0;
    double zone_loss = 0.0;

    double input_theta = kPi / 4.0;
    double input_phi = -kPi / 6.0;

    std::string output_dir = ".";

    std::vector<std::string> warnings;  // unknown keys, kept non-fatal
};

/// Parses `path`; an empty path (or empty file) yields pure defaults.
/// Unknown keys become warnings; malformed or out-of-range values throw
/// ConfigError with the offending line and field named.
RunConfig parse_config(const std::string& path);

/// Canonical serialization of the effective configuration; hashed into the
/// CSV provenance comments.
std::string config_text(const RunConfig& cfg);
std::uint64_t config_hash(const RunConfig& cfg);

TeleportConfig build_teleport_config(const RunConfig& cfg);
ReadoutConfig build_readout_config(const RunConfig& cfg);

/// The configured detuning list, or the auto-selected well-conditioned set.
std::vector<double> resolve_deltas(const RunConfig& cfg,
                                   const ReadoutConfig& readout);

}  // namespace pcqc
