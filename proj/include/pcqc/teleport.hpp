#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pcqc/field_profiles.hpp"
#include "pcqc/quantum_core.hpp"

namespace pcqc {

/// Atom B (x) cavity amplitudes, index (b, n) with n <= 2.
struct BCavityState {
    Eigen::Matrix<Complex, 6, 1> amps = Eigen::Matrix<Complex, 6, 1>::Zero();

    static int index(int b, int n) { return b * 3 + n; }
    Complex amp(int b, int n) const { return amps(index(b, n)); }
    Complex& amp(int b, int n) { return amps(index(b, n)); }
    double norm() const { return amps.norm(); }
};

/// Time series behind the figure CSVs: coupling plus labeled amplitudes.
struct StageTrace {
    Eigen::VectorXd times;  // s
    Eigen::VectorXd g;      // rad/s
    std::vector<std::pair<std::string, Eigen::VectorXcd>> amps;
};

struct TeleportConfig {
    PhysicalParams params;
    SampledProfile cavity_profile;
    double b_entry = 0.0;          // units of a
    double b_exit = 18.0;          // calibration span for atom B, units of a
    double a_entry = 0.0;          // units of a, along atom A's path
    double detector_position = 0.0;  // units of a, atom A measured here
    double t1 = 0.0;               // s, atom B transit time over [b_entry, b_exit]
    double trace_resolution = 0.0;  // s

    /// Atom A's transit time from entry to detector.
    double t2() const { return (detector_position - a_entry) * params.lattice_a / params.v_a; }

    void validate() const;
};

/// Paper geometry: Gaussian cavity profile, g0 calibrated so the atom-B
/// pulse area over 18a is 9*pi/4; atom A's traversal is centered on the
/// cavity and spans v_A * t2.
TeleportConfig make_default_teleport_config();

struct TeleportOutcome {
    JointState conditional_state;
    QubitState b_qubit;            // n = 0 block of the conditional state
    int detected_outcome = 1;
    double success_probability = 0.0;  // P(atom A found excited)
    double fidelity_discard = 0.0;  // photon-leakage branch renormalized away
    double fidelity_loss = 0.0;     // photon-leakage branch counted as loss
    double g_b_area = 0.0;          // rad
    double g_a_area = 0.0;          // rad
    StageTrace stage1;
    StageTrace stage2;
};

/// Eq.-(3)-type resonant evolution: atom B enters excited, cavity in vacuum.
BCavityState evolve_stage1(const SampledProfile& profile, double lattice_a,
                           double v, double g0, double x0, double t);

/// Closed-form atom-A Jaynes-Cummings evolution with pulse area g_a_area;
/// the one- and two-photon sectors rotate by G and sqrt(2) G respectively.
JointState evolve_stage2(const QubitState& input_a, const BCavityState& entangled,
                         double g_a_area);

/// Adaptive interaction-picture integration of the same dynamics driven by a
/// sampled coupling trace. Oracle for evolve_stage2.
JointState evolve_stage2_ode(const QubitState& input_a,
                             const BCavityState& entangled,
                             const CouplingTrace& trace, double rel_tol = 1e-10);

TeleportOutcome run_teleport(const TeleportConfig& config,
                             const QubitState& input_a,
                             std::optional<int> forced_outcome = std::nullopt);

}  // namespace pcqc
