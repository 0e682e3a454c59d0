#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "pcqc/quantum_core.hpp"

namespace pcqc {

/// Chip and atom parameters. Lengths in SI, frequencies in rad/s.
struct PhysicalParams {
    double lattice_a = 2.202e-3;        // m
    double wavelength = 5.9e-3;         // m
    double omega = 2.0 * kPi * kSpeedOfLight / 5.9e-3;  // rad/s
    double dipole_mu10 = 2e-26;         // C m
    double g0 = 0.0;                    // rad/s, vacuum Rabi frequency (calibrated)
    double v_b = 767.7;                 // m/s
    double v_a = 987.0;                 // m/s

    void validate() const;
};

/// Normalized field magnitude sampled along an atom trajectory.
/// Positions are in units of the lattice constant, strictly increasing;
/// magnitudes in [0, 1]. Evaluates to 0 outside the sampled span.
struct SampledProfile {
    Eigen::VectorXd positions;   // units of a
    Eigen::VectorXd magnitudes;  // dimensionless, peak-normalized

    void validate() const;
};

/// Parametric stand-ins for the chip's mode cross-sections.
struct CavityModel {
    double width_sigma = 2.0;  // units of a
    double center = 9.0;       // units of a
    double span = 22.0;        // sampled domain [0, span]
};

struct WaveguideModel {
    double lobe_period = 2.0;     // units of a
    double envelope_sigma = 6.0;  // units of a
    double zone_start = 0.0;      // units of a
    double zone_length = 18.0;    // units of a
};

/// Samples per lattice constant; matches the a/65 propagation step.
inline constexpr int kSamplesPerA = 65;

SampledProfile render_cavity(const CavityModel& m, int samples_per_a = kSamplesPerA);
SampledProfile render_waveguide(const WaveguideModel& m,
                                int samples_per_a = kSamplesPerA);

SampledProfile load_profile(const std::string& path);
void save_profile(const SampledProfile& p, const std::string& path);

/// Linear interpolation inside the sampled span, exactly 0 outside.
double eval_profile(const SampledProfile& p, double x);

/// Pulse area G = g0 * integral of profile over the traversal [x_start, x_end]
/// at speed v. Exact for the piecewise-linear profile (trapezoid on the
/// sample grid plus the clipped endpoints).
double pulse_area(const SampledProfile& p, double lattice_a, double v, double g0,
                  double x_start, double x_end);

/// g0 such that pulse_area(..., g0, x_start, x_end) == target_area.
double calibrate_g0(const SampledProfile& p, double lattice_a, double v,
                    double target_area, double x_start, double x_end);

/// g(t) = g0 * profile(x0 + v t / a), sampled on a uniform time grid.
struct CouplingTrace {
    Eigen::VectorXd times;     // s
    Eigen::VectorXd g_values;  // rad/s

    /// Linear interpolation; 0 outside the sampled window.
    double at(double t) const;
};

CouplingTrace make_coupling_trace(const SampledProfile& p, double lattice_a,
                                  double v, double g0, double x0, double t_start,
                                  double t_end, double dt);

}  // namespace pcqc
