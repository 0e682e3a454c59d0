#pragma once

#include <utility>
#include <vector>

#include "pcqc/field_profiles.hpp"
#include "pcqc/quantum_core.hpp"

namespace pcqc {

/// 2x2 single-atom propagator through a field zone, in the frame rotating at
/// the maser frequency. Stored so that out = T * in; the paper-style entry
/// c_ij (enter |i>, exit |j>) is T(j, i).
using TransferMatrix = Matrix2c;

inline Complex c01_of(const TransferMatrix& t) { return t(1, 0); }
inline Complex c11_of(const TransferMatrix& t) { return t(1, 1); }

/// One closed-form piecewise-constant step: generalized Rabi angle
/// Lambda = sqrt(delta^2 + omega0^2), mixing angle with cos(Theta) =
/// -delta / Lambda and sin(Theta) = -omega0 / Lambda.
TransferMatrix step_matrix(double omega0, double delta, double dt);

std::pair<Complex, Complex> step_amplitudes(Complex c0, Complex c1,
                                            double omega0, double delta,
                                            double dt);

/// Same step with the explicit lab-frame maser phases attached; populations
/// must not depend on the absolute entry time t.
std::pair<Complex, Complex> step_amplitudes_lab(Complex c0, Complex c1,
                                                double omega0, double delta,
                                                double dt, double omega_m,
                                                double t);

struct RamseyZone {
    SampledProfile profile;  // one waveguide's lobe train, positions in a
    double peak_rabi = 0.0;  // rad/s, scales the normalized profile
    double delta = 0.0;      // rad/s, omega_m - omega
    double v = 0.0;          // m/s
    double lattice_a = 0.0;  // m

    double duration() const;
    void validate() const;
};

/// Ordered product of per-step closed forms, Rabi frequency sampled at each
/// step's midpoint position.
TransferMatrix propagate_zone(const RamseyZone& zone, double step);

/// Matrix product in traversal order (z1 first).
TransferMatrix compose_zones(const TransferMatrix& z1, const TransferMatrix& z2);

/// P1 = |c0 c01 + c1 c11|^2.
double excitation_probability(const QubitState& input,
                              const TransferMatrix& composite);

/// The same probability expanded into the four tomography terms.
double excitation_probability_expanded(const QubitState& input,
                                       const TransferMatrix& composite);

/// Both 18a waveguide zones plus the shared drive scale.
struct ReadoutConfig {
    SampledProfile zone1;
    SampledProfile zone2;
    double peak_rabi = 0.0;  // rad/s, calibrated for a pi/2 area per zone
    double v = 767.7;        // m/s
    double lattice_a = 2.202e-3;  // m
    double step = 0.0;       // s, default lattice_a / 65 / v

    void validate() const;
};

ReadoutConfig make_default_readout_config(const PhysicalParams& params);

/// Two-zone composite transfer matrix at the given detuning.
TransferMatrix composite_transfer(const ReadoutConfig& cfg, double delta);

struct RamseyMeasurement {
    double delta = 0.0;  // rad/s
    double p1 = 0.0;
    TransferMatrix transfer = TransferMatrix::Identity();
    double sigma = 0.0;  // standard error of p1; 0 means exact
};

struct TomographyResult {
    double x1 = 0.0;  // |c0|^2
    double x2 = 0.0;  // |c1|^2
    double x3 = 0.0;  // c0r c1r + c0i c1i
    double x4 = 0.0;  // c0r c1i - c0i c1r
    double theta_hat = 0.0;
    double phi_hat = 0.0;
    double residual = 0.0;
    double condition_number = 0.0;
    Eigen::Matrix4d cov_x = Eigen::Matrix4d::Zero();
    double theta_sigma = 0.0;
    double phi_sigma = 0.0;
};

/// Inverts P1 measurements for (x1..x4) and the Bloch angles: exactly
/// determined at 4 rows, least squares above. When measurement sigmas are
/// set, the fit is weighted and covariances are propagated to the angles.
TomographyResult tomography_invert(const std::vector<RamseyMeasurement>& ms,
                                   double cond_threshold = 1e8,
                                   double range_tol = 1e-2);

/// Deterministic grid search for `count` detunings minimizing the condition
/// number of the inversion system.
std::vector<double> choose_detunings(const ReadoutConfig& cfg, int count,
                                     double delta_min, double delta_max,
                                     int grid_points = 17);

/// Zone-averaged Rabi frequency, pulse area divided by transit time.
double average_rabi(const ReadoutConfig& cfg);

}  // namespace pcqc
