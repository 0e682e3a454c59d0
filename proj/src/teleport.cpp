#include "pcqc/teleport.hpp"

#include <algorithm>
#include <cmath>

namespace pcqc {

namespace {

constexpr Complex kI{0.0, 1.0};

// Rotates the pair (hi, lo) = (|1, n>, |0, n+1>) by the resonant
// Jaynes-Cummings angle.
void rotate_sector(Complex& hi, Complex& lo, double angle) {
    const Complex h = std::cos(angle) * hi - kI * std::sin(angle) * lo;
    const Complex l = -kI * std::sin(angle) * hi + std::cos(angle) * lo;
    hi = h;
    lo = l;
}

}  // namespace

void TeleportConfig::validate() const {
    params.validate();
    cavity_profile.validate();
    if (!(b_entry < b_exit) || !(a_entry < detector_position)) {
        throw ConfigError("TeleportConfig: degenerate traversal spans");
    }
    if (!(t1 > 0.0) || !(trace_resolution > 0.0)) {
        throw ConfigError("TeleportConfig: t1 and trace_resolution must be positive");
    }
    const double t1_geom = (b_exit - b_entry) * params.lattice_a / params.v_b;
    if (std::abs(t1 - t1_geom) > 1e-6 * t1_geom) {
        throw ConfigError("TeleportConfig: t1 inconsistent with atom B transit time");
    }
    // Atom B must be effectively decoupled once atom A is injected.
    const double peak = cavity_profile.magnitudes.maxCoeff();
    if (eval_profile(cavity_profile, detector_position) > 0.01 * peak) {
        throw ConfigError("TeleportConfig: detector sits inside the cavity mode");
    }
    if (!(params.g0 > 0.0)) {
        throw ConfigError("TeleportConfig: g0 not calibrated");
    }
}

TeleportConfig make_default_teleport_config() {
    TeleportConfig cfg;
    cfg.cavity_profile = render_cavity(CavityModel{});
    cfg.b_entry = 0.0;
    cfg.b_exit = 18.0;
    cfg.t1 = (cfg.b_exit - cfg.b_entry) * cfg.params.lattice_a / cfg.params.v_b;
    cfg.params.g0 = calibrate_g0(cfg.cavity_profile, cfg.params.lattice_a,
                                 cfg.params.v_b, 9.0 * kPi / 4.0, cfg.b_entry,
                                 cfg.b_exit);
    // Atom B covers 31a - 18a = 13a between injection and detection; atom A's
    // traversal spans v_A * t2, centered on the cavity.
    const double t2 = 13.0 * cfg.params.lattice_a / cfg.params.v_b;
    const double span_a = cfg.params.v_a * t2 / cfg.params.lattice_a;
    const CavityModel model{};
    cfg.a_entry = model.center - 0.5 * span_a;
    cfg.detector_position = model.center + 0.5 * span_a;
    cfg.trace_resolution = cfg.params.lattice_a / 65.0 / cfg.params.v_b;
    cfg.validate();
    return cfg;
}

BCavityState evolve_stage1(const SampledProfile& profile, double lattice_a,
                           double v, double g0, double x0, double t) {
    if (t < 0.0) {
        throw ConfigError("evolve_stage1: negative time");
    }
    BCavityState out;
    if (t == 0.0) {
        out.amp(1, 0) = 1.0;
        return out;
    }
    const double area =
        pulse_area(profile, lattice_a, v, g0, x0, x0 + v * t / lattice_a);
    out.amp(1, 0) = std::cos(area);
    out.amp(0, 1) = -kI * std::sin(area);
    return out;
}

JointState evolve_stage2(const QubitState& input_a, const BCavityState& entangled,
                         double g_a_area) {
    JointState joint;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            for (int n = 0; n <= 2; ++n) {
                joint.amp(a, b, n) =
                    input_a.amps()(a) * entangled.amp(b, n);
            }
        }
    }
    for (int b = 0; b < 2; ++b) {
        if (std::abs(joint.amp(1, b, 2)) > 1e-12) {
            throw NumericError(
                "evolve_stage2: |1>_A|2> occupied, Fock truncation would break");
        }
        Complex a10 = joint.amp(1, b, 0), a01 = joint.amp(0, b, 1);
        rotate_sector(a10, a01, g_a_area);
        joint.amp(1, b, 0) = a10;
        joint.amp(0, b, 1) = a01;
        Complex a11 = joint.amp(1, b, 1), a02 = joint.amp(0, b, 2);
        rotate_sector(a11, a02, std::sqrt(2.0) * g_a_area);
        joint.amp(1, b, 1) = a11;
        joint.amp(0, b, 2) = a02;
    }
    return joint;
}

namespace {

// Interaction-picture RHS: g(t) couples |1>_A|n> <-> |0>_A|n+1> with
// matrix element sqrt(n+1).
JointState::Amps rhs(const JointState::Amps& y, double g) {
    JointState::Amps dy = JointState::Amps::Zero();
    for (int b = 0; b < 2; ++b) {
        for (int n = 0; n <= 1; ++n) {
            const double elem = g * std::sqrt(n + 1.0);
            const int hi = JointState::index(1, b, n);
            const int lo = JointState::index(0, b, n + 1);
            dy(hi) += -kI * elem * y(lo);
            dy(lo) += -kI * elem * y(hi);
        }
    }
    return dy;
}

}  // namespace

JointState evolve_stage2_ode(const QubitState& input_a,
                             const BCavityState& entangled,
                             const CouplingTrace& trace, double rel_tol) {
    JointState::Amps y = JointState::Amps::Zero();
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            for (int n = 0; n <= 2; ++n) {
                y(JointState::index(a, b, n)) =
                    input_a.amps()(a) * entangled.amp(b, n);
            }
        }
    }
    const double t0 = trace.times(0);
    const double t_end = trace.times(trace.times.size() - 1);
    if (!(t_end > t0)) return JointState(y);

    // Classic embedded RKF45 with step-doubling error control.
    double t = t0;
    double h = (t_end - t0) / 1024.0;
    const double h_min = (t_end - t0) * 1e-14;
    auto f = [&trace](double tt, const JointState::Amps& yy) {
        return rhs(yy, trace.at(tt));
    };
    while (t < t_end) {
        if (t + h > t_end) h = t_end - t;
        const JointState::Amps k1 = f(t, y);
        const JointState::Amps k2 = f(t + h / 4, y + h / 4 * k1);
        const JointState::Amps k3 = f(t + 3 * h / 8, y + h * (3.0 / 32 * k1 + 9.0 / 32 * k2));
        const JointState::Amps k4 =
            f(t + 12.0 / 13 * h,
              y + h * (1932.0 / 2197 * k1 - 7200.0 / 2197 * k2 + 7296.0 / 2197 * k3));
        const JointState::Amps k5 =
            f(t + h, y + h * (439.0 / 216 * k1 - 8.0 * k2 + 3680.0 / 513 * k3 -
                              845.0 / 4104 * k4));
        const JointState::Amps k6 =
            f(t + h / 2, y + h * (-8.0 / 27 * k1 + 2.0 * k2 - 3544.0 / 2565 * k3 +
                                  1859.0 / 4104 * k4 - 11.0 / 40 * k5));
        const JointState::Amps y5 =
            y + h * (16.0 / 135 * k1 + 6656.0 / 12825 * k3 + 28561.0 / 56430 * k4 -
                     9.0 / 50 * k5 + 2.0 / 55 * k6);
        const JointState::Amps y4 =
            y + h * (25.0 / 216 * k1 + 1408.0 / 2565 * k3 + 2197.0 / 4104 * k4 -
                     1.0 / 5 * k5);
        const double err = (y5 - y4).norm();
        const double tol = rel_tol * std::max(1.0, y.norm());
        if (err <= tol || h <= h_min) {
            if (h <= h_min && err > tol) {
                throw NumericError("evolve_stage2_ode: step-size underflow");
            }
            t += h;
            y = y5;
        }
        const double scale =
            err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 4.0;
        h *= std::clamp(scale, 0.1, 4.0);
        if (h < h_min) h = h_min;
    }
    // Renormalize against accumulated drift; the exact dynamics is unitary.
    JointState out(y);
    return out.normalized();
}

namespace {

StageTrace stage1_trace(const TeleportConfig& cfg) {
    const auto& p = cfg.params;
    const int n = static_cast<int>(std::ceil(cfg.t1 / cfg.trace_resolution)) + 1;
    StageTrace tr;
    tr.times.resize(n);
    tr.g.resize(n);
    Eigen::VectorXcd a10(n), a01(n);
    for (int i = 0; i < n; ++i) {
        const double t = std::min(i * cfg.trace_resolution, cfg.t1);
        const double x = cfg.b_entry + p.v_b * t / p.lattice_a;
        const double area = t == 0.0 ? 0.0
                                     : pulse_area(cfg.cavity_profile, p.lattice_a,
                                                  p.v_b, p.g0, cfg.b_entry, x);
        tr.times(i) = t;
        tr.g(i) = p.g0 * eval_profile(cfg.cavity_profile, x);
        a10(i) = std::cos(area);
        a01(i) = -kI * std::sin(area);
    }
    tr.amps.emplace_back("B1_n0", std::move(a10));
    tr.amps.emplace_back("B0_n1", std::move(a01));
    return tr;
}

StageTrace stage2_trace(const TeleportConfig& cfg, const QubitState& input_a) {
    const auto& p = cfg.params;
    const double t2 = cfg.t2();
    const int n = static_cast<int>(std::ceil(t2 / cfg.trace_resolution)) + 1;
    StageTrace tr;
    tr.times.resize(n);
    tr.g.resize(n);
    Eigen::VectorXcd b00(n), b10(n), b01(n);
    const Complex c0 = input_a.c0(), c1 = input_a.c1();
    for (int i = 0; i < n; ++i) {
        const double dt = std::min(i * cfg.trace_resolution, t2);
        const double x = cfg.a_entry + p.v_a * dt / p.lattice_a;
        const double area = dt == 0.0 ? 0.0
                                      : pulse_area(cfg.cavity_profile, p.lattice_a,
                                                   p.v_a, p.g0, cfg.a_entry, x);
        tr.times(i) = cfg.t1 + dt;
        tr.g(i) = p.g0 * eval_profile(cfg.cavity_profile, x);
        // Unnormalized Eq.-(8)-numerator amplitudes, 1/sqrt(2) included.
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        b00(i) = -c0 * std::sin(area) * inv_sqrt2;
        b10(i) = c1 * std::cos(area) * inv_sqrt2;
        b01(i) = -kI * c1 * std::cos(std::sqrt(2.0) * area) * inv_sqrt2;
    }
    tr.amps.emplace_back("B0_n0", std::move(b00));
    tr.amps.emplace_back("B1_n0", std::move(b10));
    tr.amps.emplace_back("B0_n1", std::move(b01));
    return tr;
}

}  // namespace

TeleportOutcome run_teleport(const TeleportConfig& config,
                             const QubitState& input_a,
                             std::optional<int> forced_outcome) {
    config.validate();
    const auto& p = config.params;

    TeleportOutcome out;
    out.g_b_area = pulse_area(config.cavity_profile, p.lattice_a, p.v_b, p.g0,
                              config.b_entry, config.b_exit);
    out.g_a_area = pulse_area(config.cavity_profile, p.lattice_a, p.v_a, p.g0,
                              config.a_entry, config.detector_position);

    const BCavityState entangled =
        evolve_stage1(config.cavity_profile, p.lattice_a, p.v_b, p.g0,
                      config.b_entry, config.t1);
    const JointState joint = evolve_stage2(input_a, entangled, out.g_a_area);

    out.success_probability = outcome_probability(joint, Atom::A, 1);
    out.detected_outcome = forced_outcome.value_or(1);
    auto [cond, prob] = project_joint(joint, Atom::A, out.detected_outcome);
    (void)prob;
    out.conditional_state = cond;

    const int a = out.detected_outcome;
    const Complex b0 = cond.amp(a, 0, 0);
    const Complex b1 = cond.amp(a, 1, 0);
    if (std::abs(b0) + std::abs(b1) > 1e-15) {
        out.b_qubit = QubitState(b0, b1);
        out.fidelity_discard = fidelity(input_a, out.b_qubit);
        const Complex overlap =
            std::conj(input_a.c0()) * b0 + std::conj(input_a.c1()) * b1;
        out.fidelity_loss = std::norm(overlap);
    } else {
        // All weight sits in the photon branch; no qubit was delivered.
        out.b_qubit = QubitState();
        out.fidelity_discard = 0.0;
        out.fidelity_loss = 0.0;
    }

    out.stage1 = stage1_trace(config);
    out.stage2 = stage2_trace(config, input_a);
    return out;
}

}  // namespace pcqc
