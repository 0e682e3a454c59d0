#include "pcqc/readout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pcqc {

namespace {
constexpr Complex kI{0.0, 1.0};
}

TransferMatrix step_matrix(double omega0, double delta, double dt) {
    if (!(dt > 0.0)) {
        throw ConfigError("step_matrix: dt must be positive");
    }
    const double lambda = std::hypot(delta, omega0);
    if (lambda == 0.0) {
        return TransferMatrix::Identity();
    }
    const double cos_theta = -delta / lambda;
    const double sin_theta = -omega0 / lambda;
    const double half = 0.5 * lambda * dt;
    const Complex a = std::cos(half) + kI * cos_theta * std::sin(half);
    const Complex b = kI * sin_theta * std::sin(half);
    TransferMatrix m;
    m << a, b, b, std::conj(a);
    return m;
}

std::pair<Complex, Complex> step_amplitudes(Complex c0, Complex c1,
                                            double omega0, double delta,
                                            double dt) {
    const TransferMatrix m = step_matrix(omega0, delta, dt);
    return {m(0, 0) * c0 + m(0, 1) * c1, m(1, 0) * c0 + m(1, 1) * c1};
}

std::pair<Complex, Complex> step_amplitudes_lab(Complex c0, Complex c1,
                                                double omega0, double delta,
                                                double dt, double omega_m,
                                                double t) {
    // Literal form with the explicit maser phases e^{+-i omega_m t} and
    // e^{+-i omega_m dt/2}; related to the rotating frame by
    // d0 = c0 e^{-i omega_m t / 2}, d1 = c1 e^{+i omega_m t / 2}.
    const TransferMatrix m = step_matrix(omega0, delta, dt);
    const Complex ph_t = std::exp(kI * omega_m * t);
    const Complex ph_h = std::exp(kI * omega_m * dt / 2.0);
    const Complex c0n = (m(0, 0) * c0 + m(0, 1) * ph_t * c1) * ph_h;
    const Complex c1n = (m(1, 0) / ph_t * c0 + m(1, 1) * c1) / ph_h;
    return {c0n, c1n};
}

double RamseyZone::duration() const {
    const double span = profile.positions(profile.positions.size() - 1) -
                        profile.positions(0);
    return span * lattice_a / v;
}

void RamseyZone::validate() const {
    profile.validate();
    if (!(peak_rabi >= 0.0) || !(v > 0.0) || !(lattice_a > 0.0)) {
        throw ConfigError("RamseyZone: nonpositive parameters");
    }
}

TransferMatrix propagate_zone(const RamseyZone& zone, double step) {
    zone.validate();
    if (!(step > 0.0)) {
        throw ConfigError("propagate_zone: step must be positive");
    }
    const double t4 = zone.duration();
    const int n = std::max(1, static_cast<int>(std::ceil(t4 / step)));
    const double h = t4 / n;
    const double x0 = zone.profile.positions(0);
    TransferMatrix total = TransferMatrix::Identity();
    for (int i = 0; i < n; ++i) {
        const double x_mid = x0 + zone.v * (i + 0.5) * h / zone.lattice_a;
        const double omega0 = zone.peak_rabi * eval_profile(zone.profile, x_mid);
        total = step_matrix(omega0, zone.delta, h) * total;
    }
    return total;
}

TransferMatrix compose_zones(const TransferMatrix& z1, const TransferMatrix& z2) {
    return z2 * z1;
}

double excitation_probability(const QubitState& input,
                              const TransferMatrix& composite) {
    return std::norm(input.c0() * c01_of(composite) +
                     input.c1() * c11_of(composite));
}

double excitation_probability_expanded(const QubitState& input,
                                       const TransferMatrix& composite) {
    const Complex c0 = input.c0(), c1 = input.c1();
    const Complex c01 = c01_of(composite), c11 = c11_of(composite);
    const double x1 = std::norm(c0);
    const double x2 = std::norm(c1);
    const double x3 = c0.real() * c1.real() + c0.imag() * c1.imag();
    const double x4 = c0.real() * c1.imag() - c0.imag() * c1.real();
    const Complex cross = c01 * std::conj(c11);
    return x1 * std::norm(c01) + x2 * std::norm(c11) +
           x3 * 2.0 * cross.real() + x4 * 2.0 * cross.imag();
}

void ReadoutConfig::validate() const {
    zone1.validate();
    zone2.validate();
    if (!(peak_rabi > 0.0) || !(v > 0.0) || !(lattice_a > 0.0) || !(step > 0.0)) {
        throw ConfigError("ReadoutConfig: nonpositive parameters");
    }
}

ReadoutConfig make_default_readout_config(const PhysicalParams& params) {
    ReadoutConfig cfg;
    WaveguideModel wg1;
    wg1.zone_start = 0.0;
    WaveguideModel wg2;
    wg2.zone_start = 18.0;
    cfg.zone1 = render_waveguide(wg1);
    cfg.zone2 = render_waveguide(wg2);
    cfg.v = params.v_b;
    cfg.lattice_a = params.lattice_a;
    cfg.step = params.lattice_a / 65.0 / params.v_b;
    // pi/2 area per zone: the two zones compose to a pi pulse on resonance.
    cfg.peak_rabi = calibrate_g0(cfg.zone1, cfg.lattice_a, cfg.v, kPi / 2.0,
                                 cfg.zone1.positions(0),
                                 cfg.zone1.positions(cfg.zone1.positions.size() - 1));
    cfg.validate();
    return cfg;
}

TransferMatrix composite_transfer(const ReadoutConfig& cfg, double delta) {
    auto zone = [&](const SampledProfile& p) {
        RamseyZone z;
        z.profile = p;
        z.peak_rabi = cfg.peak_rabi;
        z.delta = delta;
        z.v = cfg.v;
        z.lattice_a = cfg.lattice_a;
        return z;
    };
    const TransferMatrix t1 = propagate_zone(zone(cfg.zone1), cfg.step);
    const TransferMatrix t2 = propagate_zone(zone(cfg.zone2), cfg.step);
    return compose_zones(t1, t2);
}

double average_rabi(const ReadoutConfig& cfg) {
    const double area =
        pulse_area(cfg.zone1, cfg.lattice_a, cfg.v, cfg.peak_rabi,
                   cfg.zone1.positions(0),
                   cfg.zone1.positions(cfg.zone1.positions.size() - 1));
    const double t4 = (cfg.zone1.positions(cfg.zone1.positions.size() - 1) -
                       cfg.zone1.positions(0)) *
                      cfg.lattice_a / cfg.v;
    return area / t4;
}

namespace {

Eigen::RowVector4d tomo_row(const TransferMatrix& t) {
    const Complex c01 = c01_of(t), c11 = c11_of(t);
    const Complex cross = c01 * std::conj(c11);
    return {std::norm(c01), std::norm(c11), 2.0 * cross.real(),
            2.0 * cross.imag()};
}

}  // namespace

TomographyResult tomography_invert(const std::vector<RamseyMeasurement>& ms,
                                   double cond_threshold, double range_tol) {
    const int n = static_cast<int>(ms.size());
    if (n < 4) {
        throw ConfigError("tomography_invert: need at least 4 detunings");
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (ms[i].delta == ms[j].delta) {
                throw ConfigError("tomography_invert: duplicate detunings");
            }
        }
    }
    const bool weighted =
        std::any_of(ms.begin(), ms.end(),
                    [](const RamseyMeasurement& m) { return m.sigma > 0.0; });

    Eigen::MatrixXd design(n, 4);
    Eigen::VectorXd rhs(n);
    Eigen::VectorXd weights = Eigen::VectorXd::Ones(n);
    for (int i = 0; i < n; ++i) {
        design.row(i) = tomo_row(ms[i].transfer);
        rhs(i) = ms[i].p1;
        if (weighted) {
            const double sigma = std::max(ms[i].sigma, 1e-12);
            weights(i) = 1.0 / sigma;
        }
    }
    const Eigen::MatrixXd dw = weights.asDiagonal() * design;
    const Eigen::VectorXd rw = weights.asDiagonal() * rhs;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(dw, Eigen::ComputeThinU |
                                                  Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    TomographyResult out;
    out.condition_number =
        sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                : std::numeric_limits<double>::infinity();
    if (!(out.condition_number < cond_threshold)) {
        throw NumericError("tomography_invert: degenerate detunings "
                           "(condition number too large)");
    }
    const Eigen::Vector4d x = svd.solve(rw);
    out.x1 = x(0);
    out.x2 = x(1);
    out.x3 = x(2);
    out.x4 = x(3);
    out.residual = (design * x - rhs).norm();
    if (out.x1 < -range_tol || out.x1 > 1.0 + range_tol || out.x2 < -range_tol ||
        out.x2 > 1.0 + range_tol) {
        throw NumericError("tomography_invert: inconsistent measurements "
                           "(populations outside [0, 1])");
    }
    const double x1c = std::clamp(out.x1, 0.0, 1.0);
    const double x2c = std::clamp(out.x2, 0.0, 1.0);
    out.theta_hat = 2.0 * std::atan2(std::sqrt(x2c), std::sqrt(x1c));
    // c0 real >= 0 and c1 = |c1| e^{i phi} give x3 = |c0 c1| cos(phi),
    // x4 = |c0 c1| sin(phi).
    out.phi_hat = (std::abs(out.x3) + std::abs(out.x4)) > 1e-15
                      ? std::atan2(out.x4, out.x3)
                      : 0.0;

    if (weighted) {
        const Eigen::Matrix4d info = dw.transpose() * dw;
        out.cov_x = info.inverse();
        // Linear propagation through the angle map via a numeric Jacobian.
        auto angles = [](const Eigen::Vector4d& v) -> Eigen::Vector2d {
            const double a = std::max(v(0), 0.0);
            const double b = std::max(v(1), 0.0);
            const double th = 2.0 * std::atan2(std::sqrt(b), std::sqrt(a));
            const double ph = std::atan2(v(3), v(2));
            return {th, ph};
        };
        Eigen::Matrix<double, 2, 4> jac;
        const double h = 1e-7;
        for (int j = 0; j < 4; ++j) {
            Eigen::Vector4d xp = x, xm = x;
            xp(j) += h;
            xm(j) -= h;
            jac.col(j) = (angles(xp) - angles(xm)) / (2.0 * h);
        }
        const Eigen::Matrix2d cov_angles = jac * out.cov_x * jac.transpose();
        out.theta_sigma = std::sqrt(std::max(cov_angles(0, 0), 0.0));
        out.phi_sigma = std::sqrt(std::max(cov_angles(1, 1), 0.0));
    }
    return out;
}

std::vector<double> choose_detunings(const ReadoutConfig& cfg, int count,
                                     double delta_min, double delta_max,
                                     int grid_points) {
    if (count < 4) {
        throw ConfigError("choose_detunings: count must be >= 4");
    }
    if (!(delta_max > delta_min)) {
        throw ConfigError("choose_detunings: degenerate search range");
    }
    if (grid_points < count) {
        throw ConfigError("choose_detunings: grid smaller than count");
    }
    std::vector<double> grid(grid_points);
    std::vector<Eigen::RowVector4d> rows(grid_points);
    for (int i = 0; i < grid_points; ++i) {
        grid[i] = delta_min + (delta_max - delta_min) * i / (grid_points - 1);
        rows[i] = tomo_row(composite_transfer(cfg, grid[i]));
    }

    std::vector<int> best;
    double best_cond = std::numeric_limits<double>::infinity();
    std::vector<int> pick(count);
    // Exhaustive search over grid subsets; deterministic for fixed inputs.
    auto evaluate = [&]() {
        Eigen::MatrixXd m(count, 4);
        for (int i = 0; i < count; ++i) m.row(i) = rows[pick[i]];
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
        const auto& sv = svd.singularValues();
        if (!(sv(sv.size() - 1) > 0.0)) return;
        const double cond = sv(0) / sv(sv.size() - 1);
        if (cond < best_cond) {
            best_cond = cond;
            best = pick;
        }
    };
    auto recurse = [&](auto&& self, int depth, int start) -> void {
        if (depth == count) {
            evaluate();
            return;
        }
        for (int i = start; i <= grid_points - (count - depth); ++i) {
            pick[depth] = i;
            self(self, depth + 1, i + 1);
        }
    };
    recurse(recurse, 0, 0);

    if (best.empty() || !(best_cond < 1e8)) {
        throw NumericError("choose_detunings: no well-conditioned set in range");
    }
    std::vector<double> out;
    out.reserve(count);
    for (int i : best) out.push_back(grid[i]);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace pcqc
