#include "pcqc/field_profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pcqc {

void PhysicalParams::validate() const {
    auto positive = [](double x, const char* name) {
        if (!(x > 0.0) || !std::isfinite(x)) {
            throw ConfigError(std::string("PhysicalParams: ") + name +
                              " must be positive and finite");
        }
    };
    positive(lattice_a, "lattice_a");
    positive(wavelength, "wavelength");
    positive(omega, "omega");
    positive(dipole_mu10, "dipole_mu10");
    positive(v_b, "v_b");
    positive(v_a, "v_a");
    const double omega_expected = 2.0 * kPi * kSpeedOfLight / wavelength;
    if (std::abs(omega - omega_expected) > 1e-9 * omega_expected) {
        throw ConfigError("PhysicalParams: omega inconsistent with wavelength");
    }
}

void SampledProfile::validate() const {
    if (positions.size() != magnitudes.size() || positions.size() < 2) {
        throw ConfigError("SampledProfile: need >= 2 matching samples");
    }
    for (Eigen::Index i = 0; i < positions.size(); ++i) {
        if (!std::isfinite(positions(i)) || !std::isfinite(magnitudes(i))) {
            throw ConfigError("SampledProfile: non-finite sample");
        }
        if (i > 0 && !(positions(i) > positions(i - 1))) {
            throw ConfigError("SampledProfile: positions not strictly increasing");
        }
        if (magnitudes(i) < 0.0 || magnitudes(i) > 1.0) {
            throw ConfigError("SampledProfile: magnitude outside [0, 1]");
        }
    }
}

SampledProfile render_cavity(const CavityModel& m, int samples_per_a) {
    if (m.width_sigma <= 0.0 || m.span <= 0.0 || samples_per_a < 1) {
        throw ConfigError("render_cavity: parameters must be positive");
    }
    const int n = static_cast<int>(std::lround(m.span * samples_per_a)) + 1;
    SampledProfile p;
    p.positions.resize(n);
    p.magnitudes.resize(n);
    for (int i = 0; i < n; ++i) {
        const double x = m.span * i / (n - 1);
        const double u = (x - m.center) / m.width_sigma;
        p.positions(i) = x;
        p.magnitudes(i) = std::exp(-0.5 * u * u);
    }
    p.magnitudes /= p.magnitudes.maxCoeff();
    p.validate();
    return p;
}

SampledProfile render_waveguide(const WaveguideModel& m, int samples_per_a) {
    if (m.lobe_period <= 0.0 || m.envelope_sigma <= 0.0 || m.zone_length <= 0.0 ||
        samples_per_a < 1) {
        throw ConfigError("render_waveguide: parameters must be positive");
    }
    const int n = static_cast<int>(std::lround(m.zone_length * samples_per_a)) + 1;
    const double mid = m.zone_start + 0.5 * m.zone_length;
    SampledProfile p;
    p.positions.resize(n);
    p.magnitudes.resize(n);
    for (int i = 0; i < n; ++i) {
        const double x = m.zone_start + m.zone_length * i / (n - 1);
        const double env = std::exp(-0.5 * std::pow((x - mid) / m.envelope_sigma, 2));
        const double lobe = std::abs(std::sin(kPi * (x - m.zone_start) / m.lobe_period));
        p.positions(i) = x;
        p.magnitudes(i) = env * lobe;
    }
    const double peak = p.magnitudes.maxCoeff();
    if (peak <= 0.0) {
        throw ConfigError("render_waveguide: degenerate lobe train");
    }
    p.magnitudes /= peak;
    p.validate();
    return p;
}

SampledProfile load_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("load_profile: cannot open " + path);
    }
    std::vector<double> xs, ms;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream row(line);
        double x, mag;
        if (!(row >> x >> mag)) {
            throw ConfigError("load_profile: parse failure at " + path + ":" +
                              std::to_string(lineno));
        }
        xs.push_back(x);
        ms.push_back(mag);
    }
    SampledProfile p;
    p.positions = Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
    p.magnitudes = Eigen::Map<Eigen::VectorXd>(ms.data(), static_cast<Eigen::Index>(ms.size()));
    p.validate();
    return p;
}

void save_profile(const SampledProfile& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("save_profile: cannot open " + path);
    }
    out.precision(17);
    out << "# position_in_a magnitude\n";
    for (Eigen::Index i = 0; i < p.positions.size(); ++i) {
        out << p.positions(i) << ' ' << p.magnitudes(i) << '\n';
    }
}

namespace {

double interp(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys, double x) {
    if (x <= xs(0) || x >= xs(xs.size() - 1)) {
        // Endpoints themselves still count as inside.
        if (x == xs(0)) return ys(0);
        if (x == xs(xs.size() - 1)) return ys(ys.size() - 1);
        return 0.0;
    }
    const double* begin = xs.data();
    const double* it = std::upper_bound(begin, begin + xs.size(), x);
    const Eigen::Index hi = it - begin;
    const Eigen::Index lo = hi - 1;
    if (!(xs(hi) > xs(lo))) return ys(lo);
    const double w = (x - xs(lo)) / (xs(hi) - xs(lo));
    return ys(lo) + w * (ys(hi) - ys(lo));
}

}  // namespace

double eval_profile(const SampledProfile& p, double x) {
    return interp(p.positions, p.magnitudes, x);
}

double pulse_area(const SampledProfile& p, double lattice_a, double v, double g0,
                  double x_start, double x_end) {
    if (!(x_start < x_end)) {
        throw ConfigError("pulse_area: x_start must be below x_end");
    }
    if (!(v > 0.0)) {
        throw ConfigError("pulse_area: v must be positive");
    }
    const double lo = std::max(x_start, p.positions(0));
    const double hi = std::min(x_end, p.positions(p.positions.size() - 1));
    if (!(lo < hi)) return 0.0;
    // Trapezoid over the sample grid, exact for the piecewise-linear profile.
    double area = 0.0;
    double x_prev = lo;
    double y_prev = eval_profile(p, lo);
    for (Eigen::Index i = 0; i < p.positions.size(); ++i) {
        const double x = p.positions(i);
        if (x <= lo) continue;
        if (x >= hi) break;
        area += 0.5 * (y_prev + p.magnitudes(i)) * (x - x_prev);
        x_prev = x;
        y_prev = p.magnitudes(i);
    }
    area += 0.5 * (y_prev + eval_profile(p, hi)) * (hi - x_prev);
    return g0 * area * lattice_a / v;
}

double calibrate_g0(const SampledProfile& p, double lattice_a, double v,
                    double target_area, double x_start, double x_end) {
    if (!(target_area > 0.0)) {
        throw ConfigError("calibrate_g0: target_area must be positive");
    }
    const double unit_area = pulse_area(p, lattice_a, v, 1.0, x_start, x_end);
    if (unit_area < 1e-300) {
        throw ConfigError("calibrate_g0: profile integral vanishes over the span");
    }
    return target_area / unit_area;
}

double CouplingTrace::at(double t) const {
    return interp(times, g_values, t);
}

CouplingTrace make_coupling_trace(const SampledProfile& p, double lattice_a,
                                  double v, double g0, double x0, double t_start,
                                  double t_end, double dt) {
    if (!(t_end > t_start) || !(dt > 0.0) || !(v > 0.0)) {
        throw ConfigError("make_coupling_trace: bad time window");
    }
    // Uniform grid plus the profile's sample positions: g(t) is piecewise
    // linear with kinks at the sample crossings, so including them makes the
    // sampled trace reproduce g(t) exactly.
    std::vector<double> times;
    for (double t = t_start; t < t_end; t += dt) times.push_back(t);
    times.push_back(t_end);
    for (Eigen::Index i = 0; i < p.positions.size(); ++i) {
        const double t = t_start + (p.positions(i) - x0) * lattice_a / v;
        if (t > t_start && t < t_end) times.push_back(t);
    }
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end(),
                            [dt](double a, double b) {
                                return b - a < dt * 1e-9;
                            }),
                times.end());

    CouplingTrace trace;
    const Eigen::Index n = static_cast<Eigen::Index>(times.size());
    trace.times.resize(n);
    trace.g_values.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        trace.times(i) = times[static_cast<std::size_t>(i)];
        const double x = x0 + v * (trace.times(i) - t_start) / lattice_a;
        trace.g_values(i) = g0 * eval_profile(p, x);
    }
    return trace;
}

}  // namespace pcqc
