#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "pcqc/csv.hpp"
#include "pcqc/run_config.hpp"
#include "pcqc/shot_sim.hpp"

namespace fs = std::filesystem;
using namespace pcqc;

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    std::string deltas_csv;
    std::string measurements_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> shots;
    bool quiet = false;
};

RunConfig load_config(const CliOptions& opt) {
    RunConfig cfg = parse_config(opt.config_path);
    if (!opt.out_dir.empty()) cfg.output_dir = opt.out_dir;
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.shots) cfg.shots_per_delta = *opt.shots;
    if (!opt.deltas_csv.empty()) {
        cfg.deltas.clear();
        std::stringstream ss(opt.deltas_csv);
        std::string item;
        while (std::getline(ss, item, ',')) {
            cfg.deltas.push_back(std::stod(item));
        }
        if (cfg.deltas.size() < 4) {
            throw ConfigError("--deltas needs at least 4 comma-separated values");
        }
    }
    if (!opt.quiet) {
        for (const std::string& w : cfg.warnings) {
            std::cerr << "warning: " << w << '\n';
        }
    }
    fs::create_directories(cfg.output_dir);
    return cfg;
}

std::ofstream open_out(const RunConfig& cfg, const std::string& name) {
    const fs::path path = fs::path(cfg.output_dir) / name;
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot open output file " + path.string());
    }
    return out;
}

void write_stage_csv(std::ostream& os, std::uint64_t hash,
                     const StageTrace& trace) {
    write_csv_preamble(os, hash, "t_us,g_rad_per_s,amp_label,re,im,abs2");
    for (const auto& [label, values] : trace.amps) {
        for (Eigen::Index i = 0; i < trace.times.size(); ++i) {
            const Complex z = values(i);
            os << format_number(trace.times(i) * 1e6) << ','
               << format_number(trace.g(i)) << ',' << label << ','
               << format_number(z.real()) << ',' << format_number(z.imag())
               << ',' << format_number(std::norm(z)) << '\n';
        }
    }
}

void write_fig4(const RunConfig& cfg, const ReadoutConfig& rc) {
    auto out = open_out(cfg, "fig4.csv");
    write_csv_preamble(out, config_hash(cfg), "x_in_a,magnitude");
    const double x_min = rc.zone1.positions(0);
    const double x_max = rc.zone2.positions(rc.zone2.positions.size() - 1);
    const int n = static_cast<int>((x_max - x_min) * kSamplesPerA) + 1;
    for (int i = 0; i < n; ++i) {
        const double x = x_min + (x_max - x_min) * i / (n - 1);
        const double mag =
            std::max(eval_profile(rc.zone1, x), eval_profile(rc.zone2, x));
        out << format_number(x) << ',' << format_number(mag) << '\n';
    }
}

void write_fig5(const RunConfig& cfg, const ReadoutConfig& rc,
                const QubitState& input) {
    auto out = open_out(cfg, "fig5.csv");
    write_csv_preamble(out, config_hash(cfg),
                       "delta_rad_per_s,P1,c01_abs2,c11_abs2,cross_re,cross_im");
    const double range = cfg.delta_range_factor * average_rabi(rc);
    const int n = 81;
    for (int i = 0; i < n; ++i) {
        const double delta = -range + 2.0 * range * i / (n - 1);
        const TransferMatrix t = composite_transfer(rc, delta);
        const Complex cross = c01_of(t) * std::conj(c11_of(t));
        out << format_number(delta) << ','
            << format_number(excitation_probability(input, t)) << ','
            << format_number(std::norm(c01_of(t))) << ','
            << format_number(std::norm(c11_of(t))) << ','
            << format_number(2.0 * cross.real()) << ','
            << format_number(2.0 * cross.imag()) << '\n';
    }
}

std::vector<RamseyMeasurement> forward_measurements(
    const ReadoutConfig& rc, const QubitState& input,
    const std::vector<double>& deltas) {
    std::vector<RamseyMeasurement> ms;
    ms.reserve(deltas.size());
    for (double delta : deltas) {
        RamseyMeasurement m;
        m.delta = delta;
        m.transfer = composite_transfer(rc, delta);
        m.p1 = excitation_probability(input, m.transfer);
        ms.push_back(m);
    }
    return ms;
}

std::vector<RamseyMeasurement> read_measurements(const ReadoutConfig& rc,
                                                 const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open measurements file " + path);
    }
    std::vector<RamseyMeasurement> ms;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        if (line.find("delta") != std::string::npos) continue;  // header row
        std::stringstream row(line);
        std::string cell;
        RamseyMeasurement m;
        if (!std::getline(row, cell, ',')) {
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected delta,P1");
        }
        m.delta = std::stod(cell);
        if (!std::getline(row, cell, ',')) {
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected delta,P1");
        }
        m.p1 = std::stod(cell);
        m.transfer = composite_transfer(rc, m.delta);
        ms.push_back(m);
    }
    return ms;
}

void print_tomo(std::ostream& os, const TomographyResult& r) {
    os << "theta_hat_rad = " << format_number(r.theta_hat) << '\n'
       << "phi_hat_rad = " << format_number(r.phi_hat) << '\n'
       << "x1 = " << format_number(r.x1) << '\n'
       << "x2 = " << format_number(r.x2) << '\n'
       << "x3 = " << format_number(r.x3) << '\n'
       << "x4 = " << format_number(r.x4) << '\n'
       << "residual = " << format_number(r.residual) << '\n'
       << "condition_number = " << format_number(r.condition_number) << '\n';
}

void cmd_calibrate(const RunConfig& cfg, std::ostream& os) {
    const TeleportConfig tc = build_teleport_config(cfg);
    const ReadoutConfig rc = build_readout_config(cfg);
    const double g_b = pulse_area(tc.cavity_profile, tc.params.lattice_a,
                                  tc.params.v_b, tc.params.g0, tc.b_entry,
                                  tc.b_exit);
    const double g_a = pulse_area(tc.cavity_profile, tc.params.lattice_a,
                                  tc.params.v_a, tc.params.g0, tc.a_entry,
                                  tc.detector_position);
    os << "# g0 is calibrated against the pulse-area targets, not taken from "
          "literature\n"
       << "g0_rad_per_s = " << format_number(tc.params.g0) << '\n'
       << "peak_rabi_rad_per_s = " << format_number(rc.peak_rabi) << '\n'
       << "G_B_rad = " << format_number(g_b) << '\n'
       << "G_A_rad = " << format_number(g_a) << '\n'
       << "G_A_target_rad = " << format_number(cfg.g_a_target) << '\n'
       << "t1_us = " << format_number(tc.t1 * 1e6) << '\n'
       << "t2_us = " << format_number(tc.t2() * 1e6) << '\n';
}

void cmd_teleport(const RunConfig& cfg, std::ostream& os) {
    const TeleportConfig tc = build_teleport_config(cfg);
    const QubitState input = bloch_to_qubit({cfg.input_theta, cfg.input_phi});
    const TeleportOutcome outcome = run_teleport(tc, input, 1);
    {
        auto f2 = open_out(cfg, "fig2.csv");
        write_stage_csv(f2, config_hash(cfg), outcome.stage1);
    }
    {
        auto f3 = open_out(cfg, "fig3.csv");
        write_stage_csv(f3, config_hash(cfg), outcome.stage2);
    }
    os << "success_probability = "
       << format_number(outcome.success_probability) << '\n'
       << "fidelity_discard = " << format_number(outcome.fidelity_discard)
       << '\n'
       << "fidelity_loss = " << format_number(outcome.fidelity_loss) << '\n'
       << "G_B_rad = " << format_number(outcome.g_b_area) << '\n'
       << "G_A_rad = " << format_number(outcome.g_a_area) << '\n';
}

void cmd_readout(const RunConfig& cfg) {
    const ReadoutConfig rc = build_readout_config(cfg);
    const QubitState input = bloch_to_qubit({cfg.input_theta, cfg.input_phi});
    write_fig4(cfg, rc);
    write_fig5(cfg, rc, input);
}

TomographyResult cmd_tomo(const RunConfig& cfg, const CliOptions& opt,
                          std::ostream& os) {
    const ReadoutConfig rc = build_readout_config(cfg);
    const QubitState input = bloch_to_qubit({cfg.input_theta, cfg.input_phi});
    const std::vector<double> deltas = resolve_deltas(cfg, rc);
    const std::vector<RamseyMeasurement> ms =
        opt.measurements_path.empty()
            ? forward_measurements(rc, input, deltas)
            : read_measurements(rc, opt.measurements_path);
    const TomographyResult result = tomography_invert(ms);
    print_tomo(os, result);
    return result;
}

EstimationReport cmd_shots(const RunConfig& cfg, std::ostream& os) {
    const TeleportConfig tc = build_teleport_config(cfg);
    const ReadoutConfig rc = build_readout_config(cfg);
    const QubitState input = bloch_to_qubit({cfg.input_theta, cfg.input_phi});
    const std::vector<double> deltas = resolve_deltas(cfg, rc);
    ShotOptions options;
    options.seed = cfg.seed;
    options.n_per_delta = cfg.shots_per_delta;
    options.detector_efficiency = cfg.detector_efficiency;
    options.zone_loss = cfg.zone_loss;

    const std::vector<ShotRecord> records =
        simulate_shots(tc, rc, input, deltas, options);
    {
        auto out = open_out(cfg, "shots.csv");
        write_csv_preamble(out, config_hash(cfg),
                           "delta,accepted,b_excited,shot_index");
        for (const ShotRecord& rec : records) {
            out << format_number(rec.delta) << ',' << (rec.atom_a_excited ? 1 : 0)
                << ',' << (rec.atom_a_excited && rec.atom_b_excited ? 1 : 0)
                << ',' << rec.shot_index << '\n';
        }
    }
    std::vector<TransferMatrix> transfers;
    for (double d : deltas) transfers.push_back(composite_transfer(rc, d));
    EstimationReport report = estimate(records, deltas, transfers);
    const TeleportOutcome tele = run_teleport(tc, input, 1);
    report.exact_accept_probability =
        cfg.detector_efficiency * tele.success_probability;
    {
        auto out = open_out(cfg, "estimates.csv");
        write_csv_preamble(out, config_hash(cfg),
                           "delta,n_total,n_accepted,p1_hat,standard_error");
        for (const DeltaEstimate& e : report.per_delta) {
            out << format_number(e.delta) << ',' << e.n_total << ','
                << e.n_accepted << ',' << format_number(e.p1_hat) << ','
                << format_number(e.standard_error) << '\n';
        }
    }
    os << "acceptance_fraction = " << format_number(report.acceptance_fraction)
       << '\n'
       << "exact_accept_probability = "
       << format_number(report.exact_accept_probability) << '\n';
    print_tomo(os, report.tomography);
    os << "theta_ci = " << format_number(report.theta_ci) << '\n'
       << "phi_ci = " << format_number(report.phi_ci) << '\n';
    return report;
}

void cmd_full(const RunConfig& cfg, const CliOptions& opt) {
    auto report = open_out(cfg, "report.txt");
    report << "pcqc " << kVersion << " full run\n\n[calibration]\n";
    cmd_calibrate(cfg, report);
    report << "\n[teleport]\n";
    cmd_teleport(cfg, report);
    cmd_readout(cfg);
    report << "\n[tomography noiseless]\n";
    cmd_tomo(cfg, opt, report);
    report << "\n[shots]\n";
    cmd_shots(cfg, report);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conditional-teleportation and Ramsey-readout simulator"};
    app.require_subcommand(1);

    CliOptions opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "configuration file");
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--seed", opt.seed, "shot RNG seed");
        sub->add_option("--deltas", opt.deltas_csv,
                        "comma-separated detunings in rad/s");
        sub->add_option("--shots", opt.shots, "shots per detuning");
        sub->add_flag("--quiet", opt.quiet, "suppress warnings");
        return sub;
    };
    auto* sub_calibrate = add_common(app.add_subcommand(
        "calibrate", "report calibrated g0 and drive scales"));
    auto* sub_teleport = add_common(
        app.add_subcommand("teleport", "run the teleportation stages"));
    auto* sub_readout = add_common(
        app.add_subcommand("readout", "emit field cross-section and P1 sweep"));
    auto* sub_tomo = add_common(
        app.add_subcommand("tomo", "invert P1 measurements to Bloch angles"));
    sub_tomo->add_option("--measurements", opt.measurements_path,
                         "CSV of delta,P1 rows (default: forward model)");
    auto* sub_shots = add_common(
        app.add_subcommand("shots", "Monte Carlo shot simulation"));
    auto* sub_full =
        add_common(app.add_subcommand("full", "entire pipeline"));
    sub_full->add_option("--measurements", opt.measurements_path,
                         "CSV of delta,P1 rows for the tomography step");

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig cfg = load_config(opt);
        std::ostream& os = std::cout;
        if (sub_calibrate->parsed()) {
            cmd_calibrate(cfg, os);
        } else if (sub_teleport->parsed()) {
            cmd_teleport(cfg, os);
        } else if (sub_readout->parsed()) {
            cmd_readout(cfg);
        } else if (sub_tomo->parsed()) {
            cmd_tomo(cfg, opt, os);
        } else if (sub_shots->parsed()) {
            cmd_shots(cfg, os);
        } else if (sub_full->parsed()) {
            cmd_full(cfg, opt);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const InsufficientDataError& e) {
        std::cerr << "insufficient data: " << e.what() << '\n';
        return 4;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
