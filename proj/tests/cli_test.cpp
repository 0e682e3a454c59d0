// End-to-end checks that drive the installed binary like a user would.
// Usage: cli_test <path-to-pcqc>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void check(bool ok, const std::string& what) {
    if (ok) {
        std::cout << "ok: " << what << '\n';
    } else {
        std::cout << "FAIL: " << what << '\n';
        ++g_failures;
    }
}

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run(const std::string& cmd) {
    const std::string out_file = "cli_test_stdout.tmp";
    const int rc = std::system((cmd + " > " + out_file + " 2>&1").c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(rc);
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    r.output = ss.str();
    std::remove(out_file.c_str());
    return r;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Pulls "key = value" out of report-style text.
double scrape(const std::string& text, const std::string& key) {
    const std::string needle = key + " = ";
    const auto pos = text.find(needle);
    if (pos == std::string::npos) return std::nan("");
    return std::stod(text.substr(pos + needle.size()));
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (std::string("0123456789+-.").find(line[0]) == std::string::npos) {
            continue;  // header row
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_test <pcqc binary>\n";
        return 2;
    }
    const std::string pcqc = argv[1];
    const fs::path work = fs::path("cli_test_work");
    fs::remove_all(work);
    fs::create_directories(work);

    // --- full pipeline, small shot count for speed ---------------------
    const std::string out_a = (work / "run_a").string();
    const RunResult full = run(pcqc + " full --out " + out_a +
                               " --shots 2000 --seed 7 --quiet");
    check(full.exit_code == 0, "full run exits 0");
    for (const char* name : {"report.txt", "fig2.csv", "fig3.csv", "fig4.csv",
                             "fig5.csv", "shots.csv", "estimates.csv"}) {
        check(fs::exists(fs::path(out_a) / name),
              std::string("full run writes ") + name);
    }

    const std::string report = read_file(fs::path(out_a) / "report.txt");
    const auto tomo_pos = report.find("[tomography noiseless]");
    check(tomo_pos != std::string::npos, "report has a noiseless tomography section");
    if (tomo_pos != std::string::npos) {
        const std::string tomo = report.substr(tomo_pos);
        check(std::abs(scrape(tomo, "theta_hat_rad") - kPi / 4.0) < 1e-6,
              "noiseless tomography recovers theta = pi/4 to 1e-6");
        check(std::abs(scrape(tomo, "phi_hat_rad") - -kPi / 6.0) < 1e-6,
              "noiseless tomography recovers phi = -pi/6 to 1e-6");
    }
    const double p_succ = scrape(report, "success_probability");
    check(std::abs(p_succ - 0.25) < 0.01, "success probability near 1/4");
    check(std::abs(scrape(report, "G_B_rad") - 9.0 * kPi / 4.0) < 1e-6,
          "calibrated G_B equals 9 pi / 4");

    // Stage-1 trace ends in the even superposition.
    {
        const auto rows = read_csv(fs::path(out_a) / "fig2.csv");
        std::map<std::string, double> final_abs2;
        for (const auto& r : rows) {
            if (r.size() == 6) final_abs2[r[2]] = std::stod(r[5]);
        }
        check(final_abs2.size() == 2, "fig2 tracks two amplitudes");
        for (const auto& [label, a2] : final_abs2) {
            check(std::abs(a2 - 0.5) < 1e-6,
                  "fig2 final |" + label + "|^2 = 0.5");
        }
    }

    // --- determinism: identical rerun is byte identical ----------------
    const std::string out_b = (work / "run_b").string();
    const RunResult rerun = run(pcqc + " full --out " + out_b +
                                " --shots 2000 --seed 7 --quiet");
    check(rerun.exit_code == 0, "rerun exits 0");
    for (const char* name : {"report.txt", "fig2.csv", "fig3.csv", "fig4.csv",
                             "fig5.csv", "shots.csv", "estimates.csv"}) {
        check(read_file(fs::path(out_a) / name) ==
                  read_file(fs::path(out_b) / name),
              std::string("rerun reproduces ") + name + " byte for byte");
    }
    const std::string out_c = (work / "run_c").string();
    const RunResult other = run(pcqc + " full --out " + out_c +
                                " --shots 2000 --seed 8 --quiet");
    check(other.exit_code == 0, "third run exits 0");
    check(read_file(fs::path(out_a) / "shots.csv") !=
              read_file(fs::path(out_c) / "shots.csv"),
          "different seed changes the shot stream");

    // --- tomo --measurements matches the forward-model path ------------
    {
        // Sample four P1 points off the published sweep and feed them back.
        const auto sweep = read_csv(fs::path(out_a) / "fig5.csv");
        check(sweep.size() == 81, "fig5 sweep has 81 points");
        const fs::path ms_path = work / "measurements.csv";
        std::ofstream ms(ms_path);
        ms << "delta,P1\n";
        std::string deltas_csv;
        for (std::size_t idx : {10u, 30u, 52u, 74u}) {
            ms << sweep[idx][0] << ',' << sweep[idx][1] << '\n';
            if (!deltas_csv.empty()) deltas_csv += ',';
            deltas_csv += sweep[idx][0];
        }
        ms.close();
        const RunResult from_file = run(pcqc + " tomo --measurements " +
                                        ms_path.string() + " --quiet");
        check(from_file.exit_code == 0, "tomo --measurements exits 0");
        check(std::abs(scrape(from_file.output, "theta_hat_rad") - kPi / 4.0) <
                  1e-6,
              "tomo from file recovers theta");
        check(std::abs(scrape(from_file.output, "phi_hat_rad") - -kPi / 6.0) <
                  1e-6,
              "tomo from file recovers phi");

        const RunResult forward =
            run(pcqc + " tomo --deltas " + deltas_csv + " --quiet");
        check(forward.exit_code == 0, "tomo forward model exits 0");
        check(std::abs(scrape(forward.output, "theta_hat_rad") -
                       scrape(from_file.output, "theta_hat_rad")) < 1e-9,
              "file and forward paths agree on theta");
    }

    // --- calibrate smoke ------------------------------------------------
    {
        const RunResult cal = run(pcqc + " calibrate --quiet");
        check(cal.exit_code == 0, "calibrate exits 0");
        check(std::abs(scrape(cal.output, "G_B_rad") - 9.0 * kPi / 4.0) < 1e-6,
              "calibrate reports G_B = 9 pi / 4");
        check(std::abs(scrape(cal.output, "G_A_rad") - 7.0 * kPi / 4.0) < 1e-2,
              "calibrate reports G_A near 7 pi / 4");
        check(std::abs(scrape(cal.output, "t1_us") - 51.63) < 0.1,
              "stage-1 transit near 51.6 us");
    }

    // --- error paths ----------------------------------------------------
    {
        const fs::path bad = work / "bad.ini";
        std::ofstream(bad) << "[physical]\nv_b = -1\n";
        const RunResult r = run(pcqc + " calibrate --config " + bad.string());
        check(r.exit_code == 2, "invalid config exits with code 2");
        check(r.output.find("v_b") != std::string::npos,
              "invalid config error names the field");

        const RunResult missing =
            run(pcqc + " calibrate --config no_such_config.ini");
        check(missing.exit_code == 2, "missing config exits with code 2");

        const RunResult few = run(pcqc + " tomo --deltas 1,2 --quiet");
        check(few.exit_code == 2, "too few detunings exits with code 2");
    }

    std::cout << (g_failures == 0 ? "ALL OK" : "FAILURES") << " ("
              << g_failures << " failed)\n";
    return g_failures == 0 ? 0 : 1;
}
