#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "pcqc/field_profiles.hpp"

using namespace pcqc;

namespace {

SampledProfile constant_profile(double x0, double x1) {
    SampledProfile p;
    p.positions.resize(2);
    p.magnitudes.resize(2);
    p.positions << x0, x1;
    p.magnitudes << 1.0, 1.0;
    return p;
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) {
        path = std::string("pcqc_test_") + name;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("load_profile parses a triangle and rejects bad files") {
    TempFile f("triangle.txt");
    {
        std::ofstream out(f.path);
        out << "# comment\n0 0\n1 1\n2 0\n";
    }
    const SampledProfile p = load_profile(f.path);
    CHECK(p.positions.size() == 3);
    CHECK(eval_profile(p, 1.0) == doctest::Approx(1.0));
    CHECK(eval_profile(p, 0.5) == doctest::Approx(0.5));

    {
        std::ofstream out(f.path);
        out << "0 0\n1 1.2\n2 0\n";
    }
    CHECK_THROWS_AS(load_profile(f.path), ConfigError);

    {
        std::ofstream out(f.path);
        out << "0 0\n1 0.5\n0.5 0.2\n";
    }
    CHECK_THROWS_AS(load_profile(f.path), ConfigError);

    {
        std::ofstream out(f.path);
        out << "0 zero\n1 1\n";
    }
    CHECK_THROWS_AS(load_profile(f.path), ConfigError);

    CHECK_THROWS_AS(load_profile("no_such_file.txt"), ConfigError);
}

TEST_CASE("save/load round trip is the identity") {
    const SampledProfile p = render_cavity(CavityModel{});
    TempFile f("roundtrip.txt");
    save_profile(p, f.path);
    const SampledProfile q = load_profile(f.path);
    REQUIRE(q.positions.size() == p.positions.size());
    CHECK((q.positions - p.positions).cwiseAbs().maxCoeff() == 0.0);
    CHECK((q.magnitudes - p.magnitudes).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("eval_profile interpolates inside and is zero outside") {
    TempFile f("tri.txt");
    {
        std::ofstream out(f.path);
        out << "0 0\n1 1\n2 0\n";
    }
    const SampledProfile p = load_profile(f.path);
    CHECK(eval_profile(p, 1.0) == doctest::Approx(1.0));
    CHECK(eval_profile(p, 0.5) == doctest::Approx(0.5));
    CHECK(eval_profile(p, 2.5) == 0.0);
    CHECK(eval_profile(p, -0.5) == 0.0);
}

TEST_CASE("pulse_area on rectangles and zero profiles") {
    const double a = 2.202e-3;
    const SampledProfile box = constant_profile(0.0, 5.0);
    const double g0 = 1e5;
    const double v = 767.7;
    CHECK(pulse_area(box, a, v, g0, 0.0, 5.0) ==
          doctest::Approx(g0 * 5.0 * a / v).epsilon(1e-12));

    SampledProfile zero = box;
    zero.magnitudes.setZero();
    CHECK(pulse_area(zero, a, v, g0, 0.0, 5.0) == 0.0);

    CHECK_THROWS_AS(pulse_area(box, a, v, g0, 2.0, 1.0), ConfigError);
}

TEST_CASE("calibrate_g0 on rectangles, linearity, and zero profiles") {
    const double a = 2.202e-3;
    const double v = 767.7;
    const SampledProfile box = constant_profile(0.0, 4.0);
    const double g = calibrate_g0(box, a, v, kPi, 0.0, 4.0);
    CHECK(g == doctest::Approx(kPi * v / (4.0 * a)).epsilon(1e-12));
    const double g2 = calibrate_g0(box, a, v, 2.0 * kPi, 0.0, 4.0);
    CHECK(g2 == doctest::Approx(2.0 * g).epsilon(1e-14));

    SampledProfile zero = box;
    zero.magnitudes.setZero();
    CHECK_THROWS_AS(calibrate_g0(zero, a, v, kPi, 0.0, 4.0), ConfigError);
}

TEST_CASE("calibrated cavity area hits 9 pi / 4 and matches a fine-grid oracle") {
    const double a = 2.202e-3;
    const double v = 767.7;
    const double target = 9.0 * kPi / 4.0;
    const SampledProfile p = render_cavity(CavityModel{});
    const double g0 = calibrate_g0(p, a, v, target, 0.0, 18.0);
    CHECK(pulse_area(p, a, v, g0, 0.0, 18.0) ==
          doctest::Approx(target).epsilon(1e-9));

    // Independent quadrature at 10x resolution: midpoint rule on the
    // rendered analytic shape, not the implementation's trapezoid path.
    const SampledProfile fine = render_cavity(CavityModel{}, 650);
    double mid_sum = 0.0;
    const int n = 18 * 650 * 10;
    for (int i = 0; i < n; ++i) {
        const double x = 18.0 * (i + 0.5) / n;
        mid_sum += eval_profile(fine, x);
    }
    const double oracle_area = g0 * (mid_sum * 18.0 / n) * a / v;
    CHECK(oracle_area == doctest::Approx(target).epsilon(1e-6));
}

TEST_CASE("quadrature converges when halving the sample spacing") {
    const double a = 2.202e-3;
    const double v = 767.7;
    const double coarse =
        pulse_area(render_cavity(CavityModel{}, 65), a, v, 1.0, 0.0, 18.0);
    const double fine =
        pulse_area(render_cavity(CavityModel{}, 130), a, v, 1.0, 0.0, 18.0);
    CHECK(std::abs(fine - coarse) / coarse < 1e-6);
}

TEST_CASE("18a transit at 767.7 m/s takes 51.6 us") {
    const double t = 18.0 * 2.202e-3 / 767.7;
    CHECK(std::abs(t - 51.6e-6) / 51.6e-6 < 1e-3);
}

TEST_CASE("default cavity tail beyond 18a is under the 1% budget") {
    const SampledProfile p = render_cavity(CavityModel{});
    const double a = 2.202e-3, v = 767.7;
    const double total = pulse_area(p, a, v, 1.0, p.positions(0),
                                    p.positions(p.positions.size() - 1));
    const double tail =
        pulse_area(p, a, v, 1.0, 18.0, p.positions(p.positions.size() - 1));
    CHECK(tail / total < 0.01);
}

TEST_CASE("waveguide zones span 18a each, 36a total") {
    WaveguideModel wg1;
    WaveguideModel wg2 = wg1;
    wg2.zone_start = 18.0;
    const SampledProfile z1 = render_waveguide(wg1);
    const SampledProfile z2 = render_waveguide(wg2);
    CHECK(z1.positions(0) == doctest::Approx(0.0));
    CHECK(z1.positions(z1.positions.size() - 1) == doctest::Approx(18.0));
    CHECK(z2.positions(0) == doctest::Approx(18.0));
    CHECK(z2.positions(z2.positions.size() - 1) == doctest::Approx(36.0));
    CHECK(eval_profile(z1, 18.5) == 0.0);
    CHECK(eval_profile(z1, -0.5) == 0.0);
    CHECK(z1.magnitudes.maxCoeff() == doctest::Approx(1.0));
}

TEST_CASE("coupling trace reproduces g(t) along the trajectory") {
    const SampledProfile p = render_cavity(CavityModel{});
    const double a = 2.202e-3, v = 767.7, g0 = 4.2e5;
    const double t_end = 18.0 * a / v;
    const CouplingTrace tr =
        make_coupling_trace(p, a, v, g0, 0.0, 0.0, t_end, a / 65.0 / v);
    for (double t : {0.0, 0.3 * t_end, 0.5 * t_end, 0.9 * t_end}) {
        const double x = v * t / a;
        CHECK(tr.at(t) == doctest::Approx(g0 * eval_profile(p, x)).epsilon(1e-12));
    }
    for (Eigen::Index i = 1; i < tr.times.size(); ++i) {
        CHECK(tr.times(i) > tr.times(i - 1));
        CHECK(tr.g_values(i) >= 0.0);
    }
}

TEST_CASE("physical parameter validation") {
    PhysicalParams p;
    p.validate();
    p.v_b = -1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = PhysicalParams{};
    p.omega *= 1.001;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}
