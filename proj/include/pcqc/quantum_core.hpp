#pragma once

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <numbers>
#include <utility>

#include "pcqc/errors.hpp"

namespace pcqc {

using Complex = std::complex<double>;
using Vector2c = Eigen::Vector2cd;
using Matrix2c = Eigen::Matrix2cd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// Pure two-level atomic state, amplitudes on |0> (ground) and |1> (excited).
class QubitState {
  public:
    QubitState() : amps_(1.0, 0.0) {}
    QubitState(Complex c0, Complex c1);

    Complex c0() const { return amps_(0); }
    Complex c1() const { return amps_(1); }
    const Vector2c& amps() const { return amps_; }

    double norm() const { return amps_.norm(); }

    /// Removes the global phase so c0 is real and non-negative.
    /// If |c0| ~ 0, c1 is made real non-negative instead.
    QubitState canonicalized() const;

  private:
    Vector2c amps_;  // normalized on construction
};

/// Polar parametrization: theta in [0, pi], phi in (-pi, pi].
/// phi is canonicalized to 0 at the poles.
struct BlochAngles {
    double theta = 0.0;
    double phi = 0.0;
};

QubitState bloch_to_qubit(const BlochAngles& angles);
BlochAngles qubit_to_bloch(const QubitState& state);

/// |<a|b>|^2 for normalized states.
double fidelity(const QubitState& a, const QubitState& b);

enum class Atom { A, B };

/// State of atom A (x) atom B (x) cavity, Fock-truncated at n = 2.
/// The truncation is exact for this protocol: no evolution ever
/// populates n > 2.
class JointState {
  public:
    static constexpr int kFockMax = 2;
    static constexpr int kDim = 2 * 2 * (kFockMax + 1);
    using Amps = Eigen::Matrix<Complex, kDim, 1>;

    JointState() : amps_(Amps::Zero()) {}
    explicit JointState(Amps amps) : amps_(std::move(amps)) {}

    /// Product state (atom A) x (atom B) x |n>.
    static JointState product(const QubitState& a, const QubitState& b, int n);

    static int index(int a, int b, int n);

    Complex amp(int a, int b, int n) const { return amps_(index(a, b, n)); }
    Complex& amp(int a, int b, int n) { return amps_(index(a, b, n)); }
    const Amps& amps() const { return amps_; }
    Amps& amps() { return amps_; }

    double norm() const { return amps_.norm(); }
    JointState normalized() const;

    /// Fixed basis order (a, b, n), lines `a b n re im`.
    void dump(std::ostream& os) const;

  private:
    Amps amps_;
};

/// Projects the given atom onto `outcome` and renormalizes the matching
/// block. Returns the conditional state and the outcome probability.
/// Throws NumericError on a (numerically) impossible outcome.
std::pair<JointState, double> project_joint(const JointState& state, Atom atom,
                                            int outcome);

/// Probability of `outcome` without collapsing the state.
double outcome_probability(const JointState& state, Atom atom, int outcome);

}  // namespace pcqc
