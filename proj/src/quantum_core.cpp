#include "pcqc/quantum_core.hpp"

#include <cmath>
#include <ostream>

namespace pcqc {

namespace {

void check_finite(const Complex& z, const char* what) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw NumericError(std::string("non-finite amplitude in ") + what);
    }
}

}  // namespace

QubitState::QubitState(Complex c0, Complex c1) {
    check_finite(c0, "QubitState");
    check_finite(c1, "QubitState");
    amps_ << c0, c1;
    const double n = amps_.norm();
    if (n < 1e-300) {
        throw NumericError("QubitState: zero-norm amplitudes");
    }
    amps_ /= n;
}

QubitState QubitState::canonicalized() const {
    const Complex ref = std::abs(c0()) > 1e-12 ? c0() : c1();
    const Complex phase = std::abs(ref) > 0 ? ref / std::abs(ref) : Complex(1, 0);
    return QubitState(c0() / phase, c1() / phase);
}

QubitState bloch_to_qubit(const BlochAngles& angles) {
    if (!(angles.theta >= 0.0 && angles.theta <= kPi)) {
        throw ConfigError("bloch_to_qubit: theta outside [0, pi]");
    }
    if (!(angles.phi > -kPi - 1e-12 && angles.phi <= kPi + 1e-12)) {
        throw ConfigError("bloch_to_qubit: phi outside (-pi, pi]");
    }
    const double half = angles.theta / 2.0;
    return QubitState(std::cos(half),
                      std::sin(half) * std::exp(Complex(0.0, angles.phi)));
}

BlochAngles qubit_to_bloch(const QubitState& state) {
    const QubitState s = state.canonicalized();
    BlochAngles out;
    out.theta = 2.0 * std::atan2(std::abs(s.c1()), std::abs(s.c0()));
    if (std::abs(s.c1()) < 1e-12 || std::abs(s.c0()) < 1e-12) {
        out.phi = 0.0;  // pole: phase undefined
    } else {
        out.phi = std::arg(s.c1());
    }
    if (out.phi <= -kPi) out.phi += 2.0 * kPi;
    return out;
}

double fidelity(const QubitState& a, const QubitState& b) {
    const Complex overlap = a.amps().dot(b.amps());
    return std::norm(overlap);
}

int JointState::index(int a, int b, int n) {
    return (a * 2 + b) * (kFockMax + 1) + n;
}

JointState JointState::product(const QubitState& a, const QubitState& b, int n) {
    if (n < 0 || n > kFockMax) {
        throw ConfigError("JointState::product: Fock index out of range");
    }
    JointState out;
    for (int ia = 0; ia < 2; ++ia) {
        for (int ib = 0; ib < 2; ++ib) {
            out.amp(ia, ib, n) = a.amps()(ia) * b.amps()(ib);
        }
    }
    return out;
}

JointState JointState::normalized() const {
    const double n = norm();
    if (n < 1e-300) {
        throw NumericError("JointState: cannot normalize zero state");
    }
    return JointState(amps_ / n);
}

void JointState::dump(std::ostream& os) const {
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            for (int n = 0; n <= kFockMax; ++n) {
                const Complex z = amp(a, b, n);
                os << a << ' ' << b << ' ' << n << ' ' << z.real() << ' '
                   << z.imag() << '\n';
            }
        }
    }
}

double outcome_probability(const JointState& state, Atom atom, int outcome) {
    double p = 0.0;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            const int label = (atom == Atom::A) ? a : b;
            if (label != outcome) continue;
            for (int n = 0; n <= JointState::kFockMax; ++n) {
                p += std::norm(state.amp(a, b, n));
            }
        }
    }
    return p;
}

std::pair<JointState, double> project_joint(const JointState& state, Atom atom,
                                            int outcome) {
    if (outcome != 0 && outcome != 1) {
        throw ConfigError("project_joint: outcome must be 0 or 1");
    }
    const double p = outcome_probability(state, atom, outcome);
    if (p < 1e-30) {
        throw NumericError("project_joint: impossible outcome (probability ~ 0)");
    }
    JointState out;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            const int label = (atom == Atom::A) ? a : b;
            if (label != outcome) continue;
            for (int n = 0; n <= JointState::kFockMax; ++n) {
                out.amp(a, b, n) = state.amp(a, b, n);
            }
        }
    }
    out.amps() /= std::sqrt(p);
    return {out, p};
}

}  // namespace pcqc
