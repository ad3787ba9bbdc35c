#include "wqed/dynamics.hpp"

#include <cmath>
#include <string>

#include "wqed/errors.hpp"

namespace wqed {

namespace {

void check_time(double t) {
    if (!std::isfinite(t)) throw ParameterError("time must be finite");
    if (t < 0.0) throw ParameterError("time must be >= 0, got " + std::to_string(t));
}

// exp(z) - 1 without cancellation for small |z|.
cplx expm1(cplx z) {
    const double a = z.real();
    const double b = z.imag();
    const double s = std::sin(0.5 * b);
    return {std::expm1(a) * std::cos(b) - 2.0 * s * s, std::exp(a) * std::sin(b)};
}

// Pulse amplitude sqrt(gamma delta / 2) * sqrt(1 - c0^2).
double drive_strength(const SystemParams& sys, const PacketParams& pkt) {
    return std::sqrt(0.5 * sys.gamma_1d * pkt.delta) * pkt.excitation_scale();
}

// exp(-(delta/2 + i detuning) t)
cplx drive_phase(double t, const PacketParams& pkt) {
    return std::exp(cplx(-0.5 * pkt.delta * t, -pkt.detuning * t));
}

cplx rate_ratio(double t, const SystemParams& sys, const PacketParams& pkt) {
    const cplx psi = psi_s(t, sys, pkt);
    if (std::abs(psi) < kSingularAmplitude) {
        throw SingularPointError("excited-state amplitude vanishes at t = " + std::to_string(t), t);
    }
    return psi_s_dot(t, sys, pkt) / psi;
}

} // namespace

cplx psi_s(double t, const SystemParams& sys, const PacketParams& pkt) {
    check_time(t);
    validate(sys, pkt);
    const double half_gamma = 0.5 * sys.gamma_1d;
    const cplx x(half_gamma - 0.5 * pkt.delta, -pkt.detuning);
    const cplx xt = x * t;

    cplx kernel; // e^{-gamma t/2} (e^{xt} - 1)/x
    if (std::abs(xt) < kTaylorSwitch) {
        kernel = std::exp(-half_gamma * t) * t *
                 (1.0 + xt / 2.0 + xt * xt / 6.0 + xt * xt * xt / 24.0);
    } else if (xt.real() > 30.0) {
        // e^{xt} dominates; the difference form cannot overflow.
        kernel = (drive_phase(t, pkt) - std::exp(-half_gamma * t)) / x;
    } else {
        kernel = std::exp(-half_gamma * t) * expm1(xt) / x;
    }
    return -drive_strength(sys, pkt) * kernel;
}

cplx psi_s_dot(double t, const SystemParams& sys, const PacketParams& pkt) {
    const cplx psi = psi_s(t, sys, pkt);
    return -0.5 * sys.gamma_1d * psi - drive_strength(sys, pkt) * drive_phase(t, pkt);
}

cplx psi_s_lab(double t, const SystemParams& sys, const PacketParams& pkt) {
    return psi_s(t, sys, pkt) * std::exp(cplx(0.0, -sys.nu_s * t));
}

AmplitudeSample sample(double t, const SystemParams& sys, const PacketParams& pkt) {
    AmplitudeSample s;
    s.t = t;
    s.psi = psi_s(t, sys, pkt);
    s.psi_dot = -0.5 * sys.gamma_1d * s.psi - drive_strength(sys, pkt) * drive_phase(t, pkt);
    s.population = std::norm(s.psi);
    return s;
}

double population(double t, const SystemParams& sys, const PacketParams& pkt) {
    return std::norm(psi_s(t, sys, pkt));
}

double population_rate(double t, const SystemParams& sys, const PacketParams& pkt) {
    const AmplitudeSample s = sample(t, sys, pkt);
    return 2.0 * std::real(std::conj(s.psi) * s.psi_dot);
}

double decay_rate(double t, const SystemParams& sys, const PacketParams& pkt) {
    return -2.0 * rate_ratio(t, sys, pkt).real();
}

double lamb_shift_rel(double t, const SystemParams& sys, const PacketParams& pkt) {
    return -2.0 * rate_ratio(t, sys, pkt).imag();
}

double lamb_shift(double t, const SystemParams& sys, const PacketParams& pkt) {
    return 2.0 * sys.nu_s + lamb_shift_rel(t, sys, pkt);
}

InterferenceTerms interference_terms(double t, const SystemParams& sys, const PacketParams& pkt) {
    const cplx psi = psi_s(t, sys, pkt);
    InterferenceTerms out;
    out.a1 = -0.5 * sys.gamma_1d * psi;
    out.a2 = -drive_strength(sys, pkt) * drive_phase(t, pkt);
    out.interference = 2.0 * std::real(std::conj(out.a1) * out.a2);
    return out;
}

double drive_envelope(double t, const PacketParams& pkt) {
    return std::exp(-0.5 * pkt.delta * t);
}

} // namespace wqed
