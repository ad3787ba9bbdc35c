#pragma once

// Closed-form excited-state amplitude of an emitter driven by a single-photon
// Lorentzian packet, plus the time-local rates derived from it.
//
// Amplitudes are returned in the frame rotating at nu_s:
//     psi_lab(t) = psi(t) * exp(-i nu_s t).
// Every single-excitation amplitude carries the factor sqrt(1 - c0^2).

#include <complex>

#include "wqed/params.hpp"

namespace wqed {

using cplx = std::complex<double>;

// Below this |psi| the rates psi_dot/psi are reported as singular.
inline constexpr double kSingularAmplitude = 1e-14;

// |x| t below which (exp(xt) - 1)/x is evaluated from its Taylor series.
inline constexpr double kTaylorSwitch = 1e-6;

struct AmplitudeSample {
    double t = 0.0;
    cplx psi;
    cplx psi_dot;
    double population = 0.0; // |psi|^2, already including the (1 - c0^2) weight
};

struct InterferenceTerms {
    cplx a1;  // -(gamma/2) psi: the emitter already excited
    cplx a2;  // incoming-packet drive: the excitation still in the field
    double interference = 0.0; // a1* a2 + a1 a2*
};

// Rotating-frame excited-state amplitude. Throws ParameterError for t < 0.
cplx psi_s(double t, const SystemParams& sys, const PacketParams& pkt);

// Analytic time derivative of psi_s.
cplx psi_s_dot(double t, const SystemParams& sys, const PacketParams& pkt);

// Lab-frame amplitude, including exp(-i nu_s t).
cplx psi_s_lab(double t, const SystemParams& sys, const PacketParams& pkt);

AmplitudeSample sample(double t, const SystemParams& sys, const PacketParams& pkt);

double population(double t, const SystemParams& sys, const PacketParams& pkt);

// d|psi|^2/dt from the analytic derivative.
double population_rate(double t, const SystemParams& sys, const PacketParams& pkt);

// Gamma(t) = -2 Re(psi_dot/psi). Throws SingularPointError when |psi| < 1e-14.
double decay_rate(double t, const SystemParams& sys, const PacketParams& pkt);

// Lamb shift without the constant 2 nu_s, i.e. -2 Im(psi_dot/psi) of the
// rotating-frame amplitude.
double lamb_shift_rel(double t, const SystemParams& sys, const PacketParams& pkt);

// Lab-frame Lamb shift S(t) = 2 nu_s + lamb_shift_rel(t).
double lamb_shift(double t, const SystemParams& sys, const PacketParams& pkt);

InterferenceTerms interference_terms(double t, const SystemParams& sys, const PacketParams& pkt);

// Drive amplitude exp(-delta t / 2) seen by the emitter.
double drive_envelope(double t, const PacketParams& pkt);

} // namespace wqed
