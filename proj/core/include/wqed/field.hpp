#pragma once

// Real-space photon amplitudes in the forward (a) and backward (b) channels.
//
// Amplitudes are lab-frame: the incoming packet carries exp(i nu_L (r - t))
// and the emitted part carries psi_lab. Channel a is the sum of the freely
// propagating input and the forward emission; channel b holds only emission.

#include <optional>
#include <span>
#include <vector>

#include "wqed/dynamics.hpp"
#include "wqed/params.hpp"

namespace wqed {

// Free (incoming) part of channel a: sqrt(delta) theta(t - r) exp((delta/2 + i nu_L)(r - t)).
cplx incoming_field_a(double r, double t, const SystemParams& sys, const PacketParams& pkt);

// Full channel-a amplitude. Throws ParameterError at r = 0 or t < 0.
cplx field_a(double r, double t, const SystemParams& sys, const PacketParams& pkt);

// Channel-b amplitude; zero for r > 0 and before the emission front arrives.
cplx field_b(double r, double t, const SystemParams& sys, const PacketParams& pkt);

struct ChannelProbabilities {
    double p_a = 0.0;
    double p_b = 0.0;
    double p_e = 0.0;
    double norm = 0.0; // c0^2 + p_e + p_a + p_b
};

// Smallest window half-width for which the norm sum is trusted to 1e-6.
double min_window_halfwidth(double t, const PacketParams& pkt);

// Largest spatial step that resolves the fastest field oscillation.
double max_grid_step(const SystemParams& sys, const PacketParams& pkt);

// Composite Simpson integrals of |phi_a|^2 and |phi_b|^2 over [-L, L].
// The integration is split at r = 0 and r = t where the amplitudes jump, and
// the jump endpoints are evaluated as one-sided limits. Throws WindowError if
// the window does not hold the packet and ParameterError if the step is too
// coarse.
ChannelProbabilities channel_probabilities(double t, const SystemParams& sys,
                                           const PacketParams& pkt, double grid_halfwidth,
                                           double grid_step);

// Probability that has crossed into r > 0 in channel a.
double transmitted_probability(double t, const SystemParams& sys, const PacketParams& pkt,
                               double grid_step);

struct FieldSnapshot {
    double t = 0.0;
    std::vector<double> grid; // half-step offset so r = 0 is never sampled
    std::vector<cplx> phi_a;
    std::vector<cplx> phi_b;
    double p_a = 0.0;
    double p_b = 0.0;
    double p_e = 0.0;
    double norm = 0.0;
};

FieldSnapshot field_snapshot(double t, const SystemParams& sys, const PacketParams& pkt,
                             double grid_halfwidth, double grid_step);

struct RecoveredRates {
    double gamma = 0.0; // gamma_1d * Re[phi_a(|r_d|, t) / phi_b(-|r_d|, t)]
    double lamb_shift = 0.0; // lab-frame S at the retarded time
};

// Decay rate and Lamb shift at t - |r_d| read off from the two detector fields.
// Requires t > |r_d|; throws SingularPointError when the retarded amplitude vanishes.
RecoveredRates detector_ratio_gamma(double t, double r_d, const SystemParams& sys,
                                    const PacketParams& pkt);

struct DetectorTrace {
    double r_d = 0.0;
    std::vector<double> times;
    std::vector<double> intensity_a; // |phi_a(r_d, t)|^2, unit photodetection constant
    std::vector<double> intensity_b; // |phi_b(-r_d, t)|^2
    std::vector<std::optional<double>> gamma_recovered;
    std::vector<std::optional<double>> s_recovered;
};

DetectorTrace detector_trace(double r_d, std::span<const double> times, const SystemParams& sys,
                             const PacketParams& pkt);

} // namespace wqed
