#pragma once

// Physical parameters of the emitter and the incoming single-photon packet.
//
// Units: hbar = c = 1. Frequencies are typically quoted in units of gamma_1d,
// times in 1/gamma_1d and lengths in c/gamma_1d. The density of waveguide
// modes is fixed to 1/(2 pi), which makes the real-space norm of a field
// amplitude equal to its probability.

#include <cmath>
#include <numbers>

namespace wqed {

inline constexpr double kPi = std::numbers::pi;

// Density of modes per unit frequency used by the continuum formulas.
inline constexpr double kModeDensity = 1.0 / (2.0 * kPi);

struct SystemParams {
    double gamma_1d = 1.0; // spontaneous emission rate into the waveguide
    double nu_s = 100.0;   // transition frequency; enters only lab-frame phases

    // Throws ParameterError.
    void validate() const;
};

struct PacketParams {
    double delta = 0.1;    // linewidth; 1/delta is the pulse duration
    double detuning = 0.0; // nu_L - nu_S
    double c0 = 0.0;       // amplitude of |g,0> in the global initial state

    void validate() const;

    double central_frequency(const SystemParams& sys) const { return sys.nu_s + detuning; }

    // sqrt(1 - c0^2): weight carried by the single-excitation sector.
    double excitation_scale() const { return std::sqrt(1.0 - c0 * c0); }
};

// True when every rate in the problem is at least ten times smaller than the
// transition frequency, i.e. the rotating-wave treatment is self-consistent.
bool rwa_consistent(const SystemParams& sys, const PacketParams& pkt);

void validate(const SystemParams& sys, const PacketParams& pkt);

} // namespace wqed
