#pragma once

// Independent checks of the closed-form dynamics.
//
//  * A brute-force Schrodinger integration over a finite band of discrete
//    waveguide modes (no Wigner-Weisskopf step).
//  * RK4 integration of the time-local master equation for the reduced state.
//  * Finite-difference decay rates.

#include <vector>

#include "wqed/dynamics.hpp"
#include "wqed/params.hpp"

namespace wqed {

// Uniform mode grid delta_j = -W + (j + 1/2) dnu, j = 0..M-1, in the frame
// rotating at nu_s. M odd puts a mode exactly on resonance.
struct ModeDiscretization {
    double half_width = 100.0;
    int mode_count = 4001;

    double spacing() const { return 2.0 * half_width / mode_count; }
    double density() const { return 1.0 / spacing(); }
    double coupling(const SystemParams& sys) const {
        return std::sqrt(sys.gamma_1d * spacing() / (4.0 * kPi));
    }
    double frequency(int j) const { return -half_width + (j + 0.5) * spacing(); }
    // Artificial revival time 2 pi / dnu of the discrete bath.
    double recurrence_time() const { return 2.0 * kPi / spacing(); }

    // Band W = 100 max(gamma, delta, |detuning| + delta) and the smallest odd
    // M that keeps t_max below 40% of half the recurrence time and the
    // recurrence length above 10 / delta.
    static ModeDiscretization defaults_for(const SystemParams& sys, const PacketParams& pkt,
                                           double t_max);

    // Throws ParameterError for a wrong band or mode count and RecurrenceError
    // when t_max reaches half the recurrence time.
    void validate(const SystemParams& sys, const PacketParams& pkt, double t_max) const;
};

struct OracleSample {
    double t = 0.0;
    cplx psi;                // rotating frame, comparable to psi_s
    double field_norm = 0.0; // sum over both channels of |phi_nu|^2
    double norm = 0.0;       // c0^2 + |psi|^2 + field_norm
};

struct OracleOptions {
    double dt = 0.0;             // 0 selects 0.04 / W
    double coupling_scale = 1.0; // multiplies g; 0 decouples the emitter
};

struct OracleRun {
    ModeDiscretization disc;
    double dt = 0.0;
    double initial_field_norm = 0.0;
    std::vector<OracleSample> samples;
    double max_norm_drift = 0.0;
};

// Explicit RK4 over t in [0, t_max], sampled every dt_out.
// Throws StabilityError when dt > 0.1/W or the state stops being finite.
OracleRun mode_oracle_evolve(const SystemParams& sys, const PacketParams& pkt,
                             const ModeDiscretization& disc, double t_max, double dt_out,
                             const OracleOptions& options = {});

struct OracleComparison {
    double max_abs_error = 0.0; // max_t |psi_oracle - psi_s|
    double max_norm_drift = 0.0;
    double peak_population = 0.0;
};

OracleComparison compare_with_closed_form(const OracleRun& run, const SystemParams& sys,
                                          const PacketParams& pkt);

// 2x2 reduced density matrix in the {e, g} basis; rho_eg = <e|rho|g> in the
// frame rotating at nu_s, which equals c0 * psi_s for the exact dynamics.
struct ReducedState {
    double t = 0.0;
    double rho_ee = 0.0;
    double rho_gg = 1.0;
    cplx rho_eg;

    double trace() const { return rho_ee + rho_gg; }
    bool positive(double tol = 1e-12) const;
};

ReducedState exact_reduced_state(double t, const SystemParams& sys, const PacketParams& pkt);

// RK4 integration of
//   d rho/dt = -(i/2) S [sigma+ sigma-, rho] + Gamma (sigma- rho sigma+ - {sigma+ sigma-, rho}/2)
// with Gamma(t), S(t) from the closed form, starting from the exact state at
// t_start > 0. Output every dt; internal steps are refined near the origin
// where Gamma ~ -2/t. Throws StabilityError if trace or positivity monitors trip.
std::vector<ReducedState> master_eq_evolve(const SystemParams& sys, const PacketParams& pkt,
                                           double t_start, double t_max, double dt);

// Central-difference -d ln|psi|^2/dt. Test-side oracle for decay_rate.
double fd_decay_rate(double t, const SystemParams& sys, const PacketParams& pkt, double h);

// Central-difference -2 d arg(psi)/dt. Oracle for lamb_shift_rel.
double fd_lamb_shift_rel(double t, const SystemParams& sys, const PacketParams& pkt, double h);

} // namespace wqed
