#pragma once

// Non-Markovianity N = integral of max{0, -Gamma(t)} over a cutoff window.
//
// Because psi(0) = 0 the integrand behaves like 2/t near the origin, so N is
// only finite with an explicit lower cutoff t0. The cutoff is carried in every
// report together with the value obtained when the initial rise is dropped.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wqed/params.hpp"

namespace wqed {

enum class ExtremumKind { minimum, maximum };

struct ExtremumEvent {
    double t = 0.0;
    double population = 0.0;
    ExtremumKind kind = ExtremumKind::maximum;
};

struct NMReport {
    double t0_cutoff = 0.0;
    double t_max = 0.0;
    std::vector<std::pair<double, double>> intervals; // population increasing, Gamma < 0
    std::vector<double> contributions;                // ln(P(t_end) / P(t_start)) per interval
    double total_n = 0.0;
    double quadrature_total = 0.0;
    double n_excl_initial_rise = 0.0;
};

inline constexpr double kRootTolerance = 1e-10;
inline constexpr double kDefaultCutoff = 1e-2; // in units of 1/gamma_1d

// Largest scan step that still resolves every population oscillation.
double extrema_scan_step(const SystemParams& sys, const PacketParams& pkt);

// All roots of d|psi|^2/dt in (0, t_max], located by a dense sign scan and
// refined by bisection to kRootTolerance.
std::vector<ExtremumEvent> population_extrema(const SystemParams& sys, const PacketParams& pkt,
                                              double t_max);

// Truncation time after which Gamma stays positive: the drive amplitude has
// fallen below 1e-8 and no population increase occurs in the following
// 5/gamma_1d window.
double default_t_max(const SystemParams& sys, const PacketParams& pkt);

// Throws ParameterError when 0 < t0 < t_max fails or when t0 is beyond the
// first population maximum.
NMReport nm_integral(const SystemParams& sys, const PacketParams& pkt, double t0_cutoff,
                     double t_max);

NMReport nm_integral(const SystemParams& sys, const PacketParams& pkt,
                     double t0_cutoff = kDefaultCutoff);

// Adaptive Gauss-Kronrod integral of max{0, -Gamma} over [a, b].
double nm_quadrature(const SystemParams& sys, const PacketParams& pkt, double a, double b);

enum class SweepAxis { detuning, linewidth };

struct SweepRow {
    double parameter = 0.0;
    std::optional<NMReport> report;
    std::string error; // non-empty iff report is empty
};

struct SweepOptions {
    unsigned threads = 1;
    std::optional<double> t_max; // per-row default_t_max when unset
};

// One row per grid value, in grid order. Invalid points produce error rows.
// Throws ParameterError if the grid is empty or not strictly increasing.
std::vector<SweepRow> sweep(const SystemParams& sys, const PacketParams& pkt_template,
                            SweepAxis axis, std::span<const double> grid, double t0_cutoff,
                            const SweepOptions& options = {});

} // namespace wqed
