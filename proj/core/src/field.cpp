#include "wqed/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wqed/errors.hpp"

namespace wqed {

namespace {

void check_point(double r, double t) {
    if (!std::isfinite(r) || !std::isfinite(t)) throw ParameterError("r and t must be finite");
    if (r == 0.0) throw ParameterError("field amplitudes are undefined at the emitter (r = 0)");
    if (t < 0.0) throw ParameterError("time must be >= 0");
}

double emission_prefactor(const SystemParams& sys) {
    return std::sqrt(kPi * sys.gamma_1d * kModeDensity);
}

// Emitted amplitude at retarded time tau; zero before emission starts.
cplx emitted(double tau, const SystemParams& sys, const PacketParams& pkt) {
    if (tau <= 0.0) return {0.0, 0.0};
    return emission_prefactor(sys) * psi_s_lab(tau, sys, pkt);
}

cplx free_packet(double r, double t, const SystemParams& sys, const PacketParams& pkt) {
    const double u = r - t;
    const double amp = std::sqrt(2.0 * kPi * kModeDensity * pkt.delta) * pkt.excitation_scale();
    return amp * std::exp(cplx(0.5 * pkt.delta * u, pkt.central_frequency(sys) * u));
}

enum class Side { left, right };

// Amplitudes with the emitter-side Heaviside fixed by `side` instead of sign(r).
cplx field_a_from(double r, double t, Side side, const SystemParams& sys,
                  const PacketParams& pkt) {
    cplx v = (r <= t) ? free_packet(r, t, sys, pkt) : cplx{};
    if (side == Side::right) v += emitted(t - r, sys, pkt);
    return v;
}

cplx field_b_from(double r, double t, Side side, const SystemParams& sys,
                  const PacketParams& pkt) {
    if (side == Side::right) return {0.0, 0.0};
    return emitted(t + r, sys, pkt);
}

template <class F>
double simpson(F&& f, double a, double b, double max_step) {
    if (!(b > a)) return 0.0;
    auto n = static_cast<long>(std::ceil((b - a) / max_step));
    if (n % 2 != 0) ++n;
    n = std::max(n, 2L);
    const double h = (b - a) / static_cast<double>(n);
    double sum = f(a) + f(b);
    for (long k = 1; k < n; ++k) {
        sum += ((k % 2 != 0) ? 4.0 : 2.0) * f(a + static_cast<double>(k) * h);
    }
    return sum * h / 3.0;
}

} // namespace

cplx incoming_field_a(double r, double t, const SystemParams& sys, const PacketParams& pkt) {
    validate(sys, pkt);
    if (t < 0.0) throw ParameterError("time must be >= 0");
    return (r <= t) ? free_packet(r, t, sys, pkt) : cplx{};
}

cplx field_a(double r, double t, const SystemParams& sys, const PacketParams& pkt) {
    check_point(r, t);
    validate(sys, pkt);
    return field_a_from(r, t, r > 0.0 ? Side::right : Side::left, sys, pkt);
}

cplx field_b(double r, double t, const SystemParams& sys, const PacketParams& pkt) {
    check_point(r, t);
    validate(sys, pkt);
    return field_b_from(r, t, r > 0.0 ? Side::right : Side::left, sys, pkt);
}

double min_window_halfwidth(double t, const PacketParams& pkt) {
    // The free tail beyond -L carries exp(-delta (L + t)); 15/delta keeps it below 1e-6.
    return t + 15.0 / pkt.delta;
}

double max_grid_step(const SystemParams& sys, const PacketParams& pkt) {
    return std::min(0.05, 0.1 / std::max({pkt.delta, sys.gamma_1d, std::abs(pkt.detuning)}));
}

ChannelProbabilities channel_probabilities(double t, const SystemParams& sys,
                                           const PacketParams& pkt, double grid_halfwidth,
                                           double grid_step) {
    validate(sys, pkt);
    if (!(t >= 0.0) || !std::isfinite(t)) throw ParameterError("time must be >= 0");
    if (!(grid_step > 0.0)) throw ParameterError("grid step must be > 0");
    if (grid_step > max_grid_step(sys, pkt) * (1.0 + 1e-12)) {
        throw ParameterError("grid step " + std::to_string(grid_step) + " exceeds " +
                             std::to_string(max_grid_step(sys, pkt)));
    }
    if (!(grid_halfwidth >= min_window_halfwidth(t, pkt))) {
        throw WindowError("window half-width " + std::to_string(grid_halfwidth) +
                          " is below the required " +
                          std::to_string(min_window_halfwidth(t, pkt)));
    }
    const double L = grid_halfwidth;

    // Segment endpoints touching r = 0 use the limit from inside the segment.
    auto density_a = [&](Side side) {
        return [&, side](double r) { return std::norm(field_a_from(r, t, side, sys, pkt)); };
    };
    auto density_b = [&](double r) {
        return std::norm(field_b_from(r, t, Side::left, sys, pkt));
    };

    ChannelProbabilities out;
    // Channel a: free packet on r < 0, free plus emission on (0, t); nothing beyond the front.
    out.p_a = simpson(density_a(Side::left), -L, 0.0, grid_step) +
              simpson(density_a(Side::right), 0.0, t, grid_step);
    // Channel b: emission on (-t, 0).
    out.p_b = simpson(density_b, -t, 0.0, grid_step);
    out.p_e = population(t, sys, pkt);
    out.norm = pkt.c0 * pkt.c0 + out.p_e + out.p_a + out.p_b;
    return out;
}

double transmitted_probability(double t, const SystemParams& sys, const PacketParams& pkt,
                               double grid_step) {
    validate(sys, pkt);
    return simpson(
        [&](double r) { return std::norm(field_a_from(r, t, Side::right, sys, pkt)); }, 0.0,
        t, grid_step);
}

FieldSnapshot field_snapshot(double t, const SystemParams& sys, const PacketParams& pkt,
                             double grid_halfwidth, double grid_step) {
    const ChannelProbabilities probs =
        channel_probabilities(t, sys, pkt, grid_halfwidth, grid_step);
    FieldSnapshot snap;
    snap.t = t;
    snap.p_a = probs.p_a;
    snap.p_b = probs.p_b;
    snap.p_e = probs.p_e;
    snap.norm = probs.norm;

    const auto half_cells = static_cast<long>(std::ceil(grid_halfwidth / grid_step));
    const double h = grid_halfwidth / static_cast<double>(half_cells);
    const long cells = 2 * half_cells;
    snap.grid.reserve(cells);
    snap.phi_a.reserve(cells);
    snap.phi_b.reserve(cells);
    for (long k = 0; k < cells; ++k) {
        const double r = (static_cast<double>(k - half_cells) + 0.5) * h;
        snap.grid.push_back(r);
        snap.phi_a.push_back(field_a(r, t, sys, pkt));
        snap.phi_b.push_back(field_b(r, t, sys, pkt));
    }
    return snap;
}

RecoveredRates detector_ratio_gamma(double t, double r_d, const SystemParams& sys,
                                    const PacketParams& pkt) {
    validate(sys, pkt);
    const double d = std::abs(r_d);
    if (!(d > 0.0) || !std::isfinite(d)) throw ParameterError("detector distance must be > 0");
    if (!(t > d)) throw ParameterError("detector ratio needs t > |r_d|");
    const double tau = t - d;
    if (std::abs(psi_s(tau, sys, pkt)) < kSingularAmplitude) {
        throw SingularPointError("retarded amplitude vanishes at t - |r_d| = " +
                                     std::to_string(tau),
                                 tau);
    }
    const cplx ratio = field_a(d, t, sys, pkt) / field_b(-d, t, sys, pkt);
    return {sys.gamma_1d * ratio.real(), 2.0 * sys.nu_s + sys.gamma_1d * ratio.imag()};
}

DetectorTrace detector_trace(double r_d, std::span<const double> times, const SystemParams& sys,
                             const PacketParams& pkt) {
    DetectorTrace trace;
    trace.r_d = std::abs(r_d);
    for (double t : times) {
        trace.times.push_back(t);
        trace.intensity_a.push_back(std::norm(field_a(trace.r_d, t, sys, pkt)));
        trace.intensity_b.push_back(std::norm(field_b(-trace.r_d, t, sys, pkt)));
        std::optional<double> g;
        std::optional<double> s;
        if (t > trace.r_d && std::abs(psi_s(t - trace.r_d, sys, pkt)) >= kSingularAmplitude) {
            const RecoveredRates rates = detector_ratio_gamma(t, trace.r_d, sys, pkt);
            g = rates.gamma;
            s = rates.lamb_shift;
        }
        trace.gamma_recovered.push_back(g);
        trace.s_recovered.push_back(s);
    }
    return trace;
}

} // namespace wqed
