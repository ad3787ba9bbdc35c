#include <algorithm>
#include <cmath>
#include <string>

#include "wqed/errors.hpp"
#include "wqed/oracles.hpp"

namespace wqed {

bool ReducedState::positive(double tol) const {
    if (rho_ee < -tol || rho_gg < -tol) return false;
    return std::norm(rho_eg) <= rho_ee * rho_gg + tol;
}

ReducedState exact_reduced_state(double t, const SystemParams& sys, const PacketParams& pkt) {
    const cplx psi = psi_s(t, sys, pkt);
    ReducedState s;
    s.t = t;
    s.rho_ee = std::norm(psi);
    s.rho_gg = 1.0 - s.rho_ee;
    s.rho_eg = pkt.c0 * psi;
    return s;
}

namespace {

struct Derivative {
    double ee;
    double gg;
    cplx eg;
};

Derivative generator(double t, const ReducedState& rho, const SystemParams& sys,
                     const PacketParams& pkt) {
    const double gamma = decay_rate(t, sys, pkt);
    const double shift = lamb_shift_rel(t, sys, pkt);
    // [P, rho]_eg = rho_eg; dissipator moves rho_ee into rho_gg and damps rho_eg at Gamma/2.
    return {-gamma * rho.rho_ee, gamma * rho.rho_ee, cplx(-0.5 * gamma, -0.5 * shift) * rho.rho_eg};
}

ReducedState advance(const ReducedState& rho, const Derivative& k, double h) {
    ReducedState out = rho;
    out.rho_ee += h * k.ee;
    out.rho_gg += h * k.gg;
    out.rho_eg += h * k.eg;
    return out;
}

} // namespace

std::vector<ReducedState> master_eq_evolve(const SystemParams& sys, const PacketParams& pkt,
                                           double t_start, double t_max, double dt) {
    validate(sys, pkt);
    if (!(t_start > 0.0)) throw ParameterError("master equation must start at t_start > 0");
    if (!(t_max > t_start) || !(dt > 0.0)) throw ParameterError("need t_max > t_start and dt > 0");

    const double fastest = std::max({sys.gamma_1d, pkt.delta, std::abs(pkt.detuning)});
    const double h_cap = 0.02 / fastest;

    std::vector<ReducedState> out;
    ReducedState rho = exact_reduced_state(t_start, sys, pkt);
    out.push_back(rho);

    const auto outputs = static_cast<long>(std::floor((t_max - t_start) / dt + 1e-9));
    double t = t_start;
    for (long k = 1; k <= outputs; ++k) {
        const double t_next = t_start + static_cast<double>(k) * dt;
        while (t < t_next) {
            const double h = std::min({t_next - t, t / 50.0, h_cap});
            const Derivative k1 = generator(t, rho, sys, pkt);
            const Derivative k2 = generator(t + 0.5 * h, advance(rho, k1, 0.5 * h), sys, pkt);
            const Derivative k3 = generator(t + 0.5 * h, advance(rho, k2, 0.5 * h), sys, pkt);
            const Derivative k4 = generator(t + h, advance(rho, k3, h), sys, pkt);
            rho.rho_ee += h / 6.0 * (k1.ee + 2.0 * k2.ee + 2.0 * k3.ee + k4.ee);
            rho.rho_gg += h / 6.0 * (k1.gg + 2.0 * k2.gg + 2.0 * k3.gg + k4.gg);
            rho.rho_eg += h / 6.0 * (k1.eg + 2.0 * k2.eg + 2.0 * k3.eg + k4.eg);
            t = (t_next - t <= h) ? t_next : t + h;
        }
        rho.t = t_next;
        if (std::abs(rho.trace() - 1.0) > 1e-10) {
            throw StabilityError("master equation trace drifted to " + std::to_string(rho.trace()));
        }
        if (!rho.positive()) {
            throw StabilityError("master equation lost positivity at t = " + std::to_string(t_next));
        }
        out.push_back(rho);
    }
    return out;
}

double fd_decay_rate(double t, const SystemParams& sys, const PacketParams& pkt, double h) {
    if (!(h > 0.0) || !(t - h > 0.0)) throw ParameterError("fd stencil needs t - h > 0");
    const double lo = population(t - h, sys, pkt);
    const double hi = population(t + h, sys, pkt);
    const double floor = kSingularAmplitude * kSingularAmplitude;
    if (lo < floor || hi < floor || population(t, sys, pkt) < floor) {
        throw SingularPointError("fd stencil touches a population zero", t);
    }
    return -(std::log(hi) - std::log(lo)) / (2.0 * h);
}

double fd_lamb_shift_rel(double t, const SystemParams& sys, const PacketParams& pkt, double h) {
    if (!(h > 0.0) || !(t - h > 0.0)) throw ParameterError("fd stencil needs t - h > 0");
    const cplx lo = psi_s(t - h, sys, pkt);
    const cplx hi = psi_s(t + h, sys, pkt);
    if (std::abs(lo) < kSingularAmplitude || std::abs(hi) < kSingularAmplitude) {
        throw SingularPointError("fd stencil touches a zero amplitude", t);
    }
    // arg(hi / lo) sidesteps phase unwrapping for small h.
    return -2.0 * std::arg(hi / lo) / (2.0 * h);
}

} // namespace wqed
