#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wqed/errors.hpp"
#include "wqed/oracles.hpp"

namespace wqed {

ModeDiscretization ModeDiscretization::defaults_for(const SystemParams& sys,
                                                    const PacketParams& pkt, double t_max) {
    ModeDiscretization d;
    d.half_width =
        100.0 * std::max({sys.gamma_1d, pkt.delta, std::abs(pkt.detuning) + pkt.delta});
    // t_max <= 0.4 * pi M / (2 W), which leaves room for a grid coarser by 2 in
    // both W and dnu. The discrete packet is also cut at the recurrence length
    // 2 pi / dnu; its clipped tail weight exp(-delta * 2 pi / dnu) comes back
    // through renormalization, so keep that length above 10 / delta.
    const double length = std::max(t_max / 0.2, 10.0 / pkt.delta);
    auto m = static_cast<int>(std::ceil(d.half_width * length / kPi));
    if (m % 2 == 0) ++m;
    d.mode_count = std::max(m, 3);
    return d;
}

void ModeDiscretization::validate(const SystemParams& sys, const PacketParams& pkt,
                                  double t_max) const {
    if (mode_count < 3 || mode_count % 2 == 0) {
        throw ParameterError("mode count must be an odd integer >= 3");
    }
    const double needed = 20.0 * std::max({sys.gamma_1d, pkt.delta, std::abs(pkt.detuning)});
    if (!(half_width >= needed)) {
        throw ParameterError("band half-width " + std::to_string(half_width) +
                             " below 20 max(gamma, delta, |detuning|) = " + std::to_string(needed));
    }
    if (!(t_max < 0.5 * recurrence_time())) {
        throw RecurrenceError("t_max = " + std::to_string(t_max) +
                              " reaches half the bath recurrence time " +
                              std::to_string(0.5 * recurrence_time()));
    }
}

// Channels a and b obey identical equations and b starts empty, so the
// antisymmetric combination (a - b)/sqrt(2) never couples to the emitter and
// evolves freely. Only psi and the bright mode s = (a + b)/sqrt(2) are
// integrated; s couples with strength sqrt(2) g.
OracleRun mode_oracle_evolve(const SystemParams& sys, const PacketParams& pkt,
                             const ModeDiscretization& disc, double t_max, double dt_out,
                             const OracleOptions& options) {
    validate(sys, pkt);
    if (!(t_max > 0.0) || !(dt_out > 0.0)) throw ParameterError("t_max and dt_out must be > 0");
    disc.validate(sys, pkt, t_max);

    const double max_dt = 0.1 / disc.half_width;
    double dt = options.dt > 0.0 ? options.dt : 0.04 / disc.half_width;
    if (dt > max_dt * (1.0 + 1e-12)) {
        throw StabilityError("oracle step " + std::to_string(dt) + " exceeds 0.1/W = " +
                             std::to_string(max_dt));
    }
    const auto substeps = static_cast<long>(std::ceil(dt_out / dt));
    dt = dt_out / static_cast<double>(substeps);

    const int m = disc.mode_count;
    const double g = std::sqrt(2.0) * disc.coupling(sys) * options.coupling_scale;

    std::vector<double> freq(m);
    std::vector<double> y_re(m), y_im(m); // bright-mode amplitudes
    double field_weight = 0.0;
    for (int j = 0; j < m; ++j) {
        freq[j] = disc.frequency(j);
        // Lorentzian 1/(delta/2 - i(nu - nu_L)) puts the packet at r < 0 moving right.
        const cplx a = 1.0 / cplx(0.5 * pkt.delta, -(freq[j] - pkt.detuning));
        y_re[j] = a.real();
        y_im[j] = a.imag();
        field_weight += std::norm(a);
    }
    const double excitation = 1.0 - pkt.c0 * pkt.c0;
    const double scale = std::sqrt(excitation / field_weight) / std::sqrt(2.0);
    for (int j = 0; j < m; ++j) {
        y_re[j] *= scale;
        y_im[j] *= scale;
    }
    // The dark mode keeps half of the initial field weight forever.
    double dark_norm = 0.0;
    double bright_norm = 0.0;
    for (int j = 0; j < m; ++j) bright_norm += y_re[j] * y_re[j] + y_im[j] * y_im[j];
    dark_norm = bright_norm;

    OracleRun run;
    run.disc = disc;
    run.dt = dt;
    run.initial_field_norm = dark_norm + bright_norm;

    cplx psi{0.0, 0.0};
    std::vector<double> t_re(y_re), t_im(y_im), acc_re(m), acc_im(m);

    auto bright_sum = [m](const std::vector<double>& re, const std::vector<double>& im) {
        double sr = 0.0, si = 0.0;
        for (int j = 0; j < m; ++j) {
            sr += re[j];
            si += im[j];
        }
        return cplx(sr, si);
    };

    auto record = [&](double t) {
        double field = dark_norm;
        for (int j = 0; j < m; ++j) field += y_re[j] * y_re[j] + y_im[j] * y_im[j];
        OracleSample s;
        s.t = t;
        s.psi = psi;
        s.field_norm = field;
        s.norm = pkt.c0 * pkt.c0 + std::norm(psi) + field;
        if (!std::isfinite(s.norm)) throw StabilityError("oracle state became non-finite");
        run.max_norm_drift = std::max(run.max_norm_drift, std::abs(s.norm - 1.0));
        run.samples.push_back(s);
    };

    // One RK4 stage: k = f(tmp), acc += w k, tmp <- y + c k. Returns sum(tmp) for the next psi slope.
    auto stage = [&](cplx psi_tmp, double w, double c, cplx& k_psi_out, cplx sum_tmp) {
        k_psi_out = -g * sum_tmp;
        const double gr = g * psi_tmp.real();
        const double gi = g * psi_tmp.imag();
        double sr = 0.0, si = 0.0;
#pragma omp simd reduction(+ : sr, si)
        for (int j = 0; j < m; ++j) {
            const double kr = freq[j] * t_im[j] + gr;
            const double ki = -freq[j] * t_re[j] + gi;
            acc_re[j] += w * kr;
            acc_im[j] += w * ki;
            t_re[j] = y_re[j] + c * kr;
            t_im[j] = y_im[j] + c * ki;
            sr += t_re[j];
            si += t_im[j];
        }
        return cplx(sr, si);
    };

    const auto outputs = static_cast<long>(std::floor(t_max / dt_out + 1e-9));
    record(0.0);
    cplx sum_y = bright_sum(y_re, y_im);
    for (long out = 1; out <= outputs; ++out) {
        for (long step = 0; step < substeps; ++step) {
            std::fill(acc_re.begin(), acc_re.end(), 0.0);
            std::fill(acc_im.begin(), acc_im.end(), 0.0);
            std::copy(y_re.begin(), y_re.end(), t_re.begin());
            std::copy(y_im.begin(), y_im.end(), t_im.begin());
            cplx k1, k2, k3, k4;
            cplx s = stage(psi, 1.0, 0.5 * dt, k1, sum_y);
            s = stage(psi + 0.5 * dt * k1, 2.0, 0.5 * dt, k2, s);
            s = stage(psi + 0.5 * dt * k2, 2.0, dt, k3, s);
            const cplx psi4 = psi + dt * k3;
            k4 = -g * s;
            // Final stage folds the update into y.
            const double gr = g * psi4.real();
            const double gi = g * psi4.imag();
            double sr = 0.0, si = 0.0;
            const double h6 = dt / 6.0;
#pragma omp simd reduction(+ : sr, si)
            for (int j = 0; j < m; ++j) {
                const double kr = freq[j] * t_im[j] + gr;
                const double ki = -freq[j] * t_re[j] + gi;
                y_re[j] += h6 * (acc_re[j] + kr);
                y_im[j] += h6 * (acc_im[j] + ki);
                sr += y_re[j];
                si += y_im[j];
            }
            psi += h6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            sum_y = cplx(sr, si);
        }
        record(static_cast<double>(out) * dt_out);
    }
    return run;
}

OracleComparison compare_with_closed_form(const OracleRun& run, const SystemParams& sys,
                                          const PacketParams& pkt) {
    OracleComparison c;
    c.max_norm_drift = run.max_norm_drift;
    for (const OracleSample& s : run.samples) {
        c.max_abs_error = std::max(c.max_abs_error, std::abs(s.psi - psi_s(s.t, sys, pkt)));
        c.peak_population = std::max(c.peak_population, std::norm(s.psi));
    }
    return c;
}

} // namespace wqed
