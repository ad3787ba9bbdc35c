#include "wqed/params.hpp"

#include <algorithm>
#include <string>

#include "wqed/errors.hpp"

namespace wqed {

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw ParameterError(std::string(name) + " must be finite");
    }
}

} // namespace

void SystemParams::validate() const {
    require_finite(gamma_1d, "gamma_1d");
    require_finite(nu_s, "nu_s");
    if (!(gamma_1d > 0.0)) throw ParameterError("gamma_1d must be > 0");
    if (!(nu_s >= 0.0)) throw ParameterError("nu_s must be >= 0");
}

void PacketParams::validate() const {
    require_finite(delta, "delta");
    require_finite(detuning, "detuning");
    require_finite(c0, "c0");
    if (!(delta > 0.0)) throw ParameterError("packet linewidth delta must be > 0");
    if (!(c0 >= 0.0 && c0 < 1.0)) throw ParameterError("c0 must lie in [0, 1)");
}

bool rwa_consistent(const SystemParams& sys, const PacketParams& pkt) {
    const double fastest = std::max({sys.gamma_1d, pkt.delta, std::abs(pkt.detuning)});
    return sys.nu_s >= 10.0 * fastest && pkt.central_frequency(sys) > 0.0;
}

void validate(const SystemParams& sys, const PacketParams& pkt) {
    sys.validate();
    pkt.validate();
}

} // namespace wqed
