#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wqed/cli/config.hpp"
#include "wqed/cli/output.hpp"

namespace wqed::cli {

// Columns t, re_psi, im_psi, population, gamma, lamb_shift_rel. Rows at
// t0 + k dt_out; gamma and lamb_shift_rel hold "sing" where |psi| < 1e-14.
Table cmd_evolve(const RunConfig& cfg);

struct SweepOutcome {
    Table table;
    std::size_t succeeded = 0;
    std::vector<std::string> errors; // "param: message" for failed rows
};

// Columns param, n_total, n_excl_initial_rise, interval_count, t0, t_max, status.
SweepOutcome cmd_sweep(const RunConfig& cfg);

struct FieldOutcome {
    std::vector<Table> snapshots; // one per requested time
    std::vector<std::string> warnings;
};

// Columns r, re_a, im_a, re_b, im_b, density_a, density_b; footer p_a, p_b, p_e, norm.
FieldOutcome cmd_field(const RunConfig& cfg);

struct ValidateOutcome {
    Table table;
    bool all_pass = true;
    std::vector<std::string> notes;
};

// Columns check, value, tolerance, status.
ValidateOutcome cmd_validate(const RunConfig& cfg);

// Full CLI: parse, validate, compute, write. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace wqed::cli
