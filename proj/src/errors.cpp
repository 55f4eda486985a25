#include "tensorsandwich/errors.hpp"

namespace ts {

std::string to_string(RunStatus status) {
    switch (status) {
        case RunStatus::success: return "ok";
        case RunStatus::budget_exceeded: return "budget_exceeded";
        case RunStatus::rank_cap_exceeded: return "rank_cap_exceeded";
        case RunStatus::degenerate_eigenvalues: return "degenerate_eigenvalues";
        case RunStatus::non_real_spectrum: return "non_real_spectrum";
        case RunStatus::rank_deficient: return "rank_deficient";
        case RunStatus::ill_conditioned_fibers: return "ill_conditioned_fibers";
    }
    return "unknown";
}

}  // namespace ts
