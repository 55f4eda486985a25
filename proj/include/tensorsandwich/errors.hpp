#pragma once

#include <stdexcept>
#include <string>

namespace ts {

/// Outcome of a completion run. Anything other than `success` identifies the
/// phase-level failure that stopped the pipeline.
enum class RunStatus {
    success,
    budget_exceeded,
    rank_cap_exceeded,
    degenerate_eigenvalues,
    non_real_spectrum,
    rank_deficient,
    ill_conditioned_fibers,
};

std::string to_string(RunStatus status);

/// Algorithmic failure raised by a pipeline phase. Structural misuse
/// (dimension mismatches, out-of-range indices, bad configs) throws
/// std::invalid_argument / std::out_of_range instead.
class CompletionError : public std::runtime_error {
  public:
    CompletionError(RunStatus status, const std::string& what)
        : std::runtime_error(what), status_(status) {}

    RunStatus status() const { return status_; }

  private:
    RunStatus status_;
};

}  // namespace ts
