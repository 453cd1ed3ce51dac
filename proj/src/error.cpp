#include "csop/error.hpp"

namespace csop {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::unknown_key: return "UnknownKey";
    case Errc::type_mismatch: return "TypeMismatch";
    case Errc::missing_required: return "MissingRequired";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::io_failure: return "IoFailure";
    case Errc::precondition_violated: return "PreconditionViolated";
    case Errc::not_c_symmetric: return "NotCSymmetric";
    case Errc::singular_shift: return "SingularShift";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::negative_potential: return "NegativePotential";
    case Errc::no_gap_found: return "NoGapFound";
    case Errc::shift_in_spectrum: return "ShiftInSpectrum";
    case Errc::shift_leaves_gap: return "ShiftLeavesGap";
    case Errc::ball_outside_domain: return "BallOutsideDomain";
    case Errc::invalid_gap: return "InvalidGap";
    case Errc::q_beyond_critical: return "QBeyondCritical";
    case Errc::strip_violation: return "StripViolation";
    case Errc::bracket_failure: return "BracketFailure";
    case Errc::branch_point_not_found: return "BranchPointNotFound";
    case Errc::pairing_ambiguity: return "PairingAmbiguity";
    case Errc::no_convergence: return "NoConvergence";
  }
  return "Unknown";
}

int exit_code(Errc code) noexcept {
  if (code <= Errc::io_failure) return 1;
  if (code <= Errc::strip_violation) return 2;
  return 3;
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

}  // namespace csop
