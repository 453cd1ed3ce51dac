#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace csop {

/// Error codes, grouped by the process exit code they map to.
enum class Errc {
  // configuration, exit 1
  unknown_key,
  type_mismatch,
  missing_required,
  invalid_argument,
  io_failure,
  // numerical precondition, exit 2
  precondition_violated,
  not_c_symmetric,
  singular_shift,
  index_out_of_range,
  negative_potential,
  no_gap_found,
  shift_in_spectrum,
  shift_leaves_gap,
  ball_outside_domain,
  invalid_gap,
  q_beyond_critical,
  strip_violation,
  // convergence, exit 3
  bracket_failure,
  branch_point_not_found,
  pairing_ambiguity,
  no_convergence,
};

std::string_view errc_name(Errc code) noexcept;
int exit_code(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }
  int exit_code() const noexcept { return csop::exit_code(code_); }

 private:
  Errc code_;
};

}  // namespace csop
