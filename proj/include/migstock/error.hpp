#pragma once

#include <stdexcept>
#include <string>

namespace migstock {

enum class Errc {
  missing_column,
  bad_proportion,
  bad_age_group,
  bad_row,
  source_mismatch,
  duplicate_survey_cell,
  duplicate_wave_cell,
  missing_wave_id,
  missing_population,
  unexpected_field,
  missing_standard_error,
  origin_mismatch,
  age_grid_mismatch,
  domain_error,
  rank_deficient,
  insufficient_data,
  unseen_level,
  empty_selection,
  empty_column,
  degenerate_matrix,
  empty_inputs,
  non_finite_density,
  too_few_chains,
  insufficient_history,
  no_wave_data,
  no_overlap,
  invalid_truth,
  bad_config,
  io_error,
};

const char* errc_name(Errc code);

/// Engine error carrying a machine-checkable code plus a human message.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace migstock
