#include "migstock/error.hpp"

namespace migstock {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::missing_column: return "MissingColumn";
    case Errc::bad_proportion: return "BadProportion";
    case Errc::bad_age_group: return "BadAgeGroup";
    case Errc::bad_row: return "BadRow";
    case Errc::source_mismatch: return "SourceMismatch";
    case Errc::duplicate_survey_cell: return "DuplicateSurveyCell";
    case Errc::duplicate_wave_cell: return "DuplicateWaveCell";
    case Errc::missing_wave_id: return "MissingWaveId";
    case Errc::missing_population: return "MissingPopulation";
    case Errc::unexpected_field: return "UnexpectedField";
    case Errc::missing_standard_error: return "MissingStandardError";
    case Errc::origin_mismatch: return "OriginMismatch";
    case Errc::age_grid_mismatch: return "AgeGridMismatch";
    case Errc::domain_error: return "DomainError";
    case Errc::rank_deficient: return "RankDeficient";
    case Errc::insufficient_data: return "InsufficientData";
    case Errc::unseen_level: return "UnseenLevel";
    case Errc::empty_selection: return "EmptySelection";
    case Errc::empty_column: return "EmptyColumn";
    case Errc::degenerate_matrix: return "DegenerateMatrix";
    case Errc::empty_inputs: return "EmptyInputs";
    case Errc::non_finite_density: return "NonFiniteDensity";
    case Errc::too_few_chains: return "TooFewChains";
    case Errc::insufficient_history: return "InsufficientHistory";
    case Errc::no_wave_data: return "NoWaveData";
    case Errc::no_overlap: return "NoOverlap";
    case Errc::invalid_truth: return "InvalidTruth";
    case Errc::bad_config: return "BadConfig";
    case Errc::io_error: return "IoError";
  }
  return "UnknownError";
}

}  // namespace migstock
