#pragma once

#include "dsvar/svar_model.hpp"

#include <filesystem>
#include <string>

namespace dsvar {

/// JSON model files.
///
///   {
///     "p": 1, "n": 3,
///     "names": ["y1", "y2", "y3"],
///     "A": [[[0.2, 0, 0], [0.3, 0.6, 0], [0.4, 0.3, 0.8]]],
///     "B": [[...]]                         // or "W_init" + "normalize"
///     "W_init": [[...]], "normalize": "unit_norm" | "row_sum",
///     "shocks": [{"kind": "stable", "alpha": 1.1, "beta": 0},
///                {"kind": "student_t", "dof": 5, "standardized": true},
///                {"kind": "pearson", "mean": 0, "variance": 1, "skewness": 2, "kurtosis": 20},
///                {"kind": "pareto", "alpha": 1}, {"kind": "gaussian"}],
///     "hl": {"alpha": 1.1}
///   }
///
/// {"design": "NLT" | "LT", "noise": "HL" | "LL"} selects a reference design.
SvarModel model_from_json(const std::string& text);
std::string model_to_json(const SvarModel& model);
SvarModel load_model_config(const std::filesystem::path& path);

}  // namespace dsvar
