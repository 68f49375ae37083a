#pragma once

#include <string>

#include "json.hpp"
#include "rrmc/backward.h"
#include "rrmc/bounds.h"

namespace rrmc {

inline constexpr int kModelFormatVersion = 1;

/// Versioned document:
/// {"format": "rrmc.continuation_model", "version": 1,
///  "basis": {"family", "label", "dim", "fixed_size", "reinforcement": {"count", "variant"}},
///  "method": "tvr" | "ls", "product": {...}, "num_dates": J,
///  "coefficients": [{"date": j, "gamma": [...]}, ...],
///  "training": {"num_paths": N, "seed": s}}
/// Doubles are written with round-trip precision.
nlohmann::json model_to_json(const ContinuationModel& model);
ContinuationModel model_from_json(const nlohmann::json& doc);

void save_model(const ContinuationModel& model, const std::string& path);
ContinuationModel load_model(const std::string& path);

nlohmann::json bound_to_json(const BoundEstimate& estimate);
BoundEstimate bound_from_json(const nlohmann::json& doc);

}  // namespace rrmc
