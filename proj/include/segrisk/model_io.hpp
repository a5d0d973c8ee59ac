#pragma once
// JSON model files:
//   {"states": N, "transition": [[...]], "initial": [...] | "stationary",
//    "emission": {"type": "categorical", "probs": [[...]]}
//              | {"type": "gaussian", "means": [...], "stds": [...]}}

#include <filesystem>
#include <string>

#include <json.hpp>

#include "segrisk/model.hpp"

namespace segrisk {

// Malformed documents (missing keys, wrong types) raise std::invalid_argument;
// well-formed documents describing an invalid model raise ModelValidationError.
HmmModel model_from_json(const nlohmann::json& doc);
nlohmann::json model_to_json(const HmmModel& model);

HmmModel load_model(const std::filesystem::path& path);
void save_model(const HmmModel& model, const std::filesystem::path& path);

}  // namespace segrisk
