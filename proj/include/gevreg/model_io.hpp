#pragma once

#include <string>

#include <json.hpp>

#include "gevreg/fit.hpp"

namespace gevreg {

inline constexpr const char* kLibraryVersion = "0.1.0";

// Full model state: spec, knot lattices, centering bases, every coefficient,
// lambdas, tau, epsilon, inference results, covariance and library version.
// save -> load -> predict is bit-identical to predicting with the original.
nlohmann::json model_to_json(const FittedModel& model);
FittedModel model_from_json(const nlohmann::json& j);

void save_model(const FittedModel& model, const std::string& path);
FittedModel load_model(const std::string& path);

}  // namespace gevreg
