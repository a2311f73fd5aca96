#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "deepspread/classifiers.hpp"
#include "deepspread/features.hpp"
#include "deepspread/rbm.hpp"

namespace deepspread {

/// Versioned JSON persistence. Doubles are written with shortest round-trip
/// decimals, so save/load is exact to the bit for finite values.
inline constexpr int kModelFormatVersion = 1;

nlohmann::json scaler_to_json(const MinMaxScaler& scaler);
MinMaxScaler scaler_from_json(const nlohmann::json& j);

nlohmann::json dbn_to_json(const DbnModel& model, const CdConfig& config);
DbnModel dbn_from_json(const nlohmann::json& j, CdConfig* config_out = nullptr);

nlohmann::json classifier_to_json(const TrainedClassifier& classifier);
TrainedClassifier classifier_from_json(const nlohmann::json& j);

/// Serialize with a trailing newline; load_json throws FormatError on
/// malformed input.
std::string dump_json(const nlohmann::json& j);
nlohmann::json load_json(const std::string& text);

}  // namespace deepspread
