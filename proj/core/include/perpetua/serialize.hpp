#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "perpetua/kappa_analysis.hpp"
#include "perpetua/mellin.hpp"
#include "perpetua/montecarlo.hpp"

namespace perpetua {

void to_json(nlohmann::ordered_json& j, const MellinResult& m);
void to_json(nlohmann::ordered_json& j, const ClassificationReport& c);

/// 17 significant digits; "nan"/"inf" spelled out.
std::string format_double(double x);

/// CSV projection of the JSON records, fields in the same order.
std::string csv_header_mellin();
std::string csv_row(const MellinResult& m);

namespace mc {
void to_json(nlohmann::ordered_json& j, const PerpetuityEstimate& e);
void to_json(nlohmann::ordered_json& j, const FactorizationReport& f);
}  // namespace mc

std::string csv_header_estimate();
std::string csv_row(const mc::PerpetuityEstimate& e);

}  // namespace perpetua
