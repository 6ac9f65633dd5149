#include "perpetua/serialize.hpp"

#include <cmath>
#include <cstdio>

namespace perpetua {

namespace {

// JSON numbers cannot carry nan or inf; those are written as strings.
nlohmann::ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

// Entry ids contain commas, so text fields are quoted when needed.
std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void to_json(nlohmann::ordered_json& j, const MellinResult& m) {
  j = nlohmann::ordered_json{{"r", number(m.r)},
                     {"value", number(m.value)},
                     {"method", std::string(to_string(m.method))},
                     {"n_terms", m.n_terms},
                     {"err_estimate", number(m.err_estimate)}};
}

void to_json(nlohmann::ordered_json& j, const ClassificationReport& c) {
  nlohmann::ordered_json witnesses = nlohmann::ordered_json::array();
  for (const auto& w : c.witnesses) witnesses.push_back({{"check", w.check}, {"x", number(w.x)}});
  j = nlohmann::ordered_json{{"entry", c.entry},   {"r_mid", c.r_mid},     {"i_mid", c.i_mid},
                     {"logR_sd", c.logR_sd}, {"logI_sd", c.logI_sd}, {"method", c.method},
                     {"witnesses", witnesses}};
}

std::string csv_header_mellin() { return "r,value,method,n_terms,err_estimate"; }

std::string csv_row(const MellinResult& m) {
  return format_double(m.r) + "," + format_double(m.value) + "," + std::string(to_string(m.method)) +
         "," + std::to_string(m.n_terms) + "," + format_double(m.err_estimate);
}

namespace mc {

void to_json(nlohmann::ordered_json& j, const PerpetuityEstimate& e) {
  j = nlohmann::ordered_json{{"entry", e.entry},
                     {"r_or_n", number(e.r)},
                     {"estimate", number(e.mean)},
                     {"stderr", number(e.std_error)},
                     {"bias_bound", number(e.bias_bound)},
                     {"N", e.n_samples},
                     {"dl", number(e.dl)},
                     {"L", number(e.truncation_L)},
                     {"seed", e.seed}};
}

void to_json(nlohmann::ordered_json& j, const FactorizationReport& f) {
  nlohmann::ordered_json moments = nlohmann::ordered_json::array();
  for (const auto& m : f.moments) {
    moments.push_back({{"n", m.n},
                       {"estimate", number(m.mean)},
                       {"stderr", number(m.std_error)},
                       {"expected", number(m.expected)},
                       {"z", number(m.z)}});
  }
  j = nlohmann::ordered_json{{"entry", f.entry},
                     {"N", f.n_samples},
                     {"seed", f.seed},
                     {"moments", moments},
                     {"ks_statistic", number(f.ks_statistic)},
                     {"ks_threshold", number(f.ks_threshold)},
                     {"pass", f.pass}};
}

}  // namespace mc

std::string csv_header_estimate() { return "entry,r_or_n,estimate,stderr,bias_bound,N,dl,L,seed"; }

std::string csv_row(const mc::PerpetuityEstimate& e) {
  return csv_field(e.entry) + "," + format_double(e.r) + "," + format_double(e.mean) + "," +
         format_double(e.std_error) + "," + format_double(e.bias_bound) + "," +
         std::to_string(e.n_samples) + "," + format_double(e.dl) + "," +
         format_double(e.truncation_L) + "," + std::to_string(e.seed);
}

}  // namespace perpetua
