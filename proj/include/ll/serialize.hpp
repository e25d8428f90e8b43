#pragma once

#include "ll/extractor.hpp"
#include "ll/train.hpp"
#include "ll/zoo.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace ll::io {

using Json = nlohmann::json;

inline constexpr int kVictimFormatVersion = 1;
inline constexpr int kDistinguisherFormatVersion = 1;
inline constexpr int kExtractorFormatVersion = 1;
inline constexpr int kReportFormatVersion = 1;
inline constexpr int kMetricsFormatVersion = 1;
inline constexpr int kConfigFormatVersion = 1;

std::string base64_encode(const std::uint8_t* data, std::size_t len);
std::vector<std::uint8_t> base64_decode(const std::string& text);

// Readers reject documents whose version is newer than the supported one
// with an explicit version error naming both.
void check_version(const Json& j, const std::string& kind, int supported);

Json victim_to_json(const qnn::TrainedVictim& victim);
qnn::TrainedVictim victim_from_json(const Json& j);

Json template_model_to_json(const sca::TemplateModel& model);
sca::TemplateModel template_model_from_json(const Json& j);

Json distinguisher_to_json(const sca::NeuralDistinguisher& d, const std::string& kind);
sca::NeuralDistinguisher distinguisher_from_json(const Json& j);

Json extractor_to_json(const extract::ProfiledExtractor& ex);
extract::ProfiledExtractor extractor_from_json(const Json& j);

Json report_to_json(const advgen::AttackReport& report, const advgen::AttackSpec& spec);

std::string dump_json(const Json& j);
void write_json(const std::string& path, const Json& j);
Json read_json(const std::string& path);

}  // namespace ll::io
