#pragma once

#include <string>

#include "json.hpp"

#include "coinc/lifting.hpp"
#include "coinc/padic.hpp"
#include "coinc/rules.hpp"

namespace coinc {

using Json = nlohmann::json;

// Parsers throw MalformedRecord naming the offending field; the load_*
// variants prefix the file path. Group caps apply at closure time.

MatGroup parse_group(const Json& j, u64 cap = MatGroup::kDefaultCap);
MatGroup load_group(const std::string& path, u64 cap = MatGroup::kDefaultCap);
Json group_to_json(const MatGroup& g);

PAdicImage parse_image(const Json& j, u64 cap = MatGroup::kDefaultCap);
PAdicImage load_image(const std::string& path, u64 cap = MatGroup::kDefaultCap);
Json image_to_json(const PAdicImage& x);

CurveRecord parse_record(const Json& j, u64 cap = MatGroup::kDefaultCap);
CurveRecord load_record(const std::string& path, u64 cap = MatGroup::kDefaultCap);
Json record_to_json(const CurveRecord& rec);

Json report_to_json(const ObstructionReport& rep);
std::string report_to_text(const ObstructionReport& rep);

Json profile_to_json(const IndexProfile& prof, const std::vector<u64>& coincidences);

Json lift_report_to_json(const GroupLiftResult& r);
Json lift_report_to_json(const ElementLiftResult& r);

Json load_json_file(const std::string& path);

} // namespace coinc
