#pragma once

#include <string>

#include <json.hpp>

#include "netfuzz/clima.hpp"
#include "netfuzz/diff.hpp"
#include "netfuzz/elaborate.hpp"
#include "netfuzz/fuzz.hpp"
#include "netfuzz/mapper.hpp"
#include "netfuzz/sim.hpp"

namespace netfuzz {

// ordered_json keeps key order stable so repeated runs emit identical bytes
using json = nlohmann::ordered_json;

json to_json(const Finding& finding);
json to_json(const std::vector<Finding>& findings);

json to_json(const CoverageMap& map);
CoverageMap coverage_from_json(const json& j);
json to_json(const CoverageReport& report);

json to_json(const MappingReport& report);

json to_json(const NetInput& input);
NetInput netinput_from_json(const json& j);

json to_json(const Trace& trace);

json to_json(const DivergingSignal& signal);
json to_json(const BugReport& bug);

json to_json(const InjectionRecord& record);
json to_json(const ScanFinding& finding);
json to_json(const std::vector<ScanFinding>& findings);

json to_json(const CoverageSnapshot& snap);

json to_json(const DiffMatrix& matrix, const DiffConfig& config);

/// Corpus directory layout: entry_<n>.bin (packed frames) plus
/// entry_<n>.json sidecar with mask, fingerprint and discovery iteration.
void save_corpus(const Corpus& corpus, const std::string& directory);
Corpus load_corpus(const std::string& directory);

} // namespace netfuzz
