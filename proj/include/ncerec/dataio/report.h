#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "ncerec/eval/analysis.h"
#include "ncerec/eval/evaluate.h"
#include "ncerec/eval/grid_search.h"
#include "ncerec/eval/metrics.h"
#include "ncerec/models/hyperparameters.h"

namespace ncerec::dataio {

// Reports are JSON documents. Wall-clock timings are left out so reruns
// compare byte for byte. Object keys are sorted, doubles are printed
// with enough digits to round-trip, NaN becomes null, two-space indent and
// a trailing newline. Identical inputs serialize to identical bytes.
using Json = nlohmann::json;

Json to_json(const models::Hyperparameters& h);
// Missing keys keep the values already in `base`.
models::Hyperparameters hyperparameters_from_json(const Json& j,
                                                  models::Hyperparameters base = {});

// Each metric entry: name, mean, ciHalfWidth, userCount, degenerateCi and,
// when `per_user` is set, perUser (aligned with "users").
Json to_json(const eval::MetricsReport& report, bool per_user = true);
Json to_json(const eval::BucketReport& report);
Json to_json(const std::vector<eval::PopularitySummary>& summaries);
Json to_json(const eval::GridSearchResult& result);
Json to_json(const eval::PairedComparison& comparison);

std::string serialize(const Json& document);
// `path` "-" writes to stdout. Throws IoError on I/O failure.
void write_report(const Json& document, const std::string& path);
Json read_report(const std::string& path);

}  // namespace ncerec::dataio
