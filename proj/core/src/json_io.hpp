#pragma once

#include "json.hpp"
#include "packdim/io.hpp"

namespace packdim::detail {

using json = nlohmann::ordered_json;

json to_json(const DimensionResult& r);
json to_json(const LinearFit& f);
json to_json(const DecayProfile& p);
json to_json(const SmallBallTable& t);
json to_json(const GaugeSpec& g);
json to_json(const IntegralTestResult& r);
json to_json(const Verdict& v);
json to_json(const CovarianceReport& r);
json to_json(const BoxCountResult& r);
json to_json(const ConfidenceInterval& ci);

}  // namespace packdim::detail
