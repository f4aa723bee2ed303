#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "packdim/dimension.hpp"
#include "packdim/gauge.hpp"
#include "packdim/geometry.hpp"
#include "packdim/martingale.hpp"
#include "packdim/smallball.hpp"
#include "packdim/spine.hpp"
#include "packdim/verdict.hpp"

namespace packdim {

std::string dimension_json(const DimensionResult& result);

/// Header "value,depth,frontier_mass,low_confidence,mode".
void write_samples_csv(std::ostream& os, std::span<const MartingaleEstimate> samples);
/// Reads write_samples_csv output; throws ConfigError on malformed rows.
std::vector<MartingaleEstimate> read_samples_csv(std::istream& is);

/// Header "a,hits,p,ci_lo,ci_hi,reliable".
void write_smallball_csv(std::ostream& os, const SmallBallTable& table);

std::string profile_json(const DecayProfile& profile);
/// Reads regime, beta, beta_se, t0 and explanation; fits are not restored.
DecayProfile parse_profile_json(const std::string& text);

std::string gauge_json(const GaugeSpec& gauge);
std::string integral_test_json(const GaugeSpec& gauge, double beta, const IntegralTestResult& result);
std::string verdict_json(const Verdict& verdict);

/// One row per spine level: "spine,k,child,T,l,x_hat,R,B".
void write_spines_csv(std::ostream& os, std::span<const SpinePath> spines);
std::string audit_json(const CovarianceReport& report);

/// Header "epsilon,boxes,excluded".
void write_boxcount_csv(std::ostream& os, const BoxCountResult& result);

}  // namespace packdim
