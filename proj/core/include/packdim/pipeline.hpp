#pragma once

#include <optional>
#include <string>
#include <vector>

#include "packdim/config.hpp"
#include "packdim/dimension.hpp"
#include "packdim/gallery.hpp"
#include "packdim/geometry.hpp"
#include "packdim/martingale.hpp"
#include "packdim/smallball.hpp"
#include "packdim/spine.hpp"

namespace packdim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitStageFailure = 3;

/// Config-to-options helpers shared by the pipeline and the CLI.
ExampleLaw law_from_config(const RunConfig& config);
SolveOptions solve_options(const RunConfig& config);
MartingaleOptions martingale_options(const RunConfig& config);
std::vector<double> smallball_grid(const RunConfig& config);
SmallBallOptions smallball_options(const RunConfig& config);
ClassifyOptions classify_options(const RunConfig& config);
SpineOptions spine_options(const RunConfig& config);
EventParams event_params(const RunConfig& config);

struct BoxCountEnsemble {
  std::vector<double> epsilons;
  std::vector<BoxCountResult> realizations;
  double mean_slope = 0.0;
  double slope_sd = 0.0;
  std::size_t fitted = 0;
};

/// Realization i uses stream (seed, kGeometry, i) and left-right-ends placement.
BoxCountEnsemble run_boxcount(const ReductionLaw& law, const RunConfig& config);

struct PipelineOptions {
  bool write_files = true;
  /// Metadata timestamp; empty means the current UTC time.
  std::string timestamp;
};

struct PipelineResult {
  int exit_code = kExitOk;
  std::string report;
  std::string report_path;
  std::string failed_stage;
  std::string error;
};

/// alpha -> simulate-x -> smallball -> classify -> gauge-test -> verdict,
/// then spine/audit and boxcount when enabled. Writes the artifacts and
/// report.json into config.output_dir. A failing stage stops the run; the
/// report written so far names the stage and the cause.
PipelineResult run_pipeline(const RunConfig& config, const PipelineOptions& options = {});

/// The report without its "metadata" field, for reproducibility checks.
std::string strip_metadata(const std::string& report);

}  // namespace packdim
