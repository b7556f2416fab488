#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "collabnet/binning.hpp"
#include "collabnet/fitters.hpp"
#include "collabnet/model_compare.hpp"
#include "collabnet/temporal_graph.hpp"

namespace collabnet {

inline constexpr const char* kToolName = "collabnet";
inline constexpr const char* kToolVersion = "1.0.0";

struct AnalysisOptions {
  std::int64_t bin_target = 1000;
  std::optional<double> x_min;  // empty: Kolmogorov-Smirnov scan
  bool weighted = false;
  int flattening_d_low = 5;
  double cutoff_tol_pct = 5.0;
  std::vector<ModelFamily> families = {
      ModelFamily::power_law, ModelFamily::log_normal, ModelFamily::weibull};
};

/// One degree sample pushed through binning, the three fits, chi-squared,
/// ranking, and the flattening/cutoff measures.
struct SampleAnalysis {
  AdaptiveHistogram hist;
  std::optional<XminSelection> xmin_scan;  // present when x_min was auto
  std::vector<FitResult> fits;             // chi2 filled where computable
  ComparisonRecord record;
  std::vector<std::string> warnings;
};

SampleAnalysis analyze_sample(const DegreeSample& sample,
                              const AnalysisOptions& options);

struct PipelineOptions {
  std::vector<int> years;  // empty: derived from the event date range
  double window_years = 2.0;
  DegreeMode degree_mode = DegreeMode::distinct;
  std::optional<int> cohort;
  std::uint64_t seed = 42;  // echoed into the manifest
  AnalysisOptions analysis;
};

struct PipelineResult {
  std::vector<int> years_analyzed;
  std::vector<std::string> warnings;
  std::string fits_path;
  std::string comparison_path;
  std::vector<std::string> hist_paths;
  std::string manifest_path;
};

/// events file -> per-year samples -> analyses -> fits.tsv, comparison.tsv,
/// hist_<year>.tsv, manifest.json under out_dir. Snapshot years with no
/// active nodes are skipped with a warning; any other failure is rethrown
/// with the year and stage named.
PipelineResult run_pipeline(const std::string& events_path,
                            const PipelineOptions& options,
                            const std::string& out_dir);

/// Render dist_<year>.svg for each year in the comparison table plus
/// params_vs_year.svg and chi2_vs_year.svg from the tables in tables_dir.
std::vector<std::string> render_plots(const std::string& tables_dir,
                                      const std::string& out_dir);

// Table serialization shared by the pipeline and the CLI subcommands.
std::string fits_table_header();
std::string fits_table_row(int year, std::optional<int> cohort,
                           const FitResult& fit);
std::string comparison_table_header();
std::string comparison_table_row(const ComparisonRecord& record);
std::string histogram_table(const AdaptiveHistogram& hist);

/// Degrees file: one integer per line (the last whitespace-separated token
/// of each line), '#' comments and blank lines skipped.
std::vector<int> read_degrees_file(const std::string& path);

}  // namespace collabnet
