// collabnet: reconstruct time-evolving collaboration networks from event
// streams, fit degree-distribution models, and simulate constrained growth.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>

#include "collabnet/binning.hpp"
#include "collabnet/errors.hpp"
#include "collabnet/events.hpp"
#include "collabnet/fitters.hpp"
#include "collabnet/growth_sim.hpp"
#include "collabnet/model_compare.hpp"
#include "collabnet/report.hpp"
#include "collabnet/temporal_graph.hpp"
#include "collabnet/util.hpp"

namespace fs = std::filesystem;
using namespace collabnet;

namespace {

struct GlobalFlags {
  double window_years = 2.0;
  std::int64_t bin_target = 1000;
  std::string degree_mode = "distinct";
  std::string xmin = "auto";
  bool weighted = false;
  std::uint64_t seed = 42;
  std::string out = "out";
  std::string years;  // "A..B" or "A"; empty = derive from the events
  std::optional<int> cohort;
};

DegreeMode parse_mode(const std::string& s) {
  if (s == "distinct") return DegreeMode::distinct;
  if (s == "multi") return DegreeMode::multi;
  throw InputError("--degree-mode must be 'distinct' or 'multi', got '" + s +
                   "'");
}

std::optional<double> parse_xmin(const std::string& s) {
  if (s == "auto") return std::nullopt;
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || v < 1)
    throw InputError("--xmin must be 'auto' or a positive integer, got '" + s +
                     "'");
  return static_cast<double>(v);
}

std::vector<int> parse_years(const std::string& s) {
  if (s.empty()) return {};
  const auto dots = s.find("..");
  auto to_year = [&](const std::string& part) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != part.size())
      throw InputError("--years expects 'A' or 'A..B', got '" + s + "'");
    return v;
  };
  if (dots == std::string::npos) return {to_year(s)};
  const int a = to_year(s.substr(0, dots));
  const int b = to_year(s.substr(dots + 2));
  if (b < a) throw InputError("--years range is reversed: '" + s + "'");
  std::vector<int> years;
  for (int y = a; y <= b; ++y) years.push_back(y);
  return years;
}

PipelineOptions pipeline_options(const GlobalFlags& g) {
  PipelineOptions opt;
  opt.years = parse_years(g.years);
  opt.window_years = g.window_years;
  opt.degree_mode = parse_mode(g.degree_mode);
  opt.cohort = g.cohort;
  opt.seed = g.seed;
  opt.analysis.bin_target = g.bin_target;
  opt.analysis.x_min = parse_xmin(g.xmin);
  opt.analysis.weighted = g.weighted;
  return opt;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

int cmd_ingest(const std::string& events_path) {
  const ParseResult parsed = parse_events_file(events_path);
  if (parsed.events.empty()) throw InputError("no events");
  double lo = parsed.events.front().date, hi = lo;
  std::int64_t pair_count = 0;
  std::unordered_map<std::string, int> first_year = cohort_map(parsed.events);
  for (const auto& ev : parsed.events) {
    lo = std::min(lo, ev.date);
    hi = std::max(hi, ev.date);
    const std::int64_t n = ev.participant_count();
    pair_count += n * (n - 1) / 2;
  }
  std::cout << "events\t" << parsed.events.size() << "\n"
            << "rejected_lines\t" << parsed.rejected.size() << "\n"
            << "nodes\t" << first_year.size() << "\n"
            << "pairwise_edges\t" << pair_count << "\n"
            << "date_min\t" << fmt_g17(lo) << "\n"
            << "date_max\t" << fmt_g17(hi) << "\n";
  for (const auto& issue : parsed.rejected)
    std::cerr << "warning: line " << issue.line << " rejected: " << issue.reason
              << "\n";
  return 0;
}

int cmd_snapshots(const std::string& events_path, const GlobalFlags& g) {
  const ParseResult parsed = parse_events_file(events_path);
  if (parsed.events.empty()) throw InputError("no events");
  std::vector<int> years = parse_years(g.years);
  if (years.empty()) {
    double lo = parsed.events.front().date, hi = lo;
    for (const auto& ev : parsed.events) {
      lo = std::min(lo, ev.date);
      hi = std::max(hi, ev.date);
    }
    for (int y = static_cast<int>(std::floor(lo - g.window_years));
         y <= static_cast<int>(std::floor(hi)); ++y)
      years.push_back(y);
  }
  const std::vector<double> times(years.begin(), years.end());
  const auto tables = sweep_snapshots(parsed.events, times, g.window_years,
                                      parse_mode(g.degree_mode));
  std::unordered_map<std::string, int> cohorts;
  if (g.cohort) cohorts = cohort_map(parsed.events);
  fs::create_directories(g.out);
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const auto& table = tables[i];
    auto rows = table.node_degrees;
    if (g.cohort)
      std::erase_if(rows, [&](const auto& nd) {
        const auto it = cohorts.find(nd.first);
        return it == cohorts.end() || it->second != *g.cohort;
      });
    std::ostringstream body;
    const std::int64_t edges = parse_mode(g.degree_mode) == DegreeMode::distinct
                                   ? table.active_pairs
                                   : table.active_intervals;
    body << "# year\tN\ttotal_edges\n"
         << "# " << years[i] << '\t' << rows.size() << '\t' << edges << "\n";
    if (g.cohort) body << "# cohort\t" << *g.cohort << "\n";
    body << "node\tdegree\n";
    for (const auto& [node, degree] : rows) body << node << '\t' << degree << "\n";
    std::string name = "snapshot_" + std::to_string(years[i]);
    if (g.cohort) name += "_c" + std::to_string(*g.cohort);
    const std::string path = (fs::path(g.out) / (name + ".tsv")).string();
    write_text_file(path, body.str());
    std::cout << path << "\tN=" << rows.size() << "\tedges=" << edges << "\n";
  }
  return 0;
}

DegreeSample sample_from_degrees_file(const std::string& path) {
  DegreeSample sample;
  sample.degrees = read_degrees_file(path);
  std::sort(sample.degrees.begin(), sample.degrees.end());
  sample.snapshot_year = 0;
  return sample;
}

AnalysisOptions analysis_options(const GlobalFlags& g) {
  AnalysisOptions opt;
  opt.bin_target = g.bin_target;
  opt.x_min = parse_xmin(g.xmin);
  opt.weighted = g.weighted;
  return opt;
}

int cmd_fit(const std::string& degrees_path, const GlobalFlags& g,
            const std::string& family) {
  auto opt = analysis_options(g);
  if (family == "power_law")
    opt.families = {ModelFamily::power_law};
  else if (family == "log_normal")
    opt.families = {ModelFamily::log_normal};
  else if (family == "weibull")
    opt.families = {ModelFamily::weibull};
  else if (family != "all")
    throw InputError(
        "--family must be power_law, log_normal, weibull, or all");

  const DegreeSample sample = sample_from_degrees_file(degrees_path);
  const SampleAnalysis analysis = analyze_sample(sample, opt);
  print_warnings(analysis.warnings);

  std::string table = fits_table_header();
  for (const auto& fit : analysis.fits)
    table += fits_table_row(sample.snapshot_year, std::nullopt, fit);
  std::cout << table;
  fs::create_directories(g.out);
  write_text_file((fs::path(g.out) / "fits.tsv").string(), table);
  return 0;
}

int cmd_compare(const std::string& degrees_path, const GlobalFlags& g) {
  const DegreeSample sample = sample_from_degrees_file(degrees_path);
  const SampleAnalysis analysis = analyze_sample(sample, analysis_options(g));
  print_warnings(analysis.warnings);

  fs::create_directories(g.out);
  std::string fits = fits_table_header();
  for (const auto& fit : analysis.fits)
    fits += fits_table_row(sample.snapshot_year, std::nullopt, fit);
  write_text_file((fs::path(g.out) / "fits.tsv").string(), fits);
  const std::string comparison =
      comparison_table_header() + comparison_table_row(analysis.record);
  write_text_file((fs::path(g.out) / "comparison.tsv").string(), comparison);
  write_text_file((fs::path(g.out) / "hist_0.tsv").string(),
                  histogram_table(analysis.hist));
  std::cout << comparison;
  return 0;
}

int cmd_simulate(const GrowthConfig& config, const std::string& out_path) {
  const GrowthResult result = simulate_growth(config);
  std::ostringstream body;
  body << "# collabnet simulate"
       << " alpha=" << fmt_g17(config.alpha) << " beta=" << fmt_g17(config.beta)
       << " gamma_c=" << fmt_g17(config.gamma_c) << " m=" << config.m
       << " nodes=" << config.n_nodes << " a0=" << fmt_g17(config.a0)
       << " seed=" << config.seed << " rng=" << result.rng_id << "\n";
  for (int d : result.sample.degrees) body << d << "\n";
  if (out_path.empty()) {
    std::cout << body.str();
  } else {
    if (fs::path(out_path).has_parent_path())
      fs::create_directories(fs::path(out_path).parent_path());
    write_text_file(out_path, body.str());
    std::cout << out_path << "\tN=" << result.sample.node_count()
              << "\tedges=" << result.edge_count << "\n";
  }
  return 0;
}

int cmd_report(const std::string& tables_dir, const std::string& out_dir) {
  const auto written = render_plots(tables_dir, out_dir);
  for (const auto& path : written) std::cout << path << "\n";
  return 0;
}

int cmd_all(const std::string& events_path, const GlobalFlags& g) {
  const PipelineResult result =
      run_pipeline(events_path, pipeline_options(g), g.out);
  print_warnings(result.warnings);
  std::cout << result.fits_path << "\n" << result.comparison_path << "\n";
  for (const auto& p : result.hist_paths) std::cout << p << "\n";
  std::cout << result.manifest_path << "\n";
  const auto plots = render_plots(g.out, g.out);
  for (const auto& p : plots) std::cout << p << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "collabnet: temporal collaboration networks, degree-distribution "
      "model comparison, and constrained growth simulation"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--window-years", g.window_years,
                 "collaboration activity window in years")
      ->capture_default_str();
  app.add_option("--bin-target", g.bin_target,
                 "target observations per adaptive bin")
      ->capture_default_str();
  app.add_option("--degree-mode", g.degree_mode,
                 "degree counting: distinct | multi")
      ->capture_default_str();
  app.add_option("--xmin", g.xmin, "power-law tail start: auto | <int>")
      ->capture_default_str();
  app.add_flag("--weighted", g.weighted,
               "weight least-squares residuals by inverse count variance");
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--out", g.out, "output directory (or file for simulate)")
      ->capture_default_str();
  app.add_option("--years", g.years, "snapshot years: A or A..B");
  int cohort_flag = std::numeric_limits<int>::min();
  app.add_option("--cohort", cohort_flag,
                 "restrict to nodes whose first activity is in this year");

  std::string events_path, degrees_path, tables_dir;

  auto* ingest = app.add_subcommand("ingest", "parse and summarize an event stream");
  ingest->add_option("events", events_path, "events file (.jsonl or .jsonl.gz)")
      ->required();

  auto* snapshots =
      app.add_subcommand("snapshots", "write per-year node degree tables");
  snapshots->add_option("events", events_path)->required();

  std::string family = "all";
  auto* fit = app.add_subcommand("fit", "fit distribution models to a degree file");
  fit->add_option("degrees", degrees_path, "one degree per line")->required();
  fit->add_option("--family", family,
                  "power_law | log_normal | weibull | all")
      ->capture_default_str();

  auto* compare = app.add_subcommand(
      "compare", "fit all models to a degree file and rank by chi-squared");
  compare->add_option("degrees", degrees_path)->required();

  GrowthConfig growth;
  std::string sim_out;
  auto* simulate =
      app.add_subcommand("simulate", "grow a constrained attachment network");
  simulate->add_option("--alpha", growth.alpha, "growth rate scale")
      ->capture_default_str();
  simulate->add_option("--beta", growth.beta, "preferential-attachment exponent")
      ->capture_default_str();
  simulate->add_option("--gamma-c", growth.gamma_c, "exponential cost rate")
      ->capture_default_str();
  simulate->add_option("--m", growth.m, "edges per arriving node")
      ->capture_default_str();
  simulate->add_option("--nodes", growth.n_nodes, "final node count")
      ->capture_default_str();
  simulate->add_option("--a0", growth.a0, "attachment offset")
      ->capture_default_str();

  auto* report = app.add_subcommand("report", "render plots from result tables");
  report->add_option("--tables", tables_dir, "directory holding the tables")
      ->required();

  auto* all = app.add_subcommand("all", "full pipeline: events to tables and plots");
  all->add_option("events", events_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cohort_flag != std::numeric_limits<int>::min()) g.cohort = cohort_flag;
    if (*ingest) return cmd_ingest(events_path);
    if (*snapshots) return cmd_snapshots(events_path, g);
    if (*fit) return cmd_fit(degrees_path, g, family);
    if (*compare) return cmd_compare(degrees_path, g);
    if (*simulate) {
      growth.seed = g.seed;
      return cmd_simulate(growth, app.count("--out") ? g.out : sim_out);
    }
    if (*report) return cmd_report(tables_dir, g.out);
    if (*all) return cmd_all(events_path, g);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
