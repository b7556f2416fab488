#include "collabnet/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "collabnet/errors.hpp"
#include "collabnet/events.hpp"
#include "collabnet/growth_sim.hpp"
#include "collabnet/svg.hpp"
#include "collabnet/util.hpp"

namespace fs = std::filesystem;

namespace collabnet {

namespace {

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InputError& e) {
    throw InputError(std::string(name) + ": " + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(std::string(name) + ": " + e.what());
  }
}

bool wants(const AnalysisOptions& options, ModelFamily family) {
  return std::find(options.families.begin(), options.families.end(), family) !=
         options.families.end();
}

std::string opt_num(const std::optional<double>& v) {
  return v ? fmt_g17(*v) : "-";
}

std::string num_or_dash(double v) { return std::isnan(v) ? "-" : fmt_g17(v); }

}  // namespace

SampleAnalysis analyze_sample(const DegreeSample& sample,
                              const AnalysisOptions& options) {
  SampleAnalysis out;
  out.hist = stage("binning",
                   [&] { return build_adaptive_bins(sample, options.bin_target); });

  const bool want_pl = wants(options, ModelFamily::power_law);
  const bool want_ln = wants(options, ModelFamily::log_normal);
  const bool want_wb = wants(options, ModelFamily::weibull);

  double x_min = 1.0;
  if (want_pl) {
    if (options.x_min) {
      x_min = *options.x_min;
    } else {
      // scanning deeper than the last histogram bin would leave the
      // power-law chi-squared with nothing to score; three bin-targets of
      // tail keep the selected x_min inside the binned range
      const std::int64_t min_tail =
          std::max<std::int64_t>(10, 3 * options.bin_target);
      out.xmin_scan = stage(
          "x_min selection", [&] { return select_x_min(sample, min_tail); });
      x_min = out.xmin_scan->x_min;
      if (out.xmin_scan->fallback)
        out.warnings.push_back(out.xmin_scan->warning);
    }
  }

  out.record.snapshot_year = sample.snapshot_year;
  out.record.n = sample.node_count();

  FitResult pl;
  if (want_pl) {
    pl = stage("power-law fit",
               [&] { return fit_power_law_mle(sample, x_min); });
    pl.chi2 = stage("chi-squared", [&] {
      return chi_squared(out.hist, pl.params).value;
    });
    out.record.chi2_pl = pl.chi2;
    out.fits.push_back(pl);
  }
  if (want_ln) {
    FitResult ln = stage("log-normal fit", [&] {
      return fit_log_normal(out.hist, options.weighted);
    });
    ln.chi2 = stage("chi-squared", [&] {
      return chi_squared(out.hist, ln.params).value;
    });
    out.record.chi2_ln = ln.chi2;
    out.fits.push_back(ln);
  }
  if (want_wb) {
    FitResult wb = stage("weibull fit", [&] {
      return fit_weibull(out.hist, options.weighted);
    });
    wb.chi2 = stage("chi-squared", [&] {
      return chi_squared(out.hist, wb.params).value;
    });
    out.record.chi2_wb = wb.chi2;
    out.fits.push_back(wb);
  }

  if (out.fits.size() >= 2) {
    const Ranking ranking =
        stage("ranking", [&] { return rank_models(out.fits); });
    out.record.best = ranking.best;
    out.record.tie = ranking.tie;
  }

  if (want_pl) {
    out.record.flattening_pct = stage("flattening", [&] {
      return flattening_excess(out.hist, pl.params, options.flattening_d_low);
    });
    out.record.d_c = stage("cutoff", [&] {
      return cutoff_degree(out.hist, pl.params, options.cutoff_tol_pct);
    });
  }
  return out;
}

std::string fits_table_header() {
  return "year\tcohort\tfamily\tp1\tp2\tx_min\tsse\tchi2\tn\tconverged\n";
}

std::string fits_table_row(int year, std::optional<int> cohort,
                           const FitResult& fit) {
  const bool is_pl = fit.params.family == ModelFamily::power_law;
  std::ostringstream row;
  row << year << '\t' << (cohort ? std::to_string(*cohort) : "-") << '\t'
      << family_name(fit.params.family) << '\t' << fmt_g17(fit.params.p1())
      << '\t' << (is_pl ? "-" : fmt_g17(fit.params.p2())) << '\t'
      << (is_pl ? fmt_g17(fit.params.x_min) : "-") << '\t'
      << num_or_dash(fit.sse) << '\t' << num_or_dash(fit.chi2) << '\t' << fit.n
      << '\t' << (fit.converged ? 1 : 0) << '\n';
  return row.str();
}

std::string comparison_table_header() {
  return "year\tN\tchi2_pl\tchi2_ln\tchi2_wb\tbest\tflattening_pct\td_c\n";
}

std::string comparison_table_row(const ComparisonRecord& record) {
  std::ostringstream row;
  row << record.snapshot_year << '\t' << record.n << '\t'
      << num_or_dash(record.chi2_pl) << '\t' << num_or_dash(record.chi2_ln)
      << '\t' << num_or_dash(record.chi2_wb) << '\t'
      << (record.best ? family_name(*record.best) : "-") << '\t'
      << opt_num(record.flattening_pct) << '\t' << opt_num(record.d_c) << '\n';
  return row.str();
}

std::string histogram_table(const AdaptiveHistogram& hist) {
  std::ostringstream out;
  out << "d_lo\td_hi\tcount\tdensity\n";
  for (const auto& bin : hist.bins)
    out << fmt_g17(bin.lo) << '\t' << fmt_g17(bin.hi) << '\t' << bin.count
        << '\t' << fmt_g17(bin.density) << '\n';
  return out.str();
}

std::vector<int> read_degrees_file(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::vector<int> degrees;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string token, last;
    while (fields >> token) last = token;
    if (last.empty()) continue;
    try {
      std::size_t used = 0;
      const long v = std::stol(last, &used);
      if (used != last.size() || v < 1)
        throw InputError("bad degree");
      degrees.push_back(static_cast<int>(v));
    } catch (const std::exception&) {
      throw InputError("degrees file line " + std::to_string(line_no) +
                       ": expected a positive integer, got '" + last + "'");
    }
  }
  if (degrees.empty()) throw InputError("degrees file has no values");
  return degrees;
}

namespace {

std::string iso_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json file_stamp(const std::string& path) {
  const std::string bytes = read_text_file(path);
  return {{"bytes", bytes.size()}, {"fnv1a64", hex64(fnv1a64(bytes))}};
}

}  // namespace

PipelineResult run_pipeline(const std::string& events_path,
                            const PipelineOptions& options,
                            const std::string& out_dir) {
  const ParseResult parsed =
      stage("ingest", [&] { return parse_events_file(events_path); });
  if (parsed.events.empty()) throw InputError("no events");

  PipelineResult result;
  for (const auto& issue : parsed.rejected)
    result.warnings.push_back("ingest: line " + std::to_string(issue.line) +
                              " rejected: " + issue.reason);

  std::vector<int> years = options.years;
  if (years.empty()) {
    double lo = parsed.events.front().date, hi = lo;
    for (const auto& ev : parsed.events) {
      lo = std::min(lo, ev.date);
      hi = std::max(hi, ev.date);
    }
    const int first = static_cast<int>(std::floor(lo - options.window_years));
    const int last = static_cast<int>(std::floor(hi));
    for (int y = first; y <= last; ++y) years.push_back(y);
  }
  std::sort(years.begin(), years.end());
  years.erase(std::unique(years.begin(), years.end()), years.end());
  if (years.empty()) throw InputError("years range is empty");

  fs::create_directories(out_dir);

  std::vector<DegreeSample> samples = stage("snapshot", [&] {
    if (options.cohort)
      return cohort_degree_samples(parsed.events, *options.cohort, years,
                                   options.window_years, options.degree_mode);
    const std::vector<double> times(years.begin(), years.end());
    const auto tables = sweep_snapshots(parsed.events, times,
                                        options.window_years,
                                        options.degree_mode);
    std::vector<DegreeSample> out;
    out.reserve(tables.size());
    for (std::size_t i = 0; i < tables.size(); ++i) {
      DegreeSample s = sample_from_table(tables[i]);
      s.snapshot_year = years[i];
      out.push_back(std::move(s));
    }
    return out;
  });

  // fan the per-year analyses out across a worker pool; the table/manifest
  // write below is the single-writer join point and fixes the output order
  std::vector<std::size_t> work;
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (!samples[i].degrees.empty()) work.push_back(i);

  std::vector<SampleAnalysis> analyses(samples.size());
  std::vector<std::exception_ptr> failures(samples.size());
  std::atomic<std::size_t> cursor{0};
  const std::size_t n_threads =
      std::min<std::size_t>(work.size(),
                            std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < n_threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t j = cursor.fetch_add(1); j < work.size();
           j = cursor.fetch_add(1)) {
        const std::size_t i = work[j];
        try {
          analyses[i] = analyze_sample(samples[i], options.analysis);
        } catch (...) {
          failures[i] = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();

  std::string fits_table = fits_table_header();
  std::string comparison_table = comparison_table_header();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const int year = years[i];
    if (samples[i].degrees.empty()) {
      result.warnings.push_back("year " + std::to_string(year) +
                                ": no active nodes in the window; skipped");
      continue;
    }
    if (failures[i]) {
      try {
        std::rethrow_exception(failures[i]);
      } catch (const InputError& e) {
        throw InputError("year " + std::to_string(year) + ", " + e.what());
      } catch (const NumericalError& e) {
        throw NumericalError("year " + std::to_string(year) + ", " + e.what());
      }
    }
    const SampleAnalysis& analysis = analyses[i];

    for (const auto& w : analysis.warnings)
      result.warnings.push_back("year " + std::to_string(year) + ": " + w);

    for (const auto& fit : analysis.fits)
      fits_table += fits_table_row(year, options.cohort, fit);
    comparison_table += comparison_table_row(analysis.record);

    std::string hist_name = "hist_" + std::to_string(year);
    if (options.cohort) hist_name += "_c" + std::to_string(*options.cohort);
    hist_name += ".tsv";
    const std::string hist_path = (fs::path(out_dir) / hist_name).string();
    write_text_file(hist_path, histogram_table(analysis.hist));
    result.hist_paths.push_back(hist_path);
    result.years_analyzed.push_back(year);
  }

  result.fits_path = (fs::path(out_dir) / "fits.tsv").string();
  result.comparison_path = (fs::path(out_dir) / "comparison.tsv").string();
  write_text_file(result.fits_path, fits_table);
  write_text_file(result.comparison_path, comparison_table);

  nlohmann::json manifest;
  manifest["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  manifest["rng"] = {{"algorithm", SplitMix64::algorithm_id},
                     {"seed", options.seed}};
  nlohmann::json config;
  config["window_years"] = options.window_years;
  config["bin_target"] = options.analysis.bin_target;
  config["degree_mode"] =
      options.degree_mode == DegreeMode::distinct ? "distinct" : "multi";
  config["x_min"] = options.analysis.x_min
                        ? nlohmann::json(*options.analysis.x_min)
                        : nlohmann::json("auto");
  config["weighted"] = options.analysis.weighted;
  config["years"] = years;
  if (options.cohort) config["cohort"] = *options.cohort;
  std::vector<std::string> family_names;
  for (auto f : options.analysis.families)
    family_names.push_back(family_name(f));
  config["families"] = family_names;
  manifest["config"] = config;
  manifest["input"] = file_stamp(events_path);
  manifest["input"]["path"] = events_path;
  nlohmann::json outputs;
  outputs["fits.tsv"] = file_stamp(result.fits_path);
  outputs["comparison.tsv"] = file_stamp(result.comparison_path);
  for (const auto& p : result.hist_paths)
    outputs[fs::path(p).filename().string()] = file_stamp(p);
  manifest["outputs"] = outputs;
  manifest["created_utc"] = iso_utc_now();
  if (!result.warnings.empty()) manifest["warnings"] = result.warnings;

  result.manifest_path = (fs::path(out_dir) / "manifest.json").string();
  write_text_file(result.manifest_path, manifest.dump(2) + "\n");
  return result;
}

namespace {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  int col(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return static_cast<int>(i);
    throw InputError("table is missing column '" + name + "'");
  }
};

Table read_table(const std::string& path) {
  if (!fs::exists(path)) throw InputError("missing table: " + path);
  std::istringstream in(read_text_file(path));
  Table table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      const auto tab = line.find('\t', pos);
      fields.push_back(line.substr(pos, tab - pos));
      if (tab == std::string::npos) break;
      pos = tab + 1;
    }
    if (first) {
      table.columns = std::move(fields);
      first = false;
    } else {
      table.rows.push_back(std::move(fields));
    }
  }
  return table;
}

double cell_num(const std::string& s) {
  if (s == "-" || s.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::strtod(s.c_str(), nullptr);
}

}  // namespace

std::vector<std::string> render_plots(const std::string& tables_dir,
                                      const std::string& out_dir) {
  const std::string comparison_path =
      (fs::path(tables_dir) / "comparison.tsv").string();
  const std::string fits_path = (fs::path(tables_dir) / "fits.tsv").string();
  const Table comparison = read_table(comparison_path);
  const Table fits = read_table(fits_path);

  fs::create_directories(out_dir);
  std::vector<std::string> written;

  const int c_year = comparison.col("year");
  const int c_pl = comparison.col("chi2_pl");
  const int c_ln = comparison.col("chi2_ln");
  const int c_wb = comparison.col("chi2_wb");

  const int f_year = fits.col("year");
  const int f_family = fits.col("family");
  const int f_p1 = fits.col("p1");
  const int f_p2 = fits.col("p2");
  const int f_xmin = fits.col("x_min");

  struct FamilyParams {
    double p1 = std::numeric_limits<double>::quiet_NaN();
    double p2 = std::numeric_limits<double>::quiet_NaN();
    double x_min = std::numeric_limits<double>::quiet_NaN();
    bool present = false;
  };
  std::map<int, std::map<std::string, FamilyParams>> params_by_year;
  for (const auto& row : fits.rows) {
    FamilyParams fp;
    fp.p1 = cell_num(row[f_p1]);
    fp.p2 = cell_num(row[f_p2]);
    fp.x_min = cell_num(row[f_xmin]);
    fp.present = true;
    params_by_year[std::stoi(row[f_year])][row[f_family]] = fp;
  }

  // figure convention: power law red, log-normal green, weibull black
  const std::string red = "#cc3311", green = "#117733", black = "#000000";

  for (const auto& row : comparison.rows) {
    const int year = std::stoi(row[c_year]);
    std::string hist_path =
        (fs::path(tables_dir) / ("hist_" + std::to_string(year) + ".tsv"))
            .string();
    if (!fs::exists(hist_path)) {
      // cohort runs suffix the file name (hist_<year>_c<cohort>.tsv)
      const std::string prefix = "hist_" + std::to_string(year) + "_";
      for (const auto& entry : fs::directory_iterator(tables_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind(prefix, 0) == 0 && name.size() > 4 &&
            name.substr(name.size() - 4) == ".tsv") {
          hist_path = entry.path().string();
          break;
        }
      }
    }
    const Table hist_table = read_table(hist_path);
    const int h_lo = hist_table.col("d_lo");
    const int h_hi = hist_table.col("d_hi");
    const int h_count = hist_table.col("count");
    const int h_density = hist_table.col("density");

    AdaptiveHistogram hist;
    for (const auto& h : hist_table.rows) {
      HistogramBin bin;
      bin.lo = cell_num(h[h_lo]);
      bin.hi = cell_num(h[h_hi]);
      bin.count = static_cast<std::int64_t>(cell_num(h[h_count]));
      bin.density = cell_num(h[h_density]);
      hist.bins.push_back(bin);
      hist.total += bin.count;
    }
    if (hist.bins.empty())
      throw InputError("histogram table is empty: " + hist_path);

    SvgPlotSpec spec;
    spec.title = "Degree distribution, " + std::to_string(year);
    spec.x_label = "degree d";
    spec.y_label = "density P(d)";
    spec.log_x = true;
    spec.log_y = true;

    SvgSeries data;
    data.label = "binned data";
    data.color = "#888888";
    data.css_class = "data";
    data.points = true;
    for (const auto& bin : hist.bins) data.xy.emplace_back(bin.center(), bin.density);
    spec.series.push_back(data);

    const double d_min = hist.bins.front().lo;
    const double d_max = hist.bins.back().hi;
    const auto grid = log_grid(d_min, d_max, 200);
    const auto& families = params_by_year[year];

    if (auto it = families.find("power_law"); it != families.end()) {
      const auto pl =
          ModelParams::power_law(it->second.p1, it->second.x_min);
      const double scale = power_law_anchor_scale(hist, pl) /
                           static_cast<double>(hist.total);
      SvgSeries s;
      s.label = "power law";
      s.color = red;
      s.css_class = "curve-power_law";
      for (double d : grid)
        s.xy.emplace_back(d, scale * std::pow(d, -pl.gamma));
      spec.series.push_back(std::move(s));
    }
    if (auto it = families.find("log_normal"); it != families.end()) {
      const auto ln = ModelParams::log_normal(it->second.p1, it->second.p2);
      SvgSeries s;
      s.label = "log-normal";
      s.color = green;
      s.css_class = "curve-log_normal";
      for (double d : grid) s.xy.emplace_back(d, model_pdf(d, ln));
      spec.series.push_back(std::move(s));
    }
    if (auto it = families.find("weibull"); it != families.end()) {
      const auto wb = ModelParams::weibull(it->second.p1, it->second.p2);
      SvgSeries s;
      s.label = "weibull";
      s.color = black;
      s.css_class = "curve-weibull";
      for (double d : grid) s.xy.emplace_back(d, model_pdf(d, wb));
      spec.series.push_back(std::move(s));
    }

    const std::string out_path =
        (fs::path(out_dir) / ("dist_" + std::to_string(year) + ".svg"))
            .string();
    write_text_file(out_path, render_svg_plot(spec));
    written.push_back(out_path);
  }

  // parameter and chi-squared time series
  SvgPlotSpec params_spec;
  params_spec.title = "Fitted parameters by year";
  params_spec.x_label = "snapshot year";
  params_spec.y_label = "parameter value";
  struct SeriesDef {
    const char* family;
    bool second;
    const char* label;
    std::string color;
    bool dashed;
  };
  const SeriesDef defs[] = {
      {"power_law", false, "gamma", red, false},
      {"log_normal", false, "mu", green, false},
      {"log_normal", true, "sigma", green, true},
      {"weibull", false, "k", black, false},
      {"weibull", true, "lambda", black, true},
  };
  for (const auto& def : defs) {
    SvgSeries s;
    s.label = def.label;
    s.color = def.color;
    s.dashed = def.dashed;
    s.css_class = std::string("param-") + def.label;
    s.points = true;
    for (const auto& [year, families] : params_by_year) {
      auto it = families.find(def.family);
      if (it == families.end()) continue;
      s.xy.emplace_back(year, def.second ? it->second.p2 : it->second.p1);
    }
    if (!s.xy.empty()) params_spec.series.push_back(std::move(s));
  }
  const std::string params_path =
      (fs::path(out_dir) / "params_vs_year.svg").string();
  write_text_file(params_path, render_svg_plot(params_spec));
  written.push_back(params_path);

  SvgPlotSpec chi_spec;
  chi_spec.title = "Model fit quality by year";
  chi_spec.x_label = "snapshot year";
  chi_spec.y_label = "chi-squared";
  chi_spec.log_y = true;
  const std::tuple<int, const char*, std::string> chi_defs[] = {
      {c_pl, "power law", red},
      {c_ln, "log-normal", green},
      {c_wb, "weibull", black},
  };
  for (const auto& [col, label, color] : chi_defs) {
    SvgSeries s;
    s.label = label;
    s.color = color;
    s.css_class = std::string("chi2-") + (col == c_pl ? "power_law"
                                          : col == c_ln ? "log_normal"
                                                        : "weibull");
    s.points = true;
    for (const auto& row : comparison.rows) {
      const double v = cell_num(row[col]);
      if (std::isfinite(v)) s.xy.emplace_back(std::stoi(row[c_year]), v);
    }
    if (!s.xy.empty()) chi_spec.series.push_back(std::move(s));
  }
  const std::string chi_path = (fs::path(out_dir) / "chi2_vs_year.svg").string();
  write_text_file(chi_path, render_svg_plot(chi_spec));
  written.push_back(chi_path);

  return written;
}

}  // namespace collabnet
