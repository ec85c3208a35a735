#include "report/commands.hpp"

#include <filesystem>
#include <map>
#include <ostream>
#include <random>

#include "simdist/error.hpp"
#include "simdist/io.hpp"
#include "simdist/nms.hpp"
#include "simdist/version.hpp"

namespace simdist::report {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(Errc::config, what); }

AnnotationSet load_dataset(const RunConfig& config, std::ostream& err) {
  require_dataset_source(config);
  if (config.dataset) {
    IngestWarnings warnings;
    AnnotationSet set = load_coco(*config.dataset, &warnings);
    if (warnings.any()) err << warnings.summary() << "\n";
    return set;
  }
  SynthOptions options = *config.synthetic;
  options.seed = config.seed;
  try {
    return synth_dataset(options);
  } catch (const Error& e) {
    config_error(e.what());
  }
}

CalibrationOptions calibration_options(const RunConfig& config) {
  CalibrationOptions o;
  o.levels = config.calibration_levels;
  o.subsample_rate = config.calibration_subsample;
  o.seed = config.seed;
  o.threads = config.threads;
  return o;
}

NormParams run_calibration(const RunConfig& config, const AnnotationSet& set) {
  const CalibrationOptions options = calibration_options(config);
  if (!(options.subsample_rate > 0.0 && options.subsample_rate <= 1.0)) {
    config_error("calibration.subsample_rate must lie in (0, 1]");
  }
  for (const std::size_t l : options.levels) {
    if (l >= config.anchors.levels.size()) config_error("calibration.levels entry out of range");
  }
  return calibrate(set, config.anchors, options);
}

/// Resolves SimD's parameters; `set` may be null when no dataset is loaded.
NormParams resolve_norm(const RunConfig& config, const AnnotationSet* set) {
  const NormSource& src = config.metric.norm_params;
  if (std::holds_alternative<std::monostate>(src)) {
    config_error("metric simd needs metric.norm_params: {m, n}, a parameter file, or \"calibrate\"");
  }
  if (std::holds_alternative<CalibrateFromDataset>(src)) {
    if (set == nullptr) config_error("norm_params \"calibrate\" needs a dataset source");
    return run_calibration(config, *set);
  }
  if (const auto* path = std::get_if<std::string>(&src)) return load_norm_params(*path);
  return std::get<NormParams>(src);
}

struct ResolvedMetrics {
  std::optional<double> dotd_scale;
  std::optional<NormParams> norm;
};

Metric make_metric(MetricKind kind, const RunConfig& config, const AnnotationSet* set,
                   ResolvedMetrics& resolved) {
  Metric m;
  m.kind = kind;
  m.nwd_constant = config.metric.nwd_constant;
  m.rfd_beta = config.metric.rfd_beta;
  m.norm_mode = config.metric.norm_mode;
  if (kind == MetricKind::dotd) {
    if (!resolved.dotd_scale) {
      if (config.metric.dotd_scale) {
        resolved.dotd_scale = *config.metric.dotd_scale;
      } else {
        if (set == nullptr) config_error("dotd_scale \"auto\" needs a dataset source");
        resolved.dotd_scale = dotd_scale(*set);
      }
    }
    m.dotd_scale = *resolved.dotd_scale;
  }
  if (kind == MetricKind::simd) {
    if (!resolved.norm) resolved.norm = resolve_norm(config, set);
    m.norm = *resolved.norm;
  }
  try {
    m.validate();
  } catch (const Error& e) {
    config_error(e.what());
  }
  return m;
}

json header(const char* command, const RunConfig& config, const ResolvedMetrics& resolved) {
  json h = {{"tool", "simdtool"},
            {"version", kVersion},
            {"command", command},
            {"config", config.to_json()}};
  json r = json::object();
  if (resolved.dotd_scale) r["dotd_scale"] = *resolved.dotd_scale;
  if (resolved.norm) {
    r["norm_params"] = json::parse(norm_params_to_json(*resolved.norm));
  }
  h["resolved"] = r;
  return h;
}

void validate_thresholds(const RunConfig& config) {
  try {
    config.thresholds.validate();
  } catch (const Error& e) {
    config_error(e.what());
  }
}

fs::path prepare_out_dir(const RunConfig& config) {
  const fs::path dir(config.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::io, "cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string csv_number(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

json bucket_json(const char* name, const BucketStats& b) {
  return {{"bucket", name},
          {"gt_count", b.gt_count},
          {"positives", b.positives},
          {"mean_positives", optional_number(b.mean_positives())},
          {"unmatched_fraction", optional_number(b.unmatched_fraction())},
          {"threshold_unmatched_fraction", optional_number(b.threshold_unmatched_fraction())},
          {"mean_best_score", optional_number(b.mean_best_score())}};
}

json stats_json(const MatchStats& stats) {
  json buckets = json::array();
  for (const SizeBucket b : kAllSizeBuckets) buckets.push_back(bucket_json(to_string(b), stats[b]));
  return {{"buckets", buckets}, {"total", bucket_json("total", stats.total())}};
}

std::string stats_csv(const MatchStats& stats) {
  std::string csv =
      "bucket,gt_count,positives,mean_positives,unmatched_fraction,threshold_unmatched_fraction,"
      "mean_best_score\n";
  const auto row = [&csv](const char* name, const BucketStats& b) {
    csv += std::string(name) + "," + std::to_string(b.gt_count) + "," + std::to_string(b.positives) +
           "," + csv_number(b.mean_positives()) + "," + csv_number(b.unmatched_fraction()) + "," +
           csv_number(b.threshold_unmatched_fraction()) + "," + csv_number(b.mean_best_score()) +
           "\n";
  };
  for (const SizeBucket b : kAllSizeBuckets) row(to_string(b), stats[b]);
  row("total", stats.total());
  return csv;
}

class GridCache {
 public:
  explicit GridCache(const AnchorSpec& spec) : spec_(spec) {}

  const AnchorGrid& get(const ImageRecord& img) {
    const auto key = std::make_pair(img.width, img.height);
    auto it = grids_.find(key);
    if (it == grids_.end()) it = grids_.emplace(key, build_grid(spec_, {img.width, img.height})).first;
    return it->second;
  }

 private:
  const AnchorSpec& spec_;
  std::map<std::pair<double, double>, AnchorGrid> grids_;
};

/// Assignment over every image; `rows` collects one JSON line per gt when non-null.
MatchStats assign_dataset(const AnnotationSet& set, const Metric& metric, const RunConfig& config,
                          GridCache& grids, std::string* rows) {
  MatchStats stats;
  for (const ImageRecord& img : set.images) {
    if (img.gts.empty()) continue;
    const std::vector<CBox> gts = img.boxes();
    const AnchorGrid& grid = grids.get(img);
    const AssignmentResult result = assign(pairwise(metric, gts, grid.anchors), config.thresholds);
    stats.merge(match_stats(result, gts));
    if (rows == nullptr) continue;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      const json row = {{"image_id", img.id},
                        {"gt_index", g},
                        {"bucket", to_string(size_bucket(gts[g]))},
                        {"positives", result.gt_match_counts[g]},
                        {"threshold_positives", result.threshold_positives(g)},
                        {"fallback", result.gt_fallback[g] != 0},
                        {"best_anchor", result.gt_best[g].anchor},
                        {"best_score", result.gt_best[g].score}};
      *rows += row.dump() + "\n";
    }
  }
  return stats;
}

}  // namespace

void cmd_calibrate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const AnnotationSet set = load_dataset(config, err);
  const NormParams params = run_calibration(config, set);
  const fs::path dir = prepare_out_dir(config);
  write_text_file(dir / "norm_params.json", norm_params_to_json(params));
  out << "m=" << format_double(params.m) << " n=" << format_double(params.n)
      << " pair_count=" << params.pair_count << "\n";
}

void cmd_assign_stats(const RunConfig& config, std::ostream& out, std::ostream& err) {
  validate_thresholds(config);
  const AnnotationSet set = load_dataset(config, err);
  ResolvedMetrics resolved;
  const Metric metric = make_metric(config.metric.kind, config, &set, resolved);
  GridCache grids(config.anchors);
  std::string rows;
  const MatchStats stats = assign_dataset(set, metric, config, grids, &rows);

  json report = {{"header", header("assign-stats", config, resolved)},
                 {"metric", to_string(metric.kind)},
                 {"stats", stats_json(stats)}};
  const fs::path dir = prepare_out_dir(config);
  write_text_file(dir / "assign_stats.json", report.dump(2) + "\n");
  write_text_file(dir / "assign_stats.csv", stats_csv(stats));
  write_text_file(dir / "assign_rows.jsonl", rows);

  const BucketStats total = stats.total();
  out << "metric=" << to_string(metric.kind) << " gts=" << total.gt_count
      << " mean_positives=" << csv_number(total.mean_positives())
      << " unmatched_fraction=" << csv_number(total.unmatched_fraction()) << "\n";
}

void cmd_compare(const RunConfig& config, std::ostream& out, std::ostream& err) {
  validate_thresholds(config);
  const AnnotationSet set = load_dataset(config, err);
  ResolvedMetrics resolved;
  const std::vector<MetricKind> kinds = {MetricKind::iou, MetricKind::dotd, MetricKind::nwd,
                                         MetricKind::rfd, MetricKind::simd};
  std::vector<Metric> metrics;
  for (const MetricKind k : kinds) metrics.push_back(make_metric(k, config, &set, resolved));

  GridCache grids(config.anchors);
  std::string csv = "image_id,gt_index,anchor_index,iou,dotd,nwd,rfd,simd\n";
  const auto emit = [&](const ImageRecord& img, std::size_t g, std::size_t a, const AnchorGrid& grid) {
    const CBox& gt = img.gts[g].box;
    const CBox& anchor = grid.anchors[a];
    csv += std::to_string(img.id) + "," + std::to_string(g) + "," + std::to_string(a);
    for (const Metric& m : metrics) csv += "," + format_double(m(gt, anchor));
    csv += "\n";
  };

  std::vector<std::size_t> with_gts;
  for (std::size_t i = 0; i < set.images.size(); ++i) {
    if (!set.images[i].gts.empty()) with_gts.push_back(i);
  }
  if (with_gts.empty()) throw Error(Errc::empty_input, "compare needs at least one ground truth");

  if (config.compare_samples == 0) {
    for (const std::size_t i : with_gts) {
      const ImageRecord& img = set.images[i];
      const AnchorGrid& grid = grids.get(img);
      for (std::size_t g = 0; g < img.gts.size(); ++g) {
        for (std::size_t a = 0; a < grid.anchors.size(); ++a) emit(img, g, a, grid);
      }
    }
  } else {
    // Pairs are drawn near the gt: its own cell or a neighbour, on a random level.
    std::mt19937_64 rng(config.seed);
    const auto pick = [&rng](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
    for (std::size_t s = 0; s < config.compare_samples; ++s) {
      const ImageRecord& img = set.images[with_gts[pick(with_gts.size())]];
      const AnchorGrid& grid = grids.get(img);
      const std::size_t g = pick(img.gts.size());
      const std::size_t level = pick(grid.layouts.size());
      const AnchorLevel& spec_level = config.anchors.levels[level];
      const LevelLayout& layout = grid.layouts[level];
      const CBox& gt = img.gts[g].box;
      const auto cell = [&](double coord, std::size_t cells) {
        const double raw = std::floor(coord / spec_level.stride) + static_cast<double>(pick(3)) - 1.0;
        return static_cast<std::size_t>(std::clamp(raw, 0.0, static_cast<double>(cells - 1)));
      };
      const std::size_t col = cell(gt.cx(), layout.cols);
      const std::size_t row = cell(gt.cy(), layout.rows);
      const std::size_t a = grid.index_of(level, row, col, pick(grid.scales_per_cell),
                                          pick(grid.ratios_per_cell));
      emit(img, g, a, grid);
    }
  }

  json summaries = json::object();
  for (const Metric& m : metrics) {
    summaries[to_string(m.kind)] = stats_json(assign_dataset(set, m, config, grids, nullptr));
  }
  json report = {{"header", header("compare", config, resolved)}, {"assignment", summaries}};
  const fs::path dir = prepare_out_dir(config);
  write_text_file(dir / "compare.csv", csv);
  write_text_file(dir / "compare.json", report.dump(2) + "\n");

  out << "compare: wrote " << (csv.empty() ? 0 : std::count(csv.begin(), csv.end(), '\n') - 1)
      << " pair rows\n";
}

void cmd_synth(const RunConfig& config, std::ostream& out, std::ostream& /*err*/) {
  if (!config.synthetic) config_error("synth needs a 'synthetic' config section");
  SynthOptions options = *config.synthetic;
  options.seed = config.seed;
  AnnotationSet set;
  try {
    set = synth_dataset(options);
  } catch (const Error& e) {
    config_error(e.what());
  }

  json buckets = json::object();
  for (const SizeBucket b : kAllSizeBuckets) buckets[to_string(b)] = 0;
  for (const ImageRecord& img : set.images) {
    for (const GroundTruth& gt : img.gts) {
      buckets[to_string(size_bucket(gt.box))] = buckets[to_string(size_bucket(gt.box))].get<std::size_t>() + 1;
    }
  }
  RunConfig shown = config;
  shown.dataset.reset();
  json info = header("synth", shown, {});
  info["stats"] = {{"images", set.images.size()}, {"gt_count", set.gt_count()}, {"size_buckets", buckets}};

  const fs::path dir = prepare_out_dir(config);
  write_text_file(dir / "dataset.json", write_coco(set, info.dump()));
  out << "synth: " << set.images.size() << " images, " << set.gt_count() << " gts\n";
}

void cmd_nms_demo(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.nms.detections.empty()) config_error("nms-demo needs --detections or nms.detections");
  if (!(config.nms.threshold >= 0.0 && config.nms.threshold <= 1.0)) {
    config_error("nms threshold must lie in [0, 1]");
  }
  const std::vector<Detection> dets = parse_detections(read_text_file(config.nms.detections));

  ResolvedMetrics resolved;
  std::optional<AnnotationSet> set;
  if (config.nms.metric == MetricKind::simd &&
      std::holds_alternative<CalibrateFromDataset>(config.metric.norm_params)) {
    set = load_dataset(config, err);
  }
  const Metric metric = make_metric(config.nms.metric, config, set ? &*set : nullptr, resolved);
  const std::vector<std::size_t> kept =
      greedy_suppress(dets, metric, config.nms.threshold, config.nms.class_aware);

  std::vector<Detection> kept_dets;
  for (const std::size_t k : kept) kept_dets.push_back(dets[k]);
  json report = {{"header", header("nms-demo", config, resolved)},
                 {"input_count", dets.size()},
                 {"kept_indices", kept},
                 {"kept", json::parse(detections_to_json(kept_dets))}};
  const fs::path dir = prepare_out_dir(config);
  write_text_file(dir / "nms.json", report.dump(2) + "\n");
  out << "nms-demo: kept " << kept.size() << " of " << dets.size() << " detections\n";
}

}  // namespace simdist::report
