#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "report/commands.hpp"
#include "simdist/error.hpp"
#include "simdist/io.hpp"
#include "simdist/version.hpp"

namespace simdist::report {

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

struct Overrides {
  std::string config_path;
  std::optional<std::string> dataset;
  std::optional<std::string> out;
  std::optional<std::string> metric;
  std::optional<double> pos;
  std::optional<double> neg;
  std::optional<double> min_pos;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> norm_mode;
  std::optional<std::string> norm_params;
  std::optional<std::string> nms_metric;
  std::optional<double> nms_thr;
  std::optional<std::string> detections;
  std::optional<std::size_t> threads;
};

RunConfig resolve(const Overrides& o) {
  nlohmann::json doc = nlohmann::json::object();
  if (!o.config_path.empty()) {
    std::string text;
    try {
      text = read_text_file(o.config_path);
    } catch (const Error& e) {
      throw Error(Errc::config, e.what());
    }
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(Errc::config, "config file is not valid JSON: " + std::string(e.what()));
    }
  }
  RunConfig c = parse_config(doc);
  if (o.dataset) {
    c.dataset = *o.dataset;
    c.synthetic.reset();
  }
  if (o.out) c.out_dir = *o.out;
  try {
    if (o.metric) c.metric.kind = parse_metric_kind(*o.metric);
    if (o.norm_mode) c.metric.norm_mode = parse_norm_mode(*o.norm_mode);
  } catch (const Error& e) {
    throw Error(Errc::config, e.what());
  }
  if (o.pos) c.thresholds.pos = *o.pos;
  if (o.neg) c.thresholds.neg = *o.neg;
  if (o.min_pos) c.thresholds.min_pos = *o.min_pos;
  if (o.seed) c.seed = *o.seed;
  if (o.norm_params) {
    if (*o.norm_params == "calibrate") {
      c.metric.norm_params = CalibrateFromDataset{};
    } else {
      c.metric.norm_params = *o.norm_params;
    }
  }
  if (o.nms_metric) c.nms.metric = parse_metric_kind(*o.nms_metric);
  if (o.nms_thr) c.nms.threshold = *o.nms_thr;
  if (o.detections) c.nms.detections = *o.detections;
  if (o.threads) c.threads = *o.threads;
  return c;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bounding-box similarity, calibration and label-assignment reports", "simdtool"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Overrides o;
  app.add_option("--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--dataset", o.dataset, "COCO-format annotation file");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--metric", o.metric, "iou | dotd | nwd | rfd | simd");
  app.add_option("--pos", o.pos, "Positive threshold");
  app.add_option("--neg", o.neg, "Negative threshold");
  app.add_option("--min-pos", o.min_pos, "Minimum positive threshold for the fallback");
  app.add_option("--seed", o.seed, "RNG seed");
  app.add_option("--norm-mode", o.norm_mode, "both | width | height | none");
  app.add_option("--norm-params", o.norm_params, "SimD parameter file, or 'calibrate'");
  app.add_option("--nms-metric", o.nms_metric, "iou | simd")
      ->check(CLI::IsMember({"iou", "simd"}));
  app.add_option("--nms-thr", o.nms_thr, "NMS suppression threshold");
  app.add_option("--detections", o.detections, "Detections JSON for nms-demo");
  app.add_option("--threads", o.threads, "Worker threads for calibration");

  using Command = std::function<void(const RunConfig&, std::ostream&, std::ostream&)>;
  Command selected;
  const auto sub = [&](const char* name, const char* help, Command fn) {
    CLI::App* s = app.add_subcommand(name, help);
    s->fallthrough();
    s->callback([&selected, fn] { selected = fn; });
  };
  sub("calibrate", "Compute SimD normalization parameters m, n", cmd_calibrate);
  sub("assign-stats", "Per-size-bucket assignment statistics", cmd_assign_stats);
  sub("compare", "Side-by-side metric values and assignment summaries", cmd_compare);
  sub("synth", "Write a synthetic tiny-object dataset", cmd_synth);
  sub("nms-demo", "Greedy NMS over a detections file", cmd_nms_demo);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    const RunConfig config = resolve(o);
    selected(config, out, err);
  } catch (const Error& e) {
    err << "simdtool: " << to_string(e.code()) << ": " << e.what() << "\n";
    if (e.code() == Errc::config || e.code() == Errc::invalid_argument) return kExitConfig;
    return kExitData;
  } catch (const std::exception& e) {
    err << "simdtool: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}

}  // namespace simdist::report
