#include "report/config.hpp"

#include <set>

#include "simdist/error.hpp"

namespace simdist::report {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(Errc::config, what); }

double number(const json& v, const std::string& field) {
  if (!v.is_number()) fail("config field '" + field + "' must be a number");
  return v.get<double>();
}

std::size_t count(const json& v, const std::string& field) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    fail("config field '" + field + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::string text(const json& v, const std::string& field) {
  if (!v.is_string()) fail("config field '" + field + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& v, const std::string& field) {
  if (!v.is_array()) fail("config field '" + field + "' must be an array of numbers");
  std::vector<double> out;
  for (const json& e : v) out.push_back(number(e, field));
  return out;
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail("config section '" + where + "' must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) fail("unknown config field '" + where + "." + key + "'");
  }
}

NormParams parse_inline_params(const json& v) {
  check_keys(v, "metric.norm_params", {"m", "n", "pair_count", "source_tag"});
  if (!v.contains("m") || !v.contains("n")) fail("metric.norm_params needs m and n");
  NormParams p;
  p.m = number(v["m"], "metric.norm_params.m");
  p.n = number(v["n"], "metric.norm_params.n");
  p.pair_count = v.contains("pair_count") ? count(v["pair_count"], "metric.norm_params.pair_count") : 0;
  p.source_tag = v.contains("source_tag") ? text(v["source_tag"], "metric.norm_params.source_tag")
                                          : "manual";
  try {
    p.validate();
  } catch (const Error& e) {
    fail(e.what());
  }
  return p;
}

SynthOptions parse_synthetic(const json& s) {
  check_keys(s, "synthetic", {"images", "image_size", "scale_range", "objects_per_image"});
  SynthOptions o;
  if (s.contains("images")) o.images = count(s["images"], "synthetic.images");
  if (s.contains("objects_per_image")) {
    o.objects_per_image = count(s["objects_per_image"], "synthetic.objects_per_image");
  }
  if (s.contains("image_size")) {
    const auto v = numbers(s["image_size"], "synthetic.image_size");
    if (v.size() != 2) fail("synthetic.image_size must be [width, height]");
    o.image_size = {v[0], v[1]};
  }
  if (s.contains("scale_range")) {
    const auto v = numbers(s["scale_range"], "synthetic.scale_range");
    if (v.size() != 2) fail("synthetic.scale_range must be [min, max]");
    o.scale_min = v[0];
    o.scale_max = v[1];
  }
  return o;
}

AnchorSpec parse_anchors(const json& a) {
  check_keys(a, "anchors", {"levels", "scales", "ratios", "center_offset"});
  AnchorSpec spec = AnchorSpec::default_spec();
  if (a.contains("levels")) {
    if (!a["levels"].is_array()) fail("anchors.levels must be an array");
    spec.levels.clear();
    for (const json& l : a["levels"]) {
      check_keys(l, "anchors.levels[]", {"stride", "base_size"});
      if (!l.contains("stride")) fail("anchors.levels[] entries need a stride");
      AnchorLevel level;
      level.stride = number(l["stride"], "anchors.levels[].stride");
      level.base_size = l.contains("base_size") ? number(l["base_size"], "anchors.levels[].base_size")
                                                : level.stride;
      spec.levels.push_back(level);
    }
  }
  if (a.contains("scales")) spec.scales = numbers(a["scales"], "anchors.scales");
  if (a.contains("ratios")) spec.ratios = numbers(a["ratios"], "anchors.ratios");
  if (a.contains("center_offset")) spec.center_offset = number(a["center_offset"], "anchors.center_offset");
  try {
    spec.validate();
  } catch (const Error& e) {
    fail(e.what());
  }
  return spec;
}

json norm_source_json(const NormSource& src) {
  if (std::holds_alternative<CalibrateFromDataset>(src)) return "calibrate";
  if (const auto* path = std::get_if<std::string>(&src)) return *path;
  if (const auto* p = std::get_if<NormParams>(&src)) {
    return {{"m", p->m}, {"n", p->n}, {"pair_count", p->pair_count}, {"source_tag", p->source_tag}};
  }
  return nullptr;
}

}  // namespace

RunConfig parse_config(const json& doc) {
  check_keys(doc, "<root>",
             {"dataset", "synthetic", "anchors", "thresholds", "metric", "calibration", "compare",
              "nms", "out", "seed"});
  RunConfig c;
  if (doc.contains("dataset")) c.dataset = text(doc["dataset"], "dataset");
  if (doc.contains("synthetic")) c.synthetic = parse_synthetic(doc["synthetic"]);
  if (doc.contains("anchors")) c.anchors = parse_anchors(doc["anchors"]);
  if (doc.contains("thresholds")) {
    const json& t = doc["thresholds"];
    check_keys(t, "thresholds", {"pos", "neg", "min_pos"});
    if (t.contains("pos")) c.thresholds.pos = number(t["pos"], "thresholds.pos");
    if (t.contains("neg")) c.thresholds.neg = number(t["neg"], "thresholds.neg");
    if (t.contains("min_pos")) c.thresholds.min_pos = number(t["min_pos"], "thresholds.min_pos");
  }
  if (doc.contains("metric")) {
    const json& m = doc["metric"];
    check_keys(m, "metric", {"name", "norm_params", "dotd_scale", "nwd_c", "rfd_beta", "norm_mode"});
    try {
      if (m.contains("name")) c.metric.kind = parse_metric_kind(text(m["name"], "metric.name"));
      if (m.contains("norm_mode")) {
        c.metric.norm_mode = parse_norm_mode(text(m["norm_mode"], "metric.norm_mode"));
      }
    } catch (const Error& e) {
      fail(e.what());
    }
    if (m.contains("norm_params")) {
      const json& np = m["norm_params"];
      if (np.is_string()) {
        const std::string s = np.get<std::string>();
        if (s == "calibrate") {
          c.metric.norm_params = CalibrateFromDataset{};
        } else {
          c.metric.norm_params = s;
        }
      } else {
        c.metric.norm_params = parse_inline_params(np);
      }
    }
    if (m.contains("dotd_scale")) {
      const json& s = m["dotd_scale"];
      if (s.is_string() && s.get<std::string>() == "auto") {
        c.metric.dotd_scale.reset();
      } else {
        c.metric.dotd_scale = number(s, "metric.dotd_scale");
      }
    }
    if (m.contains("nwd_c")) c.metric.nwd_constant = number(m["nwd_c"], "metric.nwd_c");
    if (m.contains("rfd_beta")) c.metric.rfd_beta = number(m["rfd_beta"], "metric.rfd_beta");
  }
  if (doc.contains("calibration")) {
    const json& cal = doc["calibration"];
    check_keys(cal, "calibration", {"levels", "subsample_rate", "threads"});
    if (cal.contains("levels")) {
      if (!cal["levels"].is_array()) fail("calibration.levels must be an array");
      for (const json& l : cal["levels"]) c.calibration_levels.push_back(count(l, "calibration.levels"));
    }
    if (cal.contains("subsample_rate")) {
      c.calibration_subsample = number(cal["subsample_rate"], "calibration.subsample_rate");
    }
    if (cal.contains("threads")) c.threads = count(cal["threads"], "calibration.threads");
  }
  if (doc.contains("compare")) {
    check_keys(doc["compare"], "compare", {"samples"});
    if (doc["compare"].contains("samples")) {
      c.compare_samples = count(doc["compare"]["samples"], "compare.samples");
    }
  }
  if (doc.contains("nms")) {
    const json& n = doc["nms"];
    check_keys(n, "nms", {"detections", "metric", "threshold", "class_aware"});
    if (n.contains("detections")) c.nms.detections = text(n["detections"], "nms.detections");
    if (n.contains("metric")) {
      const std::string name = text(n["metric"], "nms.metric");
      if (name != "iou" && name != "simd") fail("nms.metric must be iou or simd");
      c.nms.metric = parse_metric_kind(name);
    }
    if (n.contains("threshold")) c.nms.threshold = number(n["threshold"], "nms.threshold");
    if (n.contains("class_aware")) {
      if (!n["class_aware"].is_boolean()) fail("nms.class_aware must be a boolean");
      c.nms.class_aware = n["class_aware"].get<bool>();
    }
  }
  if (doc.contains("out")) c.out_dir = text(doc["out"], "out");
  if (doc.contains("seed")) c.seed = count(doc["seed"], "seed");
  return c;
}

void require_dataset_source(const RunConfig& config) {
  if (config.dataset.has_value() == config.synthetic.has_value()) {
    fail("config needs exactly one dataset source: 'dataset' path or 'synthetic' parameters");
  }
}

json RunConfig::to_json() const {
  json j;
  if (dataset) j["dataset"] = *dataset;
  if (synthetic) {
    j["synthetic"] = {{"images", synthetic->images},
                      {"image_size", {synthetic->image_size.width, synthetic->image_size.height}},
                      {"scale_range", {synthetic->scale_min, synthetic->scale_max}},
                      {"objects_per_image", synthetic->objects_per_image}};
  }
  json levels = json::array();
  for (const AnchorLevel& l : anchors.levels) {
    levels.push_back({{"stride", l.stride}, {"base_size", l.base_size}});
  }
  j["anchors"] = {{"levels", levels},
                  {"scales", anchors.scales},
                  {"ratios", anchors.ratios},
                  {"center_offset", anchors.center_offset}};
  j["thresholds"] = {{"pos", thresholds.pos}, {"neg", thresholds.neg}, {"min_pos", thresholds.min_pos}};
  j["metric"] = {{"name", to_string(metric.kind)},
                 {"norm_params", norm_source_json(metric.norm_params)},
                 {"dotd_scale", metric.dotd_scale ? json(*metric.dotd_scale) : json("auto")},
                 {"nwd_c", metric.nwd_constant},
                 {"rfd_beta", metric.rfd_beta},
                 {"norm_mode", to_string(metric.norm_mode)}};
  j["calibration"] = {{"levels", calibration_levels},
                      {"subsample_rate", calibration_subsample},
                      {"threads", threads}};
  j["compare"] = {{"samples", compare_samples}};
  j["nms"] = {{"detections", nms.detections},
              {"metric", to_string(nms.metric)},
              {"threshold", nms.threshold},
              {"class_aware", nms.class_aware}};
  j["seed"] = seed;
  return j;
}

}  // namespace simdist::report
