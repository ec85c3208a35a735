#include "simdist/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "simdist/error.hpp"

namespace simdist {

using nlohmann::json;

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::io, "cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) {
    throw Error(Errc::io, "failed reading '" + path.string() + "'");
  }
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(Errc::io, "cannot open '" + path.string() + "' for writing");
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw Error(Errc::io, "failed writing '" + path.string() + "'");
  }
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string norm_params_to_json(const NormParams& params) {
  json j = {{"m", params.m},
            {"n", params.n},
            {"pair_count", params.pair_count},
            {"source_tag", params.source_tag}};
  return j.dump(2) + "\n";
}

NormParams parse_norm_params(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(Errc::parse, std::string("malformed normalization parameter JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("m") || !j.contains("n") || !j["m"].is_number() ||
      !j["n"].is_number()) {
    throw Error(Errc::schema, "normalization parameters need numeric \"m\" and \"n\"");
  }
  NormParams p;
  p.m = j["m"].get<double>();
  p.n = j["n"].get<double>();
  if (const auto it = j.find("pair_count"); it != j.end()) {
    if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<std::int64_t>() >= 0)) {
      throw Error(Errc::schema, "\"pair_count\" must be a non-negative integer");
    }
    p.pair_count = it->get<std::uint64_t>();
  }
  if (const auto it = j.find("source_tag"); it != j.end() && it->is_string()) {
    p.source_tag = it->get<std::string>();
  }
  try {
    p.validate();
  } catch (const Error& e) {
    throw Error(Errc::schema, e.what());
  }
  return p;
}

NormParams load_norm_params(const std::filesystem::path& path) {
  return parse_norm_params(read_text_file(path));
}

std::vector<Detection> parse_detections(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(Errc::parse, std::string("malformed detections JSON: ") + e.what());
  }
  if (j.is_object() && j.contains("detections")) j = j["detections"];
  if (!j.is_array()) {
    throw Error(Errc::schema, "detections must be a JSON array of rows");
  }
  std::vector<Detection> out;
  out.reserve(j.size());
  for (const json& row : j) {
    if (!row.is_object() || !row.contains("bbox") || !row.contains("score")) {
      throw Error(Errc::schema, "detection rows need \"bbox\" and \"score\"");
    }
    const json& b = row["bbox"];
    if (!b.is_array() || b.size() != 4 ||
        !std::all_of(b.begin(), b.end(), [](const json& v) { return v.is_number(); }) ||
        !row["score"].is_number()) {
      throw Error(Errc::schema, "detection bbox must be [cx, cy, w, h] with a numeric score");
    }
    const double score = row["score"].get<double>();
    if (!(score >= 0.0 && score <= 1.0)) {
      throw Error(Errc::schema, "detection score must lie in [0, 1]");
    }
    std::int64_t category = 0;
    if (const auto it = row.find("category_id"); it != row.end()) {
      if (!it->is_number_integer()) throw Error(Errc::schema, "category_id must be an integer");
      category = it->get<std::int64_t>();
    }
    try {
      out.push_back({CBox(b[0].get<double>(), b[1].get<double>(), b[2].get<double>(),
                          b[3].get<double>()),
                     score, category});
    } catch (const Error& e) {
      throw Error(Errc::schema, std::string("bad detection box: ") + e.what());
    }
  }
  return out;
}

std::string detections_to_json(std::span<const Detection> dets) {
  json rows = json::array();
  for (const Detection& d : dets) {
    rows.push_back({{"bbox", {d.box.cx(), d.box.cy(), d.box.w(), d.box.h()}},
                    {"score", d.score},
                    {"category_id", d.category_id}});
  }
  return rows.dump(2) + "\n";
}

}  // namespace simdist
