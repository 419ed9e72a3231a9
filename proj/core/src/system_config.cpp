#include "shockcontract/system_config.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace shockcontract {

SystemSpec parse_system_config(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::BadParameter, std::string("config: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("system") || !doc["system"].is_string()) {
    throw Error(ErrorKind::BadParameter, "config: expected a string field \"system\"");
  }
  SystemSpec spec;
  spec.name = doc["system"].get<std::string>();
  if (doc.contains("params")) {
    const auto& params = doc["params"];
    if (!params.is_object()) throw Error(ErrorKind::BadParameter, "config: params must be an object");
    for (const auto& [key, value] : params.items()) {
      if (!value.is_number()) {
        throw Error(ErrorKind::BadParameter, "config: parameter " + key + " is not a number");
      }
      spec.params[key] = value.get<double>();
    }
  }
  return spec;
}

SystemSpec load_system_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::BadParameter, "cannot open config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_system_config(buf.str());
}

std::string to_config_text(const SystemSpec& spec) {
  nlohmann::json doc;
  doc["system"] = spec.name;
  doc["params"] = nlohmann::json::object();
  for (const auto& [key, value] : spec.params) doc["params"][key] = value;
  return doc.dump();
}

Vector parse_state(const std::string& text) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find(',', pos), text.size());
    std::string item = text.substr(pos, end - pos);
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw Error(ErrorKind::BadParameter, "empty state component in '" + text + "'");
    item = item.substr(first, last - first + 1);
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), x);
    if (ec != std::errc() || ptr != item.data() + item.size()) {
      throw Error(ErrorKind::BadParameter, "bad state component '" + item + "'");
    }
    values.push_back(x);
    pos = end + 1;
  }
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace shockcontract
