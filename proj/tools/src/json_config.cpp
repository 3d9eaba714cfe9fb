#include "json_config.hpp"

#include <algorithm>
#include <charconv>

#include "json.hpp"

namespace urnet::cli {

using Json = nlohmann::ordered_json;

namespace {

// Option strings back to typed JSON where they read as a bool or number.
Json typed(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  const char* end = s.data() + s.size();
  long long i = 0;
  if (auto r = std::from_chars(s.data(), end, i); r.ec == std::errc{} && r.ptr == end) return i;
  double d = 0;
  if (auto r = std::from_chars(s.data(), end, d); r.ec == std::errc{} && r.ptr == end) return d;
  return s;
}

// CLI11 renders vector defaults as "[a,b]", or "{}" when empty.
Json typed_default(const CLI::Option* opt) {
  const std::string s = opt->get_default_str();
  const bool listy = s.size() >= 2 && ((s.front() == '[' && s.back() == ']') || s == "{}");
  if (!listy && opt->get_expected_max() <= 1) return typed(s);
  Json arr = Json::array();
  const std::string body = listy ? s.substr(1, s.size() - 2) : s;
  std::size_t start = 0;
  while (start < body.size()) {
    const std::size_t comma = std::min(body.find(',', start), body.size());
    arr.push_back(typed(body.substr(start, comma - start)));
    start = comma + 1;
  }
  return arr;
}

Json options_of(const CLI::App* app, bool default_also) {
  Json j = Json::object();
  for (const CLI::Option* opt : app->get_options({})) {
    if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
    const std::string name = opt->get_lnames()[0];
    if (name == "help" || name == "config" || name == "print-config") continue;
    if (opt->get_type_size() != 0) {
      if (opt->count() > 0) {
        const auto& res = opt->results();
        if (res.size() == 1 && opt->get_expected_max() <= 1) {
          j[name] = typed(res[0]);
        } else {
          Json arr = Json::array();
          for (const auto& r : res) arr.push_back(typed(r));
          j[name] = std::move(arr);
        }
      } else if (default_also && !opt->get_default_str().empty()) {
        Json d = typed_default(opt);
        if (!(d.is_array() && d.empty())) j[name] = std::move(d);
      }
    } else if (opt->count() > 0) {
      j[name] = true;
    } else if (default_also) {
      j[name] = false;
    }
  }
  // Only the subcommands actually selected.
  for (const CLI::App* sub : app->get_subcommands({}))
    if (sub->parsed()) j[sub->get_name()] = options_of(sub, default_also);
  return j;
}

void collect(const Json& j, const std::string& name, std::vector<std::string> parents,
             std::vector<CLI::ConfigItem>& out) {
  if (j.is_object()) {
    if (!name.empty()) parents.push_back(name);
    for (auto it = j.begin(); it != j.end(); ++it) collect(*it, it.key(), parents, out);
    return;
  }
  if (name.empty()) throw CLI::ConversionError("config file must hold a JSON object");
  CLI::ConfigItem item;
  item.name = name;
  item.parents = std::move(parents);
  auto scalar = [&](const Json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CLI::ConversionError("unsupported value for config key " + name);
  };
  if (j.is_array()) {
    for (const auto& v : j) item.inputs.push_back(scalar(v));
  } else {
    item.inputs.push_back(scalar(j));
  }
  out.push_back(std::move(item));
}

}  // namespace

std::string JsonConfig::to_config(const CLI::App* app, bool default_also, bool, std::string) const {
  return options_of(app, default_also).dump(2) + "\n";
}

std::vector<CLI::ConfigItem> JsonConfig::from_config(std::istream& input) const {
  Json j;
  try {
    j = Json::parse(input);
  } catch (const Json::parse_error& e) {
    throw CLI::ConversionError(std::string("config file: ") + e.what());
  }
  std::vector<CLI::ConfigItem> items;
  collect(j, "", {}, items);
  return items;
}

}  // namespace urnet::cli
