#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cjtk/error.hpp"
#include "cjtk/json_util.hpp"
#include "cjtk/model.hpp"
#include "cjtk/validator.hpp"

namespace cjtk::ext {

// Restricted schema fragment: only type, properties, items, required and
// enum are understood.
struct Rule {
  std::optional<std::string> type;  // string, number, integer, boolean, object, array
  std::map<std::string, Rule> properties;
  std::shared_ptr<const Rule> items;
  std::vector<std::string> required;
  std::optional<std::vector<Json>> enum_values;
};

struct Extension {
  std::string name;
  std::string uri;
  std::string version;
  std::string description;
  std::map<std::string, Rule> root_properties;
  std::map<std::string, std::map<std::string, Rule>> attributes;  // core type -> "+name" -> rule
  std::map<std::string, Rule> city_objects;                       // "+Type" -> rule
};

// Thrown by load_extension; carries every problem found in the file.
class LoadError : public Error {
 public:
  explicit LoadError(std::vector<validate::Finding> findings);
  const std::vector<validate::Finding>& findings() const { return findings_; }

 private:
  std::vector<validate::Finding> findings_;
};

Extension load_extension(std::string_view bytes);
Extension load_extension_file(const std::string& path);

// Checks one JSON value against a rule, appending findings under `path`.
void check_rule(const Rule& rule, const Json& value, const std::string& path, validate::ValidationReport& report);

// EXTENSION_COLLISION findings for "+" names defined by more than one extension.
validate::ValidationReport find_collisions(std::span<const Extension> exts);

validate::ValidationReport validate_extended(const CityModel& model, std::span<const Extension> exts);

// Removes "+" objects, attributes and root members and the extension
// declaration.
CityModel strip_extensions(const CityModel& model);

}  // namespace cjtk::ext
