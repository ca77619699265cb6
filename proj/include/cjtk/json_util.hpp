#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace cjtk {

// Insertion-ordered JSON; carried members keep the order they were read in.
using Json = nlohmann::ordered_json;

struct DuplicateKeyRecord {
  std::string path;  // path of the object holding the repeated key
  std::string key;
};

struct JsonDocument {
  Json value;
  // Repeated keys are kept in the object (both entries) and listed here.
  std::vector<DuplicateKeyRecord> duplicates;
};

// Parses UTF-8 JSON text. Throws Error(SyntaxError) with line and column.
JsonDocument parse_json_text(std::string_view text);

// Deep equality ignoring object key order; 1 and 1.0 compare equal.
bool semantic_equal(const Json& a, const Json& b);

// Integral finite values become JSON integers so they print without a decimal point.
Json number_value(double value);

std::string dump(const Json& value, bool pretty = false);

// Slash-separated pointer paths ("CityObjects/id-1/geometry/0"); '~' and '/' in
// segments are escaped as in RFC 6901.
std::string path_join(std::string_view base, std::string_view segment);
std::string path_join(std::string_view base, std::size_t index);

}  // namespace cjtk
