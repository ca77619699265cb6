#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cjtk/error.hpp"
#include "cjtk/json_util.hpp"
#include "cjtk/model.hpp"

namespace cjtk::codec {

enum class OutputMode { Minified, Pretty };

struct Warning {
  std::string path;
  std::string message;
};

struct ParseDiagnostics {
  std::vector<Warning> warnings;
  // Members with no modelled meaning; kept verbatim and written back out.
  std::vector<std::string> unknown_members;
};

struct ParseResult {
  CityModel model;
  ParseDiagnostics diagnostics;
};

// Strict reading: syntax errors, repeated keys, a missing or wrong "type",
// missing required members and boundary arrays whose nesting does not fit the
// geometry type all throw Error. Referential problems (index ranges, links)
// are left to the validator.
ParseResult parse(std::string_view text);
ParseResult from_json(const JsonDocument& doc);

// Something the lenient decoder could not represent in a CityModel.
struct DecodeIssue {
  Code code;
  std::string path;
  std::string message;
};

// Best-effort decoding used by the validator: every problem that cannot be
// carried in the model is listed in `issues` and the offending part skipped.
// Representable problems (depth/type mismatch, unknown type names, string
// lods) are kept so the structural checks can report them.
CityModel decode_lenient(const Json& doc, std::vector<DecodeIssue>& issues,
                         ParseDiagnostics* diagnostics = nullptr);

Json to_json(const CityModel& model);
Json encode_geometry(const Geometry& geometry);
Json encode_city_object(const CityObject& object);

std::string serialize(const CityModel& model, OutputMode mode = OutputMode::Minified);

}  // namespace cjtk::codec
