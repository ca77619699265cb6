#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cjtk/error.hpp"
#include "cjtk/model.hpp"

namespace cjtk::validate {

enum class Stage { Syntax, Structure, Consistency, Extension };
enum class Severity { Error, Warning };

std::string_view to_string(Stage stage);

struct Finding {
  Stage stage = Stage::Structure;
  Code code = Code::SyntaxError;
  std::string path;
  std::string message;
};

struct ValidationReport {
  std::vector<Finding> errors;
  std::vector<Finding> warnings;

  bool valid() const { return errors.empty(); }
  bool empty() const { return errors.empty() && warnings.empty(); }
  std::size_t count(Code code) const;

  void add(Severity severity, Stage stage, Code code, std::string path, std::string message);
  void append(const ValidationReport& other);
  // Orders findings by path, then code.
  void sort();
};

// Duplicate/orphan vertices and unknown semantic types are warnings; every
// other code is an error.
Severity severity_of(Code code);

// Schema layer: required members, known type names, nesting depths, lod
// presence, transform shape, EPSG-only single CRS.
ValidationReport validate_structure(const CityModel& model);

// Internal consistency: parent/child links, semantics vs boundaries,
// duplicate ids, duplicate/orphan vertices, vertex index range.
ValidationReport validate_consistency(const CityModel& model);

// syntax -> structure -> consistency; a stage with errors stops the chain.
ValidationReport validate(std::string_view bytes);

std::string to_jsonl(const ValidationReport& report);
std::string to_text(const ValidationReport& report);

// 0 = valid, 1 = warnings only, 2 = errors.
int exit_code(const ValidationReport& report);

}  // namespace cjtk::validate
