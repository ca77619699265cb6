#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cjtk {

// Every failure and every validation finding carries one of these codes.
enum class Code {
  // syntax
  SyntaxError,
  DuplicateKey,
  // document structure
  NotCityJson,
  MissingRequiredMember,
  BadMemberType,
  BadGeometryShape,
  UnknownGeometryKind,
  UnknownCityObjectType,
  MissingParent,
  MissingLod,
  BadLod,
  BadVertex,
  BadTransform,
  BadCrs,
  MultipleCrs,
  TemplateIndexOutOfRange,
  BadMatrix,
  BadAppearanceIndex,
  UnknownSemanticType,
  // internal consistency
  ParentChildMismatch,
  SemanticsShapeMismatch,
  DuplicateId,
  DuplicateVertex,
  OrphanVertex,
  VertexIndexOutOfRange,
  // geoprocess / ops
  AlreadyQuantized,
  NoTransform,
  QuantumOverflow,
  EmptyModel,
  UnknownId,
  CrsMismatch,
  BadArgument,
  // extensions
  NotExtension,
  BadPlusPrefix,
  MissingGeometryRule,
  UnsupportedSchemaKeyword,
  BadSchemaFragment,
  ExtensionCollision,
  MissingExtensionSchema,
  UndeclaredExtensionMember,
  TypeMismatch,
  MissingRequiredProperty,
  EnumMismatch,
  GeometryOutsideGeometryMember,
  // gml import
  XmlSyntaxError,
  UnresolvedXlink,
  ExternalXlink,
  MixedCrs,
  Lod4Unsupported,
  RingTooShort,
  BadCoordinateToken,
  UnsupportedElement,
  // io / usage
  IoError,
};

std::string_view to_string(Code code);

class Error : public std::runtime_error {
 public:
  Error(Code code, std::string path, const std::string& message);

  Code code() const { return code_; }
  const std::string& path() const { return path_; }

 private:
  Code code_;
  std::string path_;
};

}  // namespace cjtk
