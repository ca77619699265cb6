#include "cjtk/error.hpp"

namespace cjtk {

std::string_view to_string(Code code) {
  switch (code) {
    case Code::SyntaxError: return "SYNTAX_ERROR";
    case Code::DuplicateKey: return "DUPLICATE_KEY";
    case Code::NotCityJson: return "NOT_CITYJSON";
    case Code::MissingRequiredMember: return "MISSING_REQUIRED_MEMBER";
    case Code::BadMemberType: return "BAD_MEMBER_TYPE";
    case Code::BadGeometryShape: return "BAD_GEOMETRY_SHAPE";
    case Code::UnknownGeometryKind: return "UNKNOWN_GEOMETRY_KIND";
    case Code::UnknownCityObjectType: return "UNKNOWN_COTYPE";
    case Code::MissingParent: return "MISSING_PARENT";
    case Code::MissingLod: return "MISSING_LOD";
    case Code::BadLod: return "BAD_LOD";
    case Code::BadVertex: return "BAD_VERTEX";
    case Code::BadTransform: return "BAD_TRANSFORM";
    case Code::BadCrs: return "BAD_CRS";
    case Code::MultipleCrs: return "MULTIPLE_CRS";
    case Code::TemplateIndexOutOfRange: return "TEMPLATE_INDEX_OUT_OF_RANGE";
    case Code::BadMatrix: return "BAD_MATRIX";
    case Code::BadAppearanceIndex: return "BAD_APPEARANCE_INDEX";
    case Code::UnknownSemanticType: return "UNKNOWN_SEMANTIC_TYPE";
    case Code::ParentChildMismatch: return "PARENT_CHILD_MISMATCH";
    case Code::SemanticsShapeMismatch: return "SEMANTICS_SHAPE_MISMATCH";
    case Code::DuplicateId: return "DUPLICATE_ID";
    case Code::DuplicateVertex: return "DUPLICATE_VERTEX";
    case Code::OrphanVertex: return "ORPHAN_VERTEX";
    case Code::VertexIndexOutOfRange: return "VERTEX_INDEX_OUT_OF_RANGE";
    case Code::AlreadyQuantized: return "ALREADY_QUANTIZED";
    case Code::NoTransform: return "NO_TRANSFORM";
    case Code::QuantumOverflow: return "QUANTUM_OVERFLOW";
    case Code::EmptyModel: return "EMPTY_MODEL";
    case Code::UnknownId: return "UNKNOWN_ID";
    case Code::CrsMismatch: return "CRS_MISMATCH";
    case Code::BadArgument: return "BAD_ARGUMENT";
    case Code::NotExtension: return "NOT_EXTENSION";
    case Code::BadPlusPrefix: return "BAD_PLUS_PREFIX";
    case Code::MissingGeometryRule: return "MISSING_GEOMETRY_RULE";
    case Code::UnsupportedSchemaKeyword: return "UNSUPPORTED_SCHEMA_KEYWORD";
    case Code::BadSchemaFragment: return "BAD_SCHEMA_FRAGMENT";
    case Code::ExtensionCollision: return "EXTENSION_COLLISION";
    case Code::MissingExtensionSchema: return "MISSING_EXTENSION_SCHEMA";
    case Code::UndeclaredExtensionMember: return "UNDECLARED_EXTENSION_MEMBER";
    case Code::TypeMismatch: return "TYPE_MISMATCH";
    case Code::MissingRequiredProperty: return "MISSING_REQUIRED_PROPERTY";
    case Code::EnumMismatch: return "ENUM_MISMATCH";
    case Code::GeometryOutsideGeometryMember: return "GEOMETRY_OUTSIDE_GEOMETRY_MEMBER";
    case Code::XmlSyntaxError: return "XML_SYNTAX_ERROR";
    case Code::UnresolvedXlink: return "UNRESOLVED_XLINK";
    case Code::ExternalXlink: return "EXTERNAL_XLINK";
    case Code::MixedCrs: return "MIXED_CRS";
    case Code::Lod4Unsupported: return "LOD4_UNSUPPORTED";
    case Code::RingTooShort: return "RING_TOO_SHORT";
    case Code::BadCoordinateToken: return "BAD_COORDINATE_TOKEN";
    case Code::UnsupportedElement: return "UNSUPPORTED_ELEMENT";
    case Code::IoError: return "IO_ERROR";
  }
  return "UNKNOWN";
}

namespace {

std::string compose(Code code, const std::string& path, const std::string& message) {
  std::string out(to_string(code));
  if (!path.empty()) out += " at " + path;
  if (!message.empty()) out += ": " + message;
  return out;
}

}  // namespace

Error::Error(Code code, std::string path, const std::string& message)
    : std::runtime_error(compose(code, path, message)), code_(code), path_(std::move(path)) {}

}  // namespace cjtk
