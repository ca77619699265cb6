#include "cjtk/json_util.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include "cjtk/error.hpp"

namespace cjtk {
namespace {

class OrderedBuilder : public nlohmann::json_sax<Json> {
 public:
  explicit OrderedBuilder(JsonDocument& doc) : doc_(doc) {}

  bool null() override { return put(Json(nullptr)); }
  bool boolean(bool v) override { return put(Json(v)); }
  bool number_integer(number_integer_t v) override { return put(Json(v)); }
  bool number_unsigned(number_unsigned_t v) override { return put(Json(v)); }
  bool number_float(number_float_t v, const string_t&) override { return put(Json(v)); }
  bool string(string_t& v) override { return put(Json(std::move(v))); }
  bool binary(binary_t& v) override { return put(Json::binary(std::move(v))); }

  bool start_object(std::size_t) override { return open(Json::object()); }
  bool start_array(std::size_t) override { return open(Json::array()); }
  bool end_object() override { return close(); }
  bool end_array() override { return close(); }

  bool key(string_t& k) override {
    Frame& top = stack_.back();
    auto& object = top.node->get_ref<Json::object_t&>();
    for (const auto& [existing, _] : object) {
      if (existing == k) {
        doc_.duplicates.push_back({top.path, k});
        break;
      }
    }
    top.pending_key = std::move(k);
    return true;
  }

  bool parse_error(std::size_t position, const std::string&,
                   const nlohmann::detail::exception& ex) override {
    error_position_ = position;
    error_message_ = ex.what();
    return false;
  }

  std::size_t error_position() const { return error_position_; }
  const std::string& error_message() const { return error_message_; }

 private:
  struct Frame {
    Json* node;
    std::string path;
    std::string pending_key;
  };

  // Inserts into the current container; returns the address of the new slot.
  Json* insert(Json&& value, std::string& child_path) {
    if (stack_.empty()) {
      doc_.value = std::move(value);
      child_path.clear();
      return &doc_.value;
    }
    Frame& top = stack_.back();
    if (top.node->is_array()) {
      auto& array = top.node->get_ref<Json::array_t&>();
      child_path = path_join(top.path, array.size());
      array.push_back(std::move(value));
      return &array.back();
    }
    auto& object = top.node->get_ref<Json::object_t&>();
    child_path = path_join(top.path, top.pending_key);
    // Bypass ordered_map's key uniqueness so repeated keys stay visible.
    auto& storage = static_cast<std::vector<Json::object_t::value_type>&>(object);
    storage.emplace_back(std::move(top.pending_key), std::move(value));
    return &storage.back().second;
  }

  bool put(Json&& value) {
    std::string ignored;
    insert(std::move(value), ignored);
    return true;
  }

  bool open(Json&& container) {
    std::string path;
    Json* slot = insert(std::move(container), path);
    stack_.push_back({slot, std::move(path), {}});
    return true;
  }

  bool close() {
    stack_.pop_back();
    return true;
  }

  JsonDocument& doc_;
  std::vector<Frame> stack_;
  std::size_t error_position_ = 0;
  std::string error_message_;
};

bool numbers_equal(const Json& a, const Json& b) {
  if (a.is_number_float() || b.is_number_float()) {
    return a.get<double>() == b.get<double>();
  }
  if (a.is_number_unsigned() && b.is_number_unsigned()) {
    return a.get<std::uint64_t>() == b.get<std::uint64_t>();
  }
  if (a.is_number_unsigned() || b.is_number_unsigned()) {
    const Json& u = a.is_number_unsigned() ? a : b;
    const Json& s = a.is_number_unsigned() ? b : a;
    const auto sv = s.get<std::int64_t>();
    return sv >= 0 && static_cast<std::uint64_t>(sv) == u.get<std::uint64_t>();
  }
  return a.get<std::int64_t>() == b.get<std::int64_t>();
}

}  // namespace

JsonDocument parse_json_text(std::string_view text) {
  JsonDocument doc;
  OrderedBuilder builder(doc);
  const bool ok = Json::sax_parse(text.begin(), text.end(), &builder);
  if (!ok) {
    const std::size_t pos = builder.error_position();
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < pos && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(Code::SyntaxError, "",
                "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                    builder.error_message());
  }
  return doc;
}

bool semantic_equal(const Json& a, const Json& b) {
  if (a.is_number() && b.is_number()) return numbers_equal(a, b);
  if (a.type() != b.type()) return false;
  if (a.is_object()) {
    if (a.size() != b.size()) return false;
    for (const auto& [key, value] : a.items()) {
      auto it = b.find(key);
      if (it == b.end() || !semantic_equal(value, *it)) return false;
    }
    return true;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!semantic_equal(a[i], b[i])) return false;
    }
    return true;
  }
  return a == b;
}

Json number_value(double value) {
  constexpr double kExactLimit = 9007199254740992.0;  // 2^53
  if (std::isfinite(value) && std::trunc(value) == value && std::fabs(value) <= kExactLimit) {
    return Json(static_cast<std::int64_t>(value));
  }
  return Json(value);
}

std::string dump(const Json& value, bool pretty) {
  return pretty ? value.dump(2) : value.dump();
}

std::string path_join(std::string_view base, std::string_view segment) {
  std::string out(base);
  if (!out.empty()) out += '/';
  for (char c : segment) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

std::string path_join(std::string_view base, std::size_t index) {
  return path_join(base, std::to_string(index));
}

}  // namespace cjtk
