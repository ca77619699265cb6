#include <expat.h>

#include <charconv>
#include <cmath>
#include <set>

#include "cjtk/error.hpp"
#include "cjtk/gml_import.hpp"

namespace cjtk::gml {
namespace {

struct SplitName {
  std::string ns;
  std::string local;
};

SplitName split(const char* qualified) {
  std::string_view q(qualified);
  const auto sep = q.find(' ');
  if (sep == std::string_view::npos) return {"", std::string(q)};
  return {std::string(q.substr(0, sep)), std::string(q.substr(sep + 1))};
}

struct BuildState {
  XML_Parser parser = nullptr;
  std::unique_ptr<Element> root;
  std::vector<Element*> stack;
};

void on_start(void* data, const XML_Char* name, const XML_Char** atts) {
  auto* st = static_cast<BuildState*>(data);
  auto element = std::make_unique<Element>();
  auto [ns, local] = split(name);
  element->ns = std::move(ns);
  element->name = std::move(local);
  element->line = XML_GetCurrentLineNumber(st->parser);
  for (int i = 0; atts[i]; i += 2) element->attributes.emplace_back(atts[i], atts[i + 1]);
  Element* raw = element.get();
  if (st->stack.empty()) {
    st->root = std::move(element);
  } else {
    raw->parent = st->stack.back();
    st->stack.back()->children.push_back(std::move(element));
  }
  st->stack.push_back(raw);
}

void on_end(void* data, const XML_Char*) { static_cast<BuildState*>(data)->stack.pop_back(); }

void on_text(void* data, const XML_Char* s, int len) {
  auto* st = static_cast<BuildState*>(data);
  if (!st->stack.empty()) st->stack.back()->text.append(s, static_cast<std::size_t>(len));
}

bool is_gml_ns(std::string_view ns) { return ns.find("opengis.net/gml") != std::string_view::npos; }

void index_ids(const Element& e, std::unordered_map<std::string, const Element*>& ids) {
  for (const auto& [key, value] : e.attributes) {
    auto sep = key.find(' ');
    if (sep != std::string::npos && key.substr(sep + 1) == "id" && is_gml_ns(key.substr(0, sep))) {
      ids.emplace(value, &e);
    }
  }
  for (const auto& c : e.children) index_ids(*c, ids);
}

double parse_number(std::string_view token, const Element& where) {
  double value = 0;
  const char* first = token.data();
  const char* last = first + token.size();
  if (!token.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (token.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw Error(Code::BadCoordinateToken, where.path(),
                "line " + std::to_string(where.line) + ": '" + std::string(token) + "' is not a coordinate");
  }
  return value;
}

std::vector<std::string_view> split_on(std::string_view s, std::string_view seps) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const auto start = s.find_first_not_of(seps, i);
    if (start == std::string_view::npos) break;
    auto end = s.find_first_of(seps, start);
    if (end == std::string_view::npos) end = s.size();
    out.push_back(s.substr(start, end - start));
    i = end;
  }
  return out;
}

constexpr std::string_view kSpace = " \t\r\n";

int dimension_of(const Element& e) {
  for (const Element* cur = &e; cur; cur = cur->parent) {
    if (const std::string* dim = cur->attr("srsDimension")) {
      if (*dim != "3") {
        throw Error(Code::BadCoordinateToken, e.path(), "line " + std::to_string(e.line) + ": only 3D coordinates are supported");
      }
      return 3;
    }
  }
  return 3;
}

void append_tuples(const Element& e, std::vector<double> values, std::vector<Vertex>& out) {
  if (values.size() % 3 != 0) {
    throw Error(Code::BadCoordinateToken, e.path(),
                "line " + std::to_string(e.line) + ": coordinate count " + std::to_string(values.size()) + " is not a multiple of 3");
  }
  for (std::size_t i = 0; i < values.size(); i += 3) out.push_back({values[i], values[i + 1], values[i + 2]});
}

std::vector<double> numbers(const Element& e, std::string_view text) {
  std::vector<double> v;
  for (auto tok : split_on(text, kSpace)) v.push_back(parse_number(tok, e));
  return v;
}

std::vector<Vertex> ring_points(const Element& ring) {
  std::vector<Vertex> pts;
  if (const Element* pos_list = ring.child("posList")) {
    dimension_of(*pos_list);
    append_tuples(*pos_list, numbers(*pos_list, pos_list->text), pts);
    return pts;
  }
  if (const Element* coords = ring.child("coordinates")) {
    const std::string* cs = coords->attr("cs");
    const std::string* ts = coords->attr("ts");
    const std::string* dec = coords->attr("decimal");
    const std::string tuple_sep = ts && !ts->empty() && ts->find_first_not_of(kSpace) != std::string::npos ? *ts : std::string(kSpace);
    const std::string coord_sep = cs && !cs->empty() ? *cs : std::string(",");
    for (auto tuple : split_on(coords->text, tuple_sep)) {
      std::vector<double> v;
      for (auto tok : split_on(tuple, coord_sep + std::string(kSpace))) {
        std::string t(tok);
        if (dec && *dec != "." && !dec->empty()) {
          for (auto& ch : t) {
            if (ch == (*dec)[0]) ch = '.';
          }
        }
        v.push_back(parse_number(t, *coords));
      }
      if (v.size() != 3) {
        throw Error(Code::BadCoordinateToken, coords->path(),
                    "line " + std::to_string(coords->line) + ": tuple '" + std::string(tuple) + "' does not have 3 coordinates");
      }
      pts.push_back({v[0], v[1], v[2]});
    }
    return pts;
  }
  for (const auto& c : ring.children) {
    if (c->name == "pos") {
      dimension_of(*c);
      append_tuples(*c, numbers(*c, c->text), pts);
    } else if (c->name == "pointProperty" || c->name == "pointRep") {
      const Element* point = c->child("Point");
      const Element* pos = point ? point->child("pos") : nullptr;
      if (!pos) throw Error(Code::BadCoordinateToken, c->path(), "line " + std::to_string(c->line) + ": point without gml:pos");
      append_tuples(*pos, numbers(*pos, pos->text), pts);
    }
  }
  return pts;
}

}  // namespace

const std::string* Element::attr(std::string_view local) const {
  for (const auto& [key, value] : attributes) {
    const auto sep = key.find(' ');
    const std::string_view name = sep == std::string::npos ? std::string_view(key) : std::string_view(key).substr(sep + 1);
    if (name == local) return &value;
  }
  return nullptr;
}

const Element* Element::child(std::string_view local) const {
  for (const auto& c : children) {
    if (c->name == local) return c.get();
  }
  return nullptr;
}

std::vector<const Element*> Element::children_named(std::string_view local) const {
  std::vector<const Element*> out;
  for (const auto& c : children) {
    if (c->name == local) out.push_back(c.get());
  }
  return out;
}

std::string Element::path() const {
  std::vector<const Element*> chain;
  for (const Element* e = this; e; e = e->parent) chain.push_back(e);
  std::string out;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    if (!out.empty()) out += '/';
    out += (*it)->name;
  }
  return out;
}

GmlDocument GmlDocument::parse(std::string_view bytes) {
  BuildState st;
  st.parser = XML_ParserCreateNS(nullptr, ' ');
  if (!st.parser) throw Error(Code::IoError, "", "cannot create XML parser");
  XML_SetUserData(st.parser, &st);
  XML_SetElementHandler(st.parser, on_start, on_end);
  XML_SetCharacterDataHandler(st.parser, on_text);
  const auto status = XML_Parse(st.parser, bytes.data(), static_cast<int>(bytes.size()), XML_TRUE);
  if (status != XML_STATUS_OK) {
    const std::string msg = "line " + std::to_string(XML_GetCurrentLineNumber(st.parser)) + ", column " +
                            std::to_string(XML_GetCurrentColumnNumber(st.parser)) + ": " +
                            XML_ErrorString(XML_GetErrorCode(st.parser));
    XML_ParserFree(st.parser);
    throw Error(Code::XmlSyntaxError, "", msg);
  }
  XML_ParserFree(st.parser);
  if (!st.root) throw Error(Code::XmlSyntaxError, "", "document has no root element");
  GmlDocument doc;
  doc.root_ = std::move(st.root);
  index_ids(*doc.root_, doc.ids_);
  return doc;
}

const Element& GmlDocument::resolve_xlink(std::string_view href) const {
  if (href.empty() || href.front() != '#') {
    throw Error(Code::ExternalXlink, std::string(href), "only in-document references (#id) are supported");
  }
  auto it = ids_.find(std::string(href.substr(1)));
  if (it == ids_.end()) throw Error(Code::UnresolvedXlink, std::string(href), "no element with gml:id '" + std::string(href.substr(1)) + "'");
  return *it->second;
}

Index VertexPool::add(const Vertex& v) {
  auto [it, fresh] = index_.emplace(v, vertices_.size());
  if (fresh) vertices_.push_back(v);
  return it->second;
}

std::vector<Index> normalize_ring(const Element& ring, VertexPool& pool) {
  std::vector<Vertex> pts = ring_points(ring);
  if (pts.size() > 1 && pts.front() == pts.back()) pts.pop_back();
  const std::set<Vertex> distinct(pts.begin(), pts.end());
  if (distinct.size() < 3) {
    throw Error(Code::RingTooShort, ring.path(),
                "line " + std::to_string(ring.line) + ": ring has " + std::to_string(distinct.size()) + " distinct points");
  }
  std::vector<Index> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(pool.add(p));
  return out;
}

}  // namespace cjtk::gml
