#include <gtest/gtest.h>

#include "cjtk/error.hpp"
#include "cjtk/json_util.hpp"

using namespace cjtk;

TEST(ParseJsonText, ReportsLineAndColumnOfSyntaxErrors) {
  try {
    parse_json_text("{\n  \"a\": 1,\n  \"b\": ]\n}");
    FAIL() << "expected a syntax error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Code::SyntaxError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(ParseJsonText, KeepsRepeatedKeysAndListsThem) {
  auto doc = parse_json_text(R"({"x": {"k": 1, "k": 2}, "y": 3})");
  ASSERT_EQ(doc.duplicates.size(), 1u);
  EXPECT_EQ(doc.duplicates[0].path, "x");
  EXPECT_EQ(doc.duplicates[0].key, "k");
}

TEST(ParseJsonText, PreservesMemberOrder) {
  auto doc = parse_json_text(R"({"z": 1, "a": 2, "m": 3})");
  std::vector<std::string> keys;
  for (const auto& [k, v] : doc.value.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"z", "a", "m"}));
}

TEST(SemanticEqual, IgnoresKeyOrderAndIntegerFloatSpelling) {
  EXPECT_TRUE(semantic_equal(Json::parse(R"({"a":1,"b":[1.0,2]})"), Json::parse(R"({"b":[1,2.0],"a":1.0})")));
  EXPECT_FALSE(semantic_equal(Json::parse(R"({"a":1})"), Json::parse(R"({"a":1,"b":null})")));
  EXPECT_FALSE(semantic_equal(Json::parse("[1,2]"), Json::parse("[2,1]")));
  EXPECT_FALSE(semantic_equal(Json("1"), Json(1)));
}

TEST(NumberValue, IntegralValuesPrintWithoutDecimalPoint) {
  EXPECT_EQ(dump(number_value(150.0)), "150");
  EXPECT_EQ(dump(number_value(-3.0)), "-3");
  EXPECT_EQ(dump(number_value(0.25)), "0.25");
  EXPECT_EQ(dump(number_value(1e300)), "1e+300");
}

TEST(PathJoin, EscapesPointerCharacters) {
  EXPECT_EQ(path_join("", "CityObjects"), "CityObjects");
  EXPECT_EQ(path_join("CityObjects", "a/b~c"), "CityObjects/a~1b~0c");
  EXPECT_EQ(path_join("vertices", std::size_t{7}), "vertices/7");
}
