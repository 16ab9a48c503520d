#include "pag/json_util.hpp"

#include <algorithm>

#include "pag/error.hpp"

namespace pag {

Json parse_json_document(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

void require_keys(const Json& obj, const std::string& context,
                  std::initializer_list<const char*> allowed,
                  std::initializer_list<const char*> required) {
  if (!obj.is_object()) throw ParseError(context + ": expected a JSON object");
  for (const auto& item : obj.items()) {
    bool known = std::any_of(allowed.begin(), allowed.end(),
                             [&](const char* k) { return item.key() == k; });
    if (!known) throw ParseError(context + ": unknown key '" + item.key() + "'");
  }
  for (const char* k : required) {
    if (!obj.contains(k)) throw ParseError(context + ": missing key '" + std::string(k) + "'");
  }
}

Rational rational_field(const Json& value, const std::string& context) {
  if (value.is_number_integer()) {
    return Rational(static_cast<long>(value.get<std::int64_t>()));
  }
  if (value.is_string()) {
    try {
      return parse_rational(value.get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(context + ": " + e.what());
    }
  }
  throw ParseError(context + ": expected an integer or a rational string");
}

}  // namespace pag
