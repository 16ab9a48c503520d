#pragma once

#include <json.hpp>

#include <initializer_list>
#include <string>

#include "pag/rational.hpp"

namespace pag {

class Environment;
class StrategyMatrix;

// Insertion-ordered documents keep serialized output byte-stable.
using Json = nlohmann::ordered_json;

Json parse_json_document(const std::string& text);

// Rejects keys outside `allowed` and demands every key in `required`.
void require_keys(const Json& obj, const std::string& context,
                  std::initializer_list<const char*> allowed,
                  std::initializer_list<const char*> required);

// A rational field is either an exact JSON integer or a string in decimal or
// "num/den" form. Anything else (notably floats) is rejected.
Rational rational_field(const Json& value, const std::string& context);

Json environment_to_json(const Environment& env);
Json allocation_to_json(const StrategyMatrix& U);

}  // namespace pag
