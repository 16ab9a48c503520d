#include "pag/rational.hpp"

#include <cstddef>

#include "pag/error.hpp"

namespace pag {

namespace {

bool is_integer_literal(const std::string& s) {
  std::size_t start = (!s.empty() && (s[0] == '+' || s[0] == '-')) ? 1 : 0;
  if (start >= s.size()) return false;
  for (std::size_t k = start; k < s.size(); ++k) {
    if (s[k] < '0' || s[k] > '9') return false;
  }
  return true;
}

mpz_class parse_integer(const std::string& s, const std::string& context) {
  if (!is_integer_literal(s)) {
    throw ParseError("invalid rational '" + context + "': '" + s + "' is not an integer literal");
  }
  return mpz_class(s, 10);
}

}  // namespace

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw ParseError("invalid rational: empty string");

  std::size_t slash = text.find('/');
  if (slash != std::string::npos) {
    if (text.find('/', slash + 1) != std::string::npos || text.find('.') != std::string::npos) {
      throw ParseError("invalid rational '" + text + "'");
    }
    mpz_class num = parse_integer(text.substr(0, slash), text);
    std::string den_text = text.substr(slash + 1);
    if (!den_text.empty() && (den_text[0] == '+' || den_text[0] == '-')) {
      throw ParseError("invalid rational '" + text + "': denominator must be an unsigned integer");
    }
    mpz_class den = parse_integer(den_text, text);
    if (den == 0) throw ParseError("invalid rational '" + text + "': zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  std::size_t dot = text.find('.');
  if (dot != std::string::npos) {
    if (text.find('.', dot + 1) != std::string::npos) {
      throw ParseError("invalid rational '" + text + "'");
    }
    bool negative = text[0] == '-';
    std::size_t start = (text[0] == '+' || text[0] == '-') ? 1 : 0;
    std::string int_part = text.substr(start, dot - start);
    std::string frac_part = text.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) throw ParseError("invalid rational '" + text + "'");
    if (int_part.empty()) int_part = "0";
    if (frac_part.empty()) frac_part = "0";
    mpz_class ip = parse_integer(int_part, text);
    mpz_class fp = parse_integer(frac_part, text);
    mpz_class scale = 1;
    for (std::size_t k = 0; k < frac_part.size(); ++k) scale *= 10;
    mpz_class num = ip * scale + fp;
    if (negative) num = -num;
    Rational q(num, scale);
    q.canonicalize();
    return q;
  }

  return Rational(parse_integer(text, text));
}

std::string fraction_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational rational_of(long num, long den) {
  if (den == 0) throw DomainError("rational_of: zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

}  // namespace pag
