#include "hrmv/value.hpp"

#include <cctype>
#include <sstream>

namespace hrmv {

std::string_view sort_name(Sort s)
{
  switch (s) {
  case Sort::Unit: return "unit";
  case Sort::Bool: return "bool";
  case Sort::Int: return "int";
  case Sort::Real: return "real";
  }
  return "?";
}

Sort sort_from_name(std::string_view name)
{
  if (name == "unit") return Sort::Unit;
  if (name == "bool") return Sort::Bool;
  if (name == "int") return Sort::Int;
  if (name == "real") return Sort::Real;
  throw Error("unknown sort '" + std::string(name) + "'");
}

Value Value::boolean(bool b)
{
  Value v;
  v.sort_ = Sort::Bool;
  v.bool_ = b;
  return v;
}

Value Value::integer(const mpz_class& z)
{
  Value v;
  v.sort_ = Sort::Int;
  v.num_ = mpq_class(z);
  return v;
}

Value Value::real(const mpq_class& q)
{
  Value v;
  v.sort_ = Sort::Real;
  v.num_ = q;
  v.num_.canonicalize();
  return v;
}

bool Value::as_bool() const
{
  if (sort_ != Sort::Bool) throw Error("value is not a bool");
  return bool_;
}

const mpq_class& Value::as_rational() const
{
  if (sort_ != Sort::Int && sort_ != Sort::Real) throw Error("value is not numeric");
  return num_;
}

mpz_class Value::as_integer() const
{
  if (sort_ != Sort::Int) throw Error("value is not an int");
  return num_.get_num();
}

std::string Value::to_string() const
{
  switch (sort_) {
  case Sort::Unit: return "()";
  case Sort::Bool: return bool_ ? "true" : "false";
  case Sort::Int: return num_.get_num().get_str();
  case Sort::Real: return num_.get_str();
  }
  return "?";
}

bool operator==(const Value& a, const Value& b)
{
  return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Value& a, const Value& b)
{
  if (a.sort_ != b.sort_) return a.sort_ <=> b.sort_;
  switch (a.sort_) {
  case Sort::Unit: return std::strong_ordering::equal;
  case Sort::Bool: return a.bool_ <=> b.bool_;
  default: {
    int c = cmp(a.num_, b.num_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  }
}

mpq_class parse_decimal(std::string_view text)
{
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  long scale = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) ++scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw Error("malformed number '" + std::string(text) + "'");
  long exponent = 0;
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    std::string exp_text(text.substr(pos));
    try {
      std::size_t used = 0;
      exponent = std::stol(exp_text, &used);
      pos += used;
    } catch (const std::exception&) {
      throw Error("malformed exponent in '" + std::string(text) + "'");
    }
  }
  if (pos != text.size()) throw Error("malformed number '" + std::string(text) + "'");

  mpz_class numerator(digits, 10);
  long shift = exponent - scale;
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  mpq_class result = shift >= 0 ? mpq_class(numerator * ten_pow) : mpq_class(numerator, ten_pow);
  result.canonicalize();
  return negative ? mpq_class(-result) : result;
}

Value Value::parse(std::string_view text, Sort s)
{
  switch (s) {
  case Sort::Unit:
    if (text == "()") return unit();
    break;
  case Sort::Bool:
    if (text == "true") return boolean(true);
    if (text == "false") return boolean(false);
    break;
  case Sort::Int: {
    mpq_class q = parse_decimal(text);
    if (q.get_den() == 1) return integer(q.get_num());
    break;
  }
  case Sort::Real: {
    auto slash = text.find('/');
    if (slash != std::string_view::npos) {
      mpq_class num = parse_decimal(text.substr(0, slash));
      mpq_class den = parse_decimal(text.substr(slash + 1));
      if (den == 0) break;
      return real(num / den);
    }
    return real(parse_decimal(text));
  }
  }
  throw Error("cannot read '" + std::string(text) + "' as " + std::string(sort_name(s)));
}

std::string valuation_to_string(const Valuation& v)
{
  std::ostringstream out;
  bool first = true;
  for (const auto& [name, value] : v) {
    if (!first) out << ' ';
    first = false;
    out << name << '=' << value.to_string();
  }
  return out.str();
}

} // namespace hrmv
