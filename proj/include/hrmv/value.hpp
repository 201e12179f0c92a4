#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace hrmv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Sort { Unit, Bool, Int, Real };

std::string_view sort_name(Sort s);
Sort sort_from_name(std::string_view name);

/// A value of one of the four variable sorts. Int and Real are exact:
/// both are stored as GMP rationals (Int always has denominator 1).
class Value {
public:
  Value() = default;

  static Value unit() { return Value{}; }
  static Value boolean(bool b);
  static Value integer(const mpz_class& z);
  static Value integer(long z) { return integer(mpz_class(z)); }
  static Value real(const mpq_class& q);

  /// Parses `true`/`false`, integer literals, decimals (`0.0582`, `1e-3`)
  /// and fractions (`1/2`) as a value of sort `s`.
  static Value parse(std::string_view text, Sort s);

  Sort sort() const { return sort_; }
  bool as_bool() const;
  const mpq_class& as_rational() const;
  mpz_class as_integer() const;

  /// Canonical text: `()`, `true`/`false`, `-3`, `1/2`.
  std::string to_string() const;

  friend bool operator==(const Value& a, const Value& b);
  friend std::strong_ordering operator<=>(const Value& a, const Value& b);

private:
  Sort sort_ = Sort::Unit;
  bool bool_ = false;
  mpq_class num_{0};
};

/// Exact rational from decimal text such as "0.0582", "12", "1.5e-2".
mpq_class parse_decimal(std::string_view text);

/// Assignment of values to variable names.
using Valuation = std::map<std::string, Value>;

std::string valuation_to_string(const Valuation& v);

} // namespace hrmv
