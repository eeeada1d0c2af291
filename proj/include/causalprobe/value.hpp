#ifndef CAUSALPROBE_VALUE_HPP
#define CAUSALPROBE_VALUE_HPP

#include <string>
#include <variant>
#include <vector>

namespace causalprobe {

// Runtime value of a model variable: two-valued boolean, 64-bit real, or
// a label from a finite domain.
using Value = std::variant<bool, double, std::string>;

enum class ValueType { Bool, Real, Label, Unknown };

ValueType type_of(const Value& v);

// Exact equality; reals compare with IEEE ==.
bool value_equal(const Value& a, const Value& b);

// Numeric reading of a value: bool -> 0/1, real -> itself. Labels have no
// numeric reading and throw.
double value_as_real(const Value& v);

bool is_bool(const Value& v);
bool is_real(const Value& v);
bool is_label(const Value& v);

// Shortest round-trip decimal text for a double ("0.5", "1e-05", ...).
std::string format_real(double v);

// Human/file text for a value: "true", "0.25", or the bare label.
std::string format_value(const Value& v);

// Domain of a variable: boolean, a finite set of labels, or a closed real
// interval.
class Domain {
 public:
  enum class Kind { Bool, Finite, Real };

  static Domain boolean();
  static Domain finite(std::vector<std::string> labels);  // non-empty
  static Domain real_interval(double lo, double hi);      // lo <= hi

  Kind kind() const { return kind_; }
  const std::vector<std::string>& labels() const { return labels_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

  ValueType value_type() const;

  // Membership with absolute tolerance 1e-9 at real interval endpoints.
  bool contains(const Value& v) const;

  // Canonical enumeration order: bool = [false, true]; finite = label
  // order as declared. Throws for real intervals.
  std::vector<Value> enumerate() const;

  bool is_finite_kind() const { return kind_ != Kind::Real; }

  std::string describe() const;

 private:
  Kind kind_ = Kind::Bool;
  std::vector<std::string> labels_;
  double lo_ = 0.0, hi_ = 0.0;
};

}  // namespace causalprobe

#endif
