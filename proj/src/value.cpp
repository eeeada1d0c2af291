#include "causalprobe/value.hpp"

#include <charconv>
#include <cmath>

#include "causalprobe/errors.hpp"

namespace causalprobe {

ValueType type_of(const Value& v) {
  switch (v.index()) {
    case 0: return ValueType::Bool;
    case 1: return ValueType::Real;
    default: return ValueType::Label;
  }
}

bool value_equal(const Value& a, const Value& b) { return a == b; }

double value_as_real(const Value& v) {
  if (const bool* b = std::get_if<bool>(&v)) return *b ? 1.0 : 0.0;
  if (const double* d = std::get_if<double>(&v)) return *d;
  throw EvalError("label value '" + std::get<std::string>(v) +
                  "' has no numeric reading");
}

bool is_bool(const Value& v) { return std::holds_alternative<bool>(v); }
bool is_real(const Value& v) { return std::holds_alternative<double>(v); }
bool is_label(const Value& v) { return std::holds_alternative<std::string>(v); }

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_value(const Value& v) {
  if (const bool* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  if (const double* d = std::get_if<double>(&v)) return format_real(*d);
  return std::get<std::string>(v);
}

Domain Domain::boolean() {
  Domain d;
  d.kind_ = Kind::Bool;
  return d;
}

Domain Domain::finite(std::vector<std::string> labels) {
  if (labels.empty())
    throw ValidationError("finite domain must have at least one label");
  Domain d;
  d.kind_ = Kind::Finite;
  d.labels_ = std::move(labels);
  return d;
}

Domain Domain::real_interval(double lo, double hi) {
  if (!(lo <= hi))
    throw ValidationError("real interval requires lower <= upper, got [" +
                          format_real(lo) + ", " + format_real(hi) + "]");
  Domain d;
  d.kind_ = Kind::Real;
  d.lo_ = lo;
  d.hi_ = hi;
  return d;
}

ValueType Domain::value_type() const {
  switch (kind_) {
    case Kind::Bool: return ValueType::Bool;
    case Kind::Finite: return ValueType::Label;
    case Kind::Real: return ValueType::Real;
  }
  return ValueType::Unknown;
}

bool Domain::contains(const Value& v) const {
  switch (kind_) {
    case Kind::Bool:
      return is_bool(v);
    case Kind::Finite: {
      if (!is_label(v)) return false;
      const std::string& s = std::get<std::string>(v);
      for (const auto& l : labels_)
        if (l == s) return true;
      return false;
    }
    case Kind::Real: {
      if (!is_real(v)) return false;
      double d = std::get<double>(v);
      return std::isfinite(d) && d >= lo_ - 1e-9 && d <= hi_ + 1e-9;
    }
  }
  return false;
}

std::vector<Value> Domain::enumerate() const {
  switch (kind_) {
    case Kind::Bool: return {Value(false), Value(true)};
    case Kind::Finite: {
      std::vector<Value> out;
      out.reserve(labels_.size());
      for (const auto& l : labels_) out.emplace_back(l);
      return out;
    }
    case Kind::Real:
      throw EvalError("real interval domain cannot be enumerated");
  }
  return {};
}

std::string Domain::describe() const {
  switch (kind_) {
    case Kind::Bool: return "bool";
    case Kind::Finite: {
      std::string s = "{";
      for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (i) s += ", ";
        s += labels_[i];
      }
      return s + "}";
    }
    case Kind::Real:
      return "[" + format_real(lo_) + ", " + format_real(hi_) + "]";
  }
  return "?";
}

}  // namespace causalprobe
