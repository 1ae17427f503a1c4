#ifndef FMCF_ERRORS_HPP
#define FMCF_ERRORS_HPP

#include <cstdio>
#include <stdexcept>
#include <string>

namespace fmcf {

/// Two routes to the same quantity disagreed beyond tolerance.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A geometric precondition failed at a specific chart point.
class GeometryError : public std::runtime_error {
 public:
  GeometryError(const std::string& what, double x, double y, double value)
      : std::runtime_error(format(what, x, y, value)), x_(x), y_(y), value_(value) {}

  double x() const { return x_; }
  double y() const { return y_; }
  double value() const { return value_; }

 private:
  static std::string format(const std::string& what, double x, double y, double value) {
    char buf[160];
    std::snprintf(buf, sizeof buf, " at (x=%.6g, y=%.6g), value %.6g", x, y, value);
    return what + buf;
  }

  double x_, y_, value_;
};

}  // namespace fmcf

#endif  // FMCF_ERRORS_HPP
