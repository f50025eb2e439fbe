#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace fmenc {

// Shape / dimension contract violations (bad extents, mismatched operands).
class DimError : public std::invalid_argument {
 public:
  explicit DimError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed files: bad magic, truncation, unparseable manifests.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// Bad user-facing configuration. The CLI exits 2 on these.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// NaN/Inf reached an op output, or a gradient went non-finite.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {
inline void cat_into(std::ostringstream&) {}
template <class A, class... R>
void cat_into(std::ostringstream& os, A&& a, R&&... rest) {
  os << std::forward<A>(a);
  cat_into(os, std::forward<R>(rest)...);
}
}  // namespace detail

template <class... A>
std::string cat(A&&... args) {
  std::ostringstream os;
  detail::cat_into(os, std::forward<A>(args)...);
  return os.str();
}

}  // namespace fmenc
