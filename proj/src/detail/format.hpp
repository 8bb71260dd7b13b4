#pragma once

#include <complex>
#include <sstream>
#include <string>

namespace chfn::detail {

// Round-trip formatting for diagnostics.
template <class T>
std::string fmt(const T& v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace chfn::detail
