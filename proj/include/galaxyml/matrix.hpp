#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace galaxyml {

using Vector = std::vector<double>;
using Matrix = std::vector<Vector>;  // row-major, rectangular by convention

inline std::size_t row_count(const Matrix& m) { return m.size(); }
inline std::size_t col_count(const Matrix& m) { return m.empty() ? 0 : m.front().size(); }

inline void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace galaxyml
