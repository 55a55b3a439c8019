#pragma once

#include <string>

namespace sitpyr {

/// Doubles formatted with 17 significant digits (value-preserving).
std::string csv_num(double v);

/// Write content to path atomically (write to a temp file, then rename).
void atomic_write(const std::string& path, const std::string& content);

} // namespace sitpyr
