#pragma once

#include <iosfwd>
#include <string>

#include "bayesdl/core/types.hpp"

namespace bayesdl {

/// One CSV line per matrix row, '.' decimal separator, shortest exact digits.
void write_matrix_csv(std::ostream& out, const Matrix& m);
void write_matrix_csv(const std::string& path, const Matrix& m);
Matrix read_matrix_csv(std::istream& in);
Matrix read_matrix_csv(const std::string& path);

}  // namespace bayesdl
