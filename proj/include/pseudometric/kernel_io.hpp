#pragma once

#include <string>

#include "pseudometric/kernel.hpp"

namespace pseudometric {

/// Header comments for the singular coefficients and the grid, then
/// "x,y,re,im" rows in row-major node order, all floats as %.12e.
void write_kernel_csv(const Kernel& k, const std::string& path);
/// Throws ConfigError on malformed input.
Kernel read_kernel_csv(const std::string& path);

/// P2 graymap of |smooth|, rows are x; min/max recorded in a comment.
void write_kernel_pgm(const Kernel& k, const std::string& path);

} // namespace pseudometric
