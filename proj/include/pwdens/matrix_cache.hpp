#ifndef PWDENS_MATRIX_CACHE_HPP
#define PWDENS_MATRIX_CACHE_HPP

#include "pwdens/discretization.hpp"

#include <optional>
#include <string>

namespace pwdens {

// Flat binary matrix cache.  Layout (little-endian, no padding):
//   magic "PWDM", u32 version,
//   header: u64 map_hash, f64 alpha, f64 x0, f64 tail_tol, i32 m, i32 B,
//   mesh lo/hi (f64), u8 dense,
//   dense: n*n f64 row-major;  sparse: i64 row_ptr[n+1], i32 col[], f64 val[],
//   raw_row_sum f64[n], tail_row_mass f64[n].
// A cached matrix is reused only when every header field matches the request
// bit-exactly.

void save_matrix(const StochasticMatrix& P, const std::string& path);

std::optional<StochasticMatrix> load_matrix(const std::string& path,
                                            const MatrixHeader& expect);

// $PWDENS_CACHE_DIR/<hex hash>.pwdm, or empty when no cache dir is set
std::string cache_path_for(const MatrixHeader& h);

} // namespace pwdens

#endif
