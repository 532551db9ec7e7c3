#pragma once

#include <iosfwd>
#include <string>

#include "ssgauss/sampler.hpp"

namespace ssgauss {

/// Binary layout: the line "SSGPATH1", one line of JSON header (process,
/// grid, seed, method, path count, layout, config hash, library version),
/// then paths * dim * n little-endian float64 values in PathBatch order.
void write_path_batch(std::ostream& out, const PathBatch& batch, const std::string& config_hash);
void write_path_batch(const std::string& filename, const PathBatch& batch,
                      const std::string& config_hash);

PathBatch read_path_batch(std::istream& in);
PathBatch read_path_batch(const std::string& filename);

/// JSON header text for a batch (single line, no trailing newline).
std::string path_batch_header(const PathBatch& batch, const std::string& config_hash);

}  // namespace ssgauss
