#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tubal/synth.hpp"
#include "tubal/tensor.hpp"

namespace tubal::io {

/// Binary tensor container `.t3b`: magic bytes "T3B1", then three
/// little-endian unsigned 64-bit dims (n1, n2, n3), then n1·n2·n3
/// little-endian IEEE-754 float64 values in slice-major order (the frontal
/// slice index varies slowest; within a slice the row index varies
/// fastest, matching Tensor3's linear layout). save → load round trips are
/// bit-identical. Malformed or truncated files throw FormatError carrying
/// the offending byte offset.
Tensor3 load_tensor(const std::string& path);
void save_tensor(const Tensor3& t, const std::string& path);

/// Masks travel as 0.0/1.0 tensors in the same container; loading maps any
/// nonzero entry to "observed".
Mask tensor_to_mask(const Tensor3& t);
Tensor3 mask_to_tensor(const Mask& m);

/// Loads a directory of binary 8-bit grayscale PGM ("P5", maxval 255) files
/// — taken in lexicographic filename order — as a Tensor3 of dims
/// (height, width, file count) with values k/255. Throws InconsistentStack
/// if the images disagree in size, FormatError for malformed files, and
/// InvalidConfig if the directory holds no .pgm files.
Tensor3 load_image_stack(const std::string& dir);

/// Shortest decimal string that round-trips to the same double ('.'
/// separator; "inf"/"-inf"/"nan" for non-finite values).
std::string format_double(double v);

/// Success-ratio grid as CSV: header row of the rate/sparsity axis with an
/// empty corner cell, then one row per rank. '.' decimal separator, LF line
/// endings, UTF-8; byte-stable for identical grids.
void write_grid_csv(const synth::SuccessGrid& grid, const std::string& path);

/// Record of one CLI run: enough to reproduce the outputs on the
/// sequential path. Serialized as JSON next to the primary output.
struct RunManifest {
  std::string command;  // argv, space-joined
  std::vector<std::string> inputs;
  std::vector<std::pair<std::string, std::string>> config;  // resolved
  std::uint64_t seed = 0;
  std::string version;
  double duration_seconds = 0.0;
  std::vector<std::string> outputs;
};

/// Writes the manifest atomically (temp file + rename).
void write_manifest(const RunManifest& m, const std::string& path);

}  // namespace tubal::io
