#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "ncwnnm/operators.hpp"

namespace ncw {

/// Block compressive-sensing measurements on disk: an ASCII header
///
///     NCWNNM-CS 1
///     block 32
///     height <rows>
///     width <cols>
///     measurements <M per block>
///     seed <seed>
///     count <total values>
///     end_header
///
/// followed by `count` IEEE-754 doubles, little-endian, in observation order.
struct MeasurementFile {
  int block = BlockProjectionOperator::kBlock;
  int height = 0;
  int width = 0;
  int measurements = 0;
  std::uint64_t seed = 0;
  Observation values;
};

std::string encode_measurements(const MeasurementFile& file);
MeasurementFile decode_measurements(const std::string& bytes);

/// True when the bytes start with the measurement-file magic line.
bool looks_like_measurements(const std::string& bytes);

}  // namespace ncw
