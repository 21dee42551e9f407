#include "ncwnnm/measurements.hpp"

#include <bit>
#include <cstring>
#include <sstream>

#include "ncwnnm/errors.hpp"

namespace ncw {
namespace {

constexpr const char* kMagic = "NCWNNM-CS 1";

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out |= ((v >> (8 * i)) & 0xFF) << (8 * (7 - i));
    return out;
  }
}

}  // namespace

bool looks_like_measurements(const std::string& bytes) { return bytes.rfind(std::string(kMagic) + "\n", 0) == 0; }

std::string encode_measurements(const MeasurementFile& file) {
  std::ostringstream head;
  head << kMagic << '\n'
       << "block " << file.block << '\n'
       << "height " << file.height << '\n'
       << "width " << file.width << '\n'
       << "measurements " << file.measurements << '\n'
       << "seed " << file.seed << '\n'
       << "count " << file.values.size() << '\n'
       << "end_header\n";
  std::string out = head.str();
  const std::size_t offset = out.size();
  out.resize(offset + static_cast<std::size_t>(file.values.size()) * 8);
  for (Eigen::Index i = 0; i < file.values.size(); ++i) {
    const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(file.values[i]));
    std::memcpy(out.data() + offset + static_cast<std::size_t>(i) * 8, &bits, 8);
  }
  return out;
}

MeasurementFile decode_measurements(const std::string& bytes) {
  if (!looks_like_measurements(bytes)) throw DataError("not a measurement file");
  const std::string end_marker = "\nend_header\n";
  const auto end = bytes.find(end_marker);
  if (end == std::string::npos) throw DataError("measurement file header is not terminated");
  std::istringstream head(bytes.substr(0, end));
  std::string line;
  std::getline(head, line);  // magic

  MeasurementFile file;
  long long count = -1;
  while (std::getline(head, line)) {
    std::istringstream fields(line);
    std::string key;
    long long value = 0;
    if (!(fields >> key >> value) || value < 0) throw DataError("bad measurement header line: " + line);
    if (key == "block") file.block = static_cast<int>(value);
    else if (key == "height") file.height = static_cast<int>(value);
    else if (key == "width") file.width = static_cast<int>(value);
    else if (key == "measurements") file.measurements = static_cast<int>(value);
    else if (key == "seed") file.seed = static_cast<std::uint64_t>(value);
    else if (key == "count") count = value;
    else throw DataError("unknown measurement header key: " + key);
  }
  if (file.block != BlockProjectionOperator::kBlock) throw DataError("unsupported block size");
  if (count < 0) throw DataError("measurement header lacks a count");
  const std::size_t offset = end + end_marker.size();
  if (bytes.size() != offset + static_cast<std::size_t>(count) * 8)
    throw DataError("measurement payload length does not match its header");
  file.values.resize(count);
  for (long long i = 0; i < count; ++i) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, bytes.data() + offset + static_cast<std::size_t>(i) * 8, 8);
    file.values[i] = std::bit_cast<double>(to_little_endian(bits));
  }
  return file;
}

}  // namespace ncw
