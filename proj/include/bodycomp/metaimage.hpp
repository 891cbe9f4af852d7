#pragma once

#include <filesystem>
#include <string>

#include "bodycomp/volume.hpp"

// MetaImage (.mhd header + .raw payload) reader and writer.
//
// Supported: NDims = 3, ElementType MET_SHORT or MET_UCHAR, little-endian,
// uncompressed, single channel. ElementDataFile may be a path relative to the
// header or LOCAL (payload follows the header in the same file). Unknown keys
// are ignored. The writer always emits a separate .raw file.
namespace bodycomp {

enum class ElementType { Short, UChar };

struct MetaHeader {
  Geometry geometry;
  ElementType element_type = ElementType::Short;
  std::string data_file;  // as written in the header; "LOCAL" for inline data
};

MetaHeader read_header(const std::filesystem::path& path);

// HU values are clamped to [kMinHu, kMaxHu] on ingest.
CtVolume read_ct(const std::filesystem::path& path);
// Nonzero elements become true.
BinaryMask read_mask(const std::filesystem::path& path);
// Requires MET_UCHAR with every code in [0, kMaxLabelCode].
LabelMap read_labels(const std::filesystem::path& path);

// Writes `<stem>.mhd` (the given path) and `<stem>.raw` beside it.
void write_mhd(const CtVolume& volume, const std::filesystem::path& path);
void write_mhd(const BinaryMask& mask, const std::filesystem::path& path);
void write_mhd(const LabelMap& labels, const std::filesystem::path& path);

// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace bodycomp
