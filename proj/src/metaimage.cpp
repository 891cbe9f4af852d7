#include "bodycomp/metaimage.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <type_traits>
#include <vector>

static_assert(std::endian::native == std::endian::little,
              "MetaImage I/O assumes a little-endian host");

namespace bodycomp {

namespace fs = std::filesystem;

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw IoError("cannot format number");
  return std::string(buf, end);
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

template <class T>
T parse_number(const std::string& token, const std::string& key) {
  T value{};
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw IoError("MetaImage key " + key + ": cannot parse '" + token + "'");
  }
  return value;
}

template <class T>
std::array<T, 3> parse_triple(const std::string& value, const std::string& key) {
  const auto tokens = split_ws(value);
  if (tokens.size() != 3) throw IoError("MetaImage key " + key + " must have 3 values");
  return {parse_number<T>(tokens[0], key), parse_number<T>(tokens[1], key),
          parse_number<T>(tokens[2], key)};
}

bool parse_bool(const std::string& value) {
  return value == "True" || value == "true" || value == "TRUE" || value == "1";
}

struct ParsedHeader {
  MetaHeader header;
  std::streamoff local_offset = -1;  // byte offset of inline data for LOCAL
};

ParsedHeader parse_header(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open MetaImage header " + path.string());

  std::map<std::string, std::string> keys;
  ParsedHeader parsed;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (trim(line).empty()) continue;
      throw IoError("ill-formed MetaImage header line: '" + line + "'");
    }
    const auto key = trim(line.substr(0, eq));
    keys[key] = trim(line.substr(eq + 1));
    // ElementDataFile terminates the header.
    if (key == "ElementDataFile") {
      parsed.local_offset = in.tellg();
      break;
    }
  }

  auto require = [&](const std::string& key) -> const std::string& {
    auto it = keys.find(key);
    if (it == keys.end()) throw IoError("MetaImage header missing required key " + key);
    return it->second;
  };
  auto optional = [&](const std::string& key) -> std::optional<std::string> {
    auto it = keys.find(key);
    if (it == keys.end()) return std::nullopt;
    return it->second;
  };

  if (require("ObjectType") != "Image") throw IoError("MetaImage ObjectType must be Image");
  if (parse_number<int>(require("NDims"), "NDims") != 3) {
    throw IoError("only 3-D MetaImage files are supported");
  }

  MetaHeader& h = parsed.header;
  h.geometry.dims = parse_triple<int>(require("DimSize"), "DimSize");
  if (auto s = optional("ElementSpacing")) h.geometry.spacing = parse_triple<double>(*s, "ElementSpacing");
  if (auto o = optional("Offset")) h.geometry.origin = parse_triple<double>(*o, "Offset");
  try {
    h.geometry.validate();
  } catch (const GeometryError& e) {
    throw IoError(std::string("MetaImage header: ") + e.what());
  }

  const auto& type = require("ElementType");
  if (type == "MET_SHORT") {
    h.element_type = ElementType::Short;
  } else if (type == "MET_UCHAR") {
    h.element_type = ElementType::UChar;
  } else {
    throw IoError("unsupported MetaImage ElementType " + type);
  }

  for (const char* key : {"ElementByteOrderMSB", "BinaryDataByteOrderMSB"}) {
    if (auto v = optional(key); v && parse_bool(*v)) {
      throw IoError("big-endian MetaImage data is not supported");
    }
  }
  if (auto v = optional("CompressedData"); v && parse_bool(*v)) {
    throw IoError("compressed MetaImage data is not supported");
  }
  if (auto v = optional("ElementNumberOfChannels"); v && *v != "1") {
    throw IoError("multi-channel MetaImage data is not supported");
  }
  h.data_file = require("ElementDataFile");
  return parsed;
}

std::size_t element_size(ElementType type) {
  return type == ElementType::Short ? 2 : 1;
}

// Raw payload bytes, validated against the header's dims.
std::vector<char> read_payload(const fs::path& path, const ParsedHeader& parsed) {
  const auto& h = parsed.header;
  const std::size_t expected = h.geometry.voxel_count() * element_size(h.element_type);

  std::ifstream in;
  std::size_t available = 0;
  if (h.data_file == "LOCAL") {
    in.open(path, std::ios::binary);
    in.seekg(0, std::ios::end);
    const auto total = static_cast<std::streamoff>(in.tellg());
    available = static_cast<std::size_t>(total - parsed.local_offset);
    in.seekg(parsed.local_offset);
  } else {
    const fs::path raw = path.parent_path() / h.data_file;
    in.open(raw, std::ios::binary);
    if (!in) throw IoError("cannot open MetaImage data file " + raw.string());
    available = static_cast<std::size_t>(fs::file_size(raw));
  }
  if (available != expected) {
    throw IoError("MetaImage data size " + std::to_string(available) + " bytes, expected " +
                  std::to_string(expected));
  }
  std::vector<char> bytes(expected);
  if (!in.read(bytes.data(), static_cast<std::streamsize>(expected))) {
    throw IoError("short read on MetaImage data for " + path.string());
  }
  return bytes;
}

// Element values widened to int, in file order.
std::vector<int> read_elements(const fs::path& path, Geometry& geometry) {
  const auto parsed = parse_header(path);
  const auto bytes = read_payload(path, parsed);
  geometry = parsed.header.geometry;
  std::vector<int> values(geometry.voxel_count());
  if (parsed.header.element_type == ElementType::Short) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::int16_t v;
      std::memcpy(&v, bytes.data() + 2 * i, 2);
      values[i] = v;
    }
  } else {
    for (std::size_t i = 0; i < values.size(); ++i) {
      values[i] = static_cast<unsigned char>(bytes[i]);
    }
  }
  return values;
}

void write_pair(const Geometry& g, ElementType type, const void* data, const fs::path& path) {
  fs::path header_path = path;
  if (header_path.extension() != ".mhd") header_path += ".mhd";
  fs::path raw_path = header_path;
  raw_path.replace_extension(".raw");

  auto triple = [](const auto& v) {
    std::string out;
    for (int i = 0; i < 3; ++i) {
      if (i) out += ' ';
      if constexpr (std::is_same_v<std::decay_t<decltype(v[0])>, int>) {
        out += std::to_string(v[i]);
      } else {
        out += format_double(v[i]);
      }
    }
    return out;
  };

  {
    std::ofstream out(header_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + header_path.string());
    out << "ObjectType = Image\n"
        << "NDims = 3\n"
        << "BinaryData = True\n"
        << "BinaryDataByteOrderMSB = False\n"
        << "CompressedData = False\n"
        << "Offset = " << triple(g.origin) << "\n"
        << "ElementSpacing = " << triple(g.spacing) << "\n"
        << "DimSize = " << triple(g.dims) << "\n"
        << "ElementType = " << (type == ElementType::Short ? "MET_SHORT" : "MET_UCHAR") << "\n"
        << "ElementDataFile = " << raw_path.filename().string() << "\n";
    if (!out) throw IoError("failed writing " + header_path.string());
  }
  std::ofstream raw(raw_path, std::ios::binary | std::ios::trunc);
  if (!raw) throw IoError("cannot write " + raw_path.string());
  raw.write(static_cast<const char*>(data),
            static_cast<std::streamsize>(g.voxel_count() * element_size(type)));
  if (!raw) throw IoError("failed writing " + raw_path.string());
}

}  // namespace

MetaHeader read_header(const fs::path& path) { return parse_header(path).header; }

CtVolume read_ct(const fs::path& path) {
  Geometry g;
  const auto values = read_elements(path, g);
  CtVolume ct(g);
  for (std::size_t i = 0; i < values.size(); ++i) ct[i] = clamp_hu(values[i]);
  return ct;
}

BinaryMask read_mask(const fs::path& path) {
  Geometry g;
  const auto values = read_elements(path, g);
  BinaryMask mask(g);
  for (std::size_t i = 0; i < values.size(); ++i) mask[i] = values[i] != 0 ? 1 : 0;
  return mask;
}

LabelMap read_labels(const fs::path& path) {
  if (read_header(path).element_type != ElementType::UChar) {
    throw IoError("label maps must be MET_UCHAR: " + path.string());
  }
  Geometry g;
  const auto values = read_elements(path, g);
  LabelMap labels(g);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > kMaxLabelCode) {
      throw IoError("label code " + std::to_string(values[i]) + " out of range in " +
                    path.string());
    }
    labels[i] = static_cast<Label>(values[i]);
  }
  return labels;
}

void write_mhd(const CtVolume& volume, const fs::path& path) {
  write_pair(volume.geometry(), ElementType::Short, volume.data().data(), path);
}

void write_mhd(const BinaryMask& mask, const fs::path& path) {
  std::vector<std::uint8_t> bytes(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) bytes[i] = mask[i] ? 1 : 0;
  write_pair(mask.geometry(), ElementType::UChar, bytes.data(), path);
}

void write_mhd(const LabelMap& labels, const fs::path& path) {
  static_assert(sizeof(Label) == 1);
  write_pair(labels.geometry(), ElementType::UChar, labels.data().data(), path);
}

}  // namespace bodycomp
