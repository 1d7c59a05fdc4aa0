#include "lungkit/metaimage.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <sstream>
#include <string>

namespace lungkit {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::vector<double> parse_numbers(const std::string& key, const std::string& text) {
  std::vector<double> out;
  const char* p = text.data();
  const char* end = text.data() + text.size();
  while (p < end) {
    while (p < end && (*p == ' ' || *p == '\t')) ++p;
    if (p == end) break;
    double v = 0.0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc{}) throw Error(ErrorCode::InvalidHeader, "unparsable value for " + key + ": " + text);
    out.push_back(v);
    p = next;
  }
  return out;
}

Vec3 triple(const std::string& key, const std::string& text) {
  const auto v = parse_numbers(key, text);
  if (v.size() != 3) throw Error(ErrorCode::InvalidHeader, key + " must have 3 components");
  return {v[0], v[1], v[2]};
}

bool parse_bool(const std::string& key, const std::string& text) {
  const auto t = lower(text);
  if (t == "true" || t == "1") return true;
  if (t == "false" || t == "0") return false;
  throw Error(ErrorCode::InvalidHeader, "expected True/False for " + key + ": " + text);
}

std::size_t element_size(ElementType t) {
  switch (t) {
    case ElementType::Short: return 2;
    case ElementType::UChar: return 1;
    case ElementType::Float: return 4;
  }
  return 0;
}

const char* element_name(ElementType t) {
  switch (t) {
    case ElementType::Short: return "MET_SHORT";
    case ElementType::UChar: return "MET_UCHAR";
    case ElementType::Float: return "MET_FLOAT";
  }
  return "";
}

ElementType parse_element_type(const std::string& name) {
  if (name == "MET_SHORT") return ElementType::Short;
  if (name == "MET_UCHAR") return ElementType::UChar;
  if (name == "MET_FLOAT") return ElementType::Float;
  throw Error(ErrorCode::UnsupportedElementType, "unsupported ElementType " + name);
}

struct Header {
  std::map<std::string, std::string> fields;
  std::size_t data_offset = 0;  // for ElementDataFile = LOCAL

  const std::string* find(const std::string& key) const {
    auto it = fields.find(key);
    return it == fields.end() ? nullptr : &it->second;
  }
  const std::string& require(const std::string& key) const {
    if (const auto* v = find(key)) return *v;
    throw Error(ErrorCode::MissingHeaderKey, "MetaImage header lacks required key " + key);
  }
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Header parse_header(const std::string& bytes) {
  Header h;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    auto eol = bytes.find('\n', pos);
    const std::size_t next = eol == std::string::npos ? bytes.size() : eol + 1;
    const std::string line = trim(std::string_view(bytes).substr(pos, next - pos));
    pos = next;
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::InvalidHeader, "malformed header line: " + line);
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    const bool last = key == "ElementDataFile";
    h.fields[std::move(key)] = std::move(value);
    if (last) break;  // ElementDataFile terminates the header
  }
  h.data_offset = pos;
  return h;
}

bool host_is_little_endian() { return std::endian::native == std::endian::little; }

template <typename T>
T load(const char* p, bool swap) {
  std::array<char, sizeof(T)> raw;
  std::memcpy(raw.data(), p, sizeof(T));
  if (swap) std::reverse(raw.begin(), raw.end());
  return std::bit_cast<T>(raw);
}

template <typename T>
void store(char* p, T value) {
  auto raw = std::bit_cast<std::array<char, sizeof(T)>>(value);
  if (!host_is_little_endian()) std::reverse(raw.begin(), raw.end());
  std::memcpy(p, raw.data(), sizeof(T));
}

void check_transform(const Header& h) {
  for (const char* key : {"TransformMatrix", "Rotation", "Orientation"}) {
    const auto* v = h.find(key);
    if (!v) continue;
    const auto m = parse_numbers(key, *v);
    static constexpr std::array<double, 9> kIdentity{1, 0, 0, 0, 1, 0, 0, 0, 1};
    if (m.size() != 9 || !std::equal(m.begin(), m.end(), kIdentity.begin()))
      warn(std::string(key) + " is not identity; direction cosines are ignored");
  }
}

void write_image_files(const Geometry& g, ElementType element_type, std::string_view raw,
                       const fs::path& header_path) {
  fs::path raw_path = header_path;
  raw_path.replace_extension(".raw");
  std::ostringstream hdr;
  hdr << "ObjectType = Image\n"
      << "NDims = 3\n"
      << "BinaryData = True\n"
      << "BinaryDataByteOrderMSB = False\n"
      << "CompressedData = False\n"
      << "DimSize = " << g.dims().x << ' ' << g.dims().y << ' ' << g.dims().z << '\n'
      << "ElementSpacing = " << format_double(g.spacing().x) << ' ' << format_double(g.spacing().y) << ' '
      << format_double(g.spacing().z) << '\n'
      << "Offset = " << format_double(g.origin().x) << ' ' << format_double(g.origin().y) << ' '
      << format_double(g.origin().z) << '\n'
      << "ElementType = " << element_name(element_type) << '\n'
      << "ElementDataFile = " << raw_path.filename().string() << '\n';

  auto dump = [](const fs::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  };
  dump(raw_path, raw);
  dump(header_path, hdr.str());
}

}  // namespace

Volume3D read_volume(const fs::path& header_path) {
  const std::string header_bytes = read_file(header_path);
  const Header h = parse_header(header_bytes);

  if (const auto* ndims = h.find("NDims"); !ndims || trim(*ndims) != "3") {
    if (!ndims) throw Error(ErrorCode::MissingHeaderKey, "MetaImage header lacks required key NDims");
    throw Error(ErrorCode::InvalidHeader, "only 3-dimensional images are supported (NDims = " + *ndims + ")");
  }
  if (const auto* c = h.find("CompressedData"); c && parse_bool("CompressedData", *c))
    throw Error(ErrorCode::CompressedDataUnsupported, "compressed MetaImage data is not supported");
  if (const auto* b = h.find("BinaryData"); b && !parse_bool("BinaryData", *b))
    throw Error(ErrorCode::InvalidHeader, "ASCII MetaImage data is not supported");
  if (const auto* ch = h.find("ElementNumberOfChannels"); ch && trim(*ch) != "1")
    throw Error(ErrorCode::UnsupportedElementType, "multi-channel images are not supported");

  const Vec3 dimsd = triple("DimSize", h.require("DimSize"));
  const ElementType type = parse_element_type(h.require("ElementType"));
  const std::string& data_file = h.require("ElementDataFile");
  const Vec3 spacing = h.find("ElementSpacing") ? triple("ElementSpacing", *h.find("ElementSpacing"))
                                                : Vec3{1.0, 1.0, 1.0};
  Vec3 origin{};
  if (const auto* o = h.find("Offset")) origin = triple("Offset", *o);
  else if (const auto* o2 = h.find("Origin")) origin = triple("Origin", *o2);

  bool msb = false;
  for (const char* key : {"ElementByteOrderMSB", "BinaryDataByteOrderMSB"})
    if (const auto* v = h.find(key)) msb = parse_bool(key, *v);
  check_transform(h);

  auto to_dim = [](double d) {
    if (d < 1 || d != std::floor(d)) throw Error(ErrorCode::InvalidHeader, "DimSize entries must be positive integers");
    return static_cast<std::int64_t>(d);
  };
  const Geometry geometry({to_dim(dimsd.x), to_dim(dimsd.y), to_dim(dimsd.z)}, spacing, origin);
  const std::size_t expected = geometry.voxel_count() * element_size(type);

  std::string payload_storage;
  std::string_view payload;
  if (data_file == "LOCAL") {
    payload = std::string_view(header_bytes).substr(h.data_offset);
  } else {
    const fs::path raw = header_path.parent_path() / data_file;
    if (!fs::exists(raw)) throw Error(ErrorCode::IoFailure, "ElementDataFile not found: " + raw.string());
    payload_storage = read_file(raw);
    payload = payload_storage;
  }
  if (const auto* hs = h.find("HeaderSize")) {
    const auto skip = parse_numbers("HeaderSize", *hs);
    if (skip.size() == 1 && skip[0] < 0) {
      if (payload.size() >= expected) payload = payload.substr(payload.size() - expected);
    } else if (skip.size() == 1) {
      const auto n = static_cast<std::size_t>(skip[0]);
      payload = n <= payload.size() ? payload.substr(n) : std::string_view{};
    }
  }
  if (payload.size() != expected)
    throw Error(ErrorCode::SizeMismatch, "raw data holds " + std::to_string(payload.size()) +
                                             " bytes, expected " + std::to_string(expected));

  const bool swap = msb == host_is_little_endian();
  std::vector<float> values(geometry.voxel_count());
  const char* p = payload.data();
  switch (type) {
    case ElementType::Short:
      for (auto& v : values) { v = static_cast<float>(load<std::int16_t>(p, swap)); p += 2; }
      break;
    case ElementType::UChar:
      for (auto& v : values) { v = static_cast<float>(static_cast<unsigned char>(*p)); ++p; }
      break;
    case ElementType::Float:
      for (auto& v : values) { v = load<float>(p, swap); p += 4; }
      break;
  }
  return Volume3D(geometry, std::move(values));
}

void write_volume(const Volume3D& volume, const fs::path& header_path, ElementType element_type) {
  const std::size_t n = volume.size();
  std::string raw(n * element_size(element_type), '\0');
  char* p = raw.data();
  auto rounded = [&](float v, double lo, double hi) {
    const double r = std::round(static_cast<double>(v));  // half away from zero
    if (r < lo || r > hi)
      throw Error(ErrorCode::RangeOverflow, "value " + format_double(v) + " does not fit " +
                                                element_name(element_type));
    return r;
  };
  switch (element_type) {
    case ElementType::Short:
      for (float v : volume.values()) {
        store<std::int16_t>(p, static_cast<std::int16_t>(rounded(v, -32768.0, 32767.0)));
        p += 2;
      }
      break;
    case ElementType::UChar:
      for (float v : volume.values()) *p++ = static_cast<char>(static_cast<unsigned char>(rounded(v, 0.0, 255.0)));
      break;
    case ElementType::Float:
      for (float v : volume.values()) { store<float>(p, v); p += 4; }
      break;
  }

  write_image_files(volume.geometry(), element_type, raw, header_path);
}

Mask3D volume_to_mask(const Volume3D& volume, double threshold) {
  std::vector<std::uint8_t> bits(volume.size());
  const auto values = volume.values();
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = static_cast<double>(values[i]) > threshold ? 1 : 0;
  return Mask3D(volume.geometry(), std::move(bits));
}

Mask3D read_mask(const fs::path& header_path) { return volume_to_mask(read_volume(header_path), 0.5); }

void write_mask(const Mask3D& mask, const fs::path& header_path) {
  const auto bits = mask.bits();
  write_image_files(mask.geometry(), ElementType::UChar,
                    std::string_view(reinterpret_cast<const char*>(bits.data()), bits.size()), header_path);
}

}  // namespace lungkit
