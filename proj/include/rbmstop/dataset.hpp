#pragma once

// Training sets and their plain-text file format:
//
//   # name=<name> visible=<V> n=<N>
//   0110...        (N lines of V characters '0'/'1', LF terminated)

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rbmstop/rbm.hpp"

namespace rbmstop {

struct Dataset {
  std::string name;
  Eigen::Index visible_len = 0;
  std::vector<BinaryVector> samples;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }

  bool operator==(const Dataset& o) const {
    if (name != o.name || visible_len != o.visible_len || samples.size() != o.samples.size()) return false;
    for (std::size_t k = 0; k < samples.size(); ++k)
      if (samples[k] != o.samples[k]) return false;
    return true;
  }
};

/// "0101" -> [0,1,0,1].
inline BinaryVector bits_from_string(std::string_view s) {
  BinaryVector v(static_cast<Eigen::Index>(s.size()));
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] != '0' && s[k] != '1') throw std::invalid_argument("bits_from_string: non-binary character");
    v[static_cast<Eigen::Index>(k)] = s[k] == '1' ? 1.0 : 0.0;
  }
  return v;
}

inline std::string bits_to_string(const BinaryVector& v) {
  std::string s(static_cast<std::size_t>(v.size()), '0');
  for (Eigen::Index k = 0; k < v.size(); ++k) s[static_cast<std::size_t>(k)] = v[k] != 0.0 ? '1' : '0';
  return s;
}

/// 4x4 images with a subset of rows filled (masks 0..15 ascending, bit r of
/// the mask read most-significant first), followed by the column images not
/// already present. Pixels are flattened row-major.
inline Dataset generate_bars_and_stripes() {
  constexpr int side = 4;
  Dataset d{"bs", side * side, {}};
  auto contains = [&d](const BinaryVector& v) {
    for (const auto& s : d.samples)
      if (s == v) return true;
    return false;
  };
  for (int orientation = 0; orientation < 2; ++orientation) {
    for (int mask = 0; mask < (1 << side); ++mask) {
      BinaryVector img = BinaryVector::Zero(side * side);
      for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c) {
          const int line = orientation == 0 ? r : c;
          if ((mask >> (side - 1 - line)) & 1) img[r * side + c] = 1.0;
        }
      if (!contains(img)) d.samples.push_back(std::move(img));
    }
  }
  return d;
}

enum class ShiftMode { Cyclic, EndOff };

/// Shift of an 8-bit pattern written most-significant bit first. A left
/// shift moves every bit one position towards the front.
inline std::uint8_t shift_pattern(std::uint8_t p, int direction, ShiftMode mode) {
  if (direction == 0) return p;
  if (direction < 0) {
    const std::uint8_t carry = mode == ShiftMode::Cyclic ? static_cast<std::uint8_t>(p >> 7) : 0;
    return static_cast<std::uint8_t>((p << 1) | carry);
  }
  const std::uint8_t carry = mode == ShiftMode::Cyclic ? static_cast<std::uint8_t>((p & 1) << 7) : 0;
  return static_cast<std::uint8_t>((p >> 1) | carry);
}

/// Label codes in canonical order and the shift each selects
/// (-1 left, 0 copy, +1 right).
inline constexpr struct {
  const char* code;
  int direction;
} kShifterLabels[] = {{"001", -1}, {"010", 0}, {"100", +1}};

/// [8-bit pattern][3-bit label][shifted pattern], patterns ascending, labels
/// in canonical order.
inline Dataset generate_labeled_shifter(ShiftMode mode = ShiftMode::Cyclic) {
  Dataset d{"lse", 19, {}};
  d.samples.reserve(768);
  for (int p = 0; p < 256; ++p) {
    for (const auto& label : kShifterLabels) {
      const auto pattern = static_cast<std::uint8_t>(p);
      const std::uint8_t shifted = shift_pattern(pattern, label.direction, mode);
      BinaryVector v(19);
      for (int k = 0; k < 8; ++k) v[k] = (pattern >> (7 - k)) & 1;
      for (int k = 0; k < 3; ++k) v[8 + k] = label.code[k] == '1' ? 1.0 : 0.0;
      for (int k = 0; k < 8; ++k) v[11 + k] = (shifted >> (7 - k)) & 1;
      d.samples.push_back(std::move(v));
    }
  }
  return d;
}

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

inline void write_dataset(const Dataset& d, std::ostream& out) {
  out << "# name=" << d.name << " visible=" << d.visible_len << " n=" << d.size() << '\n';
  for (const auto& s : d.samples) out << bits_to_string(s) << '\n';
}

inline void write_dataset(const Dataset& d, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_dataset(d, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline Dataset read_dataset(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty dataset", 0);
  if (line.rfind("# ", 0) != 0) throw ParseError("missing header '# name=<name> visible=<V> n=<N>'", 1);

  Dataset d;
  long long declared_n = -1;
  std::istringstream header(line.substr(2));
  std::string field;
  while (header >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw ParseError("malformed header field '" + field + "'", 1);
    const std::string key = field.substr(0, eq), value = field.substr(eq + 1);
    try {
      if (key == "name") {
        d.name = value;
      } else if (key == "visible") {
        d.visible_len = std::stol(value);
      } else if (key == "n") {
        declared_n = std::stoll(value);
      } else {
        throw ParseError("unknown header key '" + key + "'", 1);
      }
    } catch (const std::logic_error&) {
      throw ParseError("bad header value '" + field + "'", 1);
    }
  }
  if (d.visible_len <= 0) throw ParseError("header must give visible > 0", 1);
  if (declared_n < 0) throw ParseError("header must give n", 1);

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (static_cast<Eigen::Index>(line.size()) != d.visible_len) {
      throw ParseError("expected " + std::to_string(d.visible_len) + " bits, got " +
                           std::to_string(line.size()) + " characters",
                       lineno);
    }
    for (char ch : line)
      if (ch != '0' && ch != '1') throw ParseError(std::string("non-binary character '") + ch + "'", lineno);
    d.samples.push_back(bits_from_string(line));
  }
  if (d.samples.empty()) throw ParseError("empty dataset", 0);
  if (static_cast<long long>(d.samples.size()) != declared_n) {
    throw ParseError("header declares n=" + std::to_string(declared_n) + " but file has " +
                         std::to_string(d.samples.size()) + " samples",
                     0);
  }
  return d;
}

inline Dataset read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_dataset(in);
}

}  // namespace rbmstop
