#include <gtest/gtest.h>

#include <set>
#include <sstream>
#include <string>

#include "rbmstop/dataset.hpp"

using namespace rbmstop;

namespace {

bool is_bars_or_stripes(const std::string& s) {
  bool rows = true, cols = true;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      if (s[static_cast<std::size_t>(r * 4 + c)] != s[static_cast<std::size_t>(r * 4)]) rows = false;
      if (s[static_cast<std::size_t>(r * 4 + c)] != s[static_cast<std::size_t>(c)]) cols = false;
    }
  return rows || cols;
}

// Rotate an MSB-first bit string by one position.
std::string rotate(const std::string& s, int direction) {
  if (direction < 0) return s.substr(1) + s[0];
  if (direction > 0) return s.back() + s.substr(0, s.size() - 1);
  return s;
}

}  // namespace

TEST(BarsAndStripes, ThirtyDistinctImages) {
  const Dataset d = generate_bars_and_stripes();
  EXPECT_EQ(d.size(), 30u);
  EXPECT_EQ(d.visible_len, 16);
  std::set<std::string> seen;
  for (const auto& s : d.samples) {
    const std::string str = bits_to_string(s);
    EXPECT_TRUE(is_bars_or_stripes(str)) << str;
    seen.insert(str);
  }
  EXPECT_EQ(seen.size(), 30u);
}

TEST(BarsAndStripes, CoversEveryValidImage) {
  const Dataset d = generate_bars_and_stripes();
  std::set<std::string> seen;
  for (const auto& s : d.samples) seen.insert(bits_to_string(s));
  int valid = 0;
  for (unsigned k = 0; k < (1u << 16); ++k) {
    std::string s(16, '0');
    for (int t = 0; t < 16; ++t) s[static_cast<std::size_t>(t)] = (k >> t) & 1u ? '1' : '0';
    if (is_bars_or_stripes(s)) {
      ++valid;
      EXPECT_TRUE(seen.count(s)) << s;
    }
  }
  EXPECT_EQ(valid, 30);
}

TEST(BarsAndStripes, RowMaskOrdering) {
  const Dataset d = generate_bars_and_stripes();
  EXPECT_EQ(bits_to_string(d.samples[0]), "0000000000000000");
  EXPECT_EQ(bits_to_string(d.samples[5]), "0000111100001111");
  EXPECT_EQ(bits_to_string(d.samples[15]), "1111111111111111");
  EXPECT_EQ(bits_to_string(d.samples[16]), "0001000100010001");
}

TEST(LabeledShifter, SizeAndLayout) {
  const Dataset d = generate_labeled_shifter();
  EXPECT_EQ(d.size(), 768u);
  EXPECT_EQ(d.visible_len, 19);
  std::set<std::string> seen;
  for (const auto& s : d.samples) {
    const std::string str = bits_to_string(s);
    const std::string label = str.substr(8, 3);
    EXPECT_TRUE(label == "001" || label == "010" || label == "100") << str;
    seen.insert(str);
  }
  EXPECT_EQ(seen.size(), 768u);
}

TEST(LabeledShifter, WorkedExample) {
  const Dataset d = generate_labeled_shifter();
  const std::string want = std::string("10110001") + "001" + "01100011";
  bool found = false;
  for (const auto& s : d.samples) found |= bits_to_string(s) == want;
  EXPECT_TRUE(found);
}

TEST(LabeledShifter, TargetIsCyclicShiftOfPattern) {
  const Dataset d = generate_labeled_shifter(ShiftMode::Cyclic);
  for (const auto& s : d.samples) {
    const std::string str = bits_to_string(s);
    const std::string pattern = str.substr(0, 8), label = str.substr(8, 3), target = str.substr(11);
    const int dir = label == "001" ? -1 : label == "010" ? 0 : 1;
    EXPECT_EQ(target, rotate(pattern, dir)) << str;
  }
}

// (pattern, label) determines the target, and (target, label) recovers the
// pattern under cyclic shifts.
TEST(LabeledShifter, Invertible) {
  const Dataset d = generate_labeled_shifter(ShiftMode::Cyclic);
  std::set<std::string> heads, tails;
  for (const auto& s : d.samples) {
    const std::string str = bits_to_string(s);
    heads.insert(str.substr(0, 11));
    tails.insert(str.substr(8));
  }
  EXPECT_EQ(heads.size(), 768u);
  EXPECT_EQ(tails.size(), 768u);
}

TEST(ShiftPattern, EndOffDropsCarry) {
  EXPECT_EQ(shift_pattern(0b10000001, -1, ShiftMode::EndOff), 0b00000010);
  EXPECT_EQ(shift_pattern(0b10000001, +1, ShiftMode::EndOff), 0b01000000);
  EXPECT_EQ(shift_pattern(0b10000001, -1, ShiftMode::Cyclic), 0b00000011);
  EXPECT_EQ(shift_pattern(0b10000001, +1, ShiftMode::Cyclic), 0b11000000);
  for (unsigned p = 0; p < 256; ++p) {
    const auto v = static_cast<std::uint8_t>(p);
    EXPECT_EQ(shift_pattern(shift_pattern(v, -1, ShiftMode::Cyclic), +1, ShiftMode::Cyclic), v);
  }
}

TEST(DatasetIo, RoundTrip) {
  for (const Dataset& d : {generate_bars_and_stripes(), generate_labeled_shifter()}) {
    std::stringstream ss;
    write_dataset(d, ss);
    EXPECT_EQ(read_dataset(ss), d);
  }
}

TEST(DatasetIo, HeaderFormat) {
  std::stringstream ss;
  write_dataset(generate_bars_and_stripes(), ss);
  std::string first;
  std::getline(ss, first);
  EXPECT_EQ(first, "# name=bs visible=16 n=30");
}

TEST(DatasetIo, NonBinaryCharacterReportsLine) {
  std::stringstream ss("# name=x visible=3 n=2\n010\n012\n");
  try {
    read_dataset(ss);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(DatasetIo, EmptyInputRejected) {
  std::stringstream blank("");
  try {
    read_dataset(blank);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("empty dataset"), std::string::npos);
  }
  std::stringstream header_only("# name=x visible=3 n=0\n");
  EXPECT_THROW(read_dataset(header_only), ParseError);
}

TEST(DatasetIo, LengthAndCountMismatches) {
  std::stringstream wrong_len("# name=x visible=3 n=1\n0101\n");
  EXPECT_THROW(read_dataset(wrong_len), ParseError);
  std::stringstream wrong_n("# name=x visible=2 n=3\n01\n10\n");
  EXPECT_THROW(read_dataset(wrong_n), ParseError);
  std::stringstream no_header("010\n");
  EXPECT_THROW(read_dataset(no_header), ParseError);
}
