// Copyright 2026 The Typotrace Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TYPOTRACE_KEYBOARD_H_
#define TYPOTRACE_KEYBOARD_H_

#include <array>
#include <optional>
#include <string_view>

namespace typotrace {

// Position of a key on the axis-aligned QWERTY grid, in key units.
struct GridCoord {
  int row = 0;
  int col = 0;

  friend bool operator==(const GridCoord&, const GridCoord&) = default;
};

// QWERTY geometry over the DNS hostname alphabet:
//
//   row 0:  1 2 3 4 5 6 7 8 9 0 -
//   row 1:  q w e r t y u i o p
//   row 2:  a s d f g h j k l
//   row 3:  z x c v b n m _ .
//
// Row stagger is ignored. '-' sits in a virtual eleventh column.
class KeyboardLayout {
 public:
  static constexpr int kRows = 4;
  static constexpr int kCols = 11;

  static const KeyboardLayout& Qwerty();

  // Lowercase letters, digits, '.', '-'.
  static constexpr std::string_view Alphabet() {
    return "abcdefghijklmnopqrstuvwxyz0123456789.-";
  }

  bool Supports(char c) const;
  // Uppercase input is folded. Throws kUnsupportedCharacter.
  GridCoord Position(char c) const;
  // Chebyshev distance between the two keys.
  int Distance(char a, char b) const;

 private:
  KeyboardLayout();

  std::array<std::optional<GridCoord>, 128> keys_{};
};

inline GridCoord KeyPosition(char c) {
  return KeyboardLayout::Qwerty().Position(c);
}

inline int KeyboardDistance(char a, char b) {
  return KeyboardLayout::Qwerty().Distance(a, b);
}

char FoldCase(char c);

}  // namespace typotrace

#endif  // TYPOTRACE_KEYBOARD_H_
