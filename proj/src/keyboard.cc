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

#include "typotrace/keyboard.h"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "typotrace/error.h"

namespace typotrace {

namespace {

struct Row {
  int row;
  int first_col;
  std::string_view keys;
};

constexpr Row kKeyRows[] = {
    {0, 0, "1234567890-"},
    {1, 0, "qwertyuiop"},
    {2, 0, "asdfghjkl"},
    {3, 0, "zxcvbnm"},
};

std::string Describe(char c) {
  const auto u = static_cast<unsigned char>(c);
  if (u >= 0x20 && u < 0x7f) return std::string("'") + c + "'";
  static constexpr char kHex[] = "0123456789abcdef";
  return std::string("0x") + kHex[u >> 4] + kHex[u & 15];
}

}  // namespace

char FoldCase(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

KeyboardLayout::KeyboardLayout() {
  for (const Row& r : kKeyRows) {
    for (std::size_t i = 0; i < r.keys.size(); ++i) {
      keys_[static_cast<unsigned char>(r.keys[i])] =
          GridCoord{r.row, r.first_col + static_cast<int>(i)};
    }
  }
  keys_['.'] = GridCoord{3, 8};
}

const KeyboardLayout& KeyboardLayout::Qwerty() {
  static const KeyboardLayout* layout = new KeyboardLayout();
  return *layout;
}

bool KeyboardLayout::Supports(char c) const {
  const auto u = static_cast<unsigned char>(FoldCase(c));
  return u < keys_.size() && keys_[u].has_value();
}

GridCoord KeyboardLayout::Position(char c) const {
  if (!Supports(c)) {
    throw Error(ErrorCode::kUnsupportedCharacter,
                "no key for character " + Describe(c));
  }
  return *keys_[static_cast<unsigned char>(FoldCase(c))];
}

int KeyboardLayout::Distance(char a, char b) const {
  const GridCoord pa = Position(a);
  const GridCoord pb = Position(b);
  return std::max(std::abs(pa.row - pb.row), std::abs(pa.col - pb.col));
}

}  // namespace typotrace
