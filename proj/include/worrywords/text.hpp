// Copyright 2026 The worrywords-engine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Term normalization and tokenization. Both go through the same
// NFC + root-locale lowercasing so stream tokens and lexicon keys agree.

#include <string>
#include <string_view>
#include <vector>

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "worrywords/errors.hpp"

namespace worrywords::text {

namespace detail {

inline icu::UnicodeString nfc_lower(std::string_view utf8) {
  auto s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
  icu::UnicodeString out = nfc->normalize(s, status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");
  out.toLower(icu::Locale::getRoot());
  // Lowercasing can produce denormalized sequences in a few scripts.
  icu::UnicodeString renorm = nfc->normalize(out, status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");
  return renorm;
}

inline std::string to_utf8(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

inline bool is_word_char(UChar32 c) {
  if (u_isalnum(c)) return true;
  const auto type = static_cast<UCharCategory>(u_charType(c));
  return type == U_NON_SPACING_MARK || type == U_COMBINING_SPACING_MARK ||
         type == U_ENCLOSING_MARK;
}

inline bool is_joiner(UChar32 c) {
  return c == u'\'' || c == 0x2019 || c == u'-';
}

}  // namespace detail

/// NFC, trimmed of Unicode whitespace, lowercased.
inline std::string normalize_term(std::string_view raw) {
  icu::UnicodeString s = detail::nfc_lower(raw);
  int32_t begin = 0;
  int32_t end = s.length();
  while (begin < end && u_isUWhiteSpace(s.char32At(begin)))
    begin = s.moveIndex32(begin, 1);
  while (end > begin) {
    const int32_t prev = s.moveIndex32(end, -1);
    if (!u_isUWhiteSpace(s.char32At(prev))) break;
    end = prev;
  }
  return detail::to_utf8(s.tempSubStringBetween(begin, end));
}

/// Lowercase word segmentation. A word is a run of letters, digits and
/// combining marks; apostrophes and hyphens are kept only between word
/// characters. A '#' directly before a word is kept as part of it.
inline std::vector<std::string> tokenize(std::string_view raw) {
  std::vector<std::string> tokens;
  if (raw.empty()) return tokens;
  const icu::UnicodeString s = detail::nfc_lower(raw);
  const int32_t n = s.length();

  auto next_index = [&](int32_t i) { return s.moveIndex32(i, 1); };
  int32_t i = 0;
  bool prev_word = false;
  while (i < n) {
    UChar32 c = s.char32At(i);
    int32_t start = i;
    if (c == u'#' && !prev_word) {
      const int32_t j = next_index(i);
      if (j < n && detail::is_word_char(s.char32At(j))) {
        i = j;
        c = s.char32At(i);
      }
    }
    if (!detail::is_word_char(c)) {
      prev_word = false;
      i = next_index(i);
      continue;
    }
    int32_t end = i;
    while (end < n) {
      const UChar32 d = s.char32At(end);
      if (detail::is_word_char(d)) {
        end = next_index(end);
        continue;
      }
      if (detail::is_joiner(d)) {
        const int32_t after = next_index(end);
        if (after < n && detail::is_word_char(s.char32At(after))) {
          end = after;
          continue;
        }
      }
      break;
    }
    tokens.push_back(detail::to_utf8(s.tempSubStringBetween(start, end)));
    i = end;
    prev_word = true;
  }
  return tokens;
}

}  // namespace worrywords::text
