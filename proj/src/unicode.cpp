#include "unicode.hpp"

#include <unicode/unorm2.h>
#include <unicode/ustring.h>
#include <unicode/utf8.h>

#include <array>
#include <cctype>
#include <stdexcept>

namespace gcdt::uni {

std::vector<char32_t> decode(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  int32_t i = 0;
  const int32_t n = static_cast<int32_t>(s.size());
  while (i < n) {
    UChar32 c;
    U8_NEXT(reinterpret_cast<const uint8_t*>(s.data()), i, n, c);
    out.push_back(c < 0 ? 0xFFFD : static_cast<char32_t>(c));
  }
  return out;
}

size_t length(std::string_view s) { return decode(s).size(); }

bool is_cjk_char(char32_t c) {
  return (c >= 0x2E80 && c <= 0x2FDF) ||   // radicals
         (c >= 0x3000 && c <= 0x303F) ||   // CJK symbols and punctuation
         (c >= 0x3040 && c <= 0x30FF) ||   // kana (treated as CJK-side)
         (c >= 0x3400 && c <= 0x4DBF) ||   // ext A
         (c >= 0x4E00 && c <= 0x9FFF) ||   // unified
         (c >= 0xF900 && c <= 0xFAFF) ||   // compatibility ideographs
         (c >= 0xFE30 && c <= 0xFE4F) ||   // vertical forms
         (c >= 0xFF00 && c <= 0xFFEF) ||   // fullwidth forms
         (c >= 0x20000 && c <= 0x2FA1F);   // ext B+
}

bool is_foreign_token(std::string_view form) {
  if (form.empty()) return false;
  for (char32_t c : decode(form)) {
    if (is_cjk_char(c)) return false;
    // General punctuation block (curly quotes, dashes, ellipsis) is shared
    // between scripts; a token made of those alone is not a foreign word.
  }
  return true;
}

namespace {
bool one_of(std::string_view form, std::initializer_list<std::string_view> set) {
  for (auto s : set)
    if (form == s) return true;
  return false;
}
}  // namespace

bool is_comma(std::string_view f) { return one_of(f, {"\xEF\xBC\x8C", ","}); }
bool is_enum_comma(std::string_view f) { return f == "\xE3\x80\x81"; }
bool is_semicolon(std::string_view f) { return one_of(f, {"\xEF\xBC\x9B", ";"}); }
bool is_colon(std::string_view f) { return one_of(f, {"\xEF\xBC\x9A", ":"}); }
bool is_sentence_final(std::string_view f) {
  return one_of(f, {"\xE3\x80\x82", "\xEF\xBC\x81", "\xEF\xBC\x9F", ".", "!", "?"});
}
bool is_open_paren(std::string_view f) {
  return one_of(f, {"\xEF\xBC\x88", "(", "\xE3\x80\x90", "[", "{", "\xEF\xBD\x9B"});
}
bool is_close_paren(std::string_view f) {
  return one_of(f, {"\xEF\xBC\x89", ")", "\xE3\x80\x91", "]", "}", "\xEF\xBD\x9D"});
}
bool is_title_open(std::string_view f) { return f == "\xE3\x80\x8A"; }
bool is_title_close(std::string_view f) { return f == "\xE3\x80\x8B"; }
bool is_quote_close(std::string_view f) {
  return one_of(f, {"\xE2\x80\x9D", "\xE2\x80\x99", "\xE3\x80\x8D", "\xE3\x80\x8F"});
}
bool is_long_dash(std::string_view f) {
  return one_of(f, {"\xE2\x80\x94\xE2\x80\x94", "\xE2\x80\x94", "--", "---"});
}
bool is_hyphen(std::string_view f) {
  return one_of(f, {"-", "\xE2\x80\x93"}) || is_long_dash(f);
}
bool is_math_delim(std::string_view f) { return f == "$"; }

bool is_punct(std::string_view f) {
  if (f.empty()) return false;
  if (is_comma(f) || is_enum_comma(f) || is_semicolon(f) || is_colon(f) ||
      is_sentence_final(f) || is_open_paren(f) || is_close_paren(f) || is_title_open(f) ||
      is_title_close(f) || is_quote_close(f) || is_hyphen(f) || is_math_delim(f))
    return true;
  static const std::array<std::string_view, 8> rest = {
      "\xE2\x80\x9C", "\xE2\x80\x98", "\xE3\x80\x8C", "\xE3\x80\x8E",
      "\xC2\xB7",     "\xE2\x80\xA6", "\xE2\x80\xA6\xE2\x80\xA6", "\xEF\xBD\x9E"};
  for (auto s : rest)
    if (f == s) return true;
  if (f.size() == 1 && std::ispunct(static_cast<unsigned char>(f[0]))) return true;
  return false;
}

bool is_left_attaching_separator(std::string_view f) {
  return is_comma(f) || is_enum_comma(f) || is_semicolon(f) || is_sentence_final(f) ||
         is_colon(f);
}

bool is_citation_token(std::string_view form) {
  auto cps = decode(form);
  if (cps.size() < 3) return false;
  char32_t open = cps.front(), close = cps.back();
  bool ok = (open == U'[' && close == U']') || (open == 0x3010 && close == 0x3011);
  if (!ok) return false;
  for (size_t i = 1; i + 1 < cps.size(); ++i)
    if (cps[i] < U'0' || cps[i] > U'9') return false;
  return true;
}

bool is_page_word(std::string_view f) {
  return one_of(f, {"pp.", "pp", "p.", "\xE9\xA1\xB5"});
}

bool is_digit_range(std::string_view form) {
  if (form.empty()) return false;
  bool digit_seen = false;
  for (char32_t c : decode(form)) {
    if (c >= U'0' && c <= U'9') {
      digit_seen = true;
    } else if (c != U'-' && c != 0x2013 && c != 0x2014 && c != U'~' && c != 0xFF5E &&
               c != U',') {
      return false;
    }
  }
  return digit_seen;
}

bool looks_like_date(std::string_view form) {
  auto cps = decode(form);
  bool digit = false;
  for (size_t i = 0; i < cps.size(); ++i) {
    char32_t c = cps[i];
    if (c >= U'0' && c <= U'9') {
      digit = true;
      continue;
    }
    if (digit && (c == 0x5E74 || c == 0x6708 || c == 0x65E5))  // 年 月 日
      return true;
  }
  if (digit && cps.size() == 4) {
    for (char32_t c : cps)
      if (c < U'0' || c > U'9') return false;
    return true;
  }
  return false;
}

std::string nfc(std::string_view s) {
  UErrorCode ec = U_ZERO_ERROR;
  const UNormalizer2* norm = unorm2_getNFCInstance(&ec);
  if (U_FAILURE(ec)) return std::string(s);

  // UTF-8 -> UTF-16
  std::vector<UChar> u16(s.size() + 1);
  int32_t u16len = 0;
  ec = U_ZERO_ERROR;
  u_strFromUTF8(u16.data(), static_cast<int32_t>(u16.size()), &u16len, s.data(),
                static_cast<int32_t>(s.size()), &ec);
  if (U_FAILURE(ec)) return std::string(s);

  UBool is_norm = unorm2_isNormalized(norm, u16.data(), u16len, &ec);
  if (U_SUCCESS(ec) && is_norm) return std::string(s);

  std::vector<UChar> out(u16len * 2 + 16);
  ec = U_ZERO_ERROR;
  int32_t outlen =
      unorm2_normalize(norm, u16.data(), u16len, out.data(), static_cast<int32_t>(out.size()), &ec);
  if (U_FAILURE(ec)) return std::string(s);

  std::string result(outlen * 4 + 4, '\0');
  int32_t u8len = 0;
  ec = U_ZERO_ERROR;
  u_strToUTF8(result.data(), static_cast<int32_t>(result.size()), &u8len, out.data(), outlen, &ec);
  if (U_FAILURE(ec)) return std::string(s);
  result.resize(u8len);
  return result;
}

bool is_valid_utf8(std::string_view s) {
  int32_t i = 0;
  const int32_t n = static_cast<int32_t>(s.size());
  while (i < n) {
    UChar32 c;
    U8_NEXT(reinterpret_cast<const uint8_t*>(s.data()), i, n, c);
    if (c < 0) return false;
  }
  return true;
}

}  // namespace gcdt::uni
