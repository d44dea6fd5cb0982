// Internal UTF-8 helpers and punctuation classification.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gcdt::uni {

// Decodes UTF-8 into codepoints; invalid bytes decode as U+FFFD.
std::vector<char32_t> decode(std::string_view s);
size_t length(std::string_view s);

bool is_cjk_char(char32_t c);
// True when no character of the token belongs to a CJK block (letters,
// digits and ASCII punctuation all count as non-CJK).
bool is_foreign_token(std::string_view form);

bool is_comma(std::string_view form);        // ， ,
bool is_enum_comma(std::string_view form);   // 、
bool is_semicolon(std::string_view form);    // ； ;
bool is_colon(std::string_view form);        // ： :
bool is_sentence_final(std::string_view form);  // 。 ！ ？ . ! ?
bool is_open_paren(std::string_view form);   // （ ( 【 [ ｛ {
bool is_close_paren(std::string_view form);  // matching closers
bool is_title_open(std::string_view form);   // 《
bool is_title_close(std::string_view form);  // 》
bool is_quote_close(std::string_view form);  // ” ’ 」 』
bool is_long_dash(std::string_view form);    // —— — -- ---
bool is_hyphen(std::string_view form);       // - – plus long dashes
bool is_math_delim(std::string_view form);   // $
bool is_punct(std::string_view form);

// Any separator that attaches to the left EDU (boundaries shift right past it).
bool is_left_attaching_separator(std::string_view form);

// [1] 【23】 style citation token.
bool is_citation_token(std::string_view form);
// "pp." / "pp" / "p." page-suffix word, digit ranges like 3-4.
bool is_page_word(std::string_view form);
bool is_digit_range(std::string_view form);

// NT-ish date content: contains an ASCII digit followed by 年/月/日, or is a
// pure 4-digit year.
bool looks_like_date(std::string_view form);

// NFC normalization (ICU). Returns input unchanged if already normalized.
std::string nfc(std::string_view s);
bool is_valid_utf8(std::string_view s);

}  // namespace gcdt::uni
