#pragma once

// Text forms for paths.
//
//   compact:  optional "m:" horizon prefix, then one character per step,
//             '+' / '-' / '0' (U+2212 is accepted for '-'), e.g. "5:++-0+"
//   JSON:     array of values starting at 0, e.g. [0,1,2,1]
//
// Output is always the bare increment string; parsing accepts either form.

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ocone/path.hpp"

namespace ocone {

template <PathLike P>
std::string to_text(const P& p) {
  std::string out;
  out.reserve(p.horizon());
  for (std::size_t k = 1; k <= p.horizon(); ++k) {
    const int d = p.increment(k);
    out.push_back(d > 0 ? '+' : (d < 0 ? '-' : '0'));
  }
  return out;
}

/// Increments of [M] as '0'/'1' characters.
inline std::string to_text(const QuadraticVariation& q) {
  std::string out;
  out.reserve(q.horizon());
  for (std::size_t k = 1; k <= q.horizon(); ++k) out.push_back(q[k] > q[k - 1] ? '1' : '0');
  return out;
}

template <PathLike P>
nlohmann::json to_json_array(const P& p) {
  return nlohmann::json(p.values());
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<int> parse_values(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '[') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(std::string("path: malformed JSON array: ") + e.what());
    }
    if (!j.is_array()) throw std::invalid_argument("path: JSON form must be an array");
    std::vector<int> v;
    for (const auto& x : j) {
      if (!x.is_number_integer()) throw std::invalid_argument("path: JSON array must hold integers");
      v.push_back(x.get<int>());
    }
    return v;
  }

  long declared = -1;
  if (auto colon = text.find(':'); colon != std::string_view::npos) {
    const std::string head(trim(text.substr(0, colon)));
    if (head.empty() || head.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("path: bad horizon prefix '" + head + "'");
    declared = std::stol(head);
    text = trim(text.substr(colon + 1));
  }

  std::vector<int> v{0};
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    int d = 0;
    if (c == '+') {
      d = 1;
    } else if (c == '-') {
      d = -1;
    } else if (c == '0') {
      d = 0;
    } else if (static_cast<unsigned char>(c) == 0xE2 && i + 2 < text.size() &&
               static_cast<unsigned char>(text[i + 1]) == 0x88 &&
               static_cast<unsigned char>(text[i + 2]) == 0x92) {
      d = -1;  // U+2212 MINUS SIGN
      i += 2;
    } else {
      throw std::invalid_argument(std::string("path: unexpected character '") + c + "' in increment string");
    }
    v.push_back(v.back() + d);
  }
  if (declared >= 0 && static_cast<std::size_t>(declared) != v.size() - 1)
    throw std::invalid_argument("path: horizon prefix " + std::to_string(declared) + " does not match " +
                                std::to_string(v.size() - 1) + " increments");
  return v;
}

}  // namespace detail

inline SkipFreePath parse_skip_free(std::string_view text) { return SkipFreePath(detail::parse_values(text)); }
inline WalkPath parse_walk(std::string_view text) { return WalkPath(detail::parse_values(text)); }

}  // namespace ocone
