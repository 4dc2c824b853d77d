/*
 * Copyright 2026 The depprof Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "depprof/rational.hpp"

#include <cctype>
#include <charconv>
#include <numeric>

#include "depprof/errors.hpp"

namespace depprof {

Rational::Rational(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw InvalidArgument("zero denominator");
  const std::uint64_t g = std::gcd(num, den);
  num_ = g ? num / g : 0;
  den_ = g ? den / g : 1;
  if (num_ == 0) den_ = 1;
}

namespace {

std::uint64_t parse_digits(std::string_view s, std::string_view whole) {
  std::uint64_t v = 0;
  if (s.empty()) return 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw InvalidArgument("not a non-negative rational: '" + std::string(whole) + "'");
  }
  return v;
}

std::uint64_t pow10(int e, std::string_view whole) {
  if (e > 18) throw InvalidArgument("too many decimal places: '" + std::string(whole) + "'");
  std::uint64_t p = 1;
  while (e-- > 0) p *= 10;
  return p;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  const std::string_view whole = text;
  if (text.empty() || text.front() == '-' || text.front() == '+') {
    throw InvalidArgument("not a non-negative rational: '" + std::string(whole) + "'");
  }
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const std::uint64_t n = parse_digits(text.substr(0, slash), whole);
    const std::uint64_t d = parse_digits(text.substr(slash + 1), whole);
    if (d == 0) throw InvalidArgument("zero denominator in '" + std::string(whole) + "'");
    return Rational(n, d);
  }

  int exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp = text.substr(e + 1);
    bool neg = !exp.empty() && exp.front() == '-';
    if (!exp.empty() && (exp.front() == '-' || exp.front() == '+')) exp.remove_prefix(1);
    if (exp.empty()) throw InvalidArgument("malformed exponent in '" + std::string(whole) + "'");
    exponent = static_cast<int>(parse_digits(exp, whole));
    if (neg) exponent = -exponent;
    text = text.substr(0, e);
  }
  std::string_view int_part = text;
  std::string_view frac_part;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    int_part = text.substr(0, dot);
    frac_part = text.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) {
    throw InvalidArgument("not a non-negative rational: '" + std::string(whole) + "'");
  }
  const std::uint64_t scale = pow10(static_cast<int>(frac_part.size()), whole);
  std::uint64_t num = parse_digits(int_part, whole) * scale + parse_digits(frac_part, whole);
  std::uint64_t den = scale;
  if (exponent > 0) {
    num *= pow10(exponent, whole);
  } else if (exponent < 0) {
    den *= pow10(-exponent, whole);
  }
  return Rational(num, den);
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

}  // namespace depprof
