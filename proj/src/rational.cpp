// Copyright 2026 The ptmverify Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ptmverify/rational.hpp"

#include <cctype>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace ptm {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
  }
  mpz_class z(std::string(s), 10);
  return negative ? mpz_class(-z) : z;
}

}  // namespace

Rational::Rational(long numerator, long denominator) {
  if (denominator == 0) throw std::domain_error("rational with zero denominator");
  value_ = mpq_class(numerator, denominator);
  value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

Rational Rational::parse(std::string_view text, int max_fraction_digits) {
  const std::string_view whole = text;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(text.substr(0, slash), whole);
    std::string_view den_text = text.substr(slash + 1);
    if (!all_digits(den_text)) {
      throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
    }
    mpz_class den(std::string(den_text), 10);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(whole) + "'");
    mpq_class q(num, den);
    q.canonicalize();
    return Rational(std::move(q));
  }

  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    bool negative = false;
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
      negative = int_part.front() == '-';
      int_part.remove_prefix(1);
    }
    if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part))) {
      throw std::invalid_argument("malformed decimal '" + std::string(whole) + "'");
    }
    if (static_cast<int>(frac_part.size()) > max_fraction_digits) {
      throw std::invalid_argument("decimal '" + std::string(whole) + "' has more than " +
                                  std::to_string(max_fraction_digits) + " fractional digits");
    }
    std::string digits = std::string(int_part.empty() ? "0" : int_part) + std::string(frac_part);
    mpz_class num(digits, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_part.size());
    mpq_class q(negative ? mpz_class(-num) : num, den);
    q.canonicalize();
    return Rational(std::move(q));
  }

  return Rational(mpq_class(parse_integer(text, whole)));
}

std::string Rational::str() const {
  if (value_.get_den() == 1) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rational::decimal(int digits) const {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  mpq_class scaled = abs(*this).raw() * scale;
  // round half away from zero
  mpz_class twice = (scaled.get_num() * 2 + scaled.get_den()) / (scaled.get_den() * 2);
  std::string s = twice.get_str();
  if (static_cast<int>(s.size()) <= digits) s.insert(0, static_cast<size_t>(digits) - s.size() + 1, '0');
  std::string out = s.substr(0, s.size() - static_cast<size_t>(digits));
  if (digits > 0) out += "." + s.substr(s.size() - static_cast<size_t>(digits));
  if (sign() < 0 && twice != 0) out.insert(0, "-");
  return out;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("rational division by zero");
  value_ /= o.value_;
  return *this;
}

Rational abs(const Rational& r) { return Rational(mpq_class(::abs(r.raw()))); }

std::uint64_t scaled_threshold(const Rational& r) {
  if (r.sign() <= 0) return 0;
  mpz_class two64;
  mpz_ui_pow_ui(two64.get_mpz_t(), 2, 64);
  mpz_class scaled = (r.numerator() * two64) / r.denominator();
  if (scaled >= two64) return std::numeric_limits<std::uint64_t>::max();
  // mpz_get_ui is 64-bit on LP64
  static_assert(sizeof(unsigned long) == 8);
  return mpz_get_ui(scaled.get_mpz_t());
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace ptm
