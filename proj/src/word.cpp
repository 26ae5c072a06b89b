#include "relfree/word.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace relfree {

std::string Word::str(char prefix) const {
  if (letters_.empty()) return "e";
  std::string out;
  size_t i = 0;
  while (i < letters_.size()) {
    size_t j = i;
    while (j < letters_.size() && letters_[j] == letters_[i]) ++j;
    long exp = static_cast<long>(j - i) * letters_[i].sign();
    if (!out.empty()) out += ' ';
    out += prefix;
    out += std::to_string(letters_[i].index());
    if (exp != 1) {
      out += '^';
      out += std::to_string(exp);
    }
    i = j;
  }
  return out;
}

bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.letters() < b.letters();
}

namespace {

// Exponents are expanded letter-by-letter, so cap them to keep parse totals sane.
constexpr long max_parse_exponent = 1'000'000;

uint64_t parse_digits(std::string_view text, size_t& pos, const char* what) {
  size_t start = pos;
  uint64_t value = 0;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    value = value * 10 + static_cast<uint64_t>(text[pos] - '0');
    if (value > Letter::max_index) throw word_parse_error("number too large", start);
    ++pos;
  }
  if (pos == start) throw word_parse_error(std::string("expected ") + what, pos);
  return value;
}

}  // namespace

Word parse_word(std::string_view text, char prefix) {
  std::vector<Letter> letters;
  size_t pos = 0;
  while (pos < text.size()) {
    char c = text[pos];
    if (std::isspace(static_cast<unsigned char>(c)) || c == '*') {
      ++pos;
      continue;
    }
    if (c == 'e') {
      ++pos;
      if (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
          text[pos] != '*')
        throw word_parse_error("unexpected character after 'e'", pos);
      continue;
    }
    if (c != prefix)
      throw word_parse_error(std::string("expected generator '") + prefix + "<index>' or 'e'",
                             pos);
    ++pos;
    uint64_t index = parse_digits(text, pos, "generator index");
    long exponent = 1;
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      bool negative = false;
      if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
        negative = text[pos] == '-';
        ++pos;
      }
      uint64_t mag = parse_digits(text, pos, "exponent");
      if (mag > max_parse_exponent) throw word_parse_error("exponent too large", pos);
      exponent = negative ? -static_cast<long>(mag) : static_cast<long>(mag);
    }
    int sign = exponent < 0 ? -1 : 1;
    long reps = exponent < 0 ? -exponent : exponent;
    for (long r = 0; r < reps; ++r)
      letters.push_back(Letter(static_cast<uint32_t>(index), sign));
  }
  return Word::reduce(letters);
}

Word GeneratorMap::apply(const Word& w) const {
  if (assignments_.empty()) return w;
  // Dense image table; support indices are small in every use of this type.
  size_t table_size = static_cast<size_t>(max_support_index()) + 1;
  std::vector<const Word*> table(table_size, nullptr);
  for (auto& [i, img] : assignments_) table[i] = &img;

  std::vector<Letter> out;
  out.reserve(w.size());
  for (Letter l : w.letters()) {
    const Word* img = l.index() < table_size ? table[l.index()] : nullptr;
    if (!img) {
      push_reduced(out, l);
    } else if (l.sign() > 0) {
      for (Letter m : img->letters()) push_reduced(out, m);
    } else {
      const auto& ls = img->letters();
      for (auto it = ls.rbegin(); it != ls.rend(); ++it) push_reduced(out, it->inverse());
    }
  }
  return Word::from_reduced(std::move(out));
}

GeneratorMap compose(const GeneratorMap& outer, const GeneratorMap& inner) {
  GeneratorMap result;
  for (auto& [i, img] : inner.assignments()) result.set(i, outer.apply(img));
  for (auto& [i, img] : outer.assignments())
    if (!inner.assignments().contains(i)) result.set(i, img);
  return result;
}

bool acts_as_identity_below(const GeneratorMap& f, uint32_t rank) {
  // Assignments are canonical (no stored x_i -> x_i), so any support index
  // below rank is a genuine move.
  for (auto& [i, img] : f.assignments())
    if (i < rank) return false;
  return true;
}

}  // namespace relfree
