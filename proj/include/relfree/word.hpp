#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace relfree {

// Raised by parse_word; position is the byte offset into the input text.
struct word_parse_error : std::runtime_error {
  size_t position;
  word_parse_error(const std::string& msg, size_t pos)
      : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
};

// Semantic precondition failures: dependent generators, out-of-range
// placeholders, rank bounds and the like.
struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A signed generator letter x_i or x_i^{-1}, packed as (index << 1) | (sign < 0).
// The packing makes Letter 4 bytes and gives the letter order used everywhere:
// ascending index, positive before negative.
class Letter {
 public:
  static constexpr uint32_t max_index = (1u << 30) - 1;

  Letter(uint32_t index, int sign) : code_((index << 1) | (sign < 0 ? 1u : 0u)) {
    if (index > max_index) throw validation_error("generator index too large");
    if (sign != 1 && sign != -1) throw validation_error("letter sign must be +1 or -1");
  }

  uint32_t index() const { return code_ >> 1; }
  int sign() const { return (code_ & 1u) ? -1 : +1; }
  Letter inverse() const { return Letter(code_ ^ 1u, raw_tag{}); }

  friend auto operator<=>(const Letter&, const Letter&) = default;

 private:
  struct raw_tag {};
  Letter(uint32_t code, raw_tag) : code_(code) {}
  uint32_t code_;
};

// Appends a letter to a buffer, cancelling against the top. Keeping every
// intermediate buffer reduced is what makes long substitutions linear.
inline void push_reduced(std::vector<Letter>& buf, Letter l) {
  if (!buf.empty() && buf.back() == l.inverse())
    buf.pop_back();
  else
    buf.push_back(l);
}

// A freely reduced word over the generators x_0, x_1, ... The empty word is
// the identity. Construction always reduces, so the invariant holds by type.
class Word {
 public:
  Word() = default;

  static Word reduce(std::span<const Letter> raw) {
    std::vector<Letter> out;
    out.reserve(raw.size());
    for (Letter l : raw) push_reduced(out, l);
    return Word(std::move(out), reduced_tag{});
  }
  static Word reduce(std::initializer_list<Letter> raw) {
    return reduce(std::span<const Letter>(raw.begin(), raw.size()));
  }
  static Word generator(uint32_t index, int sign = 1) {
    return Word({Letter(index, sign)}, reduced_tag{});
  }
  // For callers that have already maintained reducedness via push_reduced.
  static Word from_reduced(std::vector<Letter> letters) {
    return Word(std::move(letters), reduced_tag{});
  }

  const std::vector<Letter>& letters() const { return letters_; }
  size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  Word inverse() const {
    std::vector<Letter> out;
    out.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
      out.push_back(it->inverse());
    return Word(std::move(out), reduced_tag{});
  }

  friend Word operator*(const Word& a, const Word& b) {
    std::vector<Letter> out;
    out.reserve(a.size() + b.size());
    out = a.letters_;
    for (Letter l : b.letters_) push_reduced(out, l);
    return Word(std::move(out), reduced_tag{});
  }

  Word pow(long n) const {
    Word base = n < 0 ? inverse() : *this;
    long reps = n < 0 ? -n : n;
    std::vector<Letter> out;
    for (long i = 0; i < reps; ++i)
      for (Letter l : base.letters_) push_reduced(out, l);
    return Word(std::move(out), reduced_tag{});
  }

  // Largest generator index occurring, or -1 for the empty word.
  long max_index() const {
    long m = -1;
    for (Letter l : letters_) m = std::max(m, static_cast<long>(l.index()));
    return m;
  }

  // Canonical text form: runs of an index collapse to one ^ token, e.g. "x0 x1^-2".
  std::string str(char prefix = 'x') const;

  friend bool operator==(const Word&, const Word&) = default;

 private:
  struct reduced_tag {};
  Word(std::vector<Letter> letters, reduced_tag) : letters_(std::move(letters)) {}
  std::vector<Letter> letters_;
};

// [a, b] = a^{-1} b^{-1} a b. This convention is fixed project-wide; the
// opposite one only flips the signs of commutator coordinates.
inline Word commutator(const Word& a, const Word& b) {
  return a.inverse() * b.inverse() * a * b;
}

inline Word conjugate(const Word& g, const Word& a) { return g * a * g.inverse(); }

// Shortlex with the Letter order (index ascending, positive first).
bool shortlex_less(const Word& a, const Word& b);

// Text format: tokens split on whitespace or '*'; token = <prefix><index>
// optionally followed by ^<integer>; "e" is the empty word.
Word parse_word(std::string_view text, char prefix = 'x');

// An endomorphism of the free group given on finitely many generators and
// the identity elsewhere. Assignments are kept canonical: x_i -> x_i entries
// are dropped, so map equality is assignment equality.
class GeneratorMap {
 public:
  GeneratorMap() = default;
  GeneratorMap(std::initializer_list<std::pair<uint32_t, Word>> init) {
    for (auto& [i, w] : init) set(i, w);
  }

  void set(uint32_t index, Word image) {
    if (image.size() == 1 && image.letters()[0] == Letter(index, 1))
      assignments_.erase(index);
    else
      assignments_[index] = std::move(image);
  }

  const std::map<uint32_t, Word>& assignments() const { return assignments_; }
  bool is_identity() const { return assignments_.empty(); }

  Word image_of(uint32_t index) const {
    auto it = assignments_.find(index);
    return it == assignments_.end() ? Word::generator(index) : it->second;
  }

  Word apply(const Word& w) const;

  // Largest index with a non-identity assignment, or -1.
  long max_support_index() const {
    return assignments_.empty() ? -1 : static_cast<long>(assignments_.rbegin()->first);
  }
  // Largest index appearing in any image (support generators included), or -1.
  long max_image_index() const {
    long m = max_support_index();
    for (auto& [i, w] : assignments_) m = std::max(m, w.max_index());
    return m;
  }

  friend bool operator==(const GeneratorMap&, const GeneratorMap&) = default;

 private:
  std::map<uint32_t, Word> assignments_;
};

// compose(outer, inner) applies inner first: result(w) = outer(inner(w)).
GeneratorMap compose(const GeneratorMap& outer, const GeneratorMap& inner);

// True when f(x_i) = x_i for every i < rank.
bool acts_as_identity_below(const GeneratorMap& f, uint32_t rank);

}  // namespace relfree
