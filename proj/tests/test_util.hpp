#pragma once

#include <random>
#include <vector>

#include "relfree/word.hpp"

namespace relfree::testutil {

// Reduced word of exactly `len` letters over indices 0..max_index (or over
// lo..hi with the second overload).
inline Word random_reduced(std::mt19937_64& rng, size_t len, uint32_t lo, uint32_t hi) {
  std::uniform_int_distribution<uint32_t> idx(lo, hi);
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<Letter> letters;
  while (letters.size() < len) {
    Letter l(idx(rng), coin(rng) ? 1 : -1);
    if (!letters.empty() && l == letters.back().inverse()) continue;
    letters.push_back(l);
  }
  return Word::reduce(letters);
}

inline Word random_reduced(std::mt19937_64& rng, size_t len, uint32_t max_index) {
  return random_reduced(rng, len, 0, max_index);
}

inline std::vector<Word> random_generators(std::mt19937_64& rng, size_t count,
                                           size_t max_len, uint32_t max_index) {
  std::uniform_int_distribution<size_t> len(1, max_len);
  std::vector<Word> gens;
  for (size_t i = 0; i < count; ++i)
    gens.push_back(random_reduced(rng, len(rng), max_index));
  return gens;
}

// Random product of the given words and their inverses.
inline Word random_product(std::mt19937_64& rng, const std::vector<Word>& words,
                           size_t factors) {
  std::uniform_int_distribution<size_t> pick(0, words.size() - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  Word p;
  for (size_t i = 0; i < factors; ++i) {
    const Word& w = words[pick(rng)];
    p = p * (coin(rng) ? w : w.inverse());
  }
  return p;
}

}  // namespace relfree::testutil
