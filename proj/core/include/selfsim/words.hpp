#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "selfsim/errors.hpp"

namespace selfsim {

/// A finite word over the symbol alphabet {1,...,N}. The empty word acts as
/// the identity map. Symbols are stored 1-based, outermost map first, so the
/// word (w1,...,wm) names the composition map(w1) o ... o map(wm).
struct Word {
  std::vector<int> symbols;

  Word() = default;
  explicit Word(std::vector<int> s) : symbols(std::move(s)) {}

  std::size_t length() const { return symbols.size(); }
  bool empty() const { return symbols.empty(); }

  /// Concatenation u + v names the composition gamma_u o gamma_v.
  Word concat(const Word& tail) const {
    Word out = *this;
    out.symbols.insert(out.symbols.end(), tail.symbols.begin(), tail.symbols.end());
    return out;
  }

  Word prefix(std::size_t len) const {
    if (len > symbols.size()) throw InvalidInputError("word prefix longer than word");
    return Word(std::vector<int>(symbols.begin(), symbols.begin() + static_cast<long>(len)));
  }

  Word suffix_from(std::size_t pos) const {
    if (pos > symbols.size()) throw InvalidInputError("word suffix start out of range");
    return Word(std::vector<int>(symbols.begin() + static_cast<long>(pos), symbols.end()));
  }

  void validate(int alphabet) const {
    for (int s : symbols)
      if (s < 1 || s > alphabet)
        throw InvalidInputError("word symbol " + std::to_string(s) +
                                " outside alphabet {1,...," + std::to_string(alphabet) + "}");
  }

  std::string str() const {
    std::string out = "(";
    for (std::size_t k = 0; k < symbols.size(); ++k) {
      if (k) out += ",";
      out += std::to_string(symbols[k]);
    }
    return out + ")";
  }

  bool operator==(const Word& o) const = default;
};

/// Lexicographic indexing of all words of a fixed length. Index 0 is
/// (1,1,...,1); the first symbol is the most significant digit.
class WordTable {
public:
  WordTable(int alphabet, int length);

  int alphabet() const { return alphabet_; }
  int length() const { return length_; }
  std::uint64_t size() const { return size_; }

  std::uint64_t index_of(const Word& w) const;
  Word word_at(std::uint64_t index) const;

  /// Index of the truncated word (s, w1, ..., w_{m-1}) obtained by prepending
  /// a symbol and dropping the last symbol. O(1) digit arithmetic.
  std::uint64_t prepend_trunc(int symbol, std::uint64_t index) const {
    return static_cast<std::uint64_t>(symbol - 1) * msd_ + index / static_cast<std::uint64_t>(alphabet_);
  }

  /// First symbol of the word at `index`.
  int leading_symbol(std::uint64_t index) const {
    return static_cast<int>(index / msd_) + 1;
  }

private:
  int alphabet_;
  int length_;
  std::uint64_t size_;
  std::uint64_t msd_;  // alphabet^(length-1), weight of the first symbol
};

/// alphabet^length with an overflow check.
std::uint64_t pow_u64(int base, int exp);

}  // namespace selfsim
