#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace freehardy {

// A word in the free monoid on the letters 1..d. Letters are 1-based.
class Word {
 public:
  Word() = default;
  Word(int d, std::vector<int> letters);

  static Word unit(int d) { return Word(d, {}); }

  int d() const noexcept { return d_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  const std::vector<int>& letters() const noexcept { return letters_; }
  int operator[](std::size_t i) const { return letters_[i]; }

  // Graded order: shorter words first, then lexicographic on letters.
  friend bool operator<(const Word& a, const Word& b);
  friend bool operator==(const Word& a, const Word& b) {
    return a.d_ == b.d_ && a.letters_ == b.letters_;
  }
  friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }

  std::string str() const;  // "[1,2,1]"

 private:
  int d_ = 1;
  std::vector<int> letters_;
};

Word concat(const Word& a, const Word& b);
Word dagger(const Word& a);

// gamma with beta = alpha gamma, or nullopt when alpha is not a prefix of beta.
std::optional<Word> left_quotient(const Word& alpha, const Word& beta);
// gamma with beta = gamma alpha, or nullopt when alpha is not a suffix of beta.
std::optional<Word> right_quotient(const Word& alpha, const Word& beta);

bool is_prefix(const Word& alpha, const Word& beta);

// Basis-size cap. Defaults to 1e6; FREEHARDY_MAX_BASIS overrides.
std::size_t max_basis();

// Number of words of length <= n; throws a capacity error above max_basis().
std::size_t word_count(int d, int n);

std::vector<Word> enumerate(int d, int n);

// Position of a word in enumerate(d, n) for any n >= |w|.
std::size_t word_index(const Word& w);

Word word_at(int d, std::size_t index);

nlohmann::json to_json(const Word& w);
Word word_from_json(const nlohmann::json& j, int d);

}  // namespace freehardy
