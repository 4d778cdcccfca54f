#include "freehardy/word.hpp"

#include <algorithm>
#include <cstdlib>

#include "freehardy/error.hpp"

namespace freehardy {

Word::Word(int d, std::vector<int> letters) : d_(d), letters_(std::move(letters)) {
  if (d < 1) throw Error(ErrorKind::InvalidInput, "alphabet size must be positive");
  for (int l : letters_)
    if (l < 1 || l > d)
      throw Error(ErrorKind::InvalidInput,
                  "letter " + std::to_string(l) + " outside 1.." + std::to_string(d));
}

bool operator<(const Word& a, const Word& b) {
  if (a.letters_.size() != b.letters_.size()) return a.letters_.size() < b.letters_.size();
  if (a.letters_ != b.letters_) return a.letters_ < b.letters_;
  return a.d_ < b.d_;
}

std::string Word::str() const {
  std::string s = "[";
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(letters_[i]);
  }
  return s + "]";
}

Word concat(const Word& a, const Word& b) {
  if (a.d() != b.d()) throw Error(ErrorKind::InvalidInput, "alphabet size mismatch in concat");
  std::vector<int> l = a.letters();
  l.insert(l.end(), b.letters().begin(), b.letters().end());
  return Word(a.d(), std::move(l));
}

Word dagger(const Word& a) {
  std::vector<int> l(a.letters().rbegin(), a.letters().rend());
  return Word(a.d(), std::move(l));
}

bool is_prefix(const Word& alpha, const Word& beta) {
  if (alpha.size() > beta.size()) return false;
  return std::equal(alpha.letters().begin(), alpha.letters().end(), beta.letters().begin());
}

std::optional<Word> left_quotient(const Word& alpha, const Word& beta) {
  if (!is_prefix(alpha, beta)) return std::nullopt;
  return Word(beta.d(), std::vector<int>(beta.letters().begin() + alpha.size(), beta.letters().end()));
}

std::optional<Word> right_quotient(const Word& alpha, const Word& beta) {
  if (alpha.size() > beta.size()) return std::nullopt;
  if (!std::equal(alpha.letters().rbegin(), alpha.letters().rend(), beta.letters().rbegin()))
    return std::nullopt;
  return Word(beta.d(), std::vector<int>(beta.letters().begin(), beta.letters().end() - alpha.size()));
}

std::size_t max_basis() {
  if (const char* env = std::getenv("FREEHARDY_MAX_BASIS")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return 1000000;
}

std::size_t word_count(int d, int n) {
  if (d < 1 || n < 0) throw Error(ErrorKind::InvalidInput, "word_count needs d >= 1, n >= 0");
  const std::size_t cap = max_basis();
  std::size_t total = 0, level = 1;
  for (int k = 0; k <= n; ++k) {
    total += level;
    if (total > cap)
      throw Error(ErrorKind::Capacity, "basis of words of length <= " + std::to_string(n) +
                                           " over " + std::to_string(d) + " letters exceeds cap " +
                                           std::to_string(cap));
    level *= static_cast<std::size_t>(d);
  }
  return total;
}

std::vector<Word> enumerate(int d, int n) {
  const std::size_t count = word_count(d, n);
  std::vector<Word> out;
  out.reserve(count);
  out.push_back(Word::unit(d));
  std::vector<int> cur;
  for (int len = 1; len <= n; ++len) {
    cur.assign(len, 1);
    while (true) {
      out.emplace_back(d, cur);
      int i = len - 1;
      while (i >= 0 && cur[i] == d) cur[i--] = 1;
      if (i < 0) break;
      ++cur[i];
    }
  }
  return out;
}

std::size_t word_index(const Word& w) {
  const std::size_t d = static_cast<std::size_t>(w.d());
  std::size_t offset = 0, level = 1;
  for (std::size_t k = 0; k < w.size(); ++k) {
    offset += level;
    level *= d;
  }
  std::size_t rank = 0;
  for (int l : w.letters()) rank = rank * d + static_cast<std::size_t>(l - 1);
  return offset + rank;
}

Word word_at(int d, std::size_t index) {
  std::size_t len = 0, level = 1;
  while (index >= level) {
    index -= level;
    level *= static_cast<std::size_t>(d);
    ++len;
  }
  std::vector<int> l(len);
  for (std::size_t k = len; k-- > 0;) {
    l[k] = static_cast<int>(index % d) + 1;
    index /= d;
  }
  return Word(d, std::move(l));
}

nlohmann::json to_json(const Word& w) { return nlohmann::json(w.letters()); }

Word word_from_json(const nlohmann::json& j, int d) {
  if (!j.is_array()) throw Error(ErrorKind::InvalidInput, "word must be a JSON array");
  std::vector<int> l;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw Error(ErrorKind::InvalidInput, "word letters must be integers");
    l.push_back(x.get<int>());
  }
  return Word(d, std::move(l));
}

}  // namespace freehardy
