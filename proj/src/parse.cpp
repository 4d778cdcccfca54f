#include "freehardy/parse.hpp"

#include <cctype>
#include <cstdlib>
#include <map>

#include "freehardy/error.hpp"

namespace freehardy {

namespace {

// Intermediate value: a polynomial with coefficients of one shape. A scalar
// value has 1 x 1 coefficients and may be promoted to c * I.
struct Poly {
  bool scalar = true;
  Eigen::Index rows = 1, cols = 1;
  std::map<Word, Mat> terms;
};

class Parser {
 public:
  Parser(const std::string& text, int d, int deg) : s_(text), d_(d), deg_(deg) {}

  Poly run() {
    Poly v = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

  long pos() const { return static_cast<long>(pos_); }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
    throw Error(ErrorKind::Parse, msg, static_cast<long>(at));
  }

 private:
  // Longest word kept while parsing; longer terms can never cancel back.
  int max_len() const { return deg_ + 32; }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Poly constant(cplx c) {
    Poly p;
    p.terms.emplace(Word::unit(d_), Mat::Constant(1, 1, c));
    return p;
  }

  static void clean(Poly& p) {
    for (auto it = p.terms.begin(); it != p.terms.end();) {
      if (it->second.isZero(0.0))
        it = p.terms.erase(it);
      else
        ++it;
    }
  }

  // Lift a scalar to c * I of the given size.
  static Poly promote(const Poly& a, Eigen::Index n) {
    Poly out{false, n, n, {}};
    for (const auto& [w, c] : a.terms) out.terms.emplace(w, c(0, 0) * Mat::Identity(n, n));
    return out;
  }

  Poly add(Poly a, Poly b, bool subtract, std::size_t at) {
    if (a.scalar && !b.scalar) {
      if (b.rows != b.cols) fail_at("cannot add a scalar to a non-square matrix", at);
      a = promote(a, b.rows);
    } else if (!a.scalar && b.scalar) {
      if (a.rows != a.cols) fail_at("cannot add a scalar to a non-square matrix", at);
      b = promote(b, a.rows);
    } else if (a.rows != b.rows || a.cols != b.cols) {
      fail_at("matrix shapes differ in sum", at);
    }
    for (auto& [w, c] : b.terms) {
      Mat t = subtract ? Mat(-c) : c;
      auto it = a.terms.find(w);
      if (it == a.terms.end())
        a.terms.emplace(w, t);
      else
        it->second += t;
    }
    clean(a);
    return a;
  }

  Poly mul(const Poly& a, const Poly& b, std::size_t at) {
    Poly out;
    if (a.scalar && b.scalar) {
      out = Poly{};
    } else if (a.scalar) {
      out = Poly{false, b.rows, b.cols, {}};
    } else if (b.scalar) {
      out = Poly{false, a.rows, a.cols, {}};
    } else {
      if (a.cols != b.rows) fail_at("matrix shapes do not compose in product", at);
      out = Poly{false, a.rows, b.cols, {}};
    }
    for (const auto& [wa, ca] : a.terms)
      for (const auto& [wb, cb] : b.terms) {
        if (static_cast<int>(wa.size() + wb.size()) > max_len()) fail_at("degree overflow", at);
        Mat c;
        if (a.scalar && !b.scalar)
          c = ca(0, 0) * cb;
        else if (b.scalar && !a.scalar)
          c = ca * cb(0, 0);
        else
          c = ca * cb;
        Word w = concat(wa, wb);
        auto it = out.terms.find(w);
        if (it == out.terms.end()) {
          out.terms.emplace(w, c);
          if (out.terms.size() > max_basis())
            throw Error(ErrorKind::Capacity, "expression expands beyond the basis cap");
        } else {
          it->second += c;
        }
      }
    clean(out);
    return out;
  }

  Poly expr() {
    Poly v = term();
    for (;;) {
      skip_ws();
      std::size_t at = pos_;
      if (accept('+'))
        v = add(v, term(), false, at);
      else if (accept('-'))
        v = add(v, term(), true, at);
      else
        return v;
    }
  }

  Poly term() {
    Poly v = unary();
    for (;;) {
      skip_ws();
      std::size_t at = pos_;
      if (!accept('*')) return v;
      v = mul(v, unary(), at);
    }
  }

  Poly unary() {
    skip_ws();
    std::size_t at = pos_;
    if (accept('+')) return unary();
    if (accept('-')) return mul(constant(-1.0), unary(), at);
    return power();
  }

  Poly power() {
    Poly base = primary();
    skip_ws();
    std::size_t at = pos_;
    if (!accept('^')) return base;
    skip_ws();
    long e = integer("exponent");
    Poly out = base.scalar ? constant(1.0) : Poly{};
    if (!base.scalar) {
      if (base.rows != base.cols) fail_at("power of a non-square matrix", at);
      out = promote(constant(1.0), base.rows);
    }
    for (long k = 0; k < e; ++k) out = mul(out, base, at);
    return out;
  }

  long integer(const char* what) {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail_at(std::string("expected integer ") + what, start);
    if (pos_ - start > 9) fail_at(std::string(what) + " too large", start);
    return std::strtol(s_.substr(start, pos_ - start).c_str(), nullptr, 10);
  }

  bool imag_suffix() {
    if (pos_ < s_.size() && s_[pos_] == 'i' &&
        (pos_ + 1 == s_.size() || !std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])))) {
      ++pos_;
      return true;
    }
    return false;
  }

  Poly primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const std::size_t start = pos_;
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      double x = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      return constant(imag_suffix() ? cplx(0.0, x) : cplx(x, 0.0));
    }
    if (imag_suffix()) return constant(cplx(0.0, 1.0));
    if (c == 'z') {
      ++pos_;
      long k = integer("variable index");
      if (k < 1 || k > d_) fail_at("variable z" + std::to_string(k) + " outside z1..z" + std::to_string(d_), start);
      Poly p;
      p.terms.emplace(Word(d_, {static_cast<int>(k)}), Mat::Ones(1, 1));
      return p;
    }
    if (accept('(')) {
      Poly v = expr();
      expect(')');
      return v;
    }
    if (c == '[') return matrix();
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  Poly matrix() {
    expect('[');
    std::vector<std::vector<cplx>> rows;
    do {
      expect('[');
      std::vector<cplx> row;
      do {
        skip_ws();
        std::size_t at = pos_;
        Poly e = expr();
        if (!e.scalar) fail_at("matrix entries must be scalars", at);
        for (const auto& [w, unused] : e.terms) {
          (void)unused;
          if (!w.empty()) fail_at("matrix entries must be constants", at);
        }
        auto it = e.terms.find(Word::unit(d_));
        row.push_back(it == e.terms.end() ? cplx(0.0) : it->second(0, 0));
      } while (accept(','));
      expect(']');
      if (!rows.empty() && row.size() != rows[0].size()) fail("ragged matrix rows");
      rows.push_back(std::move(row));
    } while (accept(','));
    expect(']');
    Poly out{false, static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()), {}};
    Mat m(out.rows, out.cols);
    for (Eigen::Index i = 0; i < out.rows; ++i)
      for (Eigen::Index j = 0; j < out.cols; ++j) m(i, j) = rows[i][j];
    if (!m.isZero(0.0)) out.terms.emplace(Word::unit(d_), m);
    return out;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int d_;
  int deg_;
};

}  // namespace

FreeSeries parse(const std::string& text, int d, int deg, int p, int q) {
  if (d < 1 || deg < 0) throw Error(ErrorKind::InvalidInput, "parse needs d >= 1 and deg >= 0");
  Parser parser(text, d, deg);
  Poly v = parser.run();
  if (v.scalar && (p != 1 || q != 1)) {
    if (p != q) throw Error(ErrorKind::Parse, "scalar expression cannot fill a non-square shape", 0);
    v.scalar = false;
    v.rows = v.cols = p;
    for (auto& [w, c] : v.terms) c = c(0, 0) * Mat::Identity(p, p);
  }
  if (v.rows != p || v.cols != q)
    throw Error(ErrorKind::Parse,
                "expression has shape " + std::to_string(v.rows) + "x" + std::to_string(v.cols) +
                    ", expected " + std::to_string(p) + "x" + std::to_string(q),
                0);
  FreeSeries f(d, deg, p, q);
  for (const auto& [w, c] : v.terms) {
    if (static_cast<int>(w.size()) > deg)
      throw Error(ErrorKind::Parse, "degree overflow: term " + w.str() + " exceeds deg " + std::to_string(deg),
                  static_cast<long>(text.size()));
    f.set(w, c);
  }
  return f;
}

}  // namespace freehardy
