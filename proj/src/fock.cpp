#include "freehardy/fock.hpp"

#include "freehardy/error.hpp"

namespace freehardy {

FockVector FockVector::zero(int d, int N, int p) {
  return FockVector{d, N, p, Vec::Zero(static_cast<Eigen::Index>(word_count(d, N)) * p)};
}

FockVector FockVector::basis(const Word& w, int N) {
  if (static_cast<int>(w.size()) > N) throw Error(ErrorKind::InvalidInput, "word longer than truncation");
  FockVector v = zero(w.d(), N);
  v.coords(static_cast<Eigen::Index>(word_index(w))) = 1.0;
  return v;
}

cplx FockVector::at(const Word& w, int component) const {
  if (static_cast<int>(w.size()) > N) return 0.0;
  return coords(static_cast<Eigen::Index>(word_index(w)) * p + component);
}

cplx& FockVector::at(const Word& w, int component) {
  if (static_cast<int>(w.size()) > N) throw Error(ErrorKind::InvalidInput, "word longer than truncation");
  return coords(static_cast<Eigen::Index>(word_index(w)) * p + component);
}

cplx inner(const FockVector& a, const FockVector& b) {
  if (a.coords.size() != b.coords.size()) throw Error(ErrorKind::InvalidInput, "Fock vector size mismatch");
  return a.coords.dot(b.coords);  // Eigen's dot conjugates the left factor
}

nlohmann::json to_json(const FockVector& v) {
  nlohmann::json j = nlohmann::json::object();
  for (Eigen::Index i = 0; i < v.coords.size(); ++i) {
    if (v.coords(i) == cplx(0.0)) continue;
    Word w = word_at(v.d, static_cast<std::size_t>(i / v.p));
    std::string key = w.str();
    if (v.p > 1) key += "#" + std::to_string(i % v.p);
    j[key] = {v.coords(i).real(), v.coords(i).imag()};
  }
  return j;
}

FockVector fock_vector_from_json(const nlohmann::json& j, int d, int N) {
  FockVector v = FockVector::zero(d, N);
  for (auto it = j.begin(); it != j.end(); ++it) {
    Word w = word_from_json(nlohmann::json::parse(it.key()), d);
    v.at(w) = cplx(it.value().at(0).get<double>(), it.value().at(1).get<double>());
  }
  return v;
}

FockOperator FockOperator::adjoint() const {
  return FockOperator{d, N, q, p, SpMat(matrix.adjoint()), label + "*"};
}

FockOperator creation(Side side, int k, int d, int N) {
  if (k < 1 || k > d) throw Error(ErrorKind::InvalidInput, "creation letter out of range");
  const auto words = enumerate(d, N);
  const auto n = static_cast<Eigen::Index>(words.size());
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(words.size());
  const Word letter(d, {k});
  for (const Word& w : words) {
    if (static_cast<int>(w.size()) == N) continue;  // nilpotent truncation
    Word image = side == Side::Left ? concat(letter, w) : concat(w, letter);
    trip.emplace_back(static_cast<Eigen::Index>(word_index(image)),
                      static_cast<Eigen::Index>(word_index(w)), 1.0);
  }
  FockOperator op{d, N, 1, 1, SpMat(n, n), (side == Side::Left ? "L" : "R") + std::to_string(k)};
  op.matrix.setFromTriplets(trip.begin(), trip.end());
  return op;
}

FockOperator transpose_unitary(int d, int N) {
  const auto words = enumerate(d, N);
  const auto n = static_cast<Eigen::Index>(words.size());
  std::vector<Eigen::Triplet<cplx>> trip;
  for (const Word& w : words)
    trip.emplace_back(static_cast<Eigen::Index>(word_index(dagger(w))),
                      static_cast<Eigen::Index>(word_index(w)), 1.0);
  FockOperator op{d, N, 1, 1, SpMat(n, n), "U_dagger"};
  op.matrix.setFromTriplets(trip.begin(), trip.end());
  return op;
}

FockOperator grade_projection(int d, int N, int m_low, int m_high) {
  const auto n = static_cast<Eigen::Index>(word_count(d, N));
  std::vector<Eigen::Triplet<cplx>> trip;
  for (Eigen::Index i = 0; i < n; ++i) {
    int len = static_cast<int>(word_at(d, static_cast<std::size_t>(i)).size());
    if (len >= m_low && len <= m_high) trip.emplace_back(i, i, 1.0);
  }
  FockOperator op{d, N, 1, 1, SpMat(n, n), "P"};
  op.matrix.setFromTriplets(trip.begin(), trip.end());
  return op;
}

double row_isometry_defect(const std::vector<FockOperator>& ops) {
  if (ops.empty()) throw Error(ErrorKind::InvalidInput, "empty operator tuple");
  const int d = ops[0].d, N = ops[0].N;
  const Eigen::Index n = ops[0].matrix.rows();
  for (const auto& t : ops)
    if (t.d != d || t.N != N || t.matrix.rows() != n || t.matrix.cols() != n)
      throw Error(ErrorKind::InvalidInput, "operators do not share (d, N)");
  const Mat P = grade_projection(d, N, 0, N - 1).dense();
  const auto m = static_cast<Eigen::Index>(ops.size());
  Mat gram(m * n, m * n);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b) {
      Mat blk = Mat(SpMat(ops[a].matrix.adjoint()) * ops[b].matrix);
      if (a == b) blk -= P;
      gram.block(a * n, b * n, n, n) = blk;
    }
  return op_norm(gram);
}

}  // namespace freehardy
