#pragma once

// Operator algebras on three qubits: the permutation-symmetric collective
// algebra, its axial subalgebras, commutants via numerical null spaces,
// membership and product-span queries, and the error-model dimension table.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "nsq/qmat.hpp"

namespace nsq {

// Letters from {I, X, Y, Z}; length fixed to the qubit count (3 here).
struct PauliWord {
  std::array<char, 3> letters;

  explicit PauliWord(const std::string& s) {
    require(s.size() == 3, "pauli word must have length 3");
    for (int i = 0; i < 3; ++i) {
      require(s[i] == 'I' || s[i] == 'X' || s[i] == 'Y' || s[i] == 'Z',
              "pauli word letters must be I, X, Y or Z");
      letters[i] = s[i];
    }
  }
};

inline Mat pauli_letter(char c) {
  switch (c) {
    case 'I': return pauli_i();
    case 'X': return pauli_x();
    case 'Y': return pauli_y();
    case 'Z': return pauli_z();
  }
  throw std::invalid_argument("unknown pauli letter");
}

// Sum of the word's tensor product over all DISTINCT arrangements of its
// letters, one term per arrangement: ZZI gives 3 terms, ZXI gives 6,
// XYZ gives 6, ZZZ gives 1.
inline Operator symmetrize(const PauliWord& word) {
  std::array<char, 3> perm = word.letters;
  std::sort(perm.begin(), perm.end());
  Mat sum = Mat::Zero(8, 8);
  do {
    Operator term = Operator::identity(1);
    for (char c : perm) term = kron(term, Operator(pauli_letter(c)));
    sum += term.mat();
  } while (std::next_permutation(perm.begin(), perm.end()));
  return Operator(sum);
}

// J_u = (sigma_u^(1) + sigma_u^(2) + sigma_u^(3)) / 2.
inline Operator collective_generator(char axis) {
  require(axis == 'x' || axis == 'y' || axis == 'z', "axis must be x, y or z");
  const char letter = static_cast<char>(std::toupper(axis));
  Mat sum = Mat::Zero(8, 8);
  for (int q = 1; q <= 3; ++q)
    sum += embed(Operator(pauli_letter(letter)), q, 3).mat();
  return Operator(sum / 2.0);
}

// Exchange operator s_jk = sum_u sigma_u^(j) sigma_u^(k); swaps qubits j and k
// up to the identity share, (1 + s_jk)/2 being the transposition.
inline Operator exchange(int j, int k) {
  Mat sum = Mat::Zero(8, 8);
  for (char c : {'X', 'Y', 'Z'}) {
    const Operator p{pauli_letter(c)};
    sum += (embed(p, j, 3) * embed(p, k, 3)).mat();
  }
  return Operator(sum);
}

// Three-fold tensor power of the one-qubit unitary mapping the z axis onto
// the requested axis: Hadamard for x, exp(+i pi sigma_x / 4) for y.
inline Operator collective_axis_change(char axis) {
  require(axis == 'x' || axis == 'y' || axis == 'z', "axis must be x, y or z");
  Mat u(2, 2);
  if (axis == 'z') {
    u = Mat::Identity(2, 2);
  } else if (axis == 'x') {
    u << 1, 1, 1, -1;
    u /= std::sqrt(2.0);
  } else {
    u = (std::cos(M_PI / 4) * Mat::Identity(2, 2) + iu * std::sin(M_PI / 4) * pauli_x());
  }
  const Operator u1(u);
  return kron(kron(u1, u1), u1);
}

// Numerically orthonormalized basis (Frobenius inner product) of a linear
// span of operators; the basis length defines the span's dimension.
class OperatorSpan {
 public:
  // Rank-revealing construction: singular values below `cutoff` relative to
  // the largest are treated as zero.
  static OperatorSpan from_operators(const std::vector<Operator>& ops,
                                     double cutoff = tol_eigen) {
    require(!ops.empty(), "span needs at least one operator");
    const int d = ops[0].dim();
    Mat stacked(d * d, static_cast<int>(ops.size()));
    for (size_t i = 0; i < ops.size(); ++i) {
      require(ops[i].dim() == d, "span operators must share a dimension");
      stacked.col(static_cast<int>(i)) =
          Eigen::Map<const Vec>(ops[i].mat().data(), d * d);
    }
    Eigen::JacobiSVD<Mat> svd(stacked, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    std::vector<Operator> basis;
    if (sv.size() > 0 && sv(0) > 0) {
      for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) <= cutoff * sv(0)) break;
        Mat b = Eigen::Map<const Mat>(svd.matrixU().col(i).data(), d, d);
        basis.push_back(Operator(b));
      }
    }
    return OperatorSpan(d, std::move(basis));
  }

  // Columns must already be orthonormal under the Frobenius inner product.
  static OperatorSpan from_orthonormal(int ambient_dim, std::vector<Operator> basis) {
    return OperatorSpan(ambient_dim, std::move(basis));
  }

  int ambient_dim() const { return ambient_dim_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Operator>& basis() const { return basis_; }

 private:
  OperatorSpan(int ambient_dim, std::vector<Operator> basis)
      : ambient_dim_(ambient_dim), basis_(std::move(basis)) {}

  int ambient_dim_;
  std::vector<Operator> basis_;
};

// The 20 distinct symmetrized words of weight 0..3 on three qubits.
inline std::vector<PauliWord> symmetric_words() {
  std::vector<PauliWord> words;
  const std::string letters = "IXYZ";
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b)
      for (int c = b; c < 4; ++c)
        words.push_back(PauliWord({letters[a], letters[b], letters[c]}));
  return words;
}

// Number of permutation-symmetric basis operators on n qubits.
inline int collective_algebra_dimension(int n) {
  return (n + 1) * (n + 2) * (n + 3) / 6;
}

// The 20-dimensional algebra of permutation-invariant operators.
inline OperatorSpan build_collective_algebra() {
  std::vector<Operator> ops;
  for (const PauliWord& w : symmetric_words()) ops.push_back(symmetrize(w));
  return OperatorSpan::from_operators(ops);
}

// span{1, J_u, uu-hat, uuu-hat}; the x and y versions are unitary conjugates
// of the z version by the collective axis-change rotation.
inline OperatorSpan build_axial_algebra(char axis) {
  std::vector<Operator> ops = {
      Operator::identity(8), collective_generator('z'),
      symmetrize(PauliWord("ZZI")), symmetrize(PauliWord("ZZZ"))};
  const Operator u = collective_axis_change(axis);
  std::vector<Operator> rotated;
  for (const Operator& b : ops)
    rotated.push_back(Operator(u.mat() * b.mat() * u.mat().adjoint()));
  return OperatorSpan::from_operators(rotated);
}

// All X with [X, B] = 0 for every basis element B, found as the null space of
// the stacked commutation constraints (column-major vectorization).
inline OperatorSpan commutant(const OperatorSpan& span, double cutoff = tol_eigen) {
  require(span.dim() > 0, "commutant of an empty span");
  const int d = span.ambient_dim();
  const int d2 = d * d;
  Mat constraints(static_cast<Eigen::Index>(span.dim()) * d2, d2);
  const Mat id = Mat::Identity(d, d);
  for (int i = 0; i < span.dim(); ++i) {
    const Mat& b = span.basis()[i].mat();
    Mat block(d2, d2);
    // vec(XB - BX) = (B^T kron I - I kron B) vec(X)
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c)
        block.block(r * d, c * d, d, d) = b(c, r) * id;
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c)
        block.block(r * d, c * d, d, d) -= (r == c ? 1.0 : 0.0) * b;
    constraints.middleRows(static_cast<Eigen::Index>(i) * d2, d2) = block;
  }
  Eigen::JacobiSVD<Mat> svd(constraints, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  std::vector<Operator> basis;
  for (Eigen::Index i = 0; i < d2; ++i) {
    const double s = i < sv.size() ? sv(i) : 0.0;
    if (s <= cutoff * (smax > 0 ? smax : 1.0)) {
      Mat x = Eigen::Map<const Mat>(svd.matrixV().col(i).data(), d, d);
      basis.push_back(Operator(x));
    }
  }
  return OperatorSpan::from_orthonormal(d, std::move(basis));
}

// Relative distance of x from the span: |x - proj(x)|_F / |x|_F, 0 for x = 0.
inline double membership_residual(const Operator& x, const OperatorSpan& span) {
  require(x.dim() == span.ambient_dim(), "dimension mismatch in membership_residual");
  const double norm = frobenius_norm(x);
  if (norm == 0.0) return 0.0;
  Mat proj = Mat::Zero(x.dim(), x.dim());
  for (const Operator& b : span.basis())
    proj += frobenius_inner(b, x) * b.mat();
  return (x.mat() - proj).norm() / norm;
}

// Span of all pairwise products a_i b_j (and b_j a_i when both_orders).
inline OperatorSpan product_span(const OperatorSpan& a, const OperatorSpan& b,
                                 bool both_orders = false) {
  require(a.ambient_dim() == b.ambient_dim(), "dimension mismatch in product_span");
  std::vector<Operator> prods;
  for (const Operator& x : a.basis())
    for (const Operator& y : b.basis()) {
      prods.push_back(x * y);
      if (both_orders) prods.push_back(y * x);
    }
  return OperatorSpan::from_operators(prods);
}

// Smallest span containing the generators and the identity that is closed
// under multiplication; grown by repeated product closure.
inline OperatorSpan generated_algebra(const std::vector<Operator>& generators) {
  std::vector<Operator> seed = {Operator::identity(generators.empty() ? 2 : generators[0].dim())};
  seed.insert(seed.end(), generators.begin(), generators.end());
  OperatorSpan span = OperatorSpan::from_operators(seed);
  while (true) {
    std::vector<Operator> next = span.basis();
    for (const Operator& x : span.basis())
      for (const Operator& y : span.basis()) next.push_back(x * y);
    OperatorSpan grown = OperatorSpan::from_operators(next);
    if (grown.dim() == span.dim()) return grown;
    span = grown;
  }
}

// Rows of the error-model comparison table: interaction locality
// (independent or collective), symmetry (general or axial), and strength
// (weak = identity plus first-order generators, arbitrary = full algebra).
enum class ErrorModel {
  general_independent_arbitrary,
  general_independent_weak,
  axial_independent_arbitrary,
  axial_independent_weak,
  general_collective_arbitrary,
  general_collective_weak,
  axial_collective_arbitrary,
  axial_collective_weak,
};

inline std::vector<std::pair<ErrorModel, std::string>> error_model_table() {
  return {{ErrorModel::general_independent_arbitrary, "general_independent_arbitrary"},
          {ErrorModel::general_independent_weak, "general_independent_weak"},
          {ErrorModel::axial_independent_arbitrary, "axial_independent_arbitrary"},
          {ErrorModel::axial_independent_weak, "axial_independent_weak"},
          {ErrorModel::general_collective_arbitrary, "general_collective_arbitrary"},
          {ErrorModel::general_collective_weak, "general_collective_weak"},
          {ErrorModel::axial_collective_arbitrary, "axial_collective_arbitrary"},
          {ErrorModel::axial_collective_weak, "axial_collective_weak"}};
}

inline OperatorSpan error_model_span(ErrorModel model) {
  std::vector<Operator> gens;
  switch (model) {
    case ErrorModel::general_independent_arbitrary:
    case ErrorModel::general_independent_weak:
      for (char c : {'X', 'Y', 'Z'})
        for (int q = 1; q <= 3; ++q) gens.push_back(embed(Operator(pauli_letter(c)), q, 3));
      break;
    case ErrorModel::axial_independent_arbitrary:
    case ErrorModel::axial_independent_weak:
      for (int q = 1; q <= 3; ++q) gens.push_back(embed(Operator(pauli_z()), q, 3));
      break;
    case ErrorModel::general_collective_arbitrary:
    case ErrorModel::general_collective_weak:
      for (char a : {'x', 'y', 'z'}) gens.push_back(collective_generator(a));
      break;
    case ErrorModel::axial_collective_arbitrary:
    case ErrorModel::axial_collective_weak:
      gens.push_back(collective_generator('z'));
      break;
  }
  const bool weak = model == ErrorModel::general_independent_weak ||
                    model == ErrorModel::axial_independent_weak ||
                    model == ErrorModel::general_collective_weak ||
                    model == ErrorModel::axial_collective_weak;
  if (weak) {
    std::vector<Operator> ops = {Operator::identity(8)};
    ops.insert(ops.end(), gens.begin(), gens.end());
    return OperatorSpan::from_operators(ops);
  }
  return generated_algebra(gens);
}

inline int error_model_dimension(ErrorModel model) {
  return error_model_span(model).dim();
}

}  // namespace nsq
