#pragma once

// Dense complex matrix kernel for few-qubit simulation: operators, density
// matrices, tensor products, partial traces, one-qubit rotations, and JSON
// serialization.  Qubit 1 is the most significant tensor factor throughout,
// so |ijk> has basis index 4i + 2j + k.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace nsq {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Absolute elementwise tolerance for identities that hold in exact arithmetic.
inline constexpr double tol_exact = 1e-12;
// Tolerance for quantities downstream of eigen/singular-value decompositions.
inline constexpr double tol_eigen = 1e-10;
// Density matrices may acquire eigenvalues this far below zero from roundoff.
inline constexpr double tol_psd = -1e-10;

inline const Complex iu{0.0, 1.0};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline double max_abs(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Square matrix on an n-qubit space; dimension is a power of two and all
// entries are finite.
class Operator {
 public:
  explicit Operator(Mat m) : m_(std::move(m)) {
    require(m_.rows() == m_.cols(), "operator matrix must be square");
    require(is_power_of_two(static_cast<int>(m_.rows())),
            "operator dimension must be a power of two");
    require(m_.allFinite(), "operator entries must be finite");
  }

  static Operator identity(int dim) { return Operator(Mat::Identity(dim, dim)); }
  static Operator zero(int dim) { return Operator(Mat::Zero(dim, dim)); }

  int dim() const { return static_cast<int>(m_.rows()); }
  int qubits() const {
    int n = 0;
    for (int d = dim(); d > 1; d >>= 1) ++n;
    return n;
  }
  const Mat& mat() const { return m_; }
  Complex operator()(int r, int c) const { return m_(r, c); }

 private:
  Mat m_;
};

inline Operator dagger(const Operator& a) { return Operator(a.mat().adjoint()); }

inline Operator mat_mul(const Operator& a, const Operator& b) {
  require(a.dim() == b.dim(), "dimension mismatch in mat_mul");
  return Operator(a.mat() * b.mat());
}

inline Operator add(const Operator& a, const Operator& b) {
  require(a.dim() == b.dim(), "dimension mismatch in add");
  return Operator(a.mat() + b.mat());
}

inline Operator scale(Complex c, const Operator& a) { return Operator(c * a.mat()); }

inline Complex trace(const Operator& a) { return a.mat().trace(); }

// trace(a† b), the Frobenius inner product.
inline Complex frobenius_inner(const Operator& a, const Operator& b) {
  require(a.dim() == b.dim(), "dimension mismatch in frobenius_inner");
  return (a.mat().adjoint() * b.mat()).trace();
}

inline double frobenius_norm(const Operator& a) { return a.mat().norm(); }

inline Operator operator*(const Operator& a, const Operator& b) { return mat_mul(a, b); }
inline Operator operator+(const Operator& a, const Operator& b) { return add(a, b); }
inline Operator operator-(const Operator& a, const Operator& b) {
  return add(a, scale(-1.0, b));
}
inline Operator operator*(Complex c, const Operator& a) { return scale(c, a); }
inline Operator operator*(double c, const Operator& a) { return scale(Complex(c), a); }

inline double max_abs_diff(const Operator& a, const Operator& b) {
  require(a.dim() == b.dim(), "dimension mismatch in max_abs_diff");
  return max_abs(a.mat() - b.mat());
}

// Tensor product with the FIRST argument as the most significant subsystem.
inline Operator kron(const Operator& a, const Operator& b) {
  const int da = a.dim(), db = b.dim();
  Mat out(da * db, da * db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      out.block(i * db, j * db, db, db) = a(i, j) * b.mat();
  return Operator(out);
}

inline Vec kron_vec(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

// Computational basis state |index> on a dim-dimensional space.
inline Vec basis_ket(int dim, int index) {
  require(index >= 0 && index < dim, "basis index out of range");
  Vec v = Vec::Zero(dim);
  v(index) = 1.0;
  return v;
}

inline Mat pauli_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline Mat pauli_y() {
  Mat m(2, 2);
  m << 0, -iu, iu, 0;
  return m;
}
inline Mat pauli_z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
inline Mat pauli_i() { return Mat::Identity(2, 2); }

// <bra| m |ket> without relying on implicit 1x1 conversions.
inline Complex sandwich(const Vec& bra, const Mat& m, const Vec& ket) {
  return bra.dot(m * ket);
}

namespace detail {

// Deterministic, platform-independent uniforms and gaussians built on a
// splitmix64 stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  double uniform() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;  // in (0, 1]
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform(), u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phase = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(phase);
    have_spare_ = true;
    return r * std::cos(phase);
  }

 private:
  std::uint64_t next() {  // splitmix64 step
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace detail

// One-qubit operator placed at 1-based position `qubit` among n qubits.
inline Operator embed(const Operator& one_qubit, int qubit, int n) {
  require(one_qubit.dim() == 2, "embed expects a one-qubit operator");
  require(qubit >= 1 && qubit <= n, "embed position out of range");
  Operator out = Operator::identity(1);
  for (int k = 1; k <= n; ++k)
    out = kron(out, k == qubit ? one_qubit : Operator::identity(2));
  return out;
}

// Hermitian, unit-trace, positive-semidefinite operator.
class DensityMatrix {
 public:
  explicit DensityMatrix(Operator op) : op_(std::move(op)) {
    const Mat& m = op_.mat();
    require(max_abs(m - m.adjoint()) <= tol_exact, "density matrix must be Hermitian");
    require(std::abs(m.trace() - Complex(1.0)) <= tol_exact,
            "density matrix must have unit trace");
    Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
    require(es.eigenvalues().minCoeff() >= tol_psd,
            "density matrix must be positive semidefinite");
  }

  static DensityMatrix pure(const Vec& psi) {
    const double n = psi.norm();
    require(std::abs(n - 1.0) <= tol_exact, "pure state must be normalized");
    return DensityMatrix(Operator(psi * psi.adjoint()));
  }

  int dim() const { return op_.dim(); }
  int qubits() const { return op_.qubits(); }
  const Operator& op() const { return op_; }
  const Mat& mat() const { return op_.mat(); }
  double purity() const { return (mat() * mat()).trace().real(); }

 private:
  Operator op_;
};

namespace detail {

// Scatter `bits` of `value` into the positions listed in `positions`
// (qubit numbers, 1-based, qubit 1 = most significant of n).
inline int place_bits(int value, const std::vector<int>& positions, int n) {
  int out = 0;
  for (size_t i = 0; i < positions.size(); ++i) {
    const int bit = (value >> (positions.size() - 1 - i)) & 1;
    out |= bit << (n - positions[i]);
  }
  return out;
}

inline Mat partial_trace_mat(const Mat& m, int n, const std::set<int>& keep) {
  std::vector<int> kept(keep.begin(), keep.end());
  std::vector<int> traced;
  for (int q = 1; q <= n; ++q)
    if (!keep.count(q)) traced.push_back(q);
  const int dk = 1 << kept.size();
  const int dt = 1 << traced.size();
  Mat out = Mat::Zero(dk, dk);
  for (int r = 0; r < dk; ++r)
    for (int c = 0; c < dk; ++c)
      for (int t = 0; t < dt; ++t)
        out(r, c) += m(place_bits(r, kept, n) | place_bits(t, traced, n),
                       place_bits(c, kept, n) | place_bits(t, traced, n));
  return out;
}

}  // namespace detail

// Reduced density matrix on the kept qubits (1-based indices).
inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::set<int>& keep) {
  require(!keep.empty(), "partial_trace needs a nonempty keep set");
  const int n = rho.qubits();
  for (int q : keep) require(q >= 1 && q <= n, "partial_trace index out of range");
  return DensityMatrix(Operator(detail::partial_trace_mat(rho.mat(), n, keep)));
}

// exp(-i angle (axis . sigma) / 2) for a unit axis vector.
inline Operator single_qubit_rotation(const std::array<double, 3>& axis, double angle) {
  const double norm =
      std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  require(std::abs(norm - 1.0) <= tol_exact, "rotation axis must be a unit vector");
  const Mat ns = axis[0] * pauli_x() + axis[1] * pauli_y() + axis[2] * pauli_z();
  return Operator(std::cos(angle / 2) * Mat::Identity(2, 2) -
                  iu * std::sin(angle / 2) * ns);
}

// JSON form {"dim": n, "re": [[..]], "im": [[..]]}, row-major.  Doubles are
// emitted by nlohmann::json in shortest-round-trip decimal form, so parsing
// the dump recovers every entry bit-exactly.
inline nlohmann::json operator_to_json(const Operator& a) {
  const int d = a.dim();
  std::vector<std::vector<double>> re(d, std::vector<double>(d));
  std::vector<std::vector<double>> im(d, std::vector<double>(d));
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      re[r][c] = a(r, c).real();
      im[r][c] = a(r, c).imag();
    }
  return nlohmann::json{{"dim", d}, {"re", re}, {"im", im}};
}

inline Operator operator_from_json(const nlohmann::json& j) {
  const int d = j.at("dim").get<int>();
  const auto re = j.at("re").get<std::vector<std::vector<double>>>();
  const auto im = j.at("im").get<std::vector<std::vector<double>>>();
  require(static_cast<int>(re.size()) == d && static_cast<int>(im.size()) == d,
          "operator JSON row count does not match dim");
  Mat m(d, d);
  for (int r = 0; r < d; ++r) {
    require(static_cast<int>(re[r].size()) == d && static_cast<int>(im[r].size()) == d,
            "operator JSON column count does not match dim");
    for (int c = 0; c < d; ++c) m(r, c) = Complex(re[r][c], im[r][c]);
  }
  return Operator(std::move(m));
}

}  // namespace nsq
