#pragma once

// Quantum operations on the three-qubit space: crusher collective dephasing
// and its rotated/cascaded variants, analytic weak (gradient-diffusion)
// dephasing, collective unitary sampling, and reduction to the one-qubit
// data channel.

#include <cstdint>
#include <numbers>
#include <vector>

#include "nsq/algebra.hpp"
#include "nsq/qmat.hpp"

namespace nsq {

// Completeness sum may pass through orthonormalization/SVD upstream, so the
// channel tolerance is the eigen-grade one.
inline constexpr double tol_kraus = 1e-10;

// Ordered Kraus set {K_a} with sum_a K_a† K_a = 1.
struct KrausChannel {
  int dim;
  std::vector<Operator> kraus;

  explicit KrausChannel(std::vector<Operator> ops) : dim(0), kraus(std::move(ops)) {
    require(!kraus.empty(), "channel needs at least one Kraus operator");
    dim = kraus[0].dim();
    Mat sum = Mat::Zero(dim, dim);
    for (const Operator& k : kraus) {
      require(k.dim() == dim, "Kraus operators must share a dimension");
      sum += k.mat().adjoint() * k.mat();
    }
    require(max_abs(sum - Mat::Identity(dim, dim)) <= tol_kraus,
            "Kraus completeness relation violated");
  }
};

// The four projector Kraus operators of the collective z crusher, written in
// the printed {1, Jz, ZZ-hat, ZZZ-hat} combinations.
inline KrausChannel crusher_z() {
  const Mat id = Mat::Identity(8, 8);
  const Mat jz2 = 2.0 * collective_generator('z').mat();
  const Mat zz = symmetrize(PauliWord("ZZI")).mat();
  const Mat zzz = symmetrize(PauliWord("ZZZ")).mat();
  std::vector<Operator> ks;
  ks.push_back(Operator((id + jz2 + zz + zzz) / 8.0));
  ks.push_back(Operator((id - jz2 + zz - zzz) / 8.0));
  ks.push_back(Operator((3.0 * id + jz2 - zz - 3.0 * zzz) / 8.0));
  ks.push_back(Operator((3.0 * id - jz2 - zz + 3.0 * zzz) / 8.0));
  return KrausChannel(std::move(ks));
}

// Conjugate every Kraus operator by the collective rotation taking the z axis
// onto the requested one.
inline KrausChannel rotate_channel(const KrausChannel& ch, char axis) {
  const Operator u = collective_axis_change(axis);
  std::vector<Operator> ks;
  for (const Operator& k : ch.kraus)
    ks.push_back(Operator(u.mat() * k.mat() * u.mat().adjoint()));
  return KrausChannel(std::move(ks));
}

// Kraus set of `then` applied after `first`: all products then_a * first_b.
inline KrausChannel compose(const KrausChannel& first, const KrausChannel& then) {
  require(first.dim == then.dim, "dimension mismatch in compose");
  std::vector<Operator> ks;
  for (const Operator& a : then.kraus)
    for (const Operator& b : first.kraus) ks.push_back(a * b);
  return KrausChannel(std::move(ks));
}

inline DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho) {
  require(ch.dim == rho.dim(), "dimension mismatch in apply");
  Mat out = Mat::Zero(ch.dim, ch.dim);
  for (const Operator& k : ch.kraus) out += k.mat() * rho.mat() * k.mat().adjoint();
  return DensityMatrix(Operator(out));
}

// Single-unitary channel u (x) u (x) u implementing exp(-i sum_u theta_u J_u);
// the collective rotation factorizes exactly into the one-qubit tensor power.
inline KrausChannel collective_rotation_channel(double tx, double ty, double tz) {
  const double angle = std::sqrt(tx * tx + ty * ty + tz * tz);
  Operator u1 = Operator::identity(2);
  if (angle > 0)
    u1 = single_qubit_rotation({tx / angle, ty / angle, tz / angle}, angle);
  const Operator u = kron(kron(u1, u1), u1);
  return KrausChannel({u});
}

namespace detail {

inline Mat haar_one_qubit(Rng& rng) {
  Mat g(2, 2);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) g(r, c) = Complex(rng.gaussian(), rng.gaussian());
  // QR with positive-real diagonal of R makes Q Haar distributed.
  Vec q1 = g.col(0) / g.col(0).norm();
  Vec q2 = g.col(1) - q1 * (q1.adjoint() * g.col(1))(0);
  q2 /= q2.norm();
  Mat q(2, 2);
  q.col(0) = q1;
  q.col(1) = q2;
  return q;
}

}  // namespace detail

// Haar-random one-qubit unitary applied collectively; deterministic per seed.
inline KrausChannel random_collective_unitary(std::uint64_t seed) {
  detail::Rng rng(seed);
  const Operator u1{detail::haar_one_qubit(rng)};
  return KrausChannel({kron(kron(u1, u1), u1)});
}

// Gradient-diffusion noise parameters (SI units).
struct WeakNoiseParams {
  double D;      // diffusion coefficient, m^2/s
  double gamma;  // gyromagnetic ratio, rad/(s T)
  double grad;   // dBz/dz, T/m
  double delta;  // gradient pulse duration, s
  double Delta;  // holding duration, s

  WeakNoiseParams(double D_, double gamma_, double grad_, double delta_, double Delta_)
      : D(D_), gamma(gamma_), grad(grad_), delta(delta_), Delta(Delta_) {
    require(D >= 0 && gamma >= 0 && grad >= 0 && delta >= 0 && Delta >= 0,
            "noise parameters must be nonnegative");
    require(delta + Delta > 0, "noise interval must have positive duration");
  }
};

// 1/tau = D gamma^2 (dBz/dz)^2 delta^2 (Delta + 2 delta/3) / (Delta + 2 delta).
inline double weak_noise_rate(const WeakNoiseParams& p) {
  const double k2 = p.D * p.gamma * p.gamma * p.grad * p.grad * p.delta * p.delta;
  return k2 * (p.Delta + 2.0 * p.delta / 3.0) / (p.Delta + 2.0 * p.delta);
}

// Total coherence attenuation of the gradient / diffusion / reverse-gradient
// block; equals exp(-t/tau) with t = Delta + 2 delta.
inline double gradient_attenuation(const WeakNoiseParams& p) {
  const double k2 = p.D * p.gamma * p.gamma * p.grad * p.grad * p.delta * p.delta;
  return std::exp(-k2 * (p.Delta + 2.0 * p.delta / 3.0));
}

// Analytic Gaussian-average collective dephasing: in the J_axis eigenbasis the
// coherence between eigenvalues m and m' is damped by exp(-(m - m')^2 t/tau).
// The Gaussian collective phase has variance 2 t/tau, so a single-qubit
// coherence (|m - m'| = 1) decays exactly as exp(-t/tau).
class WeakDephasing {
 public:
  WeakDephasing(double rate, double t, char axis)
      : axis_(axis), strength_(rate * t), frame_(collective_axis_change(axis)) {
    require(strength_ >= 0, "dephasing strength rate*t must be nonnegative");
    damping_ = Mat::Zero(8, 8);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        const double dm = jz_eigenvalue(i) - jz_eigenvalue(j);
        damping_(i, j) = std::exp(-dm * dm * strength_);
      }
  }

  char axis() const { return axis_; }
  double strength() const { return strength_; }  // t/tau
  const Mat& damping_factors() const { return damping_; }

  DensityMatrix apply(const DensityMatrix& rho) const {
    const Mat& u = frame_.mat();
    Mat in_frame = u.adjoint() * rho.mat() * u;
    Mat damped = in_frame.cwiseProduct(damping_);
    return DensityMatrix(Operator(u * damped * u.adjoint()));
  }

 private:
  static double jz_eigenvalue(int basis_index) {
    const int weight = __builtin_popcount(static_cast<unsigned>(basis_index));
    return (3.0 - 2.0 * weight) / 2.0;
  }

  char axis_;
  double strength_;
  Operator frame_;
  Mat damping_;
};

inline WeakDephasing weak_collective_dephasing(double rate, double t, char axis) {
  return WeakDephasing(rate, t, axis);
}

inline DensityMatrix apply(const WeakDephasing& ch, const DensityMatrix& rho) {
  return ch.apply(rho);
}

// One-qubit channel outputs for the four cardinal inputs |0>, |1>, |+x>, |+y>;
// enough to reconstruct a trace-preserving map.
struct CardinalOutputs {
  DensityMatrix zero, one, plus_x, plus_y;
};

inline DensityMatrix cardinal_state(const std::string& label) {
  if (label == "0") return DensityMatrix::pure(basis_ket(2, 0));
  if (label == "1") return DensityMatrix::pure(basis_ket(2, 1));
  if (label == "x")
    return DensityMatrix::pure((basis_ket(2, 0) + basis_ket(2, 1)) / std::sqrt(2.0));
  if (label == "y")
    return DensityMatrix::pure((basis_ket(2, 0) + iu * basis_ket(2, 1)) / std::sqrt(2.0));
  throw std::invalid_argument("unknown cardinal state label: " + label);
}

namespace detail {

// rho_data at 1-based position `data_qubit`, the two-qubit ancilla state on
// the remaining positions in ascending order.
inline Mat assemble_three_qubit(const Mat& rho_data, const Mat& rho_anc, int data_qubit) {
  std::vector<int> anc;
  for (int q = 1; q <= 3; ++q)
    if (q != data_qubit) anc.push_back(q);
  Mat out(8, 8);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) {
      const auto bit = [](int idx, int q) { return (idx >> (3 - q)) & 1; };
      const int dr = bit(r, data_qubit), dc = bit(c, data_qubit);
      const int ar = (bit(r, anc[0]) << 1) | bit(r, anc[1]);
      const int ac = (bit(c, anc[0]) << 1) | bit(c, anc[1]);
      out(r, c) = rho_data(dr, dc) * rho_anc(ar, ac);
    }
  return out;
}

}  // namespace detail

inline Vec ancilla_00() {
  return kron_vec(basis_ket(2, 0), basis_ket(2, 0));
}

// The one-qubit map rho -> Tr_ancillae{ E(rho (x) |a1 a2><a1 a2|) } evaluated
// on the four cardinal inputs.
template <typename Channel>
CardinalOutputs reduce_to_one_qubit(const Channel& ch, int data_qubit,
                                    const Vec& ancilla_state = ancilla_00()) {
  require(data_qubit >= 1 && data_qubit <= 3, "data qubit index out of range");
  require(ancilla_state.size() == 4, "ancilla state must live on two qubits");
  require(std::abs(ancilla_state.norm() - 1.0) <= tol_exact,
          "ancilla state must be normalized");
  const Mat anc = ancilla_state * ancilla_state.adjoint();
  const auto reduced = [&](const std::string& label) {
    const DensityMatrix in{Operator(
        detail::assemble_three_qubit(cardinal_state(label).mat(), anc, data_qubit))};
    return partial_trace(apply(ch, in), {data_qubit});
  };
  return CardinalOutputs{reduced("0"), reduced("1"), reduced("x"), reduced("y")};
}

}  // namespace nsq
