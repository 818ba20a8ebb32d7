#pragma once

// The protected two-level subsystem inside the j = 1/2 sector of three
// spins: encoded basis, logical observables, encoding/decoding unitaries,
// recovery-condition checks, and the decoded-frame images of the collective
// generators.

#include <array>
#include <numbers>
#include <vector>

#include "nsq/algebra.hpp"
#include "nsq/qmat.hpp"

namespace nsq {

// Basis of the total-angular-momentum decomposition 8 = 4 (+) 2*2: four
// j = 1/2 states labeled (l, jz) and four symmetric j = 3/2 states.
struct NsBasis {
  // Index 2*l + (jz < 0): (0,+1/2), (0,-1/2), (1,+1/2), (1,-1/2).
  std::array<Vec, 4> states;
  // jz = +3/2, +1/2, -1/2, -3/2.
  std::array<Vec, 4> symmetric_states;
  Complex omega;

  const Vec& state(int l, int jz_sign) const { return states[2 * l + (jz_sign < 0)]; }
};

inline NsBasis build_ns_basis() {
  NsBasis b;
  b.omega = std::exp(iu * (2.0 * std::numbers::pi / 3.0));
  const Complex w = b.omega, w2 = w * w;
  const double n = 1.0 / std::sqrt(3.0);
  const auto ket = [](int i) { return basis_ket(8, i); };
  b.states[0] = n * (ket(0b001) + w * ket(0b010) + w2 * ket(0b100));
  b.states[1] = n * (ket(0b110) + w * ket(0b101) + w2 * ket(0b011));
  b.states[2] = n * (ket(0b001) + w2 * ket(0b010) + w * ket(0b100));
  b.states[3] = n * (ket(0b110) + w2 * ket(0b101) + w * ket(0b011));
  b.symmetric_states[0] = ket(0b000);
  b.symmetric_states[1] = n * (ket(0b001) + ket(0b010) + ket(0b100));
  b.symmetric_states[2] = n * (ket(0b110) + ket(0b101) + ket(0b011));
  b.symmetric_states[3] = ket(0b111);
  return b;
}

// sigma_x = (1 + s12)/2 P, sigma_y = sqrt(3)/6 (s23 - s31) P, and the closing
// product sigma_z = i sigma_x sigma_y, with P the projector onto the j = 1/2
// sector. The closure is left handed: sigma_x sigma_y = -i sigma_z.
struct LogicalPaulis {
  Operator x, y, z;
  Operator code_projector;
};

inline Operator code_projector_half() {
  const Mat s12 = exchange(1, 2).mat(), s23 = exchange(2, 3).mat(),
            s31 = exchange(3, 1).mat();
  return Operator(Mat::Identity(8, 8) / 2.0 - (s12 + s23 + s31) / 6.0);
}

inline LogicalPaulis logical_paulis() {
  const Mat s12 = exchange(1, 2).mat(), s23 = exchange(2, 3).mat(),
            s31 = exchange(3, 1).mat();
  const Operator p = code_projector_half();
  const Operator x{0.5 * (Mat::Identity(8, 8) + s12) * p.mat()};
  const Operator y{std::sqrt(3.0) / 6.0 * (s23 - s31) * p.mat()};
  const Operator z{iu * x.mat() * y.mat()};
  return LogicalPaulis{x, y, z, p};
}

// Worst violation of the closed logical-Pauli algebra: involutions square to
// the code projector, products close with the -i handedness fixed by the
// definition of sigma_z, and distinct operators anticommute on the sector.
inline double pauli_algebra_residual() {
  const LogicalPaulis lp = logical_paulis();
  const Mat x = lp.x.mat(), y = lp.y.mat(), z = lp.z.mat(),
            p = lp.code_projector.mat();
  double worst = 0.0;
  const auto track = [&](const Mat& m) { worst = std::max(worst, max_abs(m)); };
  track(x * y + iu * z);
  track(y * z + iu * x);
  track(z * x + iu * y);
  track(x * x - p);
  track(y * y - p);
  track(z * z - p);
  track(x * y + y * x);
  track(y * z + z * y);
  track(z * x + x * z);
  return worst;
}

// Unitaries linking the angular-momentum basis with the computational basis;
// the decoded layout places the protected qubit on physical qubit 2 and the
// syndrome on qubit 3, with qubit 1 flagging the symmetric sector.
struct CodeUnitaries {
  Operator u_dec, u_enc;
  int data_qubit = 2, ancilla1_qubit = 1, ancilla2_qubit = 3;
};

inline Operator swap_qubits_23() {
  Mat s = Mat::Zero(8, 8);
  for (int i = 0; i < 8; ++i) {
    const int b1 = (i >> 2) & 1, b2 = (i >> 1) & 1, b3 = i & 1;
    s((b1 << 2) | (b3 << 1) | b2, i) = 1.0;
  }
  return Operator(s);
}

inline CodeUnitaries build_code_unitaries() {
  const NsBasis b = build_ns_basis();
  Mat dec = Mat::Zero(8, 8);
  const auto assign = [&](const Vec& source, int target, Complex phase) {
    dec += phase * basis_ket(8, target) * source.adjoint();
  };
  assign(b.state(0, +1), 0b001, 1.0);
  assign(b.state(1, +1), 0b011, 1.0);
  assign(b.state(0, -1), 0b000, 1.0);
  assign(b.state(1, -1), 0b010, 1.0);
  assign(b.symmetric_states[0], 0b100, 1.0);
  assign(b.symmetric_states[1], 0b111, -iu);
  assign(b.symmetric_states[2], 0b110, -iu);
  assign(b.symmetric_states[3], 0b101, 1.0);
  const Operator u_dec{dec};
  require(max_abs(dec * dec.adjoint() - Mat::Identity(8, 8)) <= tol_exact,
          "decoder must be unitary");
  const Operator u_enc{dec.adjoint() * swap_qubits_23().mat()};
  return CodeUnitaries{u_dec, u_enc};
}

// Quantitative recovery-condition check: with code words |i> = |i>_L (x)
// |syndrome>, every pair from the span must satisfy <i| Ea' Eb |j> =
// alpha_ab delta_ij; returns the worst deviation with alpha_ab read off the
// (0,0) entry.
inline double qec_verify(const OperatorSpan& error_span, char syndrome_sign) {
  require(error_span.ambient_dim() == 8, "error span must act on three qubits");
  require(syndrome_sign == '+' || syndrome_sign == '-', "syndrome sign must be + or -");
  const NsBasis b = build_ns_basis();
  const int s = syndrome_sign == '+' ? +1 : -1;
  const std::array<Vec, 2> code = {b.state(0, s), b.state(1, s)};
  double worst = 0.0;
  for (const Operator& ea : error_span.basis())
    for (const Operator& eb : error_span.basis()) {
      const Mat m = ea.mat().adjoint() * eb.mat();
      const Complex alpha = sandwich(code[0], m, code[0]);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          const Complex v = sandwich(code[i], m, code[j]);
          const Complex expected = i == j ? alpha : Complex(0.0);
          worst = std::max(worst, std::abs(v - expected));
        }
    }
  return worst;
}

// Action of an operator on the j = 1/2 sector in the (l, jz) product basis,
// factor-analyzed into logical (x) syndrome form.
struct RestrictedAction {
  Mat code_block;        // 4x4, basis order (0,+), (0,-), (1,+), (1,-)
  Mat logical_factor;    // 2x2 factor on l
  Mat syndrome_factor;   // 2x2 factor on jz
  double residual;       // max |code_block - logical (x) syndrome|
  double identity_residual;  // best achievable with logical factor = identity
  bool logical_identity;
};

inline RestrictedAction restricted_action(const Operator& op) {
  require(op.dim() == 8, "restricted_action needs a three-qubit operator");
  const NsBasis b = build_ns_basis();
  for (const Vec& sym : b.symmetric_states)
    for (const Vec& enc : b.states)
      require(std::abs(sandwich(sym, op.mat(), enc)) <= tol_eigen,
              "operator leaks out of the j = 1/2 sector");
  RestrictedAction out;
  out.code_block = Mat(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      out.code_block(r, c) = sandwich(b.states[r], op.mat(), b.states[c]);

  const auto kron22 = [](const Mat& a, const Mat& b2) {
    return kron(Operator(a), Operator(b2)).mat();
  };

  // Best syndrome factor for a fixed identity logical factor is the average
  // of the two diagonal l blocks.
  const Mat block00 = out.code_block.block(0, 0, 2, 2);
  const Mat block11 = out.code_block.block(2, 2, 2, 2);
  const Mat avg = (block00 + block11) / 2.0;
  out.identity_residual = max_abs(out.code_block - kron22(Mat::Identity(2, 2), avg));

  if (out.identity_residual <= tol_eigen) {
    out.logical_identity = true;
    out.logical_factor = Mat::Identity(2, 2);
    out.syndrome_factor = avg;
    out.residual = out.identity_residual;
    return out;
  }

  // Closest rank-one Kronecker factorization of the realigned block.
  Mat realigned(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          realigned(2 * i + j, 2 * k + l) = out.code_block(2 * i + k, 2 * j + l);
  Eigen::JacobiSVD<Mat> svd(realigned, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double scale = std::sqrt(svd.singularValues()(0));
  Vec va = scale * svd.matrixU().col(0);
  Vec vb = scale * svd.matrixV().col(0).conjugate();
  Mat a(2, 2), bb(2, 2);
  a << va(0), va(1), va(2), va(3);
  bb << vb(0), vb(1), vb(2), vb(3);
  // Fix the gauge: syndrome factor has Frobenius norm sqrt(2) and its
  // largest entry real positive.
  int br = 0, bc = 0;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      if (std::abs(bb(r, c)) > std::abs(bb(br, bc))) { br = r; bc = c; }
  const Complex pivot = bb(br, bc);
  const double bnorm = bb.norm();
  if (std::abs(pivot) > 0 && bnorm > 0) {
    const Complex phase = pivot / std::abs(pivot);
    const Complex factor = phase * bnorm / std::sqrt(2.0);
    bb /= factor;
    a *= factor;
  }
  out.logical_identity = false;
  out.logical_factor = a;
  out.syndrome_factor = bb;
  out.residual = max_abs(out.code_block - kron22(a, bb));
  return out;
}

// Decoded-frame generators 2 J_u^H = u_dec (2 J_u) u_dec' together with the
// worst deviation from their closed conditional forms: E+/E- project the
// first ancilla, the identity block acts on the syndrome qubit alone, and
// the symmetric-sector block mixes in the data qubit through the
// 2 cos(pi/3), 2 sin(pi/3) coefficients.
struct HeisenbergGenerators {
  std::array<Operator, 3> two_j;  // x, y, z
  double explicit_form_deviation;
};

inline HeisenbergGenerators heisenberg_generators(const CodeUnitaries& cu) {
  const Mat id = Mat::Identity(2, 2);
  const Mat sx = pauli_x(), sy = pauli_y(), sz = pauli_z();
  const Mat ep = (id + sz) / 2.0, em = (id - sz) / 2.0;
  const double s = 2.0 * std::sin(std::numbers::pi / 3.0);
  const double c = 2.0 * std::cos(std::numbers::pi / 3.0);
  const auto k3 = [](const Mat& q1, const Mat& q2, const Mat& q3) {
    return kron(kron(Operator(q1), Operator(q2)), Operator(q3)).mat();
  };
  const std::array<Mat, 3> explicit_forms = {
      k3(ep, id, -sx) + k3(em, id - s * sy - c * sz, sx),
      k3(ep, id, sy) + k3(em, -id - s * sy + c * sz, sy),
      k3(ep, id, -sz) + k3(em, id + 2.0 * c * sz, sz)};

  HeisenbergGenerators out{{Operator::identity(8), Operator::identity(8),
                            Operator::identity(8)},
                           0.0};
  const std::array<char, 3> axes = {'x', 'y', 'z'};
  for (int u = 0; u < 3; ++u) {
    const Mat twoj = 2.0 * collective_generator(axes[u]).mat();
    const Mat h = cu.u_dec.mat() * twoj * cu.u_dec.mat().adjoint();
    out.two_j[u] = Operator(h);
    out.explicit_form_deviation =
        std::max(out.explicit_form_deviation, max_abs(h - explicit_forms[u]));
  }
  return out;
}

// Worst mismatch between exp(-i theta J_axis) applied to random sector
// states and the closed half-angle forms: a y rotation mixes the syndrome
// amplitudes as gamma' = gamma cos + delta sin, delta' = delta cos - gamma
// sin; a z rotation attaches phases e^{-+ i theta/2}. The logical
// amplitudes ride along untouched.
inline double rotation_action_check(double theta, char axis) {
  require(axis == 'y' || axis == 'z', "closed rotation forms cover axes y and z");
  const NsBasis b = build_ns_basis();
  Mat diag = Mat::Zero(8, 8);
  for (int i = 0; i < 8; ++i) {
    const double m = (3.0 - 2.0 * __builtin_popcount(static_cast<unsigned>(i))) / 2.0;
    diag(i, i) = std::exp(-iu * theta * m);
  }
  const Mat frame = collective_axis_change(axis).mat();
  const Mat rot = frame * diag * frame.adjoint();

  const double ch = std::cos(theta / 2.0), sh = std::sin(theta / 2.0);
  double worst = 0.0;
  detail::Rng rng(97);
  for (int trial = 0; trial < 24; ++trial) {
    std::array<Complex, 4> amp;
    double norm2 = 0.0;
    for (auto& a : amp) {
      a = Complex(rng.gaussian(), rng.gaussian());
      norm2 += std::norm(a);
    }
    for (auto& a : amp) a /= std::sqrt(norm2);
    Vec psi = Vec::Zero(8);
    for (int i = 0; i < 4; ++i) psi += amp[i] * b.states[i];

    std::array<Complex, 4> expect;
    for (int l = 0; l < 2; ++l) {
      const Complex gamma = amp[2 * l], delta = amp[2 * l + 1];
      if (axis == 'y') {
        expect[2 * l] = gamma * ch + delta * sh;
        expect[2 * l + 1] = delta * ch - gamma * sh;
      } else {
        expect[2 * l] = gamma * std::exp(-iu * theta / 2.0);
        expect[2 * l + 1] = delta * std::exp(iu * theta / 2.0);
      }
    }
    Vec predicted = Vec::Zero(8);
    for (int i = 0; i < 4; ++i) predicted += expect[i] * b.states[i];
    worst = std::max(worst, max_abs(rot * psi - predicted));
  }
  return worst;
}

}  // namespace nsq
