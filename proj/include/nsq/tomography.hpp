#pragma once

// One-qubit process characterization: transfer-matrix reconstruction from the
// four cardinal input states, entanglement fidelity by three routes, Kraus
// extraction through the Choi matrix, and unitality/purity diagnostics.

#include <array>

#include "nsq/channels.hpp"
#include "nsq/qmat.hpp"

namespace nsq {

inline std::array<Mat, 4> pauli_basis() {
  return {pauli_i(), pauli_x(), pauli_y(), pauli_z()};
}

// Real 4x4 transfer matrix, rows and columns indexed by (I, x, y, z); row u
// holds the Pauli decomposition of the output for input operator sigma_u.
// Trace preservation pins the first column to (1, 0, 0, 0).
struct PauliTransferMatrix {
  Eigen::Matrix4d r;

  explicit PauliTransferMatrix(const Eigen::Matrix4d& m) : r(m) {
    require(std::abs(r(0, 0) - 1.0) <= tol_eigen,
            "transfer matrix must preserve the identity trace entry");
    for (int u = 1; u < 4; ++u)
      require(std::abs(r(u, 0)) <= tol_eigen,
              "transfer matrix must have a trace-preserving first column");
  }
};

// Output Bloch decomposition for each Pauli input, recovered from the four
// cardinal outputs by linearity; the first column is forced exactly.
inline PauliTransferMatrix process_tomography(const CardinalOutputs& outputs) {
  std::array<Mat, 4> on_pauli;
  on_pauli[0] = outputs.zero.mat() + outputs.one.mat();
  on_pauli[3] = outputs.zero.mat() - outputs.one.mat();
  on_pauli[1] = 2.0 * outputs.plus_x.mat() - on_pauli[0];
  on_pauli[2] = 2.0 * outputs.plus_y.mat() - on_pauli[0];
  const std::array<Mat, 4> sigma = pauli_basis();
  Eigen::Matrix4d r = Eigen::Matrix4d::Zero();
  r(0, 0) = 1.0;
  for (int u = 0; u < 4; ++u)
    for (int v = u == 0 ? 1 : 0; v < 4; ++v)
      r(u, v) = 0.5 * (sigma[v] * on_pauli[u]).trace().real();
  return PauliTransferMatrix(r);
}

// Choi matrix J[(i,m),(j,n)] = <m| Q(|i><j|) |n> of the map the transfer
// matrix describes, with composite row index 2 i + m.
inline Mat choi_from_ptm(const PauliTransferMatrix& ptm) {
  const std::array<Mat, 4> sigma = pauli_basis();
  Mat j = Mat::Zero(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int jj = 0; jj < 2; ++jj) {
      Mat image = Mat::Zero(2, 2);
      for (int u = 0; u < 4; ++u) {
        const Complex weight = 0.5 * sigma[u](jj, i);
        for (int v = 0; v < 4; ++v) image += weight * ptm.r(u, v) * sigma[v];
      }
      for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n) j(2 * i + m, 2 * jj + n) = image(m, n);
    }
  return j;
}

// Kraus operators from the Choi eigendecomposition. Eigenvalues below the
// complete-positivity floor raise; small nonnegative ones are dropped.
inline KrausChannel kraus_from_ptm(const PauliTransferMatrix& ptm) {
  const Mat j = choi_from_ptm(ptm);
  require(max_abs(j - j.adjoint()) <= tol_eigen, "Choi matrix must be Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(j);
  std::vector<Operator> kraus;
  for (int k = 0; k < 4; ++k) {
    const double lambda = es.eigenvalues()(k);
    if (lambda < -1e-9)
      throw std::invalid_argument("transfer matrix is not completely positive");
    if (lambda <= tol_eigen) continue;
    const Vec w = es.eigenvectors().col(k);
    Mat a(2, 2);
    for (int m = 0; m < 2; ++m)
      for (int i = 0; i < 2; ++i) a(m, i) = std::sqrt(lambda) * w(2 * i + m);
    kraus.push_back(Operator(a));
  }
  return KrausChannel(std::move(kraus));
}

// Sum_mu Tr(rho A_mu) Tr(rho A_mu'); with rho = 1/2 this is the input-
// independent channel fidelity.
inline double entanglement_fidelity_kraus(const KrausChannel& ch,
                                          const DensityMatrix& rho) {
  require(ch.dim == 2 && rho.dim() == 2, "entanglement fidelity is one-qubit only");
  double fe = 0.0;
  for (const Operator& a : ch.kraus) fe += std::norm((rho.mat() * a.mat()).trace());
  return fe;
}

// (F_x + F_y + F_z - 1)/2 from the three pure-state input-output fidelities.
// Rounding slack of 1e-9 on the [0, 1] domain keeps exactly-pure outputs in
// range.
inline double entanglement_fidelity_purestates(double f_x, double f_y, double f_z) {
  for (double f : {f_x, f_y, f_z})
    require(f >= -1e-9 && f <= 1.0 + 1e-9, "pure-state fidelities must lie in [0, 1]");
  return (f_x + f_y + f_z - 1.0) / 2.0;
}

// (1 + p_x + p_y + p_z)/4 from the three relative output polarizations; for
// a transfer matrix this is Tr(r)/4.
inline double entanglement_fidelity_polarizations(double p_x, double p_y, double p_z) {
  for (double p : {p_x, p_y, p_z})
    require(p >= -1.0 - 1e-9 && p <= 1.0 + 1e-9, "polarizations must lie in [-1, 1]");
  return (1.0 + p_x + p_y + p_z) / 4.0;
}

struct FidelityReport {
  double fe_kraus;         // maximally-mixed-input Choi overlap
  double fe_purestate;     // from the three pure-state fidelities
  double fe_polarization;  // from the transfer-matrix diagonal
  double p_x, p_y, p_z;
  double unitality_deviation;      // max |r(I, u)|, u != I
  std::array<double, 4> purities;  // Tr(rho_out^2), inputs |0>, |1>, |+x>, |+y>
  std::array<double, 4> row_norms;  // sum of squared entries by input row
};

inline FidelityReport diagnostics(const PauliTransferMatrix& ptm,
                                  const CardinalOutputs& outputs) {
  FidelityReport rep{};
  // <Omega| J |Omega> / 2 equals the Kraus-sum fidelity at rho = 1/2 and
  // stays defined for measured, possibly non-CP transfer matrices.
  const Mat j = choi_from_ptm(ptm);
  Vec omega = Vec::Zero(4);
  omega(0) = omega(3) = 1.0 / std::sqrt(2.0);
  rep.fe_kraus = 0.5 * sandwich(omega, j, omega).real();

  const auto in_out_fidelity = [](const std::string& label, const DensityMatrix& out) {
    const Mat in = cardinal_state(label).mat();
    return (in * out.mat()).trace().real();
  };
  rep.fe_purestate = entanglement_fidelity_purestates(
      in_out_fidelity("x", outputs.plus_x), in_out_fidelity("y", outputs.plus_y),
      in_out_fidelity("0", outputs.zero));

  rep.p_x = ptm.r(1, 1);
  rep.p_y = ptm.r(2, 2);
  rep.p_z = ptm.r(3, 3);
  rep.fe_polarization = entanglement_fidelity_polarizations(rep.p_x, rep.p_y, rep.p_z);

  rep.unitality_deviation = 0.0;
  for (int u = 1; u < 4; ++u)
    rep.unitality_deviation = std::max(rep.unitality_deviation, std::abs(ptm.r(0, u)));

  const std::array<const DensityMatrix*, 4> outs = {&outputs.zero, &outputs.one,
                                                    &outputs.plus_x, &outputs.plus_y};
  for (int k = 0; k < 4; ++k) rep.purities[k] = outs[k]->purity();
  for (int u = 0; u < 4; ++u) rep.row_norms[u] = ptm.r.row(u).squaredNorm();
  return rep;
}

}  // namespace nsq
