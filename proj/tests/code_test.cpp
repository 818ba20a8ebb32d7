#include "nsq/code.hpp"

#include <gtest/gtest.h>

#include <random>

#include "nsq/algebra.hpp"
#include "nsq/channels.hpp"
#include "nsq/qmat.hpp"

namespace nsq {
namespace {

Vec random_qubit_ket(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(2);
  v << Complex(gauss(rng), gauss(rng)), Complex(gauss(rng), gauss(rng));
  return v / v.norm();
}

std::array<Vec, 8> all_basis_vectors(const NsBasis& b) {
  return {b.states[0], b.states[1], b.states[2], b.states[3],
          b.symmetric_states[0], b.symmetric_states[1], b.symmetric_states[2],
          b.symmetric_states[3]};
}

Mat total_j_squared() {
  Mat j2 = Mat::Zero(8, 8);
  for (char axis : {'x', 'y', 'z'}) {
    const Mat j = collective_generator(axis).mat();
    j2 += j * j;
  }
  return j2;
}

// Encode -> channel -> decode as a single Kraus set.
KrausChannel decoded_frame_channel(const CodeUnitaries& cu, const KrausChannel& ch) {
  std::vector<Operator> ks;
  for (const Operator& k : ch.kraus)
    ks.push_back(Operator(cu.u_dec.mat() * k.mat() * cu.u_enc.mat()));
  return KrausChannel(std::move(ks));
}

DensityMatrix embed_data_input(const Mat& rho_data) {
  const Vec anc = ancilla_00();
  return DensityMatrix(
      Operator(detail::assemble_three_qubit(rho_data, anc * anc.adjoint(), 3)));
}

TEST(NsBasis, AllEightVectorsAreOrthonormal) {
  const NsBasis b = build_ns_basis();
  const std::array<Vec, 8> vs = all_basis_vectors(b);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      EXPECT_NEAR(std::abs(vs[i].dot(vs[j])), i == j ? 1.0 : 0.0, 1e-12);
}

TEST(NsBasis, LogicalZeroAndOneAreOrthogonalWithinEachSyndromeSector) {
  const NsBasis b = build_ns_basis();
  EXPECT_NEAR(std::abs(b.state(0, +1).dot(b.state(1, +1))), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(b.state(0, -1).dot(b.state(1, -1))), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(1.0 + b.omega + b.omega * b.omega), 0.0, 1e-12);
}

TEST(NsBasis, AngularMomentumQuantumNumbersAreCorrect) {
  const NsBasis b = build_ns_basis();
  const Mat jz = collective_generator('z').mat();
  const Mat j2 = total_j_squared();
  for (int l = 0; l < 2; ++l)
    for (int s : {+1, -1}) {
      const Vec& v = b.state(l, s);
      EXPECT_LT(max_abs(jz * v - (s * 0.5) * v), 1e-12);
      EXPECT_LT(max_abs(j2 * v - 0.75 * v), 1e-12);
    }
  const std::array<double, 4> sym_jz = {1.5, 0.5, -0.5, -1.5};
  for (int i = 0; i < 4; ++i) {
    const Vec& v = b.symmetric_states[i];
    EXPECT_LT(max_abs(jz * v - sym_jz[i] * v), 1e-12);
    EXPECT_LT(max_abs(j2 * v - 3.75 * v), 1e-12);
  }
}

TEST(LogicalPaulis, CommuteWithAllCollectiveGenerators) {
  const LogicalPaulis lp = logical_paulis();
  for (const Operator* s : {&lp.x, &lp.y, &lp.z})
    for (char axis : {'x', 'y', 'z'}) {
      const Mat j = collective_generator(axis).mat();
      EXPECT_LT((s->mat() * j - j * s->mat()).norm(), 1e-10);
    }
}

TEST(LogicalPaulis, SquareToTheCodeProjector) {
  const LogicalPaulis lp = logical_paulis();
  EXPECT_LT(max_abs(lp.x.mat() * lp.x.mat() - lp.code_projector.mat()), 1e-12);
  EXPECT_LT(max_abs(lp.y.mat() * lp.y.mat() - lp.code_projector.mat()), 1e-12);
  const Mat p2 = lp.code_projector.mat() * lp.code_projector.mat();
  EXPECT_LT(max_abs(p2 - lp.code_projector.mat()), 1e-12);
}

TEST(LogicalPaulis, XRestrictionMatchesQubitSwapRestriction) {
  const LogicalPaulis lp = logical_paulis();
  const NsBasis b = build_ns_basis();
  // Independent permutation oracle: swap the first two qubit labels.
  Mat swap12 = Mat::Zero(8, 8);
  for (int i = 0; i < 8; ++i) {
    const int b1 = (i >> 2) & 1, b2 = (i >> 1) & 1, b3 = i & 1;
    swap12((b2 << 2) | (b1 << 1) | b3, i) = 1.0;
  }
  for (const Vec& vi : b.states)
    for (const Vec& vj : b.states)
      EXPECT_NEAR(std::abs(sandwich(vi, lp.x.mat(), vj) - sandwich(vi, swap12, vj)),
                  0.0, 1e-12);
}

TEST(LogicalPaulis, ClosedAlgebraResidualIsTiny) {
  EXPECT_LT(pauli_algebra_residual(), 1e-11);
}

TEST(LogicalPaulis, LieInTheCommutantOfTheCollectiveAlgebra) {
  const OperatorSpan commutant_ac = commutant(build_collective_algebra());
  const LogicalPaulis lp = logical_paulis();
  for (const Operator* s : {&lp.x, &lp.y, &lp.z})
    EXPECT_LT(membership_residual(*s, commutant_ac), 1e-10);
}

TEST(CodeUnitaries, DecoderAndEncoderAreUnitary) {
  const CodeUnitaries cu = build_code_unitaries();
  EXPECT_LT(max_abs(cu.u_dec.mat() * cu.u_dec.mat().adjoint() - Mat::Identity(8, 8)),
            1e-12);
  EXPECT_LT(max_abs(cu.u_enc.mat() * cu.u_enc.mat().adjoint() - Mat::Identity(8, 8)),
            1e-12);
}

TEST(CodeUnitaries, DecoderSendsEachBasisStateToItsAssignedTarget) {
  const CodeUnitaries cu = build_code_unitaries();
  const NsBasis b = build_ns_basis();
  const auto expect_maps = [&](const Vec& src, int target, Complex phase) {
    EXPECT_LT(max_abs(cu.u_dec.mat() * src - phase * basis_ket(8, target)), 1e-12);
  };
  expect_maps(b.state(0, +1), 0b001, 1.0);
  expect_maps(b.state(1, +1), 0b011, 1.0);
  expect_maps(b.state(0, -1), 0b000, 1.0);
  expect_maps(b.state(1, -1), 0b010, 1.0);
  expect_maps(b.symmetric_states[0], 0b100, 1.0);
  expect_maps(b.symmetric_states[1], 0b111, -iu);
  expect_maps(b.symmetric_states[2], 0b110, -iu);
  expect_maps(b.symmetric_states[3], 0b101, 1.0);
}

TEST(CodeUnitaries, EncoderTakesBareDataOnQubitThreeToTheLowerSyndromeSector) {
  const CodeUnitaries cu = build_code_unitaries();
  const NsBasis b = build_ns_basis();
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec psi = random_qubit_ket(rng);
    const Vec input = kron_vec(kron_vec(basis_ket(2, 0), basis_ket(2, 0)), psi);
    const Vec expected = psi(0) * b.state(0, -1) + psi(1) * b.state(1, -1);
    EXPECT_LT(max_abs(cu.u_enc.mat() * input - expected), 1e-12);
  }
}

TEST(QecVerify, CollectiveAlgebraSatisfiesTheRecoveryConditions) {
  EXPECT_LT(qec_verify(build_collective_algebra(), '-'), 1e-10);
}

TEST(QecVerify, SingleSpinErrorsViolateTheRecoveryConditions) {
  // The no-error element always belongs to the error span; the cross terms
  // <i| 1' sigma_z^(1) |j> are what break the conditions.
  const OperatorSpan single{OperatorSpan::from_operators(
      {Operator::identity(8), embed(Operator(pauli_z()), 1, 3)})};
  EXPECT_GT(qec_verify(single, '-'), 0.01);
}

TEST(QecVerify, AxialAlgebraIsDegenerateInTheUpperSyndromeSector) {
  EXPECT_LT(qec_verify(build_axial_algebra('z'), '+'), 1e-10);
}

TEST(QecVerify, RejectsBadSyndromeLabel) {
  EXPECT_THROW(qec_verify(build_collective_algebra(), 'q'), std::invalid_argument);
}

TEST(RestrictedAction, CollectiveGeneratorsActOnTheSyndromeAlone) {
  const Mat sx = pauli_x(), sy = pauli_y(), sz = pauli_z();
  const std::array<std::pair<char, Mat>, 3> cases = {
      std::pair<char, Mat>{'x', -sx}, {'y', -sy}, {'z', sz}};
  for (const auto& [axis, expected] : cases) {
    const Operator twoj{2.0 * collective_generator(axis).mat()};
    const RestrictedAction ra = restricted_action(twoj);
    EXPECT_TRUE(ra.logical_identity) << "axis " << axis;
    EXPECT_LT(ra.residual, 1e-10) << "axis " << axis;
    EXPECT_LT(max_abs(ra.syndrome_factor - expected), 1e-10) << "axis " << axis;
  }
}

TEST(RestrictedAction, SymmetrizedWordsTimesProjectorActOnTheSyndromeAlone) {
  const Operator p = code_projector_half();
  const Operator zz{symmetrize(PauliWord("ZZI")).mat() * p.mat()};
  const RestrictedAction ra_zz = restricted_action(zz);
  EXPECT_TRUE(ra_zz.logical_identity);
  EXPECT_LT(max_abs(ra_zz.syndrome_factor + Mat::Identity(2, 2)), 1e-10);

  const Operator zzz{symmetrize(PauliWord("ZZZ")).mat() * p.mat()};
  const RestrictedAction ra_zzz = restricted_action(zzz);
  EXPECT_TRUE(ra_zzz.logical_identity);
  EXPECT_LT(max_abs(ra_zzz.syndrome_factor + pauli_z()), 1e-10);
}

TEST(RestrictedAction, CrusherSyndromeKrausRestrictToSectorProjectors) {
  const KrausChannel ez = crusher_z();
  const Operator p = code_projector_half();
  const Mat ep = (pauli_i() + pauli_z()) / 2.0, em = (pauli_i() - pauli_z()) / 2.0;
  const RestrictedAction r2 = restricted_action(Operator(ez.kraus[2].mat() * p.mat()));
  EXPECT_TRUE(r2.logical_identity);
  EXPECT_LT(max_abs(r2.syndrome_factor - ep), 1e-10);
  const RestrictedAction r3 = restricted_action(Operator(ez.kraus[3].mat() * p.mat()));
  EXPECT_TRUE(r3.logical_identity);
  EXPECT_LT(max_abs(r3.syndrome_factor - em), 1e-10);
}

TEST(RestrictedAction, LogicalZFactorsAsMinusPauliZOnTheLogicalSlot) {
  const LogicalPaulis lp = logical_paulis();
  const RestrictedAction ra = restricted_action(lp.z);
  EXPECT_FALSE(ra.logical_identity);
  EXPECT_LT(ra.residual, 1e-10);
  EXPECT_LT(max_abs(ra.syndrome_factor - Mat::Identity(2, 2)), 1e-10);
  EXPECT_LT(max_abs(ra.logical_factor + pauli_z()), 1e-10);
}

TEST(RestrictedAction, SingleSpinOperatorsAreRejectedForLeakage) {
  EXPECT_THROW(restricted_action(embed(Operator(pauli_z()), 1, 3)),
               std::invalid_argument);
}

TEST(Heisenberg, DecodedGeneratorsMatchTheirClosedConditionalForms) {
  const CodeUnitaries cu = build_code_unitaries();
  const HeisenbergGenerators hg = heisenberg_generators(cu);
  EXPECT_LT(hg.explicit_form_deviation, 1e-10);
}

TEST(Heisenberg, UpperAncillaBlockOfXGeneratorIsIdentityOnData) {
  const CodeUnitaries cu = build_code_unitaries();
  const HeisenbergGenerators hg = heisenberg_generators(cu);
  const Mat block = hg.two_j[0].mat().block(0, 0, 4, 4);
  const Mat expected = kron(Operator(pauli_i()), Operator(-pauli_x())).mat();
  EXPECT_LT(max_abs(block - expected), 1e-10);
}

TEST(Heisenberg, GeneratorsLeaveTheDataMarginalIntact) {
  const CodeUnitaries cu = build_code_unitaries();
  const HeisenbergGenerators hg = heisenberg_generators(cu);
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec psi = random_qubit_ket(rng), phi = random_qubit_ket(rng);
    const Vec in = kron_vec(kron_vec(basis_ket(2, 0), psi), phi);
    for (const Operator& j : hg.two_j) {
      Vec out = j.mat() * in;
      out /= out.norm();
      const DensityMatrix marginal = partial_trace(DensityMatrix::pure(out), {2});
      EXPECT_NEAR(std::abs(sandwich(psi, marginal.mat(), psi)), 1.0, 1e-10);
    }
  }
}

TEST(RotationAction, ClosedFormsHoldForBothAxes) {
  EXPECT_NEAR(rotation_action_check(0.0, 'y'), 0.0, 1e-13);
  EXPECT_LT(rotation_action_check(0.9, 'y'), 1e-11);
  EXPECT_LT(rotation_action_check(1.7, 'z'), 1e-11);
  EXPECT_LT(rotation_action_check(std::numbers::pi, 'y'), 1e-11);
  EXPECT_THROW(rotation_action_check(0.3, 'x'), std::invalid_argument);
}

TEST(RotationAction, ZRotationOnLowerSectorIsAGlobalPhase) {
  const NsBasis b = build_ns_basis();
  const double theta = 0.61;
  Mat diag = Mat::Zero(8, 8);
  for (int i = 0; i < 8; ++i) {
    const double m = (3.0 - 2.0 * __builtin_popcount(static_cast<unsigned>(i))) / 2.0;
    diag(i, i) = std::exp(-iu * theta * m);
  }
  const Vec psi = 0.6 * b.state(0, -1) + 0.8 * b.state(1, -1);
  EXPECT_LT(max_abs(diag * psi - std::exp(iu * theta / 2.0) * psi), 1e-12);
}

TEST(RotationAction, HalfTurnAboutYSwapsSyndromeStatesUpToSign) {
  const NsBasis b = build_ns_basis();
  const Mat frame = collective_axis_change('y').mat();
  Mat diag = Mat::Zero(8, 8);
  for (int i = 0; i < 8; ++i) {
    const double m = (3.0 - 2.0 * __builtin_popcount(static_cast<unsigned>(i))) / 2.0;
    diag(i, i) = std::exp(-iu * std::numbers::pi * m);
  }
  const Mat rot = frame * diag * frame.adjoint();
  for (int l = 0; l < 2; ++l) {
    EXPECT_LT(max_abs(rot * b.state(l, +1) + b.state(l, -1)), 1e-12);
    EXPECT_LT(max_abs(rot * b.state(l, -1) - b.state(l, +1)), 1e-12);
  }
}

TEST(EndToEnd, CollectiveChannelsActAsTheIdentityOnTheDecodedData) {
  const CodeUnitaries cu = build_code_unitaries();
  const KrausChannel ez = crusher_z();
  const KrausChannel ex = rotate_channel(ez, 'x');
  const KrausChannel ey = rotate_channel(ez, 'y');
  const std::vector<KrausChannel> channels = {
      ez, ex, ey, compose(ex, ez), compose(compose(ex, ez), ey),
      random_collective_unitary(7)};
  for (const KrausChannel& ch : channels) {
    const KrausChannel pipeline = decoded_frame_channel(cu, ch);
    for (const std::string& label : {"0", "1", "x", "y"}) {
      const Mat rho_in = cardinal_state(label).mat();
      const DensityMatrix out =
          partial_trace(apply(pipeline, embed_data_input(rho_in)), {2});
      EXPECT_LT(max_abs(out.mat() - rho_in), 1e-9) << "input " << label;
    }
  }
}

TEST(EndToEnd, EncodedStatesNeverLeakIntoTheSymmetricSector) {
  const CodeUnitaries cu = build_code_unitaries();
  const NsBasis b = build_ns_basis();
  Mat sym_projector = Mat::Zero(8, 8);
  for (const Vec& v : b.symmetric_states) sym_projector += v * v.adjoint();

  const KrausChannel ez = crusher_z();
  const std::vector<KrausChannel> channels = {
      ez, rotate_channel(ez, 'x'), rotate_channel(ez, 'y'),
      compose(rotate_channel(ez, 'x'), ez), random_collective_unitary(9)};
  std::mt19937_64 rng(23);
  for (const KrausChannel& ch : channels)
    for (int trial = 0; trial < 5; ++trial) {
      const Vec psi = random_qubit_ket(rng);
      const Vec encoded = psi(0) * b.state(0, -1) + psi(1) * b.state(1, -1);
      const DensityMatrix out = apply(ch, DensityMatrix::pure(encoded));
      EXPECT_LT((sym_projector * out.mat()).trace().real(), 1e-10);
    }
}

TEST(EndToEnd, AxialNoiseLeavesTheFullEncodedStateUntouched) {
  const NsBasis b = build_ns_basis();
  const KrausChannel ez = crusher_z();
  const WeakDephasing weak = weak_collective_dephasing(1.0, 0.7, 'z');
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec psi = random_qubit_ket(rng);
    const Vec encoded = psi(0) * b.state(0, -1) + psi(1) * b.state(1, -1);
    const DensityMatrix rho = DensityMatrix::pure(encoded);
    EXPECT_LT(max_abs(apply(ez, rho).mat() - rho.mat()), 1e-10);
    EXPECT_LT(max_abs(weak.apply(rho).mat() - rho.mat()), 1e-10);
  }
}

TEST(EndToEnd, TransverseCrusherFullyRandomizesTheDecodedSyndrome) {
  const CodeUnitaries cu = build_code_unitaries();
  const KrausChannel ey = rotate_channel(crusher_z(), 'y');
  const KrausChannel pipeline = decoded_frame_channel(cu, ey);
  const DensityMatrix out =
      apply(pipeline, embed_data_input(Mat::Identity(2, 2) / 2.0));
  const DensityMatrix a2 = partial_trace(out, {3});
  EXPECT_NEAR(a2.mat()(0, 0).real(), 0.5, 1e-10);
}

}  // namespace
}  // namespace nsq
