#include "nsq/nmr.hpp"

#include <gtest/gtest.h>

#include <fstream>

#include "nsq/algebra.hpp"
#include "nsq/channels.hpp"
#include "nsq/code.hpp"
#include "nsq/qmat.hpp"

namespace nsq {
namespace {

constexpr double kPi = 3.14159265358979323846;

TEST(Hamiltonian, ZeroParametersGiveTheZeroMatrix) {
  const InternalHamiltonian h{{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
  EXPECT_LT(max_abs(hamiltonian_matrix(h).mat()), 1e-15);
}

TEST(Hamiltonian, IsRealDiagonal) {
  const Mat m = hamiltonian_matrix(InternalHamiltonian::alanine()).mat();
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) {
      if (r != c) EXPECT_EQ(std::abs(m(r, c)), 0.0);
      if (r == c) EXPECT_EQ(m(r, c).imag(), 0.0);
    }
}

TEST(Hamiltonian, GroundStateEntryAddsAllShiftsAndCouplings) {
  const InternalHamiltonian h = InternalHamiltonian::alanine();
  const double expected = kPi * (h.nu[0] + h.nu[1] + h.nu[2]) +
                          kPi / 2.0 * (h.j[0] + h.j[1] + h.j[2]);
  EXPECT_NEAR(hamiltonian_matrix(h).mat()(0, 0).real(), expected, 1e-9);
}

TEST(Hamiltonian, BelongsToNeitherTheCollectiveAlgebraNorItsCommutant) {
  const Operator hs = hamiltonian_matrix(InternalHamiltonian::alanine());
  const OperatorSpan ac = build_collective_algebra();
  EXPECT_GT(membership_residual(hs, ac), 0.1);
  EXPECT_GT(membership_residual(hs, commutant(ac)), 0.1);
}

TEST(FreePropagator, ZeroTimeIsIdentityAndEvolutionIsUnitary) {
  const InternalHamiltonian h = InternalHamiltonian::alanine();
  EXPECT_LT(max_abs(free_propagator(h, 0.0).mat() - Mat::Identity(8, 8)), 1e-15);
  const Mat u = free_propagator(h, 3.7e-3).mat();
  EXPECT_LT(max_abs(u * u.adjoint() - Mat::Identity(8, 8)), 1e-12);
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(std::abs(u(i, i)), 1.0, 1e-12);
  EXPECT_THROW(free_propagator(h, -1.0), std::invalid_argument);
}

TEST(FreePropagator, UnrefocusedEvolutionLeaksEncodedStatesOutOfTheCodeSector) {
  const InternalHamiltonian h = InternalHamiltonian::alanine();
  const NsBasis b = build_ns_basis();
  Mat sym_projector = Mat::Zero(8, 8);
  for (const Vec& v : b.symmetric_states) sym_projector += v * v.adjoint();
  const Vec psi = (b.state(0, -1) + b.state(1, -1)) / std::sqrt(2.0);
  const Vec evolved = free_propagator(h, 5e-3).mat() * psi;
  const double leaked = (sym_projector * evolved).squaredNorm();
  EXPECT_GT(leaked, 1e-6);
}

TEST(SchedulePropagator, EmptyScheduleIsTheIdentity) {
  const PulseSchedule s;
  const Operator u = schedule_propagator(s, InternalHamiltonian::alanine());
  EXPECT_LT(max_abs(u.mat() - Mat::Identity(8, 8)), 1e-15);
}

TEST(SchedulePropagator, HahnEchoRefocusesAPureChemicalShift) {
  const InternalHamiltonian h{{1234.5, 0.0, 0.0}, {0.0, 0.0, 0.0}};
  PulseSchedule s;
  ScheduleEvent d;
  d.delay = 2.3e-3;
  ScheduleEvent p;
  p.is_pulse = true;
  p.qubits = {1};
  p.axis = 'x';
  p.angle = kPi;
  s.events = {d, p, d, p};
  const Operator u = schedule_propagator(s, h);
  EXPECT_LT(distance_to_identity(u), 1e-11);
}

TEST(SchedulePropagator, IsUnitaryForAnArbitraryValidSchedule) {
  const InternalHamiltonian h = InternalHamiltonian::alanine();
  PulseSchedule s;
  ScheduleEvent d;
  d.delay = 1.1e-3;
  ScheduleEvent p;
  p.is_pulse = true;
  p.qubits = {1, 3};
  p.axis = 'y';
  p.sign = -1.0;
  p.angle = kPi / 2.0;
  s.events = {d, p, d};
  const Mat u = schedule_propagator(s, h).mat();
  EXPECT_LT(max_abs(u * u.adjoint() - Mat::Identity(8, 8)), 1e-11);
}

TEST(SchedulePropagator, ReferenceScheduleRefocusesTheFullHamiltonian) {
  InternalHamiltonian h = InternalHamiltonian::alanine();
  const PulseSchedule s = reference_noop_schedule();
  // The nested pattern averages the weak 1-3 coupling too, so the identity
  // distance is tiny both with and without it.
  h.j[2] = 0.0;
  EXPECT_LT(distance_to_identity(schedule_propagator(s, h)), 1e-6);
  h.j[2] = -1.3;
  EXPECT_LT(distance_to_identity(schedule_propagator(s, h)), 1e-6);
}

TEST(SchedulePropagator, ShippedScheduleFileMatchesTheReferenceDesign) {
  std::ifstream in(std::string(NSQ_DATA_DIR) + "/noop_schedule.json");
  ASSERT_TRUE(in.good());
  const PulseSchedule s = schedule_from_json(nlohmann::json::parse(in));
  InternalHamiltonian h = InternalHamiltonian::alanine();
  h.j[2] = 0.0;
  EXPECT_LT(distance_to_identity(schedule_propagator(s, h)), 1e-6);
  EXPECT_EQ(s.noise_window, 0);
  EXPECT_FALSE(s.events[s.noise_window].is_pulse);
}

TEST(SchedulePropagator, SplitAtNoiseWindowRecomposesTheFullPropagator) {
  const InternalHamiltonian h = InternalHamiltonian::alanine();
  const PulseSchedule s = reference_noop_schedule();
  const SplitPropagators sp = schedule_split_at_noise(s, h);
  const Operator full = schedule_propagator(s, h);
  EXPECT_LT(max_abs(sp.after.mat() * sp.before.mat() - full.mat()), 1e-12);
}

TEST(SchedulePropagator, CrusherZKrausCommuteWithEveryFreePropagator) {
  const InternalHamiltonian h = InternalHamiltonian::alanine();
  const KrausChannel ez = crusher_z();
  for (double t : {0.5e-3, 1.375e-3, 5.5e-3}) {
    const Mat u = free_propagator(h, t).mat();
    for (const Operator& k : ez.kraus)
      EXPECT_LT(max_abs(k.mat() * u - u * k.mat()), 1e-11);
  }
}

TEST(ScheduleJson, RoundTripsAndValidates) {
  const PulseSchedule s = reference_noop_schedule();
  const PulseSchedule back = schedule_from_json(schedule_to_json(s));
  const InternalHamiltonian h = InternalHamiltonian::alanine();
  EXPECT_LT(max_abs(schedule_propagator(back, h).mat() -
                    schedule_propagator(s, h).mat()),
            1e-15);
  EXPECT_EQ(back.noise_window, s.noise_window);

  nlohmann::json bad_delay = schedule_to_json(s);
  bad_delay["events"][0]["delay"] = -1.0;
  EXPECT_THROW(schedule_from_json(bad_delay), std::invalid_argument);

  nlohmann::json bad_window = schedule_to_json(s);
  bad_window["noise_window"] = 1;  // a pulse event
  EXPECT_THROW(schedule_from_json(bad_window), std::invalid_argument);
}

TEST(PseudoPure, FullPolarizationIsThePureState) {
  const Vec psi = basis_ket(8, 3);
  const DensityMatrix rho = pseudo_pure(1.0, psi);
  EXPECT_LT(max_abs(rho.mat() - psi * psi.adjoint()), 1e-15);
  EXPECT_THROW(pseudo_pure(0.0, psi), std::invalid_argument);
  EXPECT_THROW(pseudo_pure(1.5, psi), std::invalid_argument);
}

TEST(PseudoPure, UnitalChannelActsOnTheDeviationOnly) {
  const NsBasis b = build_ns_basis();
  const Vec psi = (b.state(0, -1) + iu * b.state(1, -1)) / std::sqrt(2.0);
  const double eps = 0.3;
  const KrausChannel ey = rotate_channel(crusher_z(), 'y');
  const Mat lhs = apply(ey, pseudo_pure(eps, psi)).mat();
  const Mat rhs = (1.0 - eps) * Mat::Identity(8, 8) / 8.0 +
                  eps * apply(ey, DensityMatrix::pure(psi)).mat();
  EXPECT_LT(max_abs(lhs - rhs), 1e-12);
}

TEST(PseudoPure, NormalizedDecodedOutputsAreIndependentOfPolarization) {
  const CodeUnitaries cu = build_code_unitaries();
  const KrausChannel ey = rotate_channel(crusher_z(), 'y');
  std::vector<Operator> ks;
  for (const Operator& k : ey.kraus)
    ks.push_back(Operator(cu.u_dec.mat() * k.mat() * cu.u_enc.mat()));
  const KrausChannel pipeline{std::move(ks)};

  const auto normalized_output = [&](double eps, const std::string& label) {
    const Vec anc = ancilla_00();
    const Vec data = [&] {
      const Mat rho = cardinal_state(label).mat();
      Eigen::SelfAdjointEigenSolver<Mat> es(rho);
      return Vec(es.eigenvectors().col(1));  // the unit-eigenvalue vector
    }();
    const Vec full = kron_vec(anc, data);
    const DensityMatrix in = pseudo_pure(eps, full);
    const DensityMatrix out = partial_trace(apply(pipeline, in), {2});
    return Mat(((out.mat() - (1.0 - eps) * Mat::Identity(2, 2) / 2.0) / eps).eval());
  };
  for (const std::string& label : {"0", "1", "x", "y"}) {
    const Mat ref = normalized_output(1.0, label);
    for (double eps : {0.1, 0.5}) {
      EXPECT_LT(max_abs(normalized_output(eps, label) - ref), 1e-10)
          << "input " << label << " eps " << eps;
    }
  }
}

TEST(DistanceToIdentity, KnownValuesAreRecovered) {
  EXPECT_LT(distance_to_identity(Operator::identity(8)), 1e-12);
  const Complex phase = std::exp(iu * 1.234);
  EXPECT_LT(distance_to_identity(Operator(phase * Mat::Identity(8, 8))), 1e-12);
  Mat almost = Mat::Identity(8, 8);
  almost(0, 1) = 0.05;
  EXPECT_NEAR(distance_to_identity(Operator(almost)), 0.05, 1e-9);
}

}  // namespace
}  // namespace nsq
