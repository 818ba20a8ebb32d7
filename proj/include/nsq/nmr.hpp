#pragma once

// Physical-layer model: the three-spin internal Hamiltonian in the rotating
// frame, pseudo-pure state preparation, and refocusing schedules built from
// free evolution and ideal pulses.

#include <algorithm>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsq/qmat.hpp"

namespace nsq {

// Chemical shifts nu_k (Hz) and scalar couplings (J12, J23, J13) (Hz); all
// terms are z-diagonal, so the matrix is real diagonal.
struct InternalHamiltonian {
  std::array<double, 3> nu;
  std::array<double, 3> j;  // J12, J23, J13

  static InternalHamiltonian alanine() {
    return InternalHamiltonian{{7167.0, -2286.5, -4881.4}, {54.1, 35.0, -1.3}};
  }
};

// pi sum_k nu_k sigma_z^k + (pi/2) sum_{k<l} J_kl sigma_z^k sigma_z^l in
// rad/s.
inline Operator hamiltonian_matrix(const InternalHamiltonian& h) {
  Mat m = Mat::Zero(8, 8);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < 8; ++i) {
    const double s1 = (i & 4) ? -1.0 : 1.0;
    const double s2 = (i & 2) ? -1.0 : 1.0;
    const double s3 = (i & 1) ? -1.0 : 1.0;
    m(i, i) = pi * (h.nu[0] * s1 + h.nu[1] * s2 + h.nu[2] * s3) +
              pi / 2.0 * (h.j[0] * s1 * s2 + h.j[1] * s2 * s3 + h.j[2] * s1 * s3);
  }
  return Operator(m);
}

inline Operator free_propagator(const InternalHamiltonian& h, double t) {
  require(t >= 0, "free evolution time must be nonnegative");
  const Mat m = hamiltonian_matrix(h).mat();
  Mat u = Mat::Zero(8, 8);
  for (int i = 0; i < 8; ++i) u(i, i) = std::exp(-iu * m(i, i).real() * t);
  return Operator(u);
}

// Free-evolution delay or an instantaneous simultaneous rotation of a qubit
// subset about +-x or +-y.
struct ScheduleEvent {
  bool is_pulse = false;
  double delay = 0.0;        // seconds, delay events
  std::vector<int> qubits;   // 1-based, pulse events
  char axis = 'x';
  double sign = 1.0;
  double angle = 0.0;        // radians
};

struct PulseSchedule {
  std::vector<ScheduleEvent> events;
  int noise_window = -1;  // index of the delay where engineered noise acts
};

inline void validate_schedule(const PulseSchedule& s) {
  for (const ScheduleEvent& e : s.events) {
    if (e.is_pulse) {
      require(e.axis == 'x' || e.axis == 'y', "pulse axis must be x or y");
      require(e.sign == 1.0 || e.sign == -1.0, "pulse sign must be +-1");
      require(std::isfinite(e.angle), "pulse angle must be finite");
      require(!e.qubits.empty(), "pulse needs a qubit subset");
      for (int q : e.qubits) require(q >= 1 && q <= 3, "pulse qubit out of range");
    } else {
      require(e.delay >= 0 && std::isfinite(e.delay), "delay must be nonnegative");
    }
  }
  if (s.noise_window >= 0) {
    require(s.noise_window < static_cast<int>(s.events.size()),
            "noise window index out of range");
    require(!s.events[s.noise_window].is_pulse,
            "noise window must point at a delay event");
  }
}

inline Operator pulse_unitary(const ScheduleEvent& e) {
  const std::array<double, 3> n = e.axis == 'x'
                                      ? std::array<double, 3>{e.sign, 0.0, 0.0}
                                      : std::array<double, 3>{0.0, e.sign, 0.0};
  const Operator rot = single_qubit_rotation(n, e.angle);
  Operator u = Operator::identity(1);
  for (int q = 1; q <= 3; ++q) {
    const bool hit = std::find(e.qubits.begin(), e.qubits.end(), q) != e.qubits.end();
    u = kron(u, hit ? rot : Operator::identity(2));
  }
  return u;
}

// Ordered product of the event unitaries, first event acting first.
inline Operator schedule_propagator(const PulseSchedule& s, const InternalHamiltonian& h) {
  validate_schedule(s);
  Mat u = Mat::Identity(8, 8);
  for (const ScheduleEvent& e : s.events) {
    const Operator step = e.is_pulse ? pulse_unitary(e) : free_propagator(h, e.delay);
    u = step.mat() * u;
  }
  return Operator(u);
}

// Propagators before (through the noise window, inclusive) and after it, so
// an engineered noise block can be inserted between them.
struct SplitPropagators {
  Operator before, after;
};

inline SplitPropagators schedule_split_at_noise(const PulseSchedule& s,
                                                const InternalHamiltonian& h) {
  validate_schedule(s);
  Mat before = Mat::Identity(8, 8), after = Mat::Identity(8, 8);
  for (int k = 0; k < static_cast<int>(s.events.size()); ++k) {
    const ScheduleEvent& e = s.events[k];
    const Operator step = e.is_pulse ? pulse_unitary(e) : free_propagator(h, e.delay);
    if (s.noise_window < 0 || k <= s.noise_window)
      before = step.mat() * before;
    else
      after = step.mat() * after;
  }
  return SplitPropagators{Operator(before), Operator(after)};
}

// min over phi of max |U - e^{i phi} 1|: coarse scan over the phase circle,
// then golden-section refinement of the bracketing interval.
inline double distance_to_identity(const Operator& u) {
  const int dim = u.dim();
  double off = 0.0;
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c)
      if (r != c) off = std::max(off, std::abs(u.mat()(r, c)));
  const auto objective = [&](double phi) {
    const Complex phase = std::exp(iu * phi);
    double worst = off;
    for (int i = 0; i < dim; ++i)
      worst = std::max(worst, std::abs(u.mat()(i, i) - phase));
    return worst;
  };
  const double two_pi = 2.0 * 3.14159265358979323846;
  const int grid = 4096;
  int best = 0;
  double best_val = objective(0.0);
  for (int k = 1; k < grid; ++k) {
    const double val = objective(two_pi * k / grid);
    if (val < best_val) {
      best_val = val;
      best = k;
    }
  }
  double lo = two_pi * (best - 1) / grid, hi = two_pi * (best + 1) / grid;
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
  double f1 = objective(x1), f2 = objective(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = objective(x2);
    }
  }
  return std::min({best_val, f1, f2});
}

// Four equal delays with pi pulses toggling every z term (shifts and all
// three couplings) through the sign patterns (+ + - -), (+ - + -),
// (+ - - +), which average each one to zero exactly.
inline PulseSchedule reference_noop_schedule(double total_delay = 5.5e-3) {
  require(total_delay >= 0, "total delay must be nonnegative");
  const double quarter = total_delay / 4.0;
  const double pi = 3.14159265358979323846;
  PulseSchedule s;
  const auto delay = [&]() {
    ScheduleEvent e;
    e.delay = quarter;
    s.events.push_back(e);
  };
  const auto flip = [&](std::vector<int> qs) {
    ScheduleEvent e;
    e.is_pulse = true;
    e.qubits = std::move(qs);
    e.axis = 'x';
    e.angle = pi;
    s.events.push_back(e);
  };
  delay();
  flip({2, 3});
  delay();
  flip({1, 2});
  delay();
  flip({2, 3});
  delay();
  flip({1, 2});
  s.noise_window = 0;
  return s;
}

inline nlohmann::json schedule_to_json(const PulseSchedule& s) {
  nlohmann::json events = nlohmann::json::array();
  for (const ScheduleEvent& e : s.events) {
    if (e.is_pulse) {
      events.push_back({{"pulse",
                         {{"qubits", e.qubits},
                          {"axis", std::string(e.sign < 0 ? "-" : "+") + e.axis},
                          {"angle", e.angle}}}});
    } else {
      events.push_back({{"delay", e.delay}});
    }
  }
  return nlohmann::json{{"events", events}, {"noise_window", s.noise_window}};
}

inline PulseSchedule schedule_from_json(const nlohmann::json& j) {
  require(j.contains("events") && j["events"].is_array(),
          "schedule JSON needs an events array");
  PulseSchedule s;
  s.noise_window = j.value("noise_window", -1);
  for (const nlohmann::json& je : j["events"]) {
    ScheduleEvent e;
    if (je.contains("delay")) {
      e.delay = je["delay"].get<double>();
    } else if (je.contains("pulse")) {
      const nlohmann::json& jp = je["pulse"];
      e.is_pulse = true;
      e.qubits = jp["qubits"].get<std::vector<int>>();
      std::string axis = jp["axis"].get<std::string>();
      e.sign = 1.0;
      if (!axis.empty() && (axis[0] == '+' || axis[0] == '-')) {
        e.sign = axis[0] == '-' ? -1.0 : 1.0;
        axis = axis.substr(1);
      }
      require(axis == "x" || axis == "y", "pulse axis must be +-x or +-y");
      e.axis = axis[0];
      e.angle = jp["angle"].get<double>();
    } else {
      throw std::invalid_argument("schedule event must be a delay or a pulse");
    }
    s.events.push_back(std::move(e));
  }
  validate_schedule(s);
  return s;
}

// (1 - eps) 1/8 + eps |base><base|.
inline DensityMatrix pseudo_pure(double epsilon, const Vec& base) {
  require(epsilon > 0 && epsilon <= 1.0, "polarization must lie in (0, 1]");
  require(base.size() == 8, "pseudo-pure base state lives on three qubits");
  require(std::abs(base.norm() - 1.0) <= tol_exact, "base state must be normalized");
  const Mat m = (1.0 - epsilon) * Mat::Identity(8, 8) / 8.0 +
                epsilon * (base * base.adjoint());
  return DensityMatrix(Operator(m));
}

}  // namespace nsq
