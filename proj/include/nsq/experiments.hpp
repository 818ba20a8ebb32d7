#pragma once

// End-to-end fidelity experiments: strong-noise channel tables, weak-noise
// decay sweeps with exponential fits, and CSV output that can carry
// hardware-reported reference columns next to the ideal values.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nsq/channels.hpp"
#include "nsq/code.hpp"
#include "nsq/tomography.hpp"

namespace nsq {

enum class Pipeline { unencoded, encoded };

enum class NoiseMode { crusher, weak, random };

// One applied noise window.  Crusher blocks use `axis` only; weak blocks damp
// at dimensionless strength rate * duration about `axis`; random blocks draw
// a Haar collective unitary from the experiment's seed stream and ignore the
// remaining fields.
struct NoiseBlock {
  NoiseMode mode = NoiseMode::crusher;
  char axis = 'z';
  double rate = 1.0;
  double duration = 0.0;
};

struct ExperimentSpec {
  std::string label;
  Pipeline pipeline = Pipeline::encoded;
  std::vector<NoiseBlock> noise;
  // An empty noise list is valid only when flagged as a deliberate no-op run.
  bool explicit_noop = false;
  std::vector<std::string> inputs = {"0", "x", "y"};
  // Repetitions average the channel over fresh random draws; deterministic
  // blocks make every repetition identical.
  int repetitions = 1;
  std::uint64_t seed = 1;
  // Uniform depolarizing strength applied once after encoding and once after
  // decoding; zero gives the ideal pipeline.
  double imperfection = 0.0;
};

inline void validate_spec(const ExperimentSpec& spec) {
  require(!spec.noise.empty() || spec.explicit_noop,
          "experiment needs noise blocks or an explicit no-op flag");
  require(spec.noise.empty() || !spec.explicit_noop,
          "a no-op experiment cannot carry noise blocks");
  for (const NoiseBlock& b : spec.noise) {
    if (b.mode != NoiseMode::random)
      require(b.axis == 'x' || b.axis == 'y' || b.axis == 'z',
              "noise axis must be one of x, y, z");
    if (b.mode == NoiseMode::weak)
      require(b.rate >= 0.0 && b.duration >= 0.0,
              "weak noise rate and duration must be nonnegative");
  }
  require(!spec.inputs.empty(), "experiment needs at least one input label");
  for (const std::string& label : spec.inputs) cardinal_state(label);
  require(spec.repetitions >= 1, "repetitions must be at least one");
  require(spec.imperfection >= 0.0 && spec.imperfection <= 1.0,
          "imperfection strength must lie in [0, 1]");
}

using ChannelStage = std::function<DensityMatrix(const DensityMatrix&)>;

// Ordered stages applied first to last.
struct SequentialChannel {
  std::vector<ChannelStage> stages;
};

inline DensityMatrix apply(const SequentialChannel& ch, const DensityMatrix& rho) {
  DensityMatrix out = rho;
  for (const ChannelStage& stage : ch.stages) out = stage(out);
  return out;
}

// rho -> (1 - strength) rho + strength 1/d.
inline DensityMatrix depolarize_uniform(const DensityMatrix& rho, double strength) {
  require(strength >= 0.0 && strength <= 1.0,
          "depolarizing strength must lie in [0, 1]");
  const int d = rho.dim();
  return DensityMatrix(Operator((1.0 - strength) * rho.mat() +
                                (strength / d) * Mat::Identity(d, d)));
}

namespace detail {

inline ChannelStage unitary_stage(Mat u) {
  return [u = std::move(u)](const DensityMatrix& rho) {
    return DensityMatrix(Operator(u * rho.mat() * u.adjoint()));
  };
}

inline int cardinal_index(const std::string& label) {
  if (label == "0") return 0;
  if (label == "1") return 1;
  if (label == "x") return 2;
  if (label == "y") return 3;
  throw std::invalid_argument("unknown cardinal state label: " + label);
}

}  // namespace detail

// The three-qubit noise channel for one repetition; random blocks consume
// draws from `rng` in block order.
inline SequentialChannel noise_channel(const std::vector<NoiseBlock>& blocks,
                                       detail::Rng& rng) {
  SequentialChannel ch;
  for (const NoiseBlock& b : blocks) {
    if (b.mode == NoiseMode::crusher) {
      ch.stages.push_back(
          [k = rotate_channel(crusher_z(), b.axis)](const DensityMatrix& rho) {
            return apply(k, rho);
          });
    } else if (b.mode == NoiseMode::weak) {
      ch.stages.push_back([w = weak_collective_dephasing(b.rate, b.duration, b.axis)](
                              const DensityMatrix& rho) { return apply(w, rho); });
    } else {
      const Operator u(detail::haar_one_qubit(rng));
      ch.stages.push_back(detail::unitary_stage(kron(kron(u, u), u).mat()));
    }
  }
  return ch;
}

// Full channel seen from the decoded frame: the encoder is the decoder
// inverse, so data enters and leaves on tensor slot cu.data_qubit with both
// ancillae prepared in |0> and the jz = -1/2 gauge sector carrying the state.
inline SequentialChannel pipeline_channel(const ExperimentSpec& spec,
                                          const CodeUnitaries& cu, detail::Rng& rng) {
  SequentialChannel ch;
  const bool encoded = spec.pipeline == Pipeline::encoded;
  const auto add_imperfection = [&ch, &spec] {
    if (spec.imperfection > 0.0)
      ch.stages.push_back([p = spec.imperfection](const DensityMatrix& rho) {
        return depolarize_uniform(rho, p);
      });
  };
  if (encoded) {
    ch.stages.push_back(detail::unitary_stage(cu.u_dec.mat().adjoint()));
    add_imperfection();
  }
  SequentialChannel noise = noise_channel(spec.noise, rng);
  for (ChannelStage& stage : noise.stages) ch.stages.push_back(std::move(stage));
  if (encoded) {
    ch.stages.push_back(detail::unitary_stage(cu.u_dec.mat()));
    add_imperfection();
  }
  return ch;
}

struct ExperimentResult {
  PauliTransferMatrix ptm;
  FidelityReport report;
  // Overlap of each cardinal output with its own pure input, order
  // |0>, |1>, |+x>, |+y>.
  std::array<double, 4> cardinal_fidelities;
  // The subset requested by the spec, keyed by input label.
  std::vector<std::pair<std::string, double>> input_fidelities;
  // Mean over the cardinal inputs of <0| rho_a2 |0> after the pipeline.
  double a2_average_fidelity;
};

inline ExperimentResult run(const ExperimentSpec& spec) {
  validate_spec(spec);
  const CodeUnitaries cu = build_code_unitaries();
  detail::Rng rng(spec.seed);
  constexpr std::array<const char*, 4> labels = {"0", "1", "x", "y"};
  const Vec anc_ket = ancilla_00();
  const Mat anc = anc_ket * anc_ket.adjoint();

  std::array<Mat, 4> sums;
  sums.fill(Mat::Zero(2, 2));
  double a2_sum = 0.0;
  for (int rep = 0; rep < spec.repetitions; ++rep) {
    const SequentialChannel ch = pipeline_channel(spec, cu, rng);
    for (int i = 0; i < 4; ++i) {
      const DensityMatrix in{Operator(detail::assemble_three_qubit(
          cardinal_state(labels[i]).mat(), anc, cu.data_qubit))};
      const DensityMatrix out = apply(ch, in);
      sums[i] += partial_trace(out, {cu.data_qubit}).mat();
      a2_sum += partial_trace(out, {cu.ancilla2_qubit}).mat()(0, 0).real();
    }
  }

  const double scale = 1.0 / spec.repetitions;
  const auto averaged = [&](int i) { return DensityMatrix(Operator(scale * sums[i])); };
  const CardinalOutputs outputs{averaged(0), averaged(1), averaged(2), averaged(3)};
  const PauliTransferMatrix ptm = process_tomography(outputs);
  ExperimentResult result{ptm, diagnostics(ptm, outputs), {}, {}, a2_sum * scale / 4.0};
  const std::array<const DensityMatrix*, 4> outs = {&outputs.zero, &outputs.one,
                                                    &outputs.plus_x, &outputs.plus_y};
  for (int i = 0; i < 4; ++i) {
    const Mat in = cardinal_state(labels[i]).mat();
    result.cardinal_fidelities[i] = (in * outs[i]->mat()).trace().real();
  }
  for (const std::string& label : spec.inputs)
    result.input_fidelities.emplace_back(
        label, result.cardinal_fidelities[detail::cardinal_index(label)]);
  for (double fe : {result.report.fe_kraus, result.report.fe_purestate,
                    result.report.fe_polarization})
    require(fe >= -0.5 - 1e-9 && fe <= 1.0 + 1e-9,
            "entanglement fidelity outside the physical range");
  return result;
}

struct SweepPoint {
  double t_over_tau;
  double fe_encoded;
  double fe_unencoded;
  double a2_average_fidelity;
};

// Weak-dephasing decay curve over dimensionless times t/tau; the a2 column
// tracks the encoded pipeline's second ancilla.
inline std::vector<SweepPoint> weak_noise_sweep(char axis,
                                                const std::vector<double>& times) {
  std::vector<SweepPoint> curve;
  curve.reserve(times.size());
  for (double t : times) {
    require(t >= 0.0, "sweep times must be nonnegative");
    ExperimentSpec spec;
    spec.pipeline = Pipeline::encoded;
    spec.noise = {NoiseBlock{NoiseMode::weak, axis, 1.0, t}};
    const ExperimentResult encoded = run(spec);
    spec.pipeline = Pipeline::unencoded;
    const ExperimentResult unencoded = run(spec);
    curve.push_back({t, encoded.report.fe_kraus, unencoded.report.fe_kraus,
                     encoded.a2_average_fidelity});
  }
  return curve;
}

struct ExponentialFit {
  double amplitude;  // A in A exp(-t/tau) + B
  double offset;     // B
  double tau;        // NaN when tau_defined is false
  bool tau_defined;
  double rms_residual;
};

namespace detail {

// Least-squares (A, B) for fixed tau; returns the residual sum of squares.
inline double exponential_sse(const std::vector<std::pair<double, double>>& points,
                              double tau, double* amplitude, double* offset) {
  const int n = static_cast<int>(points.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    design(i, 0) = std::exp(-points[i].first / tau);
    design(i, 1) = 1.0;
    y(i) = points[i].second;
  }
  const Eigen::Vector2d coef =
      design.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(y);
  *amplitude = coef(0);
  *offset = coef(1);
  return (design * coef - y).squaredNorm();
}

}  // namespace detail

// F = A exp(-t/tau) + B by variable projection: tau is scanned on a log grid
// spanning the time range and refined by golden section, with (A, B) solved
// linearly at each tau.  Amplitudes below 1e-6 collapse to a constant fit
// with tau undefined; poor fits are reported through rms_residual.
inline ExponentialFit fit_exponential(const std::vector<std::pair<double, double>>& points) {
  require(points.size() >= 3, "exponential fit needs at least three points");
  const int n = static_cast<int>(points.size());
  double t_min = points[0].first, t_max = points[0].first, mean = 0.0;
  for (const auto& [t, f] : points) {
    t_min = std::min(t_min, t);
    t_max = std::max(t_max, t);
    mean += f;
  }
  mean /= n;
  const auto constant_fit = [&] {
    double sse = 0.0;
    for (const auto& [t, f] : points) sse += (f - mean) * (f - mean);
    return ExponentialFit{0.0, mean, std::numeric_limits<double>::quiet_NaN(), false,
                          std::sqrt(sse / n)};
  };
  const double span = t_max - t_min;
  if (span <= 0.0) return constant_fit();

  double a = 0.0, b = 0.0;
  const auto sse_at = [&](double log_tau) {
    return detail::exponential_sse(points, std::exp(log_tau), &a, &b);
  };
  const double lo = std::log(span * 1e-3), hi = std::log(span * 1e3);
  const int grid = 241;
  const double step = (hi - lo) / (grid - 1);
  int best = 0;
  double best_sse = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    const double sse = sse_at(lo + step * i);
    if (sse < best_sse) {
      best_sse = sse;
      best = i;
    }
  }
  double left = lo + step * std::max(0, best - 1);
  double right = lo + step * std::min(grid - 1, best + 1);
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = right - golden * (right - left);
  double x2 = left + golden * (right - left);
  double f1 = sse_at(x1), f2 = sse_at(x2);
  for (int iter = 0; iter < 90; ++iter) {
    if (f1 < f2) {
      right = x2;
      x2 = x1;
      f2 = f1;
      x1 = right - golden * (right - left);
      f1 = sse_at(x1);
    } else {
      left = x1;
      x1 = x2;
      f1 = f2;
      x2 = left + golden * (right - left);
      f2 = sse_at(x2);
    }
  }
  const double tau = std::exp(0.5 * (left + right));
  const double sse = detail::exponential_sse(points, tau, &a, &b);
  if (std::abs(a) < 1e-6) return constant_fit();
  return ExponentialFit{a, b, tau, true, std::sqrt(sse / n)};
}

// One hardware-reported fidelity row; shipped as a static dataset and printed
// next to ideal values, never asserted against.
struct ReferenceRow {
  std::string label;
  double f_z, f_x, f_y, f_e;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace detail

// Rows of label,f_z,f_x,f_y,f_e[,...] below a header line; extra columns are
// ignored.
inline std::vector<ReferenceRow> load_reference_rows(std::istream& in) {
  std::vector<ReferenceRow> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const std::vector<std::string> fields = detail::split_csv_line(line);
    require(fields.size() >= 5, "reference row needs a label and four fidelities");
    rows.push_back({fields[0], std::stod(fields[1]), std::stod(fields[2]),
                    std::stod(fields[3]), std::stod(fields[4])});
  }
  return rows;
}

inline const ReferenceRow* find_reference(const std::vector<ReferenceRow>& rows,
                                          const std::string& label) {
  for (const ReferenceRow& row : rows)
    if (row.label == label) return &row;
  return nullptr;
}

// One hardware-reported transfer matrix, rows in input order 1, x, y, z.
struct ReferencePtm {
  std::string label;
  Eigen::Matrix4d r;
  double f_e;
};

// Rows of label,input_axis,r_i,r_x,r_y,r_z,f_e below a header line; the four
// rows of each matrix appear consecutively in input order i,x,y,z.
inline std::vector<ReferencePtm> load_reference_ptms(std::istream& in) {
  std::vector<ReferencePtm> out;
  std::string line;
  bool header = true;
  const std::array<std::string, 4> order = {"i", "x", "y", "z"};
  int next_row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const std::vector<std::string> fields = detail::split_csv_line(line);
    require(fields.size() >= 7, "reference transfer-matrix row needs seven fields");
    if (next_row == 0) {
      out.push_back({fields[0], Eigen::Matrix4d::Zero(), std::stod(fields[6])});
    }
    ReferencePtm& current = out.back();
    require(fields[0] == current.label, "transfer-matrix rows of one label must be contiguous");
    require(fields[1] == order[next_row], "transfer-matrix rows must appear in order i,x,y,z");
    for (int c = 0; c < 4; ++c) current.r(next_row, c) = std::stod(fields[2 + c]);
    next_row = (next_row + 1) % 4;
  }
  require(next_row == 0, "incomplete transfer-matrix block at end of input");
  return out;
}

// One row per experiment; reported reference columns are appended when a
// matching hardware row is supplied.
inline void write_result_csv(std::ostream& os, const ExperimentSpec& spec,
                             const ExperimentResult& result,
                             const ReferenceRow* reference = nullptr) {
  os << "label,pipeline,f_z,f_x,f_y,f_e,a2_average_fidelity,fe_purestate,"
        "fe_polarization,unitality_deviation";
  if (reference) os << ",reported_f_z,reported_f_x,reported_f_y,reported_f_e";
  os << "\n";
  os << (spec.label.empty() ? "unlabeled" : spec.label) << ','
     << (spec.pipeline == Pipeline::encoded ? "encoded" : "unencoded");
  os << std::setprecision(12);
  for (double v : {result.cardinal_fidelities[0], result.cardinal_fidelities[2],
                   result.cardinal_fidelities[3], result.report.fe_kraus,
                   result.a2_average_fidelity, result.report.fe_purestate,
                   result.report.fe_polarization, result.report.unitality_deviation})
    os << ',' << v;
  if (reference)
    for (double v : {reference->f_z, reference->f_x, reference->f_y, reference->f_e})
      os << ',' << v;
  os << "\n";
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& curve) {
  os << "t_over_tau,fe_encoded,fe_unencoded,a2_average_fidelity\n";
  os << std::setprecision(12);
  for (const SweepPoint& p : curve)
    os << p.t_over_tau << ',' << p.fe_encoded << ',' << p.fe_unencoded << ','
       << p.a2_average_fidelity << "\n";
}

inline NoiseBlock noise_block_from_json(const nlohmann::json& j) {
  NoiseBlock b;
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "crusher") {
    b.mode = NoiseMode::crusher;
  } else if (mode == "weak") {
    b.mode = NoiseMode::weak;
  } else if (mode == "random") {
    b.mode = NoiseMode::random;
  } else {
    throw std::invalid_argument("unknown noise mode: " + mode);
  }
  if (b.mode != NoiseMode::random) {
    const std::string axis = j.at("axis").get<std::string>();
    require(axis.size() == 1, "noise axis must be a single letter");
    b.axis = axis[0];
  }
  if (b.mode == NoiseMode::weak) {
    b.rate = j.at("rate").get<double>();
    b.duration = j.at("duration").get<double>();
  }
  return b;
}

inline nlohmann::json noise_block_to_json(const NoiseBlock& b) {
  nlohmann::json j;
  switch (b.mode) {
    case NoiseMode::crusher:
      j["mode"] = "crusher";
      j["axis"] = std::string(1, b.axis);
      break;
    case NoiseMode::weak:
      j["mode"] = "weak";
      j["axis"] = std::string(1, b.axis);
      j["rate"] = b.rate;
      j["duration"] = b.duration;
      break;
    case NoiseMode::random:
      j["mode"] = "random";
      break;
  }
  return j;
}

inline ExperimentSpec spec_from_json(const nlohmann::json& j) {
  ExperimentSpec s;
  s.label = j.value("label", std::string{});
  const std::string pipeline = j.at("pipeline").get<std::string>();
  if (pipeline == "encoded") {
    s.pipeline = Pipeline::encoded;
  } else if (pipeline == "unencoded") {
    s.pipeline = Pipeline::unencoded;
  } else {
    throw std::invalid_argument("unknown pipeline: " + pipeline);
  }
  s.noise.clear();
  for (const nlohmann::json& jb : j.at("noise")) s.noise.push_back(noise_block_from_json(jb));
  s.explicit_noop = j.value("noop", false);
  if (j.contains("inputs")) s.inputs = j.at("inputs").get<std::vector<std::string>>();
  s.repetitions = j.value("repetitions", 1);
  s.seed = j.value("seed", std::uint64_t{1});
  s.imperfection = j.value("imperfection", 0.0);
  validate_spec(s);
  return s;
}

inline nlohmann::json spec_to_json(const ExperimentSpec& s) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const NoiseBlock& b : s.noise) blocks.push_back(noise_block_to_json(b));
  return nlohmann::json{{"label", s.label},
                        {"pipeline", s.pipeline == Pipeline::encoded ? "encoded" : "unencoded"},
                        {"noise", blocks},
                        {"noop", s.explicit_noop},
                        {"inputs", s.inputs},
                        {"repetitions", s.repetitions},
                        {"seed", s.seed},
                        {"imperfection", s.imperfection}};
}

}  // namespace nsq
