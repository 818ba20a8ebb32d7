// Command-line front end: algebra tables and basis dumps, channel dumps,
// code verification, one-qubit process tomography, no-op schedule checks,
// experiment runs, and weak-noise sweeps.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "nsq/algebra.hpp"
#include "nsq/channels.hpp"
#include "nsq/code.hpp"
#include "nsq/experiments.hpp"
#include "nsq/nmr.hpp"
#include "nsq/tomography.hpp"

namespace {

nsq::OperatorSpan named_span(const std::string& which) {
  if (which == "ac") return nsq::build_collective_algebra();
  if (which == "ax") return nsq::build_axial_algebra('x');
  if (which == "ay") return nsq::build_axial_algebra('y');
  if (which == "az") return nsq::build_axial_algebra('z');
  if (which == "ac_commutant") return nsq::commutant(nsq::build_collective_algebra());
  if (which == "az_commutant") return nsq::commutant(nsq::build_axial_algebra('z'));
  throw std::invalid_argument("unknown span name: " + which +
                              " (expected ac, ax, ay, az, ac_commutant, az_commutant)");
}

// Crusher cascades by name; the axis letters apply left to right.
const std::map<std::string, std::string>& channel_axes() {
  static const std::map<std::string, std::string> table = {
      {"ex", "x"},   {"ey", "y"},   {"ez", "z"},
      {"ezx", "zx"}, {"ezy", "zy"}, {"eyzx", "yzx"}};
  return table;
}

nsq::KrausChannel named_channel(const std::string& name) {
  const auto it = channel_axes().find(name);
  if (it == channel_axes().end())
    throw std::invalid_argument("unknown channel name: " + name +
                                " (expected ex, ey, ez, ezx, ezy, eyzx)");
  nsq::KrausChannel ch{{nsq::Operator::identity(8)}};
  bool first = true;
  for (char axis : it->second) {
    nsq::KrausChannel next = nsq::rotate_channel(nsq::crusher_z(), axis);
    ch = first ? next : nsq::compose(ch, next);
    first = false;
  }
  return ch;
}

void print_ptm_csv(std::ostream& os, const nsq::PauliTransferMatrix& ptm) {
  os << std::setprecision(12);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) os << (c ? "," : "") << ptm.r(r, c);
    os << "\n";
  }
}

nlohmann::json report_to_json(const nsq::FidelityReport& rep) {
  return nlohmann::json{{"fe_kraus", rep.fe_kraus},
                        {"fe_purestate", rep.fe_purestate},
                        {"fe_polarization", rep.fe_polarization},
                        {"p_x", rep.p_x},
                        {"p_y", rep.p_y},
                        {"p_z", rep.p_z},
                        {"unitality_deviation", rep.unitality_deviation},
                        {"purities", rep.purities},
                        {"row_norms", rep.row_norms}};
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out.good()) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

nlohmann::json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw std::runtime_error("cannot open input file: " + path);
  return nlohmann::json::parse(in);
}

void cmd_algebra_table() {
  std::cout << "model,dim,commutant_dim\n";
  for (const auto& [model, name] : nsq::error_model_table()) {
    const nsq::OperatorSpan span = nsq::error_model_span(model);
    std::cout << name << ',' << span.dim() << ',' << nsq::commutant(span).dim() << "\n";
  }
}

void cmd_algebra_dump(const std::string& which) {
  const nsq::OperatorSpan span = named_span(which);
  nlohmann::json basis = nlohmann::json::array();
  for (const nsq::Operator& b : span.basis()) basis.push_back(nsq::operator_to_json(b));
  std::cout << nlohmann::json{{"which", which}, {"dim", span.dim()}, {"basis", basis}}
            << "\n";
}

void cmd_channel_dump(const std::string& name) {
  const nsq::KrausChannel ch = named_channel(name);
  nlohmann::json kraus = nlohmann::json::array();
  for (const nsq::Operator& k : ch.kraus) kraus.push_back(nsq::operator_to_json(k));
  std::cout << nlohmann::json{{"name", name}, {"kraus", kraus}} << "\n";
}

void cmd_channel_weak(double rate, double time, const std::string& axis) {
  if (axis.size() != 1) throw std::invalid_argument("axis must be a single letter");
  const nsq::WeakDephasing ch = nsq::weak_collective_dephasing(rate, time, axis[0]);
  const nsq::Mat& d = ch.damping_factors();
  std::cout << std::setprecision(17);
  for (int r = 0; r < d.rows(); ++r) {
    for (int c = 0; c < d.cols(); ++c) std::cout << (c ? "," : "") << d(r, c).real();
    std::cout << "\n";
  }
}

void cmd_code_verify() {
  const double qec = nsq::qec_verify(nsq::build_collective_algebra(), '-');
  const double jh =
      nsq::heisenberg_generators(nsq::build_code_unitaries()).explicit_form_deviation;
  const double pauli = nsq::pauli_algebra_residual();

  // Worst matrix element connecting the code sector to the symmetric sector
  // over the collective algebra basis.
  const nsq::NsBasis basis = nsq::build_ns_basis();
  const nsq::OperatorSpan span = nsq::build_collective_algebra();
  double leakage = 0.0;
  for (const nsq::Operator& b : span.basis())
    for (const nsq::Vec& sym : basis.symmetric_states)
      for (const nsq::Vec& code : basis.states)
        leakage = std::max(leakage, std::abs(nsq::sandwich(sym, b.mat(), code)));

  std::cout << nlohmann::json{{"qec_residual_Ac", qec},
                              {"leakage_max", leakage},
                              {"jh_deviation", jh},
                              {"pauli_algebra_residual", pauli}}
            << "\n";
}

void cmd_tomo(const std::string& channel, const std::string& pipeline) {
  nsq::ExperimentSpec spec;
  if (pipeline == "encoded") {
    spec.pipeline = nsq::Pipeline::encoded;
  } else if (pipeline == "unencoded") {
    spec.pipeline = nsq::Pipeline::unencoded;
  } else {
    throw std::invalid_argument("unknown pipeline: " + pipeline);
  }
  if (channel == "none") {
    spec.explicit_noop = true;
  } else {
    const auto it = channel_axes().find(channel);
    if (it == channel_axes().end())
      throw std::invalid_argument("unknown channel name: " + channel);
    for (char axis : it->second)
      spec.noise.push_back({nsq::NoiseMode::crusher, axis, 0.0, 0.0});
  }
  const nsq::ExperimentResult result = nsq::run(spec);
  print_ptm_csv(std::cout, result.ptm);
  std::cout << report_to_json(result.report) << "\n";
}

void cmd_noop(const std::string& schedule_path) {
  const nsq::PulseSchedule schedule = nsq::schedule_from_json(parse_json_file(schedule_path));
  const nsq::Operator u =
      nsq::schedule_propagator(schedule, nsq::InternalHamiltonian::alanine());
  std::cout << std::setprecision(12) << nsq::distance_to_identity(u) << "\n";
}

void cmd_run(const std::string& spec_path, const std::string& out_path,
             const std::string& reference_path) {
  const nsq::ExperimentSpec spec = nsq::spec_from_json(parse_json_file(spec_path));
  const nsq::ExperimentResult result = nsq::run(spec);

  std::vector<nsq::ReferenceRow> rows;
  const nsq::ReferenceRow* reference = nullptr;
  if (!reference_path.empty()) {
    std::ifstream in(reference_path);
    if (!in.good()) throw std::runtime_error("cannot open reference file: " + reference_path);
    rows = nsq::load_reference_rows(in);
    reference = nsq::find_reference(rows, spec.label);
  }

  std::ofstream out = open_output(out_path);
  nsq::write_result_csv(out, spec, result, reference);
  nsq::write_result_csv(std::cout, spec, result, reference);
  std::cout << "\n";
  print_ptm_csv(std::cout, result.ptm);
}

void cmd_sweep(const std::string& axis, int points, double tau, double max_time,
               const std::string& out_path) {
  if (axis.size() != 1) throw std::invalid_argument("axis must be a single letter");
  if (points < 3) throw std::invalid_argument("sweep needs at least three points");
  if (tau <= 0.0) throw std::invalid_argument("tau must be positive");
  if (max_time < 0.0) max_time = 5.0 * tau;
  std::vector<double> times;
  for (int i = 0; i < points; ++i)
    times.push_back(max_time * i / (points - 1) / tau);
  const std::vector<nsq::SweepPoint> curve = nsq::weak_noise_sweep(axis[0], times);

  std::ofstream out = open_output(out_path);
  nsq::write_sweep_csv(out, curve);

  std::vector<std::pair<double, double>> unencoded, encoded;
  for (const nsq::SweepPoint& p : curve) {
    unencoded.emplace_back(p.t_over_tau, p.fe_unencoded);
    encoded.emplace_back(p.t_over_tau, p.fe_encoded);
  }
  const auto print_fit = [](const std::string& label, const nsq::ExponentialFit& fit) {
    std::cout << label << ": A = " << fit.amplitude << ", B = " << fit.offset
              << ", tau = ";
    if (fit.tau_defined)
      std::cout << fit.tau;
    else
      std::cout << "undefined";
    std::cout << ", rms residual = " << fit.rms_residual << "\n";
  };
  std::cout << std::setprecision(12);
  print_fit("unencoded", nsq::fit_exponential(unencoded));
  print_fit("encoded", nsq::fit_exponential(encoded));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"three-qubit collective-noise simulator"};
  app.require_subcommand(1);

  auto* algebra = app.add_subcommand("algebra", "error-model dimension table as CSV");
  std::string dump_which;
  auto* algebra_dump =
      algebra->add_subcommand("dump", "orthonormal basis of a named span as JSON");
  algebra_dump->add_option("--which", dump_which, "ac, ax, ay, az, ac_commutant, az_commutant")
      ->required();

  auto* channel = app.add_subcommand("channel", "crusher and weak dephasing channels");
  std::string channel_name;
  auto* channel_dump = channel->add_subcommand("dump", "Kraus set of a named channel as JSON");
  channel_dump->add_option("--name", channel_name, "ex, ey, ez, ezx, ezy, eyzx")->required();
  double weak_rate = 1.0, weak_time = 1.0;
  std::string weak_axis = "z";
  auto* channel_weak =
      channel->add_subcommand("weak", "damping-factor matrix of weak dephasing as CSV");
  channel_weak->add_option("--rate", weak_rate, "inverse correlation time 1/tau")->required();
  channel_weak->add_option("--time", weak_time, "elapsed time t")->required();
  channel_weak->add_option("--axis", weak_axis, "dephasing axis (default z)");

  auto* code = app.add_subcommand("code", "code construction checks");
  auto* code_verify = code->add_subcommand("verify", "verification residuals as JSON");

  auto* tomo = app.add_subcommand("tomo", "one-qubit process tomography of a named channel");
  std::string tomo_channel, tomo_pipeline = "unencoded";
  tomo->add_option("--channel", tomo_channel, "ex, ey, ez, ezx, ezy, eyzx, none")->required();
  tomo->add_option("--pipeline", tomo_pipeline, "unencoded (default) or encoded");

  auto* noop = app.add_subcommand("noop", "distance to identity of a pulse schedule");
  std::string schedule_path;
  noop->add_option("--schedule", schedule_path, "schedule JSON file")->required();

  auto* run_cmd = app.add_subcommand("run", "run one experiment spec");
  std::string spec_path, run_out, reference_path;
  run_cmd->add_option("--spec", spec_path, "experiment spec JSON file")->required();
  run_cmd->add_option("--out", run_out, "output CSV file")->required();
  run_cmd->add_option("--reference", reference_path,
                      "hardware-reported fidelity CSV for side-by-side columns");

  auto* sweep = app.add_subcommand("sweep", "weak-noise decay curve");
  std::string sweep_axis = "y";
  int sweep_points = 12;
  double sweep_tau = 1.0, sweep_max_time = -1.0;
  std::string sweep_out;
  sweep->add_option("--axis", sweep_axis, "noise axis (default y)");
  sweep->add_option("--points", sweep_points, "number of sweep points (default 12)");
  sweep->add_option("--tau", sweep_tau, "decay time constant (default 1.0)");
  sweep->add_option("--max-time", sweep_max_time, "last sweep time (default 5 tau)");
  sweep->add_option("--out", sweep_out, "output CSV file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (algebra_dump->parsed()) {
      cmd_algebra_dump(dump_which);
    } else if (algebra->parsed()) {
      cmd_algebra_table();
    } else if (channel_dump->parsed()) {
      cmd_channel_dump(channel_name);
    } else if (channel_weak->parsed()) {
      cmd_channel_weak(weak_rate, weak_time, weak_axis);
    } else if (channel->parsed()) {
      throw std::invalid_argument("channel needs a dump or weak subcommand");
    } else if (code_verify->parsed()) {
      cmd_code_verify();
    } else if (code->parsed()) {
      throw std::invalid_argument("code needs a verify subcommand");
    } else if (tomo->parsed()) {
      cmd_tomo(tomo_channel, tomo_pipeline);
    } else if (noop->parsed()) {
      cmd_noop(schedule_path);
    } else if (run_cmd->parsed()) {
      cmd_run(spec_path, run_out, reference_path);
    } else if (sweep->parsed()) {
      cmd_sweep(sweep_axis, sweep_points, sweep_tau, sweep_max_time, sweep_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
