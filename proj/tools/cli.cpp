#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "macrocoh/channels.hpp"
#include "macrocoh/dynamics.hpp"
#include "macrocoh/experiments.hpp"
#include "macrocoh/json_io.hpp"
#include "macrocoh/macroscopicity.hpp"
#include "macrocoh/random.hpp"

namespace macrocoh::cli {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "macrocoh 1.0.0";

// "1.5", "-0.2i", "1.0+0.5i", "2-1e-3i".
cplx parse_complex(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  auto number = [&](const std::string& part) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != part.size()) throw ValidationError({"cannot parse complex number \"" + text + "\""});
    return v;
  };
  if (s.empty()) throw ValidationError({"empty complex number"});
  if (s.back() != 'i') return {number(s), 0.0};
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  auto imag = [&](std::string part) {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    return number(part);
  };
  if (split == std::string::npos) return {0.0, imag(s)};
  return {number(s.substr(0, split)), imag(s.substr(split))};
}

template <class T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream is(item);
    T v{};
    if (!(is >> v) || !(is >> std::ws).eof()) throw ValidationError({"cannot parse list entry \"" + item + "\""});
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError({"empty list \"" + text + "\""});
  return out;
}

json ascent_json(const AscentResult& a, const SearchConfig& cfg) {
  return {{"method", "block coordinate ascent"},
          {"restarts", cfg.restarts},
          {"winning_restart", a.restart},
          {"sweeps", a.sweeps},
          {"converged", a.converged},
          {"objective", a.objective},
          {"seed", cfg.seed}};
}

// Writes to the -o path when given, else to `out`.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw ValidationError({"cannot write " + path});
  f << text;
}

Observable random_integer_observable(Eigen::Index dim, Rng& rng) {
  std::uniform_int_distribution<int> level(0, 3);
  RealVector d(dim);
  for (Eigen::Index k = 0; k < dim; ++k) d(k) = level(rng);
  const Matrix u = random_unitary(dim, rng);
  return Observable(hermitian_part(u * d.cast<cplx>().asDiagonal() * u.adjoint()));
}

struct Options {
  std::string state, observable, output;
  std::string which = "qfi";
  std::size_t samples = 2000;
  std::uint64_t seed = 0;
  double delta = 0.0;
  double rank_cutoff = kRankCutoff;
  std::optional<double> gap_tol;
  std::string family = "qubits";
  int sites = 0;
  int fock_dim = kDefaultFockDim;
  int modes = 1;
  std::size_t restarts = 20;
  std::size_t max_sweeps = 200;
  std::string method = "closed";
  std::optional<double> radius;
  int points = 128;
  std::string kind = "coherent";
  int n = 0;
  std::string alpha = "0";
  std::string xi = "0";
  std::string model = "isotropic";
  std::optional<double> cx, cp;
  double t = 1.0;
  std::size_t steps = 100;
  std::string measure = "qfi";
  int dim = 6;
  std::size_t channels = 500;
  std::size_t max_kraus = 4;
  std::string ns = "2,4,6,8,10,12";
  std::string copies = "4,6,8,10";
  std::string psi, phi;
  std::size_t cap = std::size_t{1} << 14;
  std::string diag;
  std::string pair1 = "0,3";
  std::string pair2 = "0,1";
};

MeasureId measure_id(const std::string& name) {
  const auto id = parse_measure_id(name);
  if (!id) throw ValidationError({"unknown measure \"" + name + "\""});
  return *id;
}

int cmd_measure(const Options& o, std::ostream& out) {
  const DensityMatrix rho = load_state(o.state);
  const Observable a = load_observable(o.observable);
  MeasureOptions mo;
  mo.rank_cutoff = o.rank_cutoff;
  mo.delta = o.delta;
  mo.roof.n_decompositions = o.samples;
  mo.roof.seed = o.seed;
  const MeasureReport r = evaluate_measure(measure_id(o.which), rho, a, mo);
  json j{{"measure", std::string(to_string(r.measure_id))},
         {"value", r.value},
         {"diagnostics", {{"rank", r.rank}, {"rank_cutoff", r.rank_cutoff}, {"terms_skipped", r.terms_skipped}}}};
  if (r.measure_id == MeasureId::roof) j["diagnostics"]["samples"] = o.samples;
  out << j.dump(2) << '\n';
  return 0;
}

int cmd_modes(const Options& o, std::ostream& out) {
  const DensityMatrix rho = load_state(o.state);
  const Observable a = load_observable(o.observable);
  const auto comps = mode_decompose(rho, a, o.gap_tol);
  Matrix sum = Matrix::Zero(rho.dim(), rho.dim());
  json gaps = json::array();
  for (const auto& c : comps) {
    sum += c.block;
    gaps.push_back({{"delta", c.delta}, {"trace_norm", trace_norm(c.block)}});
  }
  const double residual = (a.from_eigenbasis(sum) - rho.matrix()).cwiseAbs().maxCoeff();
  out << json{{"modes", gaps}, {"reconstruction_residual", residual}}.dump(2) << '\n';
  return 0;
}

int cmd_nf(const Options& o, std::ostream& out) {
  const DensityMatrix rho = load_state(o.state);
  SearchConfig cfg{o.restarts, o.max_sweeps, 1e-10, o.seed};
  json j;
  if (o.family == "qubits") {
    const QubitNf r = nf_qubits(rho, cfg);
    if (o.sites > 0 && o.sites != r.family.n_sites())
      throw ValidationError({"--sites does not match the state dimension"});
    json bloch = json::array();
    for (const auto& b : r.family.bloch_vectors) bloch.push_back({b(0), b(1), b(2)});
    j = {{"value", r.value},
         {"family", {{"kind", "qubits"}, {"bloch_vectors", bloch}}},
         {"optimizer", ascent_json(r.ascent, cfg)},
         {"diagnostics", {{"sites", r.family.n_sites()}, {"upper_bound", r.family.n_sites()}}}};
  } else if (o.family == "quadratures") {
    const FockSpace fock(o.modes, o.fock_dim);
    const QuadratureNf r = nf_quadratures(rho, fock, cfg);
    j = {{"value", r.value},
         {"family", {{"kind", "quadratures"}, {"angles", r.family.angles}, {"fock_dim", r.family.fock_dim}}},
         {"optimizer", ascent_json(r.ascent, cfg)},
         {"diagnostics", {{"edge_weight", fock.edge_weight(rho)}}}};
  } else {
    throw ValidationError({"--family must be qubits or quadratures"});
  }
  out << j.dump(2) << '\n';
  return 0;
}

int cmd_nlj(const Options& o, std::ostream& out) {
  const DensityMatrix rho = load_state(o.state);
  const FockSpace fock(o.modes, o.fock_dim);
  json j{{"method", o.method}};
  json diag{{"edge_weight", fock.edge_weight(rho)}};
  if (o.method == "closed") {
    j["value"] = nlj_closed_form(rho, fock);
  } else if (o.method == "integral") {
    NljIntegralOptions io;
    io.radius = o.radius;
    io.points = o.points;
    const NljIntegral r = nlj_integral(rho, fock, io);
    j["value"] = r.value;
    diag["radius"] = r.radius;
    diag["points"] = r.points;
    diag["tail"] = r.tail;
  } else if (o.method == "tilde") {
    SearchConfig cfg{o.restarts, o.max_sweeps, 1e-10, o.seed};
    const QuadratureNf r = nlj_tilde(rho, fock, cfg);
    j["value"] = r.value;
    j["optimizer"] = ascent_json(r.ascent, cfg);
    diag["angles"] = r.family.angles;
  } else {
    throw ValidationError({"--method must be closed, integral or tilde"});
  }
  j["diagnostics"] = diag;
  out << j.dump(2) << '\n';
  return 0;
}

int cmd_state(const Options& o, std::ostream& out) {
  const FockSpace fock(1, o.fock_dim);
  StateRecipe r;
  if (o.kind == "number")
    r = StateRecipe::number_state(o.n);
  else if (o.kind == "coherent")
    r = StateRecipe::coherent(parse_complex(o.alpha));
  else if (o.kind == "cat")
    r = StateRecipe::cat(parse_complex(o.alpha));
  else if (o.kind == "squeezed")
    r = StateRecipe::squeezed(parse_complex(o.xi), parse_complex(o.alpha));
  else
    throw ValidationError({"--kind must be number, coherent, cat or squeezed"});
  const PureState psi = standard_state(r, fock);
  emit(matrix_to_json(psi.amplitudes()) + "\n", o.output, out);
  return 0;
}

int cmd_evolve(const Options& o, std::ostream& out) {
  const DensityMatrix rho = load_state(o.state);
  const FockSpace fock(o.modes, o.fock_dim);
  const DoubleCommutatorGenerator iso = isotropic_generator(fock);
  std::optional<DoubleCommutatorGenerator> gen;
  if (o.model == "isotropic") {
    gen.emplace(iso);
  } else if (o.model == "anisotropic") {
    if (!o.cx || !o.cp) throw ValidationError({"the anisotropic model needs --cx and --cp"});
    gen.emplace(quadrature_generator(*o.cx, *o.cp, fock));
  } else {
    throw ValidationError({"--model must be isotropic or anisotropic"});
  }
  const auto traj = evolve(rho, *gen, o.t, o.steps);
  std::ostringstream csv;
  csv << std::setprecision(17) << "time,purity,nlj\n";
  // The nlj column is the isotropic purity-loss rate, identical to the
  // quadrature I_L sum.
  for (const auto& p : traj) csv << p.time << ',' << p.purity << ',' << purity_rate(p.state, iso) << '\n';
  emit(csv.str(), o.output, out);
  return 0;
}

int cmd_fuzz(const Options& o, std::ostream& out) {
  const MeasureId id = measure_id(o.measure);
  if (o.dim < 2) throw ValidationError({"--dim must be at least 2"});
  std::size_t m2a_fail = 0, m2b_fail = 0, cov_fail = 0;
  double worst_a = -std::numeric_limits<double>::infinity();
  double worst_b = -std::numeric_limits<double>::infinity();
  std::size_t worst_case = 0;
  for (std::size_t c = 0; c < o.channels; ++c) {
    Rng rng(derive_seed(o.seed, c));
    const Observable a = random_integer_observable(o.dim, rng);
    const GapSet gaps = gap_set(a);
    std::uniform_int_distribution<std::size_t> pick_gap(0, gaps.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_kraus(1, std::max<std::size_t>(1, o.max_kraus));
    std::uniform_real_distribution<double> pick_scale(0.2, 1.0);
    std::vector<double> choices;
    const std::size_t n_choices = 1 + pick_gap(rng) % 3;
    for (std::size_t k = 0; k < n_choices; ++k) choices.push_back(gaps.gaps[pick_gap(rng)]);
    const FreeChannel ch = random_free_channel(a, choices, pick_kraus(rng), pick_scale(rng), rng());
    if (!verify_covariance(ch, a, 2, rng()).passed) ++cov_fail;
    std::uniform_int_distribution<Eigen::Index> pick_rank(1, o.dim);
    const Eigen::Index rank = id == MeasureId::variance ? 1 : pick_rank(rng);
    const DensityMatrix rho = random_density(o.dim, rank, rng());
    MeasureOptions mo;
    mo.delta = gaps.gaps.back();
    mo.roof.seed = o.seed;
    const MonotonicityReport r = monotonicity_report(id, rho, a, ch, mo);
    if (!r.m2a) ++m2a_fail;
    if (!r.m2b) ++m2b_fail;
    const double da = r.deterministic_after - r.before;
    const double db = r.average_after - r.before;
    if (std::max(da, db) > std::max(worst_a, worst_b)) worst_case = c;
    worst_a = std::max(worst_a, da);
    worst_b = std::max(worst_b, db);
  }
  json j{{"measure", std::string(to_string(id))},
         {"dim", o.dim},
         {"channels", o.channels},
         {"seed", o.seed},
         {"covariance_failures", cov_fail},
         {"m2a_failures", m2a_fail},
         {"m2b_failures", m2b_fail},
         {"worst", {{"case", worst_case}, {"max_deterministic_increase", worst_a}, {"max_average_increase", worst_b}}},
         {"slack", 1e-8}};
  out << j.dump(2) << '\n';
  return m2a_fail + m2b_fail + cov_fail == 0 ? 0 : 1;
}

int cmd_scaling(const Options& o, std::ostream& out) {
  const auto ns = parse_list<int>(o.ns);
  const auto rows = scaling_table(ns);
  std::ostringstream csv;
  csv << std::setprecision(17) << "N,qfi,il,qfi_formula,il_formula,qfi_over_il\n";
  for (const auto& r : rows)
    csv << r.n << ',' << r.qfi_value << ',' << r.il_value << ',' << r.qfi_formula << ',' << r.il_formula << ','
        << r.ratio() << '\n';
  emit(csv.str(), o.output, out);
  return 0;
}

int cmd_copies(const Options& o, std::ostream& out) {
  const Observable a = o.observable.empty() ? Observable::diagonal(RealVector{{1.0, -1.0}})
                                            : load_observable(o.observable);
  auto load_ket = [](const std::string& path) {
    const Matrix m = load_matrix(path);
    if (m.cols() != 1) throw ValidationError({path + ": copy experiments need a state vector"});
    return PureState(m.col(0));
  };
  const PureState psi = o.psi.empty() ? PureState(Vector{{std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2}})
                                      : load_ket(o.psi);
  const PureState phi = o.phi.empty() ? PureState(Vector{{std::sqrt(0.7), std::sqrt(0.3)}}) : load_ket(o.phi);
  json profiles = json::array();
  for (int n : parse_list<int>(o.copies)) {
    const CopyProfile p = copy_equivalence(psi, a, phi, n, o.cap);
    profiles.push_back({{"n", p.n},
                        {"m_requested", p.m_requested},
                        {"m", p.m},
                        {"capped", p.capped},
                        {"x0", p.x0},
                        {"profile_distance", p.profile_distance},
                        {"delta_grid", p.delta_grid},
                        {"psi_norms", p.psi_norms},
                        {"phi_norms", p.phi_norms},
                        {"vanishing_gaps", p.vanishing_gaps}});
  }
  json j{{"psi_variance", variance(psi, a)},
         {"phi_variance", variance(phi, a)},
         {"dimension_cap", o.cap},
         {"profiles", profiles}};
  emit(j.dump(2) + "\n", o.output, out);
  return 0;
}

int cmd_m4(const Options& o, std::ostream& out) {
  std::optional<Observable> a;
  if (!o.observable.empty()) {
    a.emplace(load_observable(o.observable));
  } else {
    const auto d = parse_list<double>(o.diag.empty() ? "0,1,2,3" : o.diag);
    a.emplace(Observable::diagonal(Eigen::Map<const RealVector>(d.data(), static_cast<Eigen::Index>(d.size()))));
  }
  auto pair_of = [](const std::string& text) {
    const auto v = parse_list<Eigen::Index>(text);
    if (v.size() != 2) throw ValidationError({"a pair needs two indices: \"" + text + "\""});
    return std::make_pair(v[0], v[1]);
  };
  const M4Verdict v = m4_ordering_check(measure_id(o.measure), *a, pair_of(o.pair1), pair_of(o.pair2));
  json j{{"measure", o.measure},
         {"value1", v.value1},
         {"value2", v.value2},
         {"gap1", v.gap1},
         {"gap2", v.gap2},
         {"ordering", std::string(to_string(v.ordering))},
         {"satisfies_m4", v.satisfies_m4}};
  out << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Macroscopic coherence measures on finite-dimensional quantum states", "macrocoh"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Options o;

  auto* measure = app.add_subcommand("measure", "Evaluate one coherence measure");
  measure->add_option("--state", o.state, "State JSON file")->required();
  measure->add_option("--observable", o.observable, "Observable JSON file")->required();
  measure->add_option("--which", o.which, "variance|qfi|qfi_bures|skew|il|relent|roof|delta_norm");
  measure->add_option("--samples", o.samples, "Decompositions sampled by roof");
  measure->add_option("--seed", o.seed, "Random seed");
  measure->add_option("--delta", o.delta, "Gap for delta_norm");
  measure->add_option("--rank-cutoff", o.rank_cutoff, "Eigenvalue cutoff");

  auto* modes = app.add_subcommand("modes", "Mode decomposition and trace norms");
  modes->add_option("--state", o.state, "State JSON file")->required();
  modes->add_option("--observable", o.observable, "Observable JSON file")->required();
  modes->add_option("--gap-tol", o.gap_tol, "Gap grouping tolerance");

  auto* nf = app.add_subcommand("nf", "Effective size by maximizing the Fisher information");
  nf->add_option("--state", o.state, "State JSON file")->required();
  nf->add_option("--family", o.family, "qubits|quadratures");
  nf->add_option("--sites", o.sites, "Number of qubits (checked against the state)");
  nf->add_option("--fock-dim", o.fock_dim, "Fock levels per mode");
  nf->add_option("--modes", o.modes, "Number of bosonic modes");
  nf->add_option("--restarts", o.restarts, "Ascent restarts");
  nf->add_option("--max-sweeps", o.max_sweeps, "Sweeps per restart");
  nf->add_option("--seed", o.seed, "Random seed");

  auto* nlj = app.add_subcommand("nlj", "Phase-space coherence measure of a bosonic state");
  nlj->add_option("--state", o.state, "State JSON file")->required();
  nlj->add_option("--fock-dim", o.fock_dim, "Fock levels per mode");
  nlj->add_option("--modes", o.modes, "Number of bosonic modes");
  nlj->add_option("--method", o.method, "closed|integral|tilde");
  nlj->add_option("--radius", o.radius, "Integration half-width");
  nlj->add_option("--points", o.points, "Quadrature nodes per axis");
  nlj->add_option("--restarts", o.restarts, "Ascent restarts (tilde)");
  nlj->add_option("--seed", o.seed, "Random seed");

  auto* state = app.add_subcommand("state", "Build a standard single-mode state");
  state->add_option("--kind", o.kind, "number|coherent|cat|squeezed");
  state->add_option("--n", o.n, "Photon number");
  state->add_option("--alpha", o.alpha, "Coherent amplitude, e.g. 1.0+0.5i");
  state->add_option("--xi", o.xi, "Squeezing parameter");
  state->add_option("--fock-dim", o.fock_dim, "Fock levels");
  state->add_option("-o,--output", o.output, "Output file");
  state->add_option("--seed", o.seed, "Unused; accepted for uniformity");

  auto* evolve_cmd = app.add_subcommand("evolve", "Integrate double-commutator decoherence");
  evolve_cmd->add_option("--state", o.state, "State JSON file")->required();
  evolve_cmd->add_option("--fock-dim", o.fock_dim, "Fock levels per mode");
  evolve_cmd->add_option("--modes", o.modes, "Number of bosonic modes");
  evolve_cmd->add_option("--model", o.model, "isotropic|anisotropic");
  evolve_cmd->add_option("--cx", o.cx, "Position decoherence rate");
  evolve_cmd->add_option("--cp", o.cp, "Momentum decoherence rate");
  evolve_cmd->add_option("--t", o.t, "Final time");
  evolve_cmd->add_option("--steps", o.steps, "RK4 steps");
  evolve_cmd->add_option("-o,--output", o.output, "CSV output file");
  evolve_cmd->add_option("--seed", o.seed, "Unused; accepted for uniformity");

  auto* fuzz = app.add_subcommand("fuzz-monotone", "Fuzz a measure against random covariant channels");
  fuzz->add_option("--measure", o.measure, "Measure name");
  fuzz->add_option("--dim", o.dim, "Hilbert space dimension");
  fuzz->add_option("--channels", o.channels, "Number of channels");
  fuzz->add_option("--max-kraus", o.max_kraus, "Largest number of sampled Kraus operators");
  fuzz->add_option("--seed", o.seed, "Random seed");

  auto* scaling = app.add_subcommand("scaling", "Exact Fisher information and I_L of the gap-varying mixture");
  scaling->add_option("--N", o.ns, "Comma-separated even sizes");
  scaling->add_option("-o,--output", o.output, "CSV output file");
  scaling->add_option("--seed", o.seed, "Unused; accepted for uniformity");

  auto* copies = app.add_subcommand("copies", "Many-copy delta-coherence profiles");
  copies->add_option("--n", o.copies, "Comma-separated copy numbers");
  copies->add_option("--psi", o.psi, "State vector JSON (default |+>)");
  copies->add_option("--phi", o.phi, "Reference vector JSON (default sqrt(0.7)|0> + sqrt(0.3)|1>)");
  copies->add_option("--observable", o.observable, "Single-site observable JSON (default Z)");
  copies->add_option("--cap", o.cap, "Dimension cap");
  copies->add_option("-o,--output", o.output, "JSON output file");
  copies->add_option("--seed", o.seed, "Unused; accepted for uniformity");

  auto* m4 = app.add_subcommand("m4check", "Ordering of two equal-weight superpositions");
  m4->add_option("--observable", o.observable, "Observable JSON file");
  m4->add_option("--diag", o.diag, "Diagonal observable entries (default 0,1,2,3)");
  m4->add_option("--measure", o.measure, "Measure name");
  m4->add_option("--pair1", o.pair1, "Eigen indices i,j");
  m4->add_option("--pair2", o.pair2, "Eigen indices k,l");
  m4->add_option("--seed", o.seed, "Unused; accepted for uniformity");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    err << app.help();
    return 2;
  }

  try {
    if (*measure) return cmd_measure(o, out);
    if (*modes) return cmd_modes(o, out);
    if (*nf) return cmd_nf(o, out);
    if (*nlj) return cmd_nlj(o, out);
    if (*state) return cmd_state(o, out);
    if (*evolve_cmd) return cmd_evolve(o, out);
    if (*fuzz) return cmd_fuzz(o, out);
    if (*scaling) return cmd_scaling(o, out);
    if (*copies) return cmd_copies(o, out);
    if (*m4) return cmd_m4(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace macrocoh::cli
