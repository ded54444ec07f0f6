// Command line front end. JSON config in, CSV or JSON summary out.
// Exit codes: 0 success, 2 config or validation error, 3 numerical failure;
// failures print {"error": {"type", "message"}} on stderr.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "canonfock/decoherence.hpp"
#include "canonfock/errors.hpp"
#include "canonfock/fockoracle.hpp"
#include "canonfock/fockrep.hpp"
#include "canonfock/linops.hpp"
#include "canonfock/qbm.hpp"
#include "canonfock/sampling.hpp"
#include "canonfock/serialize.hpp"
#include "canonfock/symplectic.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using canonfock::InvalidInput;
using canonfock::NumericalFailure;
using canonfock::linops::Complex;
using canonfock::linops::ComplexMatrix;
using canonfock::linops::ComplexVector;
using canonfock::linops::RealVector;
using nlohmann::json;
namespace fockrep = canonfock::fockrep;
namespace oracle = canonfock::fockoracle;
namespace deco = canonfock::decoherence;
namespace qbm = canonfock::qbm;
namespace sampling = canonfock::sampling;
namespace serialize = canonfock::serialize;
namespace symplectic = canonfock::symplectic;

struct Options {
  std::string config;  // path, or inline JSON when it starts with '{'
  std::string output;  // path; empty means stdout
  std::uint64_t seed = 1;
  double tol = -1.0;  // negative means command default
  long cutoff = -1;   // negative means command default
};

json load_config(const Options& opt) {
  if (opt.config.empty()) throw InvalidInput("InvalidConfig", "missing --config");
  std::string text;
  if (!opt.config.empty() && opt.config.front() == '{') {
    text = opt.config;
  } else {
    std::ifstream in(opt.config);
    if (!in) throw InvalidInput("InvalidConfig", "cannot open config file " + opt.config);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput("ParseError", std::string("config: ") + e.what());
  }
}

void write_output(const Options& opt, const std::string& text) {
  if (opt.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.output, std::ios::binary);
  if (!out) throw InvalidInput("InvalidConfig", "cannot open output file " + opt.output);
  out << text;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash(const json& cfg) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(cfg.dump())));
  return buf;
}

// # comment block shared by every CSV
std::string csv_header(const std::string& command, const json& cfg, const std::string& units,
                       const std::string& columns, const std::vector<std::string>& notes = {}) {
  std::string out;
  out += "# canonfock " + command + " " + kVersion + "\n";
  out += "# config-hash: " + config_hash(cfg) + "\n";
  out += "# units: " + units + "\n";
  for (const std::string& n : notes) out += "# " + n + "\n";
  out += "# columns: " + columns + "\n";
  return out;
}

double get_num(const json& j, const std::string& key, const char* where) {
  if (!j.contains(key) || !j[key].is_number())
    throw InvalidInput("InvalidConfig", std::string(where) + ": missing numeric field " + key);
  return j[key].get<double>();
}

double get_num_or(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number())
    throw InvalidInput("InvalidConfig", "field " + key + " must be numeric");
  return j[key].get<double>();
}

// Time grids come as {min, max, n, spacing: linear|log}.
RealVector time_grid(const json& j, const char* where) {
  if (!j.is_object()) throw InvalidInput("InvalidConfig", std::string(where) + ": expected object");
  double lo = get_num(j, "min", where);
  double hi = get_num(j, "max", where);
  long n = static_cast<long>(get_num(j, "n", where));
  std::string spacing = j.value("spacing", std::string("linear"));
  if (n < 1) throw InvalidInput("InvalidConfig", std::string(where) + ": need n >= 1");
  if (!(hi >= lo)) throw InvalidInput("InvalidConfig", std::string(where) + ": need max >= min");
  RealVector t(n);
  if (n == 1) {
    t(0) = lo;
    return t;
  }
  if (spacing == "linear") {
    for (long i = 0; i < n; ++i)
      t(i) = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  } else if (spacing == "log") {
    if (!(lo > 0.0)) throw InvalidInput("InvalidConfig", std::string(where) + ": log needs min > 0");
    double ratio = std::log(hi / lo) / static_cast<double>(n - 1);
    for (long i = 0; i < n; ++i) t(i) = lo * std::exp(ratio * static_cast<double>(i));
  } else {
    throw InvalidInput("InvalidConfig", std::string(where) + ": spacing must be linear or log");
  }
  return t;
}

// Sweep helper: rows are computed into an index-addressed buffer and emitted
// in input order, so the output bytes do not depend on evaluation order.
std::string emit_rows(std::vector<std::string> rows) {
  std::string out;
  for (const std::string& r : rows) out += r + "\n";
  return out;
}

// ---------------- subcommands ----------------

int run_canon_check(const Options& opt) {
  json cfg = load_config(opt);
  symplectic::SymplecticPair g =
      serialize::pair_from_json(cfg.contains("pair") ? cfg["pair"] : cfg);
  double tol = opt.tol > 0.0 ? opt.tol : -1.0;
  double residual = symplectic::canonicity_residual(g);
  json out{{"command", "canon-check"},
           {"version", kVersion},
           {"config_hash", config_hash(cfg)},
           {"modes", g.modes()},
           {"residual", residual},
           {"tolerance", tol > 0.0 ? tol : symplectic::canonicity_tol(g.modes())},
           {"canonical", symplectic::is_canonical(g, tol)}};
  write_output(opt, out.dump(2) + "\n");
  return 0;
}

int run_squeeze(const Options& opt) {
  json cfg = load_config(opt);
  symplectic::SqueezeGenerator xi =
      cfg.contains("xi") ? serialize::squeeze_from_json(cfg) : serialize::squeeze_from_json(cfg["squeeze"]);
  symplectic::SymplecticPair g = symplectic::from_squeeze(xi);
  fockrep::UltracoherentVector vac = fockrep::squeeze_vacuum(xi.xi);
  json out{{"command", "squeeze"},
           {"version", kVersion},
           {"config_hash", config_hash(cfg)},
           {"pair", serialize::to_json(g)},
           {"canonicity_residual", symplectic::canonicity_residual(g)},
           {"squeezed_vacuum", serialize::to_json(vac)},
           {"squeezed_vacuum_norm", fockrep::norm(vac)}};
  write_output(opt, out.dump(2) + "\n");
  return 0;
}

int run_overlap(const Options& opt) {
  json cfg = load_config(opt);
  if (!cfg.contains("bra") || !cfg.contains("ket"))
    throw InvalidInput("InvalidConfig", "overlap: config needs bra and ket states");
  fockrep::UltracoherentVector bra = serialize::state_from_json(cfg["bra"]);
  fockrep::UltracoherentVector ket = serialize::state_from_json(cfg["ket"]);
  Complex ip = fockrep::inner(bra, ket);
  double nb = fockrep::norm(bra);
  double nk = fockrep::norm(ket);
  json out{{"command", "overlap"},
           {"version", kVersion},
           {"config_hash", config_hash(cfg)},
           {"inner", serialize::to_json(ip)},
           {"norm_bra", nb},
           {"norm_ket", nk},
           {"overlap", std::abs(ip) / (nb * nk)}};
  write_output(opt, out.dump(2) + "\n");
  return 0;
}

int run_oracle_compare(const Options& opt) {
  json cfg = load_config(opt);
  const long modes = static_cast<long>(get_num_or(cfg, "modes", 1));
  const long cutoff = opt.cutoff > 0 ? opt.cutoff : static_cast<long>(get_num_or(cfg, "cutoff", 24));
  const long cases = static_cast<long>(get_num_or(cfg, "cases", 20));
  const double z_radius = get_num_or(cfg, "z_radius", 0.3);
  const double f_scale = get_num_or(cfg, "f_scale", 0.4);
  const double r_scale = get_num_or(cfg, "r_scale", 0.25);
  const double tol = opt.tol > 0.0 ? opt.tol : get_num_or(cfg, "tol", 1e-6);
  if (modes < 1 || cases < 1) throw InvalidInput("InvalidConfig", "oracle-compare: modes, cases >= 1");

  oracle::FockBasis basis(modes, cutoff);
  sampling::Rng rng(opt.seed);
  json case_list = json::array();
  double max_overlap = 0.0, max_norm = 0.0, max_weight = 0.0;
  for (long i = 0; i < cases; ++i) {
    fockrep::UltracoherentVector u =
        sampling::random_ultracoherent(rng, modes, z_radius, f_scale);
    oracle::OracleReport rep;
    switch (i % 4) {
      case 0: {
        sampling::EulerCase e = sampling::random_euler(rng, modes, r_scale, 0.8);
        rep = oracle::compare_transform(basis, e.psi_left, e.xi, e.psi_right, u);
        break;
      }
      case 1:
        rep = oracle::compare_weyl(basis, sampling::random_vector(rng, modes, 0.5), u);
        break;
      case 2:
        rep = oracle::compare_inner(basis, u,
                                    sampling::random_ultracoherent(rng, modes, z_radius, f_scale));
        break;
      default:
        rep = oracle::compare_squeeze_vacuum(basis, sampling::random_symmetric(rng, modes, r_scale));
        break;
    }
    max_overlap = std::max(max_overlap, rep.overlap_error);
    max_norm = std::max(max_norm, rep.norm_error);
    max_weight = std::max(max_weight, rep.truncation_weight);
    case_list.push_back(json{{"index", i},
                             {"case", rep.case_name},
                             {"overlap_error", rep.overlap_error},
                             {"norm_error", rep.norm_error},
                             {"truncation_weight", rep.truncation_weight}});
  }
  json out{{"command", "oracle-compare"},
           {"version", kVersion},
           {"config_hash", config_hash(cfg)},
           {"seed", opt.seed},
           {"modes", modes},
           {"cutoff", cutoff},
           {"tolerance", tol},
           {"cases", case_list},
           {"max_overlap_error", max_overlap},
           {"max_norm_error", max_norm},
           {"max_truncation_weight", max_weight},
           {"pass", max_overlap <= tol}};
  write_output(opt, out.dump(2) + "\n");
  return max_overlap <= tol ? 0 : 3;
}

int run_vanhove(const Options& opt) {
  json cfg = load_config(opt);
  if (!cfg.contains("family")) throw InvalidInput("InvalidConfig", "vanhove: missing family");
  const json& fj = cfg["family"];
  deco::CouplingFamily fam{get_num(fj, "s", "family"), get_num(fj, "omega_min", "family"),
                           get_num(fj, "omega_max", "family"),
                           static_cast<Eigen::Index>(get_num(fj, "n_points", "family")),
                           get_num(fj, "normalization", "family")};
  double beta = get_num_or(cfg, "beta", 0.0);
  deco::BathGrid grid = deco::make_grid(fam, beta);

  RealVector r = RealVector::Zero(grid.size());
  if (cfg.contains("Xi")) {
    const json& xj = cfg["Xi"];
    std::string type = xj.value("type", std::string("diagonal"));
    if (type != "diagonal")
      throw InvalidInput("InvalidConfig", "vanhove: only diagonal Xi supported here");
    if (xj.contains("r"))
      r = RealVector::Constant(grid.size(), get_num(xj, "r", "Xi"));
    else if (xj.contains("r_of_omega"))
      r = deco::r_of_omega(grid, get_num(xj, "r_of_omega", "Xi"));
    else
      throw InvalidInput("InvalidConfig", "vanhove: Xi needs r or r_of_omega");
  }

  std::string refname = cfg.value("reference", std::string("vacuum"));
  deco::ReferenceState ref;
  if (refname == "vacuum") ref = deco::ReferenceState::vacuum();
  else if (refname == "thermal") ref = deco::ReferenceState::thermal();
  else if (refname == "squeezed_vacuum") ref = deco::ReferenceState::squeezed_vacuum(r);
  else if (refname == "squeezed_thermal") ref = deco::ReferenceState::squeezed_thermal(r);
  else throw InvalidInput("InvalidReference", "vanhove: unknown reference " + refname);

  double dalpha = get_num_or(cfg, "dalpha", 1.0);
  if (!cfg.contains("t")) throw InvalidInput("InvalidConfig", "vanhove: missing t grid");
  RealVector tg = time_grid(cfg["t"], "vanhove.t");

  std::vector<std::string> notes;
  if (!grid.semibounded())
    notes.push_back("warning: semibounded ratio " + fmt(grid.semibounded_ratio()) +
                    " exceeds 1; total Hamiltonian not bounded below");

  std::vector<std::string> rows(tg.size());
  for (Eigen::Index i = 0; i < tg.size(); ++i) {
    double t = tg(i);
    double nk = deco::norm_kt_sq(grid, t);
    double sq = deco::squeezed_norm_sq(grid, t, r, dalpha);
    double chi = deco::chi_magnitude(grid, t, dalpha, ref);
    rows[i] = fmt(t) + "," + fmt(nk) + "," + fmt(sq) + "," + fmt(chi);
  }
  std::string out = csv_header("vanhove", cfg, "natural (frequency grid, hbar=1)",
                               "t,norm_kt_sq,squeezed_norm_sq,chi", notes);
  out += emit_rows(std::move(rows));
  write_output(opt, out);
  return 0;
}

qbm::QbmParams params_from_json(const json& cfg) {
  const json& p = cfg.contains("params") ? cfg["params"] : cfg;
  qbm::QbmParams q;
  q.mass = get_num(p, "mass", "params");
  q.omega = get_num(p, "omega", "params");
  q.gamma0 = get_num(p, "gamma0", "params");
  q.temperature = get_num(p, "temperature", "params");
  q.r = get_num_or(p, "r", 0.0);
  q.a = get_num_or(p, "a", 0.0);
  q.hbar = get_num_or(p, "hbar", 1.0);
  q.kb = get_num_or(p, "kb", 1.0);
  q.validate();
  return q;
}

int run_qbm_coeffs(const Options& opt) {
  json cfg = load_config(opt);
  qbm::QbmParams q = params_from_json(cfg);
  if (!cfg.contains("t")) throw InvalidInput("InvalidConfig", "qbm-coeffs: missing t grid");
  RealVector tg = time_grid(cfg["t"], "qbm-coeffs.t");
  double guard = opt.tol > 0.0 ? opt.tol : 1e-6;

  std::vector<std::string> rows(tg.size());
  for (Eigen::Index i = 0; i < tg.size(); ++i) {
    qbm::WignerCoeffs c = qbm::coeffs(q, tg(i), guard);
    rows[i] = fmt(tg(i)) + "," + fmt(c.omega_ren_sq) + "," + fmt(c.gamma) + "," + fmt(c.dxx) +
              "," + fmt(c.dxp) + "," + fmt(c.dpp);
  }
  std::string units = "hbar=" + fmt(q.hbar) + ",kb=" + fmt(q.kb);
  std::string out = csv_header("qbm-coeffs", cfg, units,
                               "t,omega_ren_sq,gamma,dxx,dxp,dpp");
  out += emit_rows(std::move(rows));
  write_output(opt, out);
  return 0;
}

int run_qbm_evolve(const Options& opt) {
  json cfg = load_config(opt);
  qbm::QbmParams q = params_from_json(cfg);
  if (!cfg.contains("initial")) throw InvalidInput("InvalidConfig", "qbm-evolve: missing initial");
  const json& ij = cfg["initial"];
  qbm::GaussianState s0{get_num(ij, "mean_x", "initial"), get_num(ij, "mean_p", "initial"),
                        get_num(ij, "cov_xx", "initial"), get_num(ij, "cov_xp", "initial"),
                        get_num(ij, "cov_pp", "initial")};
  double t0 = get_num(cfg, "t0", "qbm-evolve");
  double t1 = get_num(cfg, "t1", "qbm-evolve");
  long steps = static_cast<long>(get_num(cfg, "steps", "qbm-evolve"));
  long every = static_cast<long>(get_num_or(cfg, "output_every", 1));
  if (every < 1) throw InvalidInput("InvalidConfig", "qbm-evolve: output_every >= 1");
  double guard = opt.tol > 0.0 ? opt.tol : 1e-6;

  std::vector<qbm::Sample> traj = qbm::propagate_gaussian(q, s0, t0, t1, steps, guard);
  std::vector<std::string> rows;
  rows.reserve(traj.size() / static_cast<size_t>(every) + 1);
  for (size_t i = 0; i < traj.size(); i += static_cast<size_t>(every)) {
    const qbm::Sample& s = traj[i];
    rows.push_back(fmt(s.t) + "," + fmt(s.state.mean_x) + "," + fmt(s.state.mean_p) + "," +
                   fmt(s.state.cov_xx) + "," + fmt(s.state.cov_xp) + "," + fmt(s.state.cov_pp));
  }
  std::string units = "hbar=" + fmt(q.hbar) + ",kb=" + fmt(q.kb);
  std::string out = csv_header("qbm-evolve", cfg, units,
                               "t,mean_x,mean_p,cov_xx,cov_xp,cov_pp");
  out += emit_rows(std::move(rows));
  write_output(opt, out);
  return 0;
}

void emit_error(const std::string& type, const std::string& message) {
  json err{{"error", {{"type", type}, {"message", message}}}};
  std::cerr << err.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian bosonic states, canonical transformations, and decoherence probes"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("--config", opt.config, "JSON config: file path, or inline when starting with {");
    sub->add_option("--output", opt.output, "output file (default stdout)");
    sub->add_option("--seed", opt.seed, "seed for generated cases");
    sub->add_option("--tol", opt.tol, "tolerance or guard override");
    sub->add_option("--cutoff", opt.cutoff, "occupation cutoff override");
  };

  CLI::App* canon = app.add_subcommand("canon-check", "validate a transformation pair");
  CLI::App* squeeze = app.add_subcommand("squeeze", "pair and squeezed vacuum from a generator");
  CLI::App* overlap = app.add_subcommand("overlap", "inner product of two states");
  CLI::App* compare = app.add_subcommand("oracle-compare", "closed form vs truncated brute force");
  CLI::App* vanhove = app.add_subcommand("vanhove", "bath decoherence sweep");
  CLI::App* qcoeffs = app.add_subcommand("qbm-coeffs", "Wigner equation coefficients sweep");
  CLI::App* qevolve = app.add_subcommand("qbm-evolve", "Gaussian moment propagation");
  for (CLI::App* sub : {canon, squeeze, overlap, compare, vanhove, qcoeffs, qevolve})
    add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    emit_error("UsageError", e.what());
    return 2;
  }

  try {
    if (canon->parsed()) return run_canon_check(opt);
    if (squeeze->parsed()) return run_squeeze(opt);
    if (overlap->parsed()) return run_overlap(opt);
    if (compare->parsed()) return run_oracle_compare(opt);
    if (vanhove->parsed()) return run_vanhove(opt);
    if (qcoeffs->parsed()) return run_qbm_coeffs(opt);
    if (qevolve->parsed()) return run_qbm_evolve(opt);
    emit_error("UsageError", "no subcommand");
    return 2;
  } catch (const InvalidInput& e) {
    emit_error(e.kind(), e.what());
    return 2;
  } catch (const NumericalFailure& e) {
    emit_error(e.kind(), e.what());
    return 3;
  } catch (const json::exception& e) {
    emit_error("ParseError", e.what());
    return 2;
  } catch (const std::exception& e) {
    emit_error("Internal", e.what());
    return 3;
  }
}
