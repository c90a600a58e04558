// oblix: batch front-end for the oblix library.
//
// Exit status: 0 on success, 1 on usage, I/O or validation errors, 2 when a
// checked identity fails (the report says which one and on what instance).

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oblix/io.hpp"
#include "oblix/oblix.hpp"

namespace {

using oblix::Error;
using oblix::Errc;
using oblix::Index;
using oblix::Matrix;
using oblix::Real;
using json = nlohmann::json;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kViolation = 2;

struct Options {
  std::string out;
  Real rel_rank = oblix::Tolerance{}.rel_rank;
  Real abs_eq = oblix::Tolerance{}.abs_eq;

  oblix::Tolerance tol() const {
    oblix::Tolerance t{rel_rank, abs_eq};
    t.validate();
    return t;
  }
};

void emit(const Options& opt, const std::string& text) {
  const std::string body = text.empty() || text.back() != '\n' ? text + "\n" : text;
  if (opt.out.empty()) {
    std::cout << body << std::flush;
  } else {
    oblix::io::write_text(opt.out, body);
  }
}

json index_array(const oblix::IndexSet& j) { return json(j.indices()); }

json tolerance_fields(json report, const oblix::Tolerance& tol) {
  report["rel_rank"] = tol.rel_rank;
  report["abs_eq"] = tol.abs_eq;
  return report;
}

// Writes the report; a violated identity is named in the report itself.
int finish(const Options& opt, json report, const std::string& identity = {}, const std::string& witness = {}) {
  if (identity.empty()) {
    report["status"] = "ok";
    emit(opt, report.dump());
    return kOk;
  }
  report["status"] = "identity_violated";
  report["identity"] = identity;
  report["witness"] = witness;
  emit(opt, report.dump());
  std::cerr << "oblix: identity '" << identity << "' violated at " << witness << "\n";
  return kViolation;
}

oblix::Subspace load_subspace(const std::string& path, const oblix::Tolerance& tol) {
  const oblix::io::LoadedSubspace ls = oblix::io::load_subspace(path, tol);
  if (ls.reorthonormalized) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", ls.correction);
    std::cerr << "warning: " << path << ": basis re-orthonormalized (correction " << buf << ")\n";
  }
  return ls.subspace;
}

oblix::Vector weight_vector(const Matrix& w) {
  if (w.cols() != 1 && w.rows() != 1) throw Error(Errc::invalid_weight, "weights must be a row or a column");
  return w.cols() == 1 ? oblix::Vector(w.col(0)) : oblix::Vector(w.row(0).transpose());
}

bool is_real(const oblix::Vector& v) { return v.imag().cwiseAbs().maxCoeff() == 0.0; }

void require_seed(std::size_t samples, const std::optional<std::uint64_t>& seed) {
  if (samples > 0 && !seed) throw Error(Errc::invalid_input, "--seed is required when --samples > 0");
}

// --- angles -----------------------------------------------------------------

struct AnglesArgs {
  std::string m;
  std::string n;
};

int run_angles(const Options& opt, const AnglesArgs& a) {
  const oblix::Tolerance tol = opt.tol();
  const oblix::Subspace m = load_subspace(a.m, tol);
  const oblix::Subspace n = load_subspace(a.n, tol);
  const oblix::AnglePair ap = oblix::angle_pair(m, n);
  json r;
  r["friedrichs_cos"] = ap.friedrichs_cos;
  r["dixmier_cos"] = ap.dixmier_cos;
  r["friedrichs_sin"] = ap.friedrichs_sin;
  r["intersection_dim"] = ap.intersection_dim;
  r = tolerance_fields(r, tol);
  const Real by_projectors = oblix::dixmier_cos_by_projectors(m, n);
  if (std::abs(by_projectors - ap.dixmier_cos) > 1e-8) {
    return finish(opt, r, "dixmier_cos_equals_projector_norm",
                  "||P_M P_N|| = " + std::to_string(by_projectors));
  }
  return finish(opt, r);
}

// --- project ----------------------------------------------------------------

struct ProjectArgs {
  std::string a;
  std::string weights;
  std::optional<Real> mu;
};

int run_project(const Options& opt, const ProjectArgs& args) {
  const oblix::Tolerance tol = opt.tol();
  const Matrix a = oblix::io::load_matrix(args.a);
  const oblix::Vector w = weight_vector(oblix::io::load_matrix(args.weights));
  if (w.size() != a.rows()) throw Error(Errc::ambient_mismatch, "weights and A have different row counts");

  std::optional<oblix::ObliqueProjection> p;
  std::string method;
  Matrix d;
  if (!is_real(w) || args.mu) {
    if (!args.mu) throw Error(Errc::invalid_weight, "complex weights need --mu");
    const auto dw = oblix::DiagonalWeight::mu_cone(w, *args.mu);
    p = oblix::weighted_projection(a, dw, tol);
    method = "gram";
  } else if (w.real().minCoeff() > 0.0) {
    const auto dw = oblix::DiagonalWeight::positive_definite(w.real());
    p = oblix::weighted_projection(a, dw, tol);
    d = dw.as_matrix();
    method = "qr";
  } else {
    const auto dw = oblix::DiagonalWeight::semidefinite(w.real());
    const oblix::Subspace s = oblix::orthonormal_range(a, tol);
    if (s.dim() != a.cols()) throw Error(Errc::not_full_rank, "A must have full column rank");
    p = oblix::distinguished_projection(dw, s);
    d = dw.as_matrix();
    method = "block";
  }

  json r = oblix::io::matrix_to_json(p->matrix);
  const Real norm = oblix::operator_norm(p->matrix);
  r["method"] = method;
  r["norm"] = norm;
  r["range_dim"] = p->range.dim();
  r["nullspace_dim"] = p->nullsp.dim();
  r = tolerance_fields(r, tol);
  if (p->range.is_zero()) return finish(opt, r);
  const Real lp = oblix::ljance_ptak_norm(*p);
  r["ljance_ptak_norm"] = lp;
  if (std::abs(norm - lp) > 1e-8) {
    return finish(opt, r, "ljance_ptak", "||P|| = " + std::to_string(norm) + ", angle formula " + std::to_string(lp));
  }
  if (d.size() > 0) {
    const Real defect = oblix::operator_norm(d * p->matrix - p->matrix.adjoint() * d);
    if (defect > tol.abs_eq * std::max(1.0, oblix::operator_norm(d) * norm)) {
      return finish(opt, r, "d_selfadjoint", "||DP - P*D|| = " + std::to_string(defect));
    }
  }
  return finish(opt, r);
}

// --- hull -------------------------------------------------------------------

struct HullArgs {
  std::string a;
  std::string weights;
};

int run_hull(const Options& opt, const HullArgs& args) {
  const oblix::Tolerance tol = opt.tol();
  const Matrix a = oblix::io::load_matrix(args.a);
  const oblix::Vector w = weight_vector(oblix::io::load_matrix(args.weights));
  if (!is_real(w)) throw Error(Errc::invalid_weight, "hull needs real positive weights");
  const auto dw = oblix::DiagonalWeight::positive_definite(w.real());
  const oblix::HullDecomposition h = oblix::bental_teboulle(a, dw, tol);
  const Matrix target = oblix::weighted_projection(a, dw, tol).matrix;
  const Real err = oblix::operator_norm(target - h.combination());

  json weights = json::array();
  json sets = json::array();
  for (const auto& m : h.members) {
    weights.push_back(m.weight);
    sets.push_back(oblix::to_string(m.index_set));
  }
  json r;
  r["members"] = h.members.size();
  r["weights"] = weights;
  r["index_sets"] = sets;
  r["weight_sum"] = h.weight_sum();
  r["reconstruction_error"] = err;
  r = tolerance_fields(r, tol);
  if (err > 1e-8) return finish(opt, r, "bental_teboulle", "reconstruction error " + std::to_string(err));
  if (std::abs(h.weight_sum() - 1.0) > 1e-12) {
    return finish(opt, r, "hull_weights_sum_to_one", "sum " + std::to_string(h.weight_sum()));
  }
  return finish(opt, r);
}

// --- bounds -----------------------------------------------------------------

struct BoundsArgs {
  std::string subspace;
  std::size_t samples = 0;
  std::optional<std::uint64_t> seed;
};

int run_bounds(const Options& opt, const BoundsArgs& args) {
  require_seed(args.samples, args.seed);
  const oblix::Tolerance tol = opt.tol();
  const oblix::Subspace s = load_subspace(args.subspace, tol);
  const oblix::BoundReport rep = oblix::stewart_oleary(s, args.samples, args.seed.value_or(0));
  json r;
  r["max_over_Q"] = rep.max_over_Q;
  r["min_mI"] = rep.min_mI;
  r["K"] = rep.K_constant;
  r["sup_sampled"] = rep.sup_estimate ? json(*rep.sup_estimate) : json(nullptr);
  r["samples"] = rep.samples;
  r["seed"] = args.seed ? json(*args.seed) : json(nullptr);
  r["witness_Q"] = index_array(rep.witness_Q);
  r["witness_I"] = index_array(rep.witness_I);
  r = tolerance_fields(r, tol);
  const std::string where = "Q = " + oblix::to_string(rep.witness_Q) + ", I = " + oblix::to_string(rep.witness_I);
  if (rep.identity_residual() > 1e-8) {
    return finish(opt, r, "stewart_oleary", where + ", product " + std::to_string(rep.max_over_Q * rep.min_mI));
  }
  if (rep.sup_estimate && *rep.sup_estimate > rep.max_over_Q + 1e-8) {
    return finish(opt, r, "sampling_dominated_by_enumeration", "sampled sup " + std::to_string(*rep.sup_estimate));
  }
  return finish(opt, r);
}

// --- duality ----------------------------------------------------------------

struct DualityArgs {
  std::string a;
  Real mu = 0.0;
  std::size_t samples = 0;
  std::optional<std::uint64_t> seed;
};

int run_duality(const Options& opt, const DualityArgs& args) {
  require_seed(args.samples, args.seed);
  const oblix::Tolerance tol = opt.tol();
  const Matrix a = oblix::io::load_matrix(args.a);
  const oblix::DualityReport rep = oblix::complex_cone_duality(a, args.mu, args.samples, args.seed.value_or(0), tol);
  json r;
  r["mu"] = rep.mu;
  r["samples"] = rep.samples;
  r["seed"] = args.seed ? json(*args.seed) : json(nullptr);
  r["accepted"] = rep.accepted;
  r["rejected"] = rep.rejected;
  r["failures"] = rep.failures;
  r["max_discrepancy"] = rep.max_discrepancy;
  r["chi_A"] = rep.chi_A;
  r["chi_Z"] = rep.chi_Z;
  r = tolerance_fields(r, tol);
  if (rep.failures > 0) {
    return finish(opt, r, "complex_cone_duality",
                  std::to_string(rep.failures) + " samples, max discrepancy " + std::to_string(rep.max_discrepancy));
  }
  return finish(opt, r);
}

// --- frames -----------------------------------------------------------------

oblix::TailRule tail_rule(const std::string& rule, Real ratio, const std::vector<Real>& coefficients) {
  if (rule == "geometric") return oblix::TailRule::geometric(ratio);
  if (rule == "unit") return oblix::TailRule::unit();
  if (rule == "finite") {
    if (coefficients.empty()) throw Error(Errc::invalid_input, "rule 'finite' needs coefficients");
    return oblix::TailRule::finite(coefficients);
  }
  throw Error(Errc::invalid_input, "unknown rule '" + rule + "'");
}

// Either a matrix literal (columns are frame vectors) or a generator spec
// {"kind": "nullspace_tail", "rule": ..., "ratio": ..., "dim": m}.
oblix::FrameSystem load_frame(const std::string& path, const oblix::Tolerance& tol) {
  const std::string text = oblix::io::read_file(path);
  json doc;
  bool is_json = false;
  try {
    doc = json::parse(text);
    is_json = doc.is_object();
  } catch (const json::parse_error&) {
  }
  if (!is_json || !doc.contains("kind")) return oblix::FrameSystem(oblix::io::load_matrix(path), tol);
  try {
    if (doc.at("kind").get<std::string>() != "nullspace_tail") {
      throw Error(Errc::parse_error, path + ": unknown generator kind");
    }
    const std::string rule = doc.value("rule", std::string("geometric"));
    const Real ratio = doc.value("ratio", 0.5);
    const auto coeffs = doc.value("coefficients", std::vector<Real>{});
    const Index m = doc.at("dim").get<Index>();
    oblix::require_enumerable(m);
    if (m < 2) throw Error(Errc::invalid_input, "generator needs dim >= 2");
    const oblix::Subspace n(tail_rule(rule, ratio, coeffs).truncated(m), tol);
    return oblix::FrameSystem::with_nullspace(n);
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, path + ": " + e.what());
  }
}

struct FramesArgs {
  std::string frame;
};

int run_frames(const Options& opt, const FramesArgs& args) {
  const oblix::Tolerance tol = opt.tol();
  const oblix::FrameSystem f = load_frame(args.frame, tol);
  const oblix::FrameBounds b = oblix::frame_bounds(f);
  const oblix::RieszConstant rc = oblix::riesz_constant(f);
  const oblix::RieszEquivalenceReport eq = oblix::riesz_compatibility_equivalence(f);
  json r;
  r["dim"] = f.dim();
  r["size"] = f.size();
  r["lower"] = b.lower;
  r["upper"] = b.upper;
  r["riesz_constant"] = rc.value;
  r["riesz_witness"] = index_array(rc.witness);
  r["max_cos"] = eq.max_cos;
  r["K"] = eq.K;
  r["riesz_lower"] = eq.riesz_lower;
  r["riesz_upper"] = eq.riesz_upper;
  r["sandwich_checked"] = eq.checked;
  r["max_sandwich_violation"] = eq.max_sandwich_violation;
  r = tolerance_fields(r, tol);
  if (!eq.ok()) {
    return finish(opt, r, "gamma_sandwich", "violation " + std::to_string(eq.max_sandwich_violation));
  }
  return finish(opt, r);
}

// --- experiment -------------------------------------------------------------

struct ExperimentArgs {
  std::string kind;
  std::string rule = "geometric";
  Real ratio = 0.5;
  std::vector<Real> coefficients;
  std::string dims;
};

// "2..8" or "2,3,5".
std::vector<Index> parse_dims(const std::string& text) {
  std::vector<Index> out;
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    long v = -1;
    try {
      v = std::stol(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || v < 1) throw Error(Errc::invalid_input, "bad dimension '" + s + "' in --dims");
    return static_cast<Index>(v);
  };
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const Index lo = number(text.substr(0, dots));
    const Index hi = number(text.substr(dots + 2));
    if (hi < lo) throw Error(Errc::invalid_input, "empty range in --dims");
    for (Index m = lo; m <= hi; ++m) out.push_back(m);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(number(item));
  if (out.empty()) throw Error(Errc::invalid_input, "--dims is empty");
  return out;
}

std::string fmt(Real x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int run_experiment(const Options& opt, const ExperimentArgs& args) {
  const oblix::Tolerance tol = opt.tol();
  const oblix::TailRule rule = tail_rule(args.rule, args.ratio, args.coefficients);
  const std::vector<Index> dims = parse_dims(args.dims);
  std::string csv;
  std::string violated;
  if (args.kind == "truncation") {
    csv = "m,K,min_mI\n";
    for (const auto& p : oblix::truncation_growth(rule, dims, tol)) {
      csv += std::to_string(p.dim) + "," + fmt(p.K) + "," + fmt(p.min_mI) + "\n";
      if (violated.empty() && std::abs(p.K * p.min_mI - 1.0) > 1e-8) violated = "m = " + std::to_string(p.dim);
    }
    if (!violated.empty()) {
      emit(opt, csv);
      std::cerr << "oblix: identity 'stewart_oleary' violated at " << violated << "\n";
      return kViolation;
    }
  } else if (args.kind == "riesz") {
    csv = "m,riesz_constant,max_cos,K\n";
    for (const auto& p : oblix::nullspace_tail_experiment(rule, dims, tol)) {
      csv += std::to_string(p.dim) + "," + fmt(p.riesz_constant) + "," + fmt(p.max_cos) + "," + fmt(p.K) + "\n";
    }
  } else {
    throw Error(Errc::invalid_input, "unknown experiment kind '" + args.kind + "'");
  }
  emit(opt, csv);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"oblix: oblique projections, scaled projection bounds and frames"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  Options opt;
  app.add_option("-o,--out", opt.out, "Write the report here instead of stdout");
  app.add_option("--rel-rank", opt.rel_rank, "Relative singular value cutoff for ranks");
  app.add_option("--abs-eq", opt.abs_eq, "Absolute tolerance for equality checks");

  AnglesArgs angles;
  auto* c_angles = app.add_subcommand("angles", "Friedrichs and Dixmier angles between two subspaces");
  c_angles->add_option("--m", angles.m, "Subspace M (columns span it)")->required()->check(CLI::ExistingFile);
  c_angles->add_option("--n", angles.n, "Subspace N")->required()->check(CLI::ExistingFile);

  ProjectArgs project;
  auto* c_project = app.add_subcommand("project", "Weighted projection A (A*DA)^-1 A*D onto R(A)");
  c_project->add_option("--a", project.a, "Matrix A")->required()->check(CLI::ExistingFile);
  c_project->add_option("--weights", project.weights, "Diagonal of D as a row or column")
      ->required()
      ->check(CLI::ExistingFile);
  c_project->add_option("--mu", project.mu, "Cone parameter for complex weights");

  HullArgs hull;
  auto* c_hull = app.add_subcommand("hull", "Convex decomposition over diagonal projections");
  c_hull->add_option("--a", hull.a, "Matrix A")->required()->check(CLI::ExistingFile);
  c_hull->add_option("--weights", hull.weights, "Positive diagonal of D")->required()->check(CLI::ExistingFile);

  BoundsArgs bounds;
  auto* c_bounds = app.add_subcommand("bounds", "Enumerated and sampled bounds for ||P_{D,S}||");
  c_bounds->add_option("--subspace", bounds.subspace, "Subspace S")->required()->check(CLI::ExistingFile);
  c_bounds->add_option("--samples", bounds.samples, "Number of sampled weights");
  c_bounds->add_option("--seed", bounds.seed, "RNG seed (required with --samples)");

  DualityArgs duality;
  auto* c_duality = app.add_subcommand("duality", "Per-sample duality check for mu-cone weights");
  c_duality->add_option("--a", duality.a, "Matrix A")->required()->check(CLI::ExistingFile);
  c_duality->add_option("--mu", duality.mu, "Cone parameter")->required()->check(CLI::NonNegativeNumber);
  c_duality->add_option("--samples", duality.samples, "Number of sampled weights")->required();
  c_duality->add_option("--seed", duality.seed, "RNG seed");

  FramesArgs frames;
  auto* c_frames = app.add_subcommand("frames", "Frame bounds, Riesz constant and angle sandwich");
  c_frames->add_option("--frame", frames.frame, "Synthesis matrix or generator spec")
      ->required()
      ->check(CLI::ExistingFile);

  ExperimentArgs experiment;
  auto* c_experiment = app.add_subcommand("experiment", "Growth curves of truncated tails, as CSV");
  c_experiment->add_option("--kind", experiment.kind, "truncation or riesz")
      ->required()
      ->check(CLI::IsMember({"truncation", "riesz"}));
  c_experiment->add_option("--rule", experiment.rule, "geometric, unit or finite")
      ->check(CLI::IsMember({"geometric", "unit", "finite"}));
  c_experiment->add_option("--ratio", experiment.ratio, "Ratio of the geometric rule");
  c_experiment->add_option("--coefficients", experiment.coefficients, "Entries of a finite rule")->delimiter(',');
  c_experiment->add_option("--dims", experiment.dims, "Dimensions, e.g. 2..8 or 2,4,6")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kFailure;
  }

  try {
    if (*c_angles) return run_angles(opt, angles);
    if (*c_project) return run_project(opt, project);
    if (*c_hull) return run_hull(opt, hull);
    if (*c_bounds) return run_bounds(opt, bounds);
    if (*c_duality) return run_duality(opt, duality);
    if (*c_frames) return run_frames(opt, frames);
    if (*c_experiment) return run_experiment(opt, experiment);
  } catch (const Error& e) {
    std::cerr << "oblix: " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "oblix: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
