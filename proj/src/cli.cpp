#include "nptk/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>

#include "nptk/errors.hpp"
#include "nptk/json_io.hpp"
#include "nptk/verify.hpp"

namespace nptk {

namespace {

using json = nlohmann::json;
namespace jio = json_io;

struct Settings {
  std::string out_path;
  std::string csv_path;
  int samples = 1000;
  std::uint64_t seed = 1;
  double tol_algebraic = 1e-12;
  double tol_inequality = 1e-10;
  double boundary_band = 1e-6;
  int budget = 10000;
};

class Emitter {
 public:
  Emitter(const Settings& s, std::ostream& out) : s_(s), out_(out) {}
  void operator()(const json& j) const {
    if (s_.out_path.empty()) {
      out_ << j.dump(2) << '\n';
      return;
    }
    std::ofstream f(s_.out_path);
    if (!f) throw InputError("cannot write " + s_.out_path);
    f << j.dump(2) << '\n';
  }

 private:
  const Settings& s_;
  std::ostream& out_;
};

int cmd_check_envelope(const std::string& arg, const Settings& s, const Emitter& emit) {
  const Point3 z = jio::to_point3(jio::load(arg));
  const EnvelopeReport rep = in_G(z, s.boundary_band);
  json j = jio::from_report(rep);
  j["point"] = jio::from_point3(z);
  emit(j);
  switch (rep.status) {
    case MembershipStatus::member:
      return 0;
    case MembershipStatus::non_member:
      return exit_non_member;
    default:
      return exit_boundary;
  }
}

int cmd_witness(const std::string& arg, const Emitter& emit) {
  const Point3 z = jio::to_point3(jio::load(arg));
  const SeparatingFunctional sf = separating_functional(z);
  const auto c = sf.coefficients();
  emit({{"point", jio::from_point3(z)},
        {"r", sf.argmax_r},
        {"U", jio::from_matrix(sf.u.matrix())},
        {"xi", jio::from_vector(sf.xi)},
        {"eta", jio::from_vector(sf.eta)},
        {"coefficients", jio::from_vector(c)},
        {"value_at_point", jio::from_complex(sf.value)},
        {"modulus_at_point", std::abs(sf.value)},
        {"bound_on_envelope", 1.0}});
  return 0;
}

int cmd_extend(const std::string& f_arg, const std::string& at_arg, const std::string& mode, const Emitter& emit) {
  const TFunction f = jio::to_tfunction(jio::load(f_arg));
  TwoVarFunction ext;
  if (mode == "np") {
    if (f.is_constant()) throw DegenerateInputError("extend: f is constant; use --mode linear or the constant itself");
    ext = np_extension(f);
  } else if (mode == "linear") {
    ext = linear_E(f);
  } else {
    throw InputError("extend: --mode must be np or linear");
  }
  json values = json::array();
  const json pts = jio::load(at_arg);
  if (!pts.is_array()) throw InputError("extend: --at takes an array of points");
  for (const auto& p : pts) {
    const Point2 l = jio::to_point2(p);
    values.push_back({{"point", jio::from_vector(l)}, {"value", jio::from_complex(ext(l))}});
  }
  // Restriction residual on a fixed ring of T-points.
  double residual = 0.0;
  for (int k = 0; k < 64; ++k) {
    const cplx z = std::polar(0.95 * (k + 1) / 64.0, 2.0 * std::numbers::pi * k / 64.0);
    for (Branch b : {Branch::first, Branch::second}) {
      const TPoint tp{b, z};
      residual = std::max(residual, std::abs(ext(tp.embed()) - eval_T(f, tp)));
    }
  }
  json j = {{"mode", mode}, {"values", values}, {"restriction_residual", residual}};
  if (const auto n = f.exact_norm()) j["norm_T"] = *n;
  emit(j);
  return 0;
}

int cmd_check_crossed(const std::string& arg, const Emitter& emit) {
  const Point2 l = jio::to_point2(jio::load(arg));
  const TauFamily fam = TauFamily::linear_grid();
  emit({{"point", jio::from_vector(l)},
        {"Delta", in_Delta(l)},
        {"G49", in_G49(l)},
        {"H", in_H(l)},
        {"tau_family", in_G_tau_family(fam, l)},
        {"tau_family_gauge", tau_family_gauge(fam, l)},
        {"tau_grid_size", fam.size()}});
  return 0;
}

int cmd_model_check(const std::string& arg, const Settings& s, const Emitter& emit) {
  const EvenModel m = jio::to_model(jio::load(arg));
  const ModelCheckReport r = model_consistency_check(m, s.samples, s.seed);
  emit({{"samples", r.samples},
        {"passed", r.passed()},
        {"failures", r.failures},
        {"messages", r.messages},
        {"max_modulus", r.max_modulus},
        {"max_evenness_residual", r.max_evenness_residual},
        {"max_cover_residual", r.max_cover_residual}});
  return r.passed() ? 0 : 1;
}

int cmd_verify(const std::string& suite, const Settings& s, const Emitter& emit) {
  VerifyOptions opt{s.samples, s.seed, s.tol_algebraic, s.tol_inequality, s.boundary_band};
  const VerificationReport rep = run_suite(suite, opt);
  if (!s.csv_path.empty()) {
    std::ofstream csv(s.csv_path);
    if (!csv) throw InputError("cannot write " + s.csv_path);
    write_csv(rep, csv);
  }
  emit(to_json(rep));
  return rep.passed() ? 0 : 1;
}

int cmd_pnorm(const std::string& p_arg, const std::string& f_arg, const std::string& v_arg, const Settings& s,
              const Emitter& emit, std::ostream& err) {
  const PolyMatrix p = jio::to_polymatrix(jio::load(p_arg));
  const Polynomial f = jio::to_polynomial(jio::load(f_arg), p.nvars());
  const NormEstimate est = v_arg.empty() ? pnorm_estimate(p, f, s.budget, s.seed)
                                         : pVnorm_estimate(p, jio::to_variety(jio::load(v_arg), p.nvars()), f,
                                                           s.budget, s.seed);
  json j = {{"value", est.value},
            {"bound", "lower-bound"},
            {"feasible", est.feasible},
            {"evaluations", est.evaluations},
            {"accepted", est.accepted},
            {"budget", s.budget},
            {"seed", s.seed}};
  if (est.witness) {
    json points = json::array();
    for (const auto& sp : spectrum(*est.witness))
      points.push_back({{"point", jio::from_vector(sp.point)}, {"multiplicity", sp.multiplicity}});
    j["witness"] = {{"size", est.witness->size()}, {"spectrum", points}};
  }
  if (!est.warning.empty()) j["warning"] = est.warning;
  emit(j);
  if (!est.feasible) {
    err << "warning: " << est.warning << '\n';
    return exit_empty_feasible;
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Numerical toolkit for norm-preserving extensions, the envelope of the symmetrised variety and "
               "commuting-tuple functional calculus"};
  app.require_subcommand(1);
  app.add_option("--out", s.out_path, "Write the JSON report to this file");

  std::function<int()> action;
  const Emitter emit(s, out);

  std::string point;
  auto* env = app.add_subcommand("check-envelope", "Membership of a point of C^3 in the envelope");
  env->add_option("point", point, "[[re,im],[re,im],[re,im]] or @file")->required();
  env->add_option("--boundary-band", s.boundary_band, "Closed-form margin below which the verdict is indeterminate");
  env->callback([&] { action = [&] { return cmd_check_envelope(point, s, emit); }; });

  auto* wit = app.add_subcommand("witness", "Separating functional for a point outside the closed envelope");
  wit->add_option("point", point, "[[re,im],[re,im],[re,im]] or @file")->required();
  wit->callback([&] { action = [&] { return cmd_witness(point, emit); }; });

  std::string f_arg, at_arg = "[]", mode = "np";
  auto* ext = app.add_subcommand("extend", "Evaluate an extension of a function on the crossed discs");
  ext->add_option("function", f_arg, "{\"f1\": ..., \"f2\": ...} or @file")->required();
  ext->add_option("--at", at_arg, "JSON array of points of C^2");
  ext->add_option("--mode", mode, "np (norm preserving) or linear")->check(CLI::IsMember({"np", "linear"}));
  ext->callback([&] { action = [&] { return cmd_extend(f_arg, at_arg, mode, emit); }; });

  auto* crossed = app.add_subcommand("check-crossed", "Membership of a point of C^2 in Delta, G49, H and the tau family");
  crossed->add_option("point", point, "[[re,im],[re,im]] or @file")->required();
  crossed->callback([&] { action = [&] { return cmd_check_crossed(point, emit); }; });

  std::string model_arg;
  auto* model = app.add_subcommand("model-check", "Sampled consistency checks of an even model");
  model->add_option("model", model_arg, "{\"U\": M, \"split\": [n1, n2], \"L\": M} or @file")->required();
  model->add_option("--samples", s.samples);
  model->add_option("--seed", s.seed);
  model->callback([&] { action = [&] { return cmd_model_check(model_arg, s, emit); }; });

  std::string suite;
  auto* ver = app.add_subcommand("verify", "Run a batch verification suite");
  ver->add_option("--suite", suite, "envelope, crossed, realization, calculus, linalg or all")->required();
  ver->add_option("--samples", s.samples);
  ver->add_option("--seed", s.seed);
  ver->add_option("--tol-algebraic", s.tol_algebraic);
  ver->add_option("--tol-inequality", s.tol_inequality);
  ver->add_option("--boundary-band", s.boundary_band);
  ver->add_option("--dump-csv", s.csv_path, "Per-sample violations as CSV");
  ver->callback([&] { action = [&] { return cmd_verify(suite, s, emit); }; });

  std::string p_arg, pf_arg, v_arg;
  auto* pn = app.add_subcommand("pnorm", "Lower bound for the p-norm (or the (p, V)-norm) of a polynomial");
  pn->add_option("--p", p_arg, "Polynomial matrix, or {\"gauge\": \"polydisc\"|\"ball\", \"d\": n}")->required();
  pn->add_option("--f", pf_arg, "Polynomial {\"exponents\": ..., \"coeffs\": ...}")->required();
  pn->add_option("--variety", v_arg, "{\"generators\": [...]}: restrict to tuples subordinate to V");
  pn->add_option("--budget", s.budget)->check(CLI::PositiveNumber);
  pn->add_option("--seed", s.seed);
  pn->callback([&] { action = [&] { return cmd_pnorm(p_arg, pf_arg, v_arg, s, emit, err); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : exit_usage;
  }
  try {
    return action();
  } catch (const DegenerateInputError& e) {
    err << "error: " << e.what() << '\n';
    return exit_degenerate;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const NoWitnessError& e) {
    err << "error: " << e.what() << '\n';
    return exit_non_member;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_internal;
  }
}

}  // namespace nptk
