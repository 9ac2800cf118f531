// Command-line front end: seo, check-order, robustness, demo, certify, generate.
// Exit codes: 0 success, 2 validation failure, 3 solver failure, 4 failed
// certification.

#include "distil/certify.hpp"
#include "distil/demo.hpp"
#include "distil/errors.hpp"
#include "distil/filters.hpp"
#include "distil/instances.hpp"
#include "distil/io.hpp"
#include "distil/ordering.hpp"
#include "distil/random.hpp"
#include "distil/robustness.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

using namespace distil;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;
constexpr int kExitCertification = 4;

struct Common {
  std::uint64_t seed = 0;
  double tol = 1e-7;
  int restarts = 20;
  std::string out;
};

std::string out_path(const Common& c, const std::string& fallback) { return c.out.empty() ? fallback : c.out; }

void finish(const io::ReportDocument& report, const std::string& path, const std::string& summary) {
  io::write_file(path, report.emit());
  std::cout << path << "\n" << summary << "\n";
}

io::Json solver_tolerances() {
  const sdp::Options o = robustness_solver_options();
  return io::Json{{"sdp_gap", o.gap_tol}, {"sdp_feasibility", o.feas_tol}, {"sdp_max_iterations", o.max_iters}};
}

io::Json robustness_json(const RobustnessResult& r) {
  io::Json j;
  j["value"] = r.value;
  j["lower_bound"] = r.lower_bound;
  j["optimal_noise"] = io::elements_json(r.optimal_noise);
  io::Json dec = io::Json::array();
  for (const Matrix& m : r.decomposition) dec.push_back(io::matrix_json(m));
  j["decomposition"] = dec;
  j["dual_witness"] = io::elements_json(r.dual_witness);
  return j;
}

// ---- seo -------------------------------------------------------------------

int cmd_seo(const std::string& input, const std::string& seo_out, const Common& c) {
  const std::string text = io::read_file(input);
  const StateAssemblage sigma = io::parse_assemblage(text).state();
  const MeasurementAssemblage seo = compute_seo(sigma);
  const io::AssemblageDocument doc = io::AssemblageDocument::from(seo);
  if (!seo_out.empty()) io::write_file(seo_out, io::emit(doc));

  io::ReportDocument r;
  r.command = "seo";
  r.inputs_digest = io::digest({text});
  r.results["carrier_rank"] = seo.carrier_rank();
  r.results["seo"] = io::Json::parse(io::emit(doc));
  r.tolerances["support_relative"] = tol::kSupport;
  finish(r, out_path(c, "seo_report.json"), "carrier rank " + std::to_string(seo.carrier_rank()));
  return kExitOk;
}

// ---- check-order -----------------------------------------------------------

int cmd_check_order(const std::string& sigma_file, const std::string& tau_file, const Common& c) {
  const std::string s_text = io::read_file(sigma_file);
  const std::string t_text = io::read_file(tau_file);
  const StateAssemblage sigma = io::parse_assemblage(s_text).state();
  const StateAssemblage tau = io::parse_assemblage(t_text).state();

  OrderConfig cfg;
  cfg.n_restarts = c.restarts;
  cfg.seed = c.seed;
  cfg.tol_order = c.tol;
  const OrderVerdict v = search_order_witness(sigma, tau, cfg);

  io::ReportDocument r;
  r.command = "check-order";
  r.inputs_digest = io::digest({s_text, t_text});
  r.seed = c.seed;
  r.tolerances["order_residual"] = c.tol;
  r.tolerances["support_inclusion"] = tol::kSupportInclusion;
  r.results["verdict"] = to_string(v.status);
  r.results["rank_sigma"] = v.rank_sigma;
  r.results["rank_tau"] = v.rank_tau;
  r.results["restarts_run"] = v.restarts_run;
  r.results["verified_restarts"] = v.verified_restarts;
  r.results["best_residual"] = v.best_residual;
  std::string summary = "verdict " + to_string(v.status);
  if (v.status == OrderVerdict::Status::RefutedByRank) summary += " (not reachable: rank of rho_tau exceeds rank of rho_sigma)";
  if (v.best) {
    const FilterKraus l = synthesize_filter(sigma, tau, v.best->u, c.tol);
    const FilterOutcome replay = apply_filter(sigma, l);
    const double p_max = 1.0 / v.best->lambda_opt;
    r.results["witness"] = io::matrix_json(v.best->u);
    r.results["witness_residual"] = v.best->residual;
    r.results["lambda_opt"] = v.best->lambda_opt;
    r.results["p_max"] = p_max;
    r.results["filter"] = io::matrix_json(l.k);
    r.results["filter_p_succ"] = replay.p_succ;
    r.results["replay_error"] = max_entry_difference(replay.output.elements(), tau.elements());
    summary += ", p_max " + std::to_string(p_max);
  }
  finish(r, out_path(c, "check_order_report.json"), summary);
  return kExitOk;
}

// ---- robustness ------------------------------------------------------------

struct RobustnessArgs {
  std::string input;
  std::string measure = "sr";
  std::string model;
  bool compare_seo = false;
  std::string seo_model;
  bool acknowledge_inclusion = false;
  std::string dump_sdp;
};

int cmd_robustness(const RobustnessArgs& a, const Common& c) {
  const std::string text = io::read_file(a.input);
  const io::AssemblageDocument doc = io::parse_assemblage(text);
  std::vector<std::string> digested{text};

  sdp::Options options = robustness_solver_options();
  options.dump_path = a.dump_sdp;

  std::optional<NoiseModel> model;
  if (a.measure == "sr") {
    model = NoiseModel::general_state();
  } else if (a.measure == "src") {
    model = NoiseModel::consistent_state();
  } else if (a.measure == "ir") {
    model = NoiseModel::general_measurement();
  } else {
    if (a.model.empty()) throw ValidationFailure("--measure custom needs --model");
    const std::string mtext = io::read_file(a.model);
    digested.push_back(mtext);
    model = io::parse_noise_model(mtext);
  }

  io::ReportDocument r;
  r.command = "robustness";
  r.tolerances = solver_tolerances();
  r.results["measure"] = a.measure;
  r.results["noise_model"] = to_string(model->kind);

  RobustnessResult res;
  const bool state_input = doc.kind == io::AssemblageDocument::Kind::State;
  std::optional<StateAssemblage> sigma;
  if (state_input) {
    sigma = doc.state();
    res = robustness_with_noise_model(*sigma, *model, options);
  } else {
    res = robustness_with_noise_model(doc.measurement(), *model, options);
  }
  r.results["robustness"] = robustness_json(res);
  r.certificates.push_back(io::certificate_summary(res.certificate));
  std::string summary = a.measure + " = " + std::to_string(res.value);

  if (a.compare_seo) {
    if (!state_input) throw ValidationFailure("--compare-seo needs a state assemblage");
    NoiseModel seo_model = NoiseModel::general_measurement();
    if (a.measure == "custom" || !a.seo_model.empty()) {
      // Inclusion of the SEO-induced noise is only certified for the built-in pairs.
      if (!a.acknowledge_inclusion)
        throw ValidationFailure(
            "comparing a custom noise model with IR needs --acknowledge-unverified-inclusion; the noise-set "
            "inclusion is verified only for the built-in general/general and consistent/general pairs");
      if (!a.seo_model.empty()) {
        const std::string stext = io::read_file(a.seo_model);
        digested.push_back(stext);
        seo_model = io::parse_noise_model(stext);
      }
    }
    const RobustnessResult ir = robustness_with_noise_model(compute_seo(*sigma), seo_model, options);
    r.results["seo_incompatibility"] = robustness_json(ir);
    r.results["seo_noise_model"] = to_string(seo_model.kind);
    r.results["bounded_by_seo"] = res.value <= ir.value + 1e-6;
    r.results["inclusion_certified"] = a.measure != "custom" && a.seo_model.empty();
    r.certificates.push_back(io::certificate_summary(ir.certificate));
    summary += ", IR(SEO) = " + std::to_string(ir.value);
  }
  r.inputs_digest = io::digest(digested);
  finish(r, out_path(c, "robustness_report.json"), summary);
  return kExitOk;
}

// ---- demo ------------------------------------------------------------------

int cmd_demo(double v, const Common& c) {
  const demo::QubitQutritTrace t = demo::run_qubit_qutrit_example(v);
  const std::string dir = c.out.empty() ? "demo_out" : c.out;
  std::filesystem::create_directories(dir);
  io::write_file(dir + "/sigma_v.json", io::emit(io::AssemblageDocument::from(t.sigma)));
  io::write_file(dir + "/sigma_final.json", io::emit(io::AssemblageDocument::from(t.filtered)));

  io::ReportDocument r;
  r.command = "demo";
  r.inputs_digest = io::digest({std::to_string(v)});
  r.tolerances = solver_tolerances();
  r.tolerances["final_error"] = 1e-12;
  r.results["v"] = v;
  r.results["filter"] = io::matrix_json(t.filter);
  r.results["p_succ"] = t.p_succ;
  r.results["p_max"] = t.p_max;
  r.results["final_error"] = t.final_error;
  r.results["final_matches_pauli_half"] = t.final_error <= 1e-12;
  r.results["seo_carrier_rank"] = t.seo_rank;
  r.results["sr_before"] = t.sr_before;
  r.results["sr_after"] = t.sr_after;
  r.results["src_before"] = t.src_before;
  r.results["src_after"] = t.src_after;
  r.results["ir_seo"] = t.ir_seo;
  finish(r, dir + "/report.json",
         "p_succ " + std::to_string(t.p_succ) + ", SR " + std::to_string(t.sr_before) + " -> " +
             std::to_string(t.sr_after) + ", final error " + std::to_string(t.final_error));
  return t.final_error <= 1e-12 ? kExitOk : kExitCertification;
}

// ---- certify ---------------------------------------------------------------

int cmd_certify(const std::string& suite_name, std::size_t n, const Common& c) {
  const certify::Suite suite = certify::parse_suite(suite_name);
  certify::SuiteConfig cfg;
  cfg.n_instances = n;
  cfg.seed = c.seed;
  cfg.restarts = c.restarts;
  const certify::SuiteReport rep = certify::run_suite(suite, cfg);

  io::ReportDocument r;
  r.command = "certify";
  r.inputs_digest = io::digest({suite_name, std::to_string(n)});
  r.seed = c.seed;
  r.tolerances = solver_tolerances();
  r.tolerances["suite"] = rep.tolerance;
  r.results["suite"] = suite_name;
  r.results["n_instances"] = n;
  r.results["restarts"] = c.restarts;
  r.results["passed"] = rep.passed;
  r.results["worst_margin"] = rep.worst_margin;
  r.results["unknown"] = rep.unknown;
  io::Json checks = io::Json::array();
  for (const auto& ch : rep.checks)
    checks.push_back({{"instance", ch.instance},
                      {"quantity", ch.quantity},
                      {"margin", ch.margin},
                      {"passed", ch.passed},
                      {"note", ch.note}});
  r.results["checks"] = checks;
  finish(r, out_path(c, "certify_" + suite_name + ".json"),
         suite_name + (rep.passed ? " PASS" : " FAIL") + ", worst margin " + std::to_string(rep.worst_margin));
  return rep.passed ? kExitOk : kExitCertification;
}

// ---- generate --------------------------------------------------------------

struct GenerateArgs {
  std::string kind = "steerable";
  int dim = 2;
  std::size_t inputs = 2;
  std::size_t outputs = 2;
  double noise = 0.1;
  std::size_t hidden = 4;
};

int cmd_generate(const GenerateArgs& g, const Common& c) {
  if (g.dim < 1) throw ValidationFailure("--dim must be positive");
  random::Engine rng = random::derive(c.seed, 0);
  io::AssemblageDocument doc;
  if (g.kind == "steerable")
    doc = io::AssemblageDocument::from(random::random_steerable_assemblage(rng, g.dim, g.inputs, g.outputs));
  else if (g.kind == "mixed")
    doc = io::AssemblageDocument::from(random::random_state_assemblage(rng, g.dim, g.inputs, g.outputs));
  else if (g.kind == "product")
    doc = io::AssemblageDocument::from(random::random_product_assemblage(rng, g.dim, g.inputs, g.outputs));
  else if (g.kind == "lhs")
    doc = io::AssemblageDocument::from(random::random_lhs_assemblage(rng, g.dim, g.inputs, g.outputs, g.hidden));
  else if (g.kind == "projective")
    doc = io::AssemblageDocument::from(random::random_projective_measurements(rng, g.dim, g.inputs, g.outputs));
  else if (g.kind == "noisy")
    doc = io::AssemblageDocument::from(random::random_noisy_measurements(rng, g.dim, g.inputs, g.outputs, g.noise));
  else if (g.kind == "povm")
    doc = io::AssemblageDocument::from(random::random_povms(rng, g.dim, g.inputs, g.outputs));
  else
    throw ValidationFailure("unknown kind '" + g.kind + "'");
  const std::string text = io::emit(doc);
  const std::string path = out_path(c, "assemblage.json");
  io::write_file(path, text);
  std::cout << path << "\n" << g.kind << " " << io::to_string(doc.kind) << " assemblage, seed " << c.seed
            << ", digest " << io::digest({text}) << "\n";
  return kExitOk;
}

void add_common(CLI::App* sub, Common& c, bool seeded, bool searched) {
  if (seeded) sub->add_option("--seed", c.seed, "Base seed for all randomness");
  if (searched) {
    sub->add_option("--restarts", c.restarts, "Search restarts")->check(CLI::PositiveNumber);
    sub->add_option("--tol", c.tol, "Acceptance tolerance for order witnesses")->check(CLI::PositiveNumber);
  }
  sub->add_option("--out", c.out, "Output path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steering distillation toolkit"};
  app.require_subcommand(1);
  Common common;

  std::string seo_input, seo_out;
  auto* seo = app.add_subcommand("seo", "Steering-equivalent observables of a state assemblage");
  seo->add_option("input", seo_input, "State assemblage document")->required();
  seo->add_option("--seo-out", seo_out, "Also write the SEO as an assemblage document");
  add_common(seo, common, false, false);

  std::string sigma_file, tau_file;
  auto* order = app.add_subcommand("check-order", "Search an SEO-ordering witness and synthesize the filter");
  order->add_option("sigma", sigma_file, "Source assemblage")->required();
  order->add_option("tau", tau_file, "Target assemblage")->required();
  add_common(order, common, true, true);

  RobustnessArgs ra;
  auto* rob = app.add_subcommand("robustness", "Steering or incompatibility robustness");
  rob->add_option("input", ra.input, "Assemblage document")->required();
  rob->add_option("--measure", ra.measure, "sr | src | ir | custom")
      ->check(CLI::IsMember({"sr", "src", "ir", "custom"}));
  rob->add_option("--model", ra.model, "Noise model document (custom measure)");
  rob->add_flag("--compare-seo", ra.compare_seo, "Also compute IR of the SEO and check the bound");
  rob->add_option("--seo-model", ra.seo_model, "Noise model document for the SEO comparison");
  rob->add_flag("--acknowledge-unverified-inclusion", ra.acknowledge_inclusion,
                "Allow comparisons whose noise-set inclusion is not verified");
  rob->add_option("--dump-sdp", ra.dump_sdp, "Debug: write the SDPA dump of the last SDP solved");
  add_common(rob, common, false, false);

  double v = 1.0;
  auto* demo_cmd = app.add_subcommand("demo", "Qubit-qutrit filtering example");
  demo_cmd->add_option("--v", v, "Visibility in (0, 1]")->required();
  add_common(demo_cmd, common, false, false);

  std::string suite;
  std::size_t n_instances = 20;
  auto* cert = app.add_subcommand("certify", "Randomized invariant checks");
  cert->add_option("--suite", suite, "obs1 | thm3 | monotone | roundtrip")->required();
  cert->add_option("--n", n_instances, "Number of instances");
  add_common(cert, common, true, true);

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Random assemblage document");
  gen->add_option("--kind", ga.kind, "steerable | mixed | product | lhs | projective | noisy | povm");
  gen->add_option("--dim", ga.dim, "Trusted-side dimension");
  gen->add_option("--inputs", ga.inputs, "Number of inputs")->check(CLI::PositiveNumber);
  gen->add_option("--outputs", ga.outputs, "Number of outcomes")->check(CLI::PositiveNumber);
  gen->add_option("--noise", ga.noise, "White-noise weight for --kind noisy")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--hidden", ga.hidden, "Hidden states for --kind lhs")->check(CLI::PositiveNumber);
  add_common(gen, common, true, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (seo->parsed()) return cmd_seo(seo_input, seo_out, common);
    if (order->parsed()) return cmd_check_order(sigma_file, tau_file, common);
    if (rob->parsed()) return cmd_robustness(ra, common);
    if (demo_cmd->parsed()) return cmd_demo(v, common);
    if (cert->parsed()) return cmd_certify(suite, n_instances, common);
    if (gen->parsed()) return cmd_generate(ga, common);
  } catch (const SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const IllFormedProblem& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const Error& e) {
    std::cerr << "validation failure: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
