// rip-lab: sparse recovery workbench.
//
// Subcommands: decompose, ric, roc, nsp, recover, lowrank, adversary,
// bounds, phase, thresholds. Single results print as JSON, grids and curves
// as CSV. Every seeded run is byte-reproducible. Exit codes: 0 success,
// 2 domain/precondition errors, 3 solver non-convergence.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "riplab/riplab.hpp"

namespace {

using nlohmann::json;
using namespace riplab;

json to_json(const Vec& v) { return json(v); }

json to_json(const Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows; ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols; ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const RecoveryResult& r) {
  return json{{"estimate", to_json(r.estimate)},
              {"objective", r.objective},
              {"constraint_residual", r.constraint_residual},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"optimality_gap", r.optimality_gap}};
}

json to_json(const MatrixRecoveryResult& r) {
  return json{{"estimate", to_json(r.estimate)},
              {"nuclear_objective", r.nuclear_objective},
              {"constraint_residual", r.constraint_residual},
              {"iterations", r.iterations},
              {"converged", r.converged}};
}

json to_json(const RicReport& r) {
  return json{{"order", r.order},
              {"value", r.value},
              {"method", r.method == RicMethod::ExactEnumeration
                             ? "ExactEnumeration"
                             : "SampledLowerBound"},
              {"supports_examined", r.supports_examined}};
}

struct Output {
  std::string path;  // empty = stdout

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      std::cout.flush();
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw format_error("cannot open output file '" + path + "'");
    f << text;
  }
};

ConstraintSet parse_constraint(const std::string& kind, double eta) {
  if (kind == "zero") return ConstraintSet::zero();
  if (kind == "l2") return ConstraintSet::l2_ball(eta);
  if (kind == "ds") return ConstraintSet::dantzig_ball(eta);
  throw std::domain_error("unknown constraint kind '" + kind + "'");
}

EnsembleKind parse_ensemble(const std::string& name) {
  if (name == "gaussian") return EnsembleKind::Gaussian;
  if (name == "rademacher") return EnsembleKind::Rademacher;
  if (name == "ternary") return EnsembleKind::TernarySparse;
  throw std::domain_error("unknown ensemble '" + name + "'");
}

std::string csv_double(double x) { return format_double(x); }

int run(int argc, char** argv) {
  CLI::App app{"rip-lab: sparse signal and low-rank matrix recovery workbench"};
  app.require_subcommand(1);

  Output output;
  std::uint64_t seed = 0;
  std::string format = "json";
  app.add_option("--output", output.path, "write results to a file instead of stdout");
  app.add_option("--seed", seed, "seed for randomized subcommands");
  app.add_option("--format", format, "output format where both apply: csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  // decompose: convex combination of sparse vectors for a polytope member
  auto* cmd_dec = app.add_subcommand("decompose",
                                     "decompose a member of T(alpha, s) into a "
                                     "convex combination of s-sparse vectors");
  std::string dec_input;
  double dec_alpha = 1.0;
  int dec_s = 1;
  cmd_dec->add_option("--input", dec_input, "vector CSV (one row or one column)")
      ->required();
  cmd_dec->add_option("--alpha", dec_alpha, "sup-norm cap")->required();
  cmd_dec->add_option("--s", dec_s, "sparsity level")->required();

  // ric: exact enumeration on a matrix, or sampled lower bound on a map
  auto* cmd_ric = app.add_subcommand("ric", "restricted isometry constant");
  std::string ric_matrix, ric_map;
  double ric_order = 1.0;
  int ric_rank = 1, ric_trials = 20;
  std::pair<int, int> ric_shape{0, 0};
  cmd_ric->add_option("--matrix", ric_matrix, "measurement matrix CSV");
  cmd_ric->add_option("--order", ric_order, "sparsity order (real; rounds up)");
  cmd_ric->add_option("--map", ric_map, "linear map CSV, q x (m*n)");
  cmd_ric->add_option("--shape", ric_shape, "domain shape m n (map mode)");
  cmd_ric->add_option("--rank", ric_rank, "rank order (map mode)");
  cmd_ric->add_option("--trials", ric_trials, "ascent restarts (map mode)");

  auto* cmd_roc = app.add_subcommand("roc", "restricted orthogonality constant");
  std::string roc_matrix;
  int roc_k1 = 1, roc_k2 = 1;
  cmd_roc->add_option("--matrix", roc_matrix)->required();
  cmd_roc->add_option("--k1", roc_k1)->required();
  cmd_roc->add_option("--k2", roc_k2)->required();

  auto* cmd_nsp = app.add_subcommand("nsp", "null space property check");
  std::string nsp_matrix;
  int nsp_k = 1;
  cmd_nsp->add_option("--matrix", nsp_matrix)->required();
  cmd_nsp->add_option("--k", nsp_k)->required();

  auto* cmd_thr = app.add_subcommand("thresholds",
                                     "delta*(t) and n*(t) over a t grid (CSV)");
  double thr_min = 1.0, thr_max = 2.0, thr_step = 0.05;
  cmd_thr->add_option("--t-min", thr_min)->required();
  cmd_thr->add_option("--t-max", thr_max)->required();
  cmd_thr->add_option("--step", thr_step)->required();

  auto* cmd_rec = app.add_subcommand("recover", "constrained l1 minimization");
  std::string rec_matrix, rec_y, rec_constraint = "zero";
  double rec_eta = 0.0, rec_tol = 1e-8;
  int rec_max_iter = 20000;
  cmd_rec->add_option("--matrix", rec_matrix)->required();
  cmd_rec->add_option("--y", rec_y)->required();
  cmd_rec->add_option("--constraint", rec_constraint)
      ->check(CLI::IsMember({"zero", "l2", "ds"}));
  cmd_rec->add_option("--eta", rec_eta, "constraint radius");
  cmd_rec->add_option("--tol", rec_tol);
  cmd_rec->add_option("--max-iter", rec_max_iter);

  auto* cmd_low = app.add_subcommand("lowrank", "constrained nuclear norm minimization");
  std::string low_map, low_b, low_constraint = "zero";
  std::pair<int, int> low_shape{0, 0};
  double low_eta = 0.0, low_tol = 1e-8;
  int low_max_iter = 20000;
  cmd_low->add_option("--map", low_map, "linear map CSV, q x (m*n)")->required();
  cmd_low->add_option("--shape", low_shape, "domain shape m n")->required();
  cmd_low->add_option("--b", low_b, "observation CSV")->required();
  cmd_low->add_option("--constraint", low_constraint)
      ->check(CLI::IsMember({"zero", "l2", "ds"}));
  cmd_low->add_option("--eta", low_eta);
  cmd_low->add_option("--tol", low_tol);
  cmd_low->add_option("--max-iter", low_max_iter);

  auto* cmd_adv = app.add_subcommand("adversary",
                                     "explicit instance defeating l1 recovery");
  double adv_t = 2.0;
  int adv_k = 2, adv_p = 8;
  std::string adv_regime = "high";
  bool adv_verify = false;
  cmd_adv->add_option("--t", adv_t)->required();
  cmd_adv->add_option("--k", adv_k)->required();
  cmd_adv->add_option("--p", adv_p)->required();
  cmd_adv->add_option("--regime", adv_regime)->check(CLI::IsMember({"high", "low"}));
  cmd_adv->add_flag("--verify", adv_verify, "also run the solver and report failure");

  auto* cmd_bnd = app.add_subcommand("bounds", "closed-form recovery error bounds");
  std::string bnd_kind = "l2";
  BoundInputs bin;
  double bnd_oracle_sigma = 0.0, bnd_t = 2.0, bnd_delta = 0.0;
  std::string bnd_beta;
  cmd_bnd->add_option("--kind", bnd_kind,
                      "l2|ds|matrix-l2|matrix-ds|gaussian-l2|gaussian-ds|oracle")
      ->check(CLI::IsMember({"l2", "ds", "matrix-l2", "matrix-ds", "gaussian-l2",
                             "gaussian-ds", "oracle"}));
  cmd_bnd->add_option("--delta", bnd_delta)->required();
  cmd_bnd->add_option("--t", bnd_t)->required();
  cmd_bnd->add_option("--eps", bin.eps);
  cmd_bnd->add_option("--eta", bin.eta);
  cmd_bnd->add_option("--tail", bin.tail_l1);
  cmd_bnd->add_option("--k", bin.k_or_r, "sparsity k or rank r");
  cmd_bnd->add_option("--sigma", bnd_oracle_sigma);
  cmd_bnd->add_option("--n", bin.n);
  cmd_bnd->add_option("--p", bin.p);
  cmd_bnd->add_option("--beta", bnd_beta, "signal CSV (oracle kind)");

  auto* cmd_phase = app.add_subcommand("phase", "recovery phase sweep (CSV)");
  int ph_p = 64, ph_trials = 20;
  std::pair<int, int> ph_n{8, 48}, ph_k{1, 6};
  int ph_n_step = 4, ph_k_step = 1;
  std::string ph_ensemble = "gaussian";
  double ph_threshold = 1e-4;
  cmd_phase->add_option("--p", ph_p)->required();
  cmd_phase->add_option("--n-range", ph_n, "n sweep: min max")->required();
  cmd_phase->add_option("--n-step", ph_n_step);
  cmd_phase->add_option("--k-range", ph_k, "k sweep: min max")->required();
  cmd_phase->add_option("--k-step", ph_k_step);
  cmd_phase->add_option("--trials", ph_trials);
  cmd_phase->add_option("--ensemble", ph_ensemble)
      ->check(CLI::IsMember({"gaussian", "rademacher", "ternary"}));
  cmd_phase->add_option("--success-threshold", ph_threshold);

  CLI11_PARSE(app, argc, argv);

  int exit_code = 0;

  if (cmd_dec->parsed()) {
    const Vec v = read_csv_vector_file(dec_input);
    const ConvexCombination comb = decompose(v, PolytopeSpec(dec_alpha, dec_s));
    json weights = json::array(), vectors = json::array();
    for (const auto& term : comb.terms) {
      weights.push_back(term.weight);
      vectors.push_back(to_json(term.vector));
    }
    output.write(json{{"weights", weights}, {"vectors", vectors}}.dump(2) + "\n");
  } else if (cmd_ric->parsed()) {
    if (!ric_map.empty()) {
      if (ric_shape.first < 1 || ric_shape.second < 1)
        throw std::domain_error("ric: --shape m n is required in map mode");
      LinearMap map{read_csv_matrix_file(ric_map), ric_shape.first, ric_shape.second};
      const RicReport rep = ric_sampled(map, ric_rank, ric_trials, seed);
      output.write(to_json(rep).dump(2) + "\n");
    } else if (!ric_matrix.empty()) {
      const Mat a = read_csv_matrix_file(ric_matrix);
      const RicReport rep = ric_exact(a, ric_order);
      output.write(to_json(rep).dump(2) + "\n");
    } else {
      throw std::domain_error("ric: pass --matrix (exact) or --map (sampled)");
    }
  } else if (cmd_roc->parsed()) {
    const Mat a = read_csv_matrix_file(roc_matrix);
    const double theta = roc_exact(a, roc_k1, roc_k2);
    output.write(json{{"k1", roc_k1}, {"k2", roc_k2}, {"value", theta}}.dump(2) + "\n");
  } else if (cmd_nsp->parsed()) {
    const Mat a = read_csv_matrix_file(nsp_matrix);
    const bool ok = nsp_verify(a, nsp_k);
    output.write(json{{"k", nsp_k}, {"satisfied", ok}}.dump(2) + "\n");
  } else if (cmd_thr->parsed()) {
    const auto rows = thresholds_table(thr_min, thr_max, thr_step);
    std::ostringstream out;
    out << "t,delta_star,status,n_star\n";
    for (const auto& row : rows) {
      out << csv_double(row.t) << ',' << csv_double(row.delta_star) << ','
          << (row.status == SharpnessStatus::Sharp ? "sharp" : "conjectured") << ',';
      if (row.n_star) out << csv_double(*row.n_star);
      out << '\n';
    }
    output.write(out.str());
  } else if (cmd_rec->parsed()) {
    RecoveryProblem prob{read_csv_matrix_file(rec_matrix),
                         read_csv_vector_file(rec_y),
                         parse_constraint(rec_constraint, rec_eta)};
    SolverOptions opts;
    opts.tolerance = rec_tol;
    opts.max_iterations = rec_max_iter;
    opts.seed = seed;
    const RecoveryResult res = l1_min(prob, opts);
    output.write(to_json(res).dump(2) + "\n");
    if (!res.converged) exit_code = 3;
  } else if (cmd_low->parsed()) {
    ArmpProblem prob{LinearMap{read_csv_matrix_file(low_map), low_shape.first,
                               low_shape.second},
                     read_csv_vector_file(low_b),
                     parse_constraint(low_constraint, low_eta)};
    SolverOptions opts;
    opts.tolerance = low_tol;
    opts.max_iterations = low_max_iter;
    opts.seed = seed;
    const MatrixRecoveryResult res = nuclear_min(prob, opts);
    output.write(to_json(res).dump(2) + "\n");
    if (!res.converged) exit_code = 3;
  } else if (cmd_adv->parsed()) {
    const AdversarialInstance inst = adv_regime == "high"
                                         ? hard_instance_high_t(adv_t, adv_k, adv_p)
                                         : hard_instance_low_t(adv_t, adv_k, adv_p);
    json j{{"t", inst.t},
           {"k", inst.k},
           {"m", inst.m},
           {"m_prime", inst.m_prime},
           {"delta_bound", inst.delta_bound},
           {"strict_l1_gap", inst.strict_l1_gap},
           {"matrix", to_json(inst.a)},
           {"beta0", to_json(inst.beta0)},
           {"gamma0", to_json(inst.gamma0)},
           {"null_witness", to_json(inst.null_witness)}};
    if (adv_verify) {
      const FailureReport rep = verify_failure(inst);
      j["failure_report"] = json{
          {"l1_objective_at_optimum", rep.l1_objective_at_optimum},
          {"planted_objective", rep.planted_objective},
          {"recovered_planted", rep.recovered_planted}};
    }
    output.write(j.dump(2) + "\n");
  } else if (cmd_bnd->parsed()) {
    bin.delta = bnd_delta;
    bin.t = bnd_t;
    bin.sigma = bnd_oracle_sigma;
    json echo{{"delta", bin.delta}, {"t", bin.t},      {"eps", bin.eps},
              {"eta", bin.eta},     {"tail", bin.tail_l1}, {"k", bin.k_or_r},
              {"sigma", bin.sigma}, {"n", bin.n},      {"p", bin.p}};
    json j{{"kind", bnd_kind}, {"inputs_echo", echo}};
    if (bnd_kind == "l2") {
      j["bound"] = error_bound_l2(bin);
    } else if (bnd_kind == "ds") {
      j["bound"] = error_bound_ds(bin);
    } else if (bnd_kind == "matrix-l2") {
      j["bound"] = error_bound_matrix(bin, BoundKind::L2);
    } else if (bnd_kind == "matrix-ds") {
      j["bound"] = error_bound_matrix(bin, BoundKind::DS);
    } else if (bnd_kind == "gaussian-l2" || bnd_kind == "gaussian-ds") {
      const GaussianBound g = gaussian_bound(
          bin, bnd_kind == "gaussian-l2" ? BoundKind::L2 : BoundKind::DS);
      j["bound"] = g.bound;
      j["probability"] = g.probability;
    } else {  // oracle
      if (bnd_beta.empty()) throw std::domain_error("bounds: oracle kind needs --beta");
      const Vec beta = read_csv_vector_file(bnd_beta);
      j["bound"] = oracle_bound(bin.t, bin.delta, bin.p, bin.sigma, beta);
    }
    output.write(j.dump(2) + "\n");
  } else if (cmd_phase->parsed()) {
    ExperimentConfig cfg;
    cfg.ensemble = parse_ensemble(ph_ensemble);
    cfg.p = ph_p;
    cfg.trials = ph_trials;
    cfg.seed = seed;
    cfg.success_threshold = ph_threshold;
    std::vector<int> n_values, k_values;
    for (int n = ph_n.first; n <= ph_n.second; n += ph_n_step) n_values.push_back(n);
    for (int k = ph_k.first; k <= ph_k.second; k += ph_k_step) k_values.push_back(k);
    const auto cells = phase_sweep(cfg, n_values, k_values);
    if (format == "json") {
      json arr = json::array();
      for (const auto& c : cells)
        arr.push_back(json{{"n", c.n},
                           {"k", c.k},
                           {"success_rate", c.success_rate},
                           {"mean_error", c.mean_error}});
      output.write(arr.dump(2) + "\n");
    } else {
      std::ostringstream out;
      out << "n,k,success_rate,mean_error\n";
      for (const auto& c : cells)
        out << c.n << ',' << c.k << ',' << csv_double(c.success_rate) << ','
            << csv_double(c.mean_error) << '\n';
      output.write(out.str());
    }
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const riplab::numeric_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
