#include "dfrep/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <functional>
#include <map>
#include <random>

#include <json.hpp>

#include "dfrep/ils.hpp"
#include "dfrep/probes.hpp"
#include "dfrep/tracial.hpp"

namespace dfrep::cli {

using nlohmann::json;

namespace {

struct Context {
  const Scenario& scenario;
  const Flags& flags;
  DecoherenceFunctional d;
  std::uint64_t seed;

  Index samples(Index fallback) const { return flags.samples.value_or(fallback); }
  double tolerance(double fallback) const { return flags.tolerance.value_or(fallback); }
};

struct Outcome {
  bool pass = true;
  std::string verdict;
  json records = json::array();
  std::string csv;
  Index samples = 0;
};

json complex_json(cplx v) { return {{"re", v.real()}, {"im", v.imag()}}; }

json matrix_json(const Matrix& m) {
  json re = json::array(), im = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json rr = json::array(), ii = json::array();
    for (Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"re", re}, {"im", im}};
}

Outcome verdict_of(bool pass, json record, Index samples) {
  Outcome out;
  out.pass = pass;
  out.verdict = pass ? "pass" : "violation";
  out.records.push_back(std::move(record));
  out.samples = samples;
  return out;
}

Outcome violation(const std::string& message) {
  Outcome out;
  out.pass = false;
  out.verdict = "violation";
  out.records.push_back({{"error", message}});
  return out;
}

ElementaryTensorSum random_tensor_sum(Index dim, Rng& rng) {
  std::uniform_int_distribution<int> terms(1, 4);
  ElementaryTensorSum s;
  const int count = terms(rng);
  for (int k = 0; k < count; ++k)
    s.terms.emplace_back(linalg::gaussian_matrix(dim, dim, rng), linalg::gaussian_matrix(dim, dim, rng));
  return s;
}

std::pair<Projection, Projection> random_pair(Index dim, Rng& rng) {
  std::uniform_int_distribution<Index> rank(0, dim);
  Projection p = linalg::random_projection(dim, rank(rng), rng);
  Projection q = linalg::random_projection(dim, rank(rng), rng);
  return {std::move(p), std::move(q)};
}

Outcome check_axioms_cmd(const Context& c) {
  const Index samples = c.samples(200);
  const AxiomReport r = check_axioms(c.d, samples, c.seed, c.tolerance(c.scenario.tolerances.axiom));
  json rec = {{"hermiticity_residual", r.hermiticity_residual},
              {"positivity_min", r.positivity_min},
              {"normalization_residual", r.normalization_residual},
              {"orthoadditivity_residual", r.orthoadditivity_residual},
              {"hermiticity_ok", r.hermiticity_ok},
              {"positivity_ok", r.positivity_ok},
              {"normalization_ok", r.normalization_ok},
              {"orthoadditivity_ok", r.orthoadditivity_ok},
              {"tolerance", r.tolerance}};
  return verdict_of(r.all_ok(), rec, samples);
}

json condition_json(const ils::ConditionReport& r) {
  return {{"swap_adjoint_residual", r.swap_adjoint_residual},
          {"positivity_min", r.positivity_min},
          {"normalization_residual", r.normalization_residual},
          {"swap_adjoint_ok", r.swap_adjoint_ok},
          {"positivity_ok", r.positivity_ok},
          {"normalization_ok", r.normalization_ok},
          {"failures", r.failures()},
          {"tolerance", r.tolerance}};
}

Outcome extract_ils_cmd(const Context& c) {
  const Index samples = c.samples(200);
  const ils::ILSOperator x = ils::extract_ils(c.d, c.d.dim(), {samples, c.seed});
  const ils::ConditionReport r =
      ils::verify_ils_conditions(x, samples, c.seed, c.tolerance(c.scenario.tolerances.condition));
  json rec = {{"trace", complex_json(x.trace)},
              {"trace_norm", x.trace_norm},
              {"swap_adjoint_residual", x.swap_adjoint_residual},
              {"positivity_min_sampled", x.positivity_min_sampled.value_or(0.0)},
              {"conditions", condition_json(r)},
              {"x_op", matrix_json(x.x_op)}};
  return verdict_of(r.all_ok(), rec, samples);
}

Outcome verify_conditions_cmd(const Context& c) {
  const Index samples = c.samples(200);
  const ils::ILSOperator x = c.scenario.kind == FunctionalKind::operator_backed
                                 ? ils::describe_operator(c.scenario.operator_entries, {0, c.seed})
                                 : ils::extract_ils(c.d, c.d.dim(), {0, c.seed});
  const ils::ConditionReport r =
      ils::verify_ils_conditions(x, samples, c.seed, c.tolerance(c.scenario.tolerances.condition));
  return verdict_of(r.all_ok(), condition_json(r), samples);
}

Outcome decompose_cmd(const Context& c) {
  const Index samples = c.samples(100);
  tracial::Decomposition dec;
  try {
    dec = tracial::hermitian_form_decomposition(c.d, c.d.dim());
  } catch (const AxiomViolation& e) {
    return violation(e.what());
  }
  const BilinearForm form = extend_to_bilinear(c.d);
  double worst = 0.0;
  for (Index s = 0; s < samples; ++s) {
    Rng rng(linalg::derive_seed(c.seed, static_cast<std::uint64_t>(s)));
    const ElementaryTensorSum sum = random_tensor_sum(c.d.dim(), rng);
    worst = std::max(worst, std::abs(beta(form, sum) - dec.apply(sum)));
  }
  const double tol = c.tolerance(c.scenario.tolerances.fidelity);
  json rec = {{"signature", dec.signature},
              {"x_family_size", dec.x_family.size()},
              {"y_family_size", dec.y_family.size()},
              {"fidelity_residual", worst},
              {"tolerance", tol}};
  return verdict_of(worst <= tol, rec, samples);
}

Outcome tracial_cmd(const Context& c) {
  const Index samples = c.samples(200);
  const Index block_rank = c.flags.block_rank.value_or(1);
  if (block_rank < 1) throw ValidationError("--block-rank: must be >= 1");
  tracial::TracialOperator m;
  try {
    m = tracial::build_tracial_operator(c.d, c.d.dim(), {samples, c.seed});
  } catch (const AxiomViolation& e) {
    return violation(e.what());
  }
  double pairing = 0.0, double_sum = 0.0;
  for (Index s = 0; s < samples; ++s) {
    Rng rng(linalg::derive_seed(c.seed, static_cast<std::uint64_t>(s)));
    const auto [p, q] = random_pair(c.d.dim(), rng);
    const cplx direct = linalg::kron_trace(p.matrix(), q.matrix(), m.m_op);
    pairing = std::max(pairing, std::abs(direct - c.d.evaluate(p, q)));
    double_sum = std::max(double_sum, std::abs(tracial::evaluate_double_sum(m, p, q, block_rank) - direct));
  }
  const double tol = c.tolerance(c.scenario.tolerances.fidelity);
  json rec = {{"operator_norm", m.operator_norm},
              {"tracial_sup_estimate", m.probe.sup},
              {"pairing_residual", pairing},
              {"double_sum_residual", double_sum},
              {"block_rank", block_rank},
              {"x_family_size", m.source.x_family.size()},
              {"y_family_size", m.source.y_family.size()},
              {"tolerance", tol}};
  return verdict_of(pairing <= tol && double_sum <= tol, rec, samples);
}

Outcome sweep_cmd(const Context& c) {
  std::vector<Index> dims = c.flags.dims.empty() ? c.scenario.sweep_dims : c.flags.dims;
  if (dims.empty()) throw ValidationError("dims: no sweep dimensions (use --dims or sweep_dims)");
  if (c.scenario.kind == FunctionalKind::class_operator)
    throw ValidationError("functional.kind: sweep needs an operator, form or pure_state functional");
  const Index samples = c.samples(1000);
  probes::SweepOptions options;
  options.samples = samples;
  options.seed = c.seed;
  options.allow_dimension_two = true;
  options.record_timings = c.flags.timings;
  const DecoherenceFunctional base = c.d;
  const probes::SweepReport report =
      probes::tensor_bound_probe([&](Index dim) { return embed(base, dim); }, dims, options);

  const double tol = c.tolerance(c.scenario.tolerances.condition);
  bool pass = true;
  Outcome out;
  out.csv = "dim,trace_norm,sup_beta_rank_one,elapsed_ms\n";
  for (const auto& row : report.rows) {
    pass = pass && row.normalization_residual <= tol && row.swap_adjoint_residual <= tol;
    out.csv += std::to_string(row.dim) + "," + format_double(row.trace_norm) + "," +
               format_double(row.sup_beta_rank_one) + "," + format_double(row.elapsed_ms) + "\n";
    out.records.push_back({{"dim", row.dim},
                           {"trace_norm", row.trace_norm},
                           {"sup_beta_rank_one", row.sup_beta_rank_one},
                           {"elapsed_ms", row.elapsed_ms},
                           {"seed", row.seed},
                           {"below_theorem_dimension", row.below_theorem_dimension},
                           {"normalization_residual", row.normalization_residual},
                           {"swap_adjoint_residual", row.swap_adjoint_residual}});
  }
  out.pass = pass;
  out.verdict = pass ? std::string(probes::to_string(report.verdict)) : "violation";
  out.samples = samples;
  out.records.push_back({{"growth_slope", report.growth_slope},
                         {"length_counts", report.length_counts},
                         {"sweep_verdict", probes::to_string(report.verdict)}});
  return out;
}

Outcome demo_pure_state_cmd(const Context& c) {
  if (c.scenario.kind != FunctionalKind::pure_state)
    throw ValidationError("functional.kind: demo-pure-state needs a pure_state functional");
  const Index n = c.d.dim();
  const Index samples = c.samples(100);
  const tracial::PureStateOperator pure = tracial::pure_state_m(c.scenario.psi, n);
  double series = 0.0;
  double via_beta = 0.0;
  for (Index s = 0; s < samples; ++s) {
    Rng rng(linalg::derive_seed(c.seed, static_cast<std::uint64_t>(s)));
    const ElementaryTensorSum sum = random_tensor_sum(n, rng);
    const Matrix dense = sum.materialize();
    const cplx traced = linalg::trace_pair(dense, pure.pu);
    series = std::max(series, std::abs(tracial::pure_state_series(pure, dense) - traced));
    if (n >= 3) via_beta = std::max(via_beta, std::abs(beta(c.d, sum) - traced));
  }
  const double trace_residual = std::abs(pure.double_sum - cplx(1.0));
  const bool pass = pure.isometry_residual <= 1e-10 && trace_residual <= 1e-10 && series <= 1e-9 && via_beta <= 1e-9;
  json rec = {{"trace_pu", complex_json(pure.double_sum)},
              {"isometry_residual", pure.isometry_residual},
              {"trace_norm_pu", linalg::trace_norm(pure.pu)},
              {"operator_norm_pu", linalg::operator_norm(pure.pu)},
              {"series_residual", series},
              {"beta_residual", via_beta}};
  return verdict_of(pass, rec, samples);
}

Outcome consistency_cmd(const Context& c) {
  if (c.scenario.kind != FunctionalKind::class_operator)
    throw ValidationError("functional.kind: consistency needs a class_operator functional");
  const auto& model = c.scenario.model;
  std::vector<Projection> set;
  json labels = json::array();
  for (const auto& h : histories::all_histories(model)) {
    set.push_back(histories::history_projection(model, h));
    labels.push_back(h.choices);
  }
  const auto r = histories::consistency_report(c.d, set, c.tolerance(c.scenario.tolerances.consistency));
  json rec = {{"histories", labels},
              {"max_off_diagonal", r.max_off_diagonal},
              {"probabilities", r.probabilities},
              {"probability_sum", r.probability_sum},
              {"consistent", r.consistent},
              {"tolerance", r.tolerance}};
  return verdict_of(r.consistent, rec, 0);
}

Outcome reconstruct_cmd(const Context& c) {
  const Index samples = c.samples(200);
  tracial::TracialOperator m;
  try {
    m = tracial::build_tracial_operator(c.d, c.d.dim(), {samples, c.seed});
  } catch (const AxiomViolation& e) {
    return violation(e.what());
  }
  const DecoherenceFunctional& d = c.d;
  // <M(a (x) b), a (x) b> = |a|^2 |b|^2 d(p_a, p_b).
  const tracial::ProductDiagonal f = [&d](const Vector& a, const Vector& b) -> cplx {
    const double na = a.norm(), nb = b.norm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    return na * na * nb * nb * d.evaluate(linalg::rank_one_proj(a / na), linalg::rank_one_proj(b / nb));
  };
  const Matrix l = tracial::reconstruct_from_product_diagonal(f, d.dim());
  const double residual = (l - m.m_op).norm();
  const double tol = c.tolerance(c.scenario.tolerances.condition);
  json rec = {{"reconstruction_residual", residual}, {"operator_norm", m.operator_norm}, {"tolerance", tol}};
  return verdict_of(residual <= tol, rec, samples);
}

using Handler = std::function<Outcome(const Context&)>;

const std::map<std::string_view, Handler>& handlers() {
  static const std::map<std::string_view, Handler> table = {
      {"check-axioms", check_axioms_cmd},   {"extract-ils", extract_ils_cmd}, {"verify-conditions", verify_conditions_cmd},
      {"decompose", decompose_cmd},         {"tracial", tracial_cmd},         {"sweep", sweep_cmd},
      {"demo-pure-state", demo_pure_state_cmd}, {"consistency", consistency_cmd}, {"reconstruct", reconstruct_cmd},
  };
  return table;
}

}  // namespace

const std::vector<std::string_view>& command_names() {
  static const std::vector<std::string_view> names = [] {
    std::vector<std::string_view> out;
    for (const auto& [name, handler] : handlers()) out.push_back(name);
    return out;
  }();
  return names;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string scenario_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

CommandResult run_command(std::string_view command, const Scenario& scenario, const Flags& flags,
                          std::string_view scenario_text) {
  const auto it = handlers().find(command);
  if (it == handlers().end()) throw ValidationError("command: unknown command '" + std::string(command) + "'");
  if (flags.format == OutputFormat::csv && command != "sweep")
    throw ValidationError("--format: csv output is only available for sweep");

  const auto start = std::chrono::steady_clock::now();
  Context ctx{scenario, flags, build_functional(scenario), flags.seed.value_or(scenario.seed)};
  const Outcome outcome = it->second(ctx);

  CommandResult result;
  result.exit_code = outcome.pass ? kExitPass : kExitViolation;
  if (flags.format == OutputFormat::csv) {
    result.output = outcome.csv;
    return result;
  }
  json doc = {{"command", command},
              {"verdict", outcome.verdict},
              {"seed", ctx.seed},
              {"samples", outcome.samples},
              {"scenario_hash", scenario_hash(scenario_text)},
              {"functional", ctx.d.kind()},
              {"dimension", ctx.d.dim()},
              {"records", outcome.records}};
  if (flags.timings) {
    doc["timings"] = {
        {"total_ms", std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count()}};
  }
  result.output = doc.dump(2) + "\n";
  return result;
}

}  // namespace dfrep::cli
