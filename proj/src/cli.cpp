#include "syncert/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "syncert/algebra.hpp"
#include "syncert/certificates.hpp"
#include "syncert/correlation.hpp"
#include "syncert/games.hpp"
#include "syncert/lcs.hpp"

namespace syncert::cli {

namespace {

using io::json;

struct Outcome {
  bool pass = true;
  json result;
};

json tolerances_json(const Tolerances& t) {
  return {{"validation", t.validation},
          {"certification", t.certification},
          {"dilation", t.dilation},
          {"epsilon", t.epsilon}};
}

Tolerances resolve_tolerances(const RunConfig& c) {
  Tolerances t = tolerance_profile(c.profile);
  for (const auto& [name, value] : c.tolerances) {
    if (!(value > 0.0)) throw io::InputError("tolerance '" + name + "' must be positive");
    if (name == "validation") t.validation = value;
    else if (name == "certification") t.certification = value;
    else if (name == "dilation") t.dilation = value;
    else if (name == "epsilon") t.epsilon = value;
    else throw io::InputError("unknown tolerance '" + name + "'");
  }
  return t;
}

json povm_check_json(const Povm::Check& c, double projectivity) {
  return {{"completeness_residual", c.completeness_residual},
          {"max_negativity", c.max_negativity},
          {"max_hermiticity", c.max_hermiticity},
          {"projectivity_residual", projectivity},
          {"ok", c.ok}};
}

double projectivity_of(const std::vector<CMatrix>& effects) {
  double r = 0.0;
  for (const auto& e : effects) r = std::max(r, operator_norm(e * e - e));
  return r;
}

// Validates each measurement of a family, accumulating into `pass`.
json check_family(const std::vector<std::vector<CMatrix>>& family, double tol, bool projective,
                  bool& pass) {
  json out = json::array();
  for (const auto& effects : family) {
    const auto c = Povm::check(effects, tol);
    const double proj = projectivity_of(effects);
    pass = pass && c.ok && (!projective || proj <= tol);
    out.push_back(povm_check_json(c, proj));
  }
  return out;
}

json correlation_summary(const Correlation& p, const Tolerances& t, bool& pass) {
  const auto v = p.validate();
  json out{{"worst_entry_excess", v.worst_entry_excess},
           {"worst_normalization_error", v.worst_normalization_error},
           {"ok", v.ok}};
  if (p.questions_x() == p.questions_y() && p.answers_a() == p.answers_b()) {
    const auto sync = is_synchronous(p, t.validation);
    out["synchronous"] = sync.synchronous;
    out["synchronicity_violation"] = sync.max_violation;
  }
  pass = pass && v.ok;
  return out;
}

Outcome validate_file(const io::LoadedFile& f, const Tolerances& t) {
  Outcome o;
  const auto kind = io::detect_kind(f.document);
  o.result["kind"] = io::to_string(kind);
  switch (kind) {
    case io::FileKind::Pme: {
      const auto proj = io::raw_pme_from_json(f.document);
      for (const auto& family : proj)
        if (family.size() != proj.front().size())
          throw io::InputError("all questions need the same number of answers");
      o.result["measurements"] = check_family(proj, t.validation, true, o.pass);
      break;
    }
    case io::FileKind::Strategy: {
      const auto raw = io::raw_strategy_from_json(f.document);
      o.result["alice"] = check_family(raw.alice, t.validation, false, o.pass);
      o.result["bob"] = check_family(raw.bob, t.validation, false, o.pass);
      if (raw.mixed) {
        try {
          DensityMatrix rho(raw.rho, t.validation);
          o.result["state_ok"] = true;
        } catch (const std::invalid_argument& e) {
          o.result["state_ok"] = false;
          o.result["state_error"] = e.what();
          o.pass = false;
        }
      } else {
        const double residual = std::abs(raw.state.norm() - 1.0);
        o.result["state_norm_residual"] = residual;
        o.result["state_ok"] = residual <= t.validation;
        o.pass = o.pass && residual <= t.validation;
      }
      if (o.pass) {
        std::vector<Povm> a, b;
        for (const auto& e : raw.alice) a.emplace_back(e, t.validation);
        for (const auto& e : raw.bob) b.emplace_back(e, t.validation);
        const Correlation p =
            raw.mixed ? correlation_of_mixed(MixedStrategy(a, b, DensityMatrix(raw.rho, t.validation)))
                      : correlation_of_tensor(TensorStrategy(a, b, raw.state));
        o.result["correlation"] = correlation_summary(p, t, o.pass);
      }
      break;
    }
    case io::FileKind::Game: {
      const auto g = io::game_from_json(f.document);
      o.result["questions"] = g.questions();
      o.result["answers"] = g.answers();
      o.result["zero_cells"] = g.zero_cells().size();
      break;
    }
    case io::FileKind::Lcs: {
      const auto s = io::lcs_from_json(f.document);
      o.result["modulus"] = s.modulus();
      o.result["variables"] = s.variables();
      o.result["constraints"] = s.constraints().size();
      break;
    }
    case io::FileKind::Representation: {
      const auto rep = io::representation_from_json(f.document);
      double unitarity = 0.0;
      const CMatrix id = CMatrix::identity(rep.front().rows());
      for (const auto& u : rep) unitarity = std::max(unitarity, operator_norm(u.adjoint() * u - id));
      o.result["unitarity_residual"] = unitarity;
      o.pass = unitarity <= t.validation;
      break;
    }
    case io::FileKind::Correlation:
      o.result["correlation"] = correlation_summary(io::correlation_from_json(f.document), t, o.pass);
      break;
    case io::FileKind::Unknown:
      throw io::InputError(f.path + ": unrecognized schema");
  }
  return o;
}

json certificate_json(const SpectralCertificate& c) {
  return {{"questions", c.m},
          {"dim", c.dim},
          {"top_eigenvalue", c.top_eigenvalue},
          {"lambda2", c.lambda2},
          {"gap", c.gap()},
          {"top_multiplicity", c.top_multiplicity},
          {"overlap_with_maximally_entangled", c.overlap_with_me_state},
          {"irreducible", c.irreducible},
          {"degenerate", c.degenerate},
          {"certified", c.certified}};
}

json robustness_json(const RobustnessConstants& r) {
  return {{"eps", r.eps},
          {"eps_prime", r.eps_prime},
          {"beta", r.beta},
          {"delta_constructive", r.delta_constructive},
          {"delta_prime", r.delta_prime},
          {"dilation_error", r.dilation_error()},
          {"feasible", r.feasible},
          {"capped", r.capped}};
}

json residuals_json(const DilationResiduals& r) {
  return {{"state_residual", r.state_residual},
          {"max_measurement_residual", r.max_measurement_residual},
          {"worst", r.worst()}};
}

Outcome certify(const io::LoadedFile& f, const Tolerances& t) {
  if (io::detect_kind(f.document) != io::FileKind::Pme)
    throw io::InputError(f.path + ": certify expects a PME strategy");
  const PmeStrategy s = io::pme_from_json(f.document);
  const auto cert = spectral_certificate(s);
  Outcome o;
  o.result["certificate"] = certificate_json(cert);

  const auto family = OperatorFamily::from_pme(s);
  o.result["fixed_point_commutant_distance"] =
      span_distance(channel_fixed_points(family), commutant_basis(family));
  if (cert.gap() > 0.0)
    o.result["robustness"] = robustness_json(robustness_constants(cert, s.answers(), t.epsilon));

  const bool top_ok = std::abs(cert.top_eigenvalue - static_cast<double>(cert.m)) <= t.certification;
  o.pass = cert.certified && top_ok;
  return o;
}

Outcome dilate(const io::LoadedFile& f, const io::LoadedFile& ideal_file, const Tolerances& t,
               std::uint64_t seed) {
  const TensorStrategy s = io::tensor_strategy_from_json(f.document);
  const PmeStrategy ideal = io::pme_from_json(ideal_file.document);
  if (s.questions_a() != ideal.questions() || s.answers_a() != ideal.answers())
    throw DimensionError("strategy and ideal differ in questions or answers");

  Outcome o;
  const double l1 = l1_distance(correlation_of_tensor(s), correlation_of_pme(ideal));
  o.result["l1_distance_to_ideal"] = l1;

  std::optional<Dilation> dil;
  if (l1 <= t.certification) {
    try {
      Rng rng(seed);
      dil = find_dilation_exact(s, ideal, rng);
      o.result["method"] = "exact";
    } catch (const std::exception& e) {
      o.result["exact_failure"] = e.what();
    }
  }
  if (!dil) {
    NumericDilationOptions opts;
    opts.seed = seed;
    const auto nd = find_dilation_numeric(s, ideal, opts);
    o.result["method"] = "numeric";
    o.result["objective"] = nd.objective;
    o.result["iterations"] = nd.iterations;
    o.result["co_isometry"] = nd.co_isometry;
    dil = nd.dilation;
  }
  const auto res = verify_dilation(s, ideal, *dil);
  o.result["residuals"] = residuals_json(res);
  o.result["junk_a"] = dil->junk_a;
  o.result["junk_b"] = dil->junk_b;
  o.result["isometry_defect"] = dil->isometry_defect();
  o.result["aux"] = io::to_json(dil->aux);
  o.pass = res.worst() <= t.dilation;
  return o;
}

Outcome lcs2game(const io::LoadedFile& f, const std::optional<io::LoadedFile>& rep_file,
                 const Tolerances& t) {
  const LcsSystem sys = io::lcs_from_json(f.document);
  Outcome o;
  const auto pres = solution_group(sys);
  o.result["presentation"] = io::to_json(pres);
  o.result["game"] = io::to_json(lcs_to_sync_game(sys));
  if (!rep_file) return o;

  const auto rep = io::representation_from_json(rep_file->document);
  if (rep.size() != pres.generators)
    throw io::InputError(rep_file->path + ": " + std::to_string(rep.size()) +
                         " generators given, the system has " + std::to_string(pres.generators));
  const auto report = verify_operator_solution(pres, rep, t.certification);
  o.result["operator_solution"] = {{"relation_residuals", report.relation_residuals},
                                   {"max_relation_residual", report.max_relation_residual},
                                   {"j_residual", report.j_residual},
                                   {"unitarity_residual", report.unitarity_residual},
                                   {"passed", report.passed}};
  o.pass = report.passed;
  if (!report.passed) return o;

  const PmeStrategy pme = representation_to_strategy(sys, rep);
  const double loss = game_loss(correlation_of_pme(pme), lcs_to_sync_game(sys));
  o.result["strategy"] = io::to_json(pme);
  o.result["loss"] = loss;
  o.result["certificate"] = certificate_json(spectral_certificate(pme));
  o.pass = loss <= t.validation;
  return o;
}

Outcome relations(const io::LoadedFile& f, const io::LoadedFile& game_file, const Tolerances& t) {
  const SynchronousGame g = io::game_from_json(game_file.document);
  OperatorFamily family(1);
  switch (io::detect_kind(f.document)) {
    case io::FileKind::Pme:
      family = OperatorFamily::from_indexed(io::raw_pme_from_json(f.document));
      break;
    case io::FileKind::Strategy:
      family = OperatorFamily::from_indexed(io::raw_strategy_from_json(f.document).alice);
      break;
    default:
      throw io::InputError(f.path + ": relations expects a PME strategy or a strategy");
  }
  const auto r = check_game_relations(family, g, t.validation);
  Outcome o;
  o.result["relations"] = {{"idempotence", r.idempotence},
                           {"hermiticity", r.hermiticity},
                           {"completeness", r.completeness},
                           {"orthogonality", r.orthogonality},
                           {"passed", r.passed}};
  o.pass = r.passed;
  return o;
}

Outcome correlate(const io::LoadedFile& f, const std::optional<io::LoadedFile>& game_file,
                  const Tolerances& t) {
  Correlation p;
  switch (io::detect_kind(f.document)) {
    case io::FileKind::Pme:
      p = correlation_of_pme(io::pme_from_json(f.document));
      break;
    case io::FileKind::Strategy: {
      const auto raw = io::raw_strategy_from_json(f.document);
      try {
        std::vector<Povm> a, b;
        for (const auto& e : raw.alice) a.emplace_back(e, t.validation);
        for (const auto& e : raw.bob) b.emplace_back(e, t.validation);
        p = raw.mixed ? correlation_of_mixed(MixedStrategy(a, b, DensityMatrix(raw.rho, t.validation)))
                      : correlation_of_tensor(TensorStrategy(a, b, raw.state));
      } catch (const std::invalid_argument& e) {
        throw io::InputError(f.path + ": invalid strategy: " + e.what());
      }
      break;
    }
    default:
      throw io::InputError(f.path + ": correlate expects a strategy or a PME strategy");
  }
  Outcome o;
  o.result["correlation"] = io::to_json(p);
  o.result["validation"] = correlation_summary(p, t, o.pass);
  if (game_file) {
    const SynchronousGame g = io::game_from_json(game_file->document);
    if (p.questions_x() != g.questions() || p.answers_a() != g.answers() ||
        p.questions_y() != g.questions() || p.answers_b() != g.answers())
      throw DimensionError("correlation shape does not match the game");
    const double loss = game_loss(p, g);
    o.result["loss"] = loss;
    o.result["perfect"] = loss <= t.validation;
    o.pass = o.pass && loss <= t.validation;
  }
  return o;
}

std::vector<io::LoadedFile> load_all(const std::vector<std::string>& paths) {
  std::vector<io::LoadedFile> out;
  for (const auto& p : paths) out.push_back(io::load_file(p));
  return out;
}

void require_inputs(const std::vector<io::LoadedFile>& in, std::size_t n, Command c) {
  if (in.size() != n)
    throw io::InputError(to_string(c) + " expects " + std::to_string(n) + " --input file(s), got " +
                         std::to_string(in.size()));
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  for (Command c : {Command::Validate, Command::Correlate, Command::Certify, Command::Dilate,
                    Command::Combine, Command::Lcs2Game, Command::Relations})
    if (to_string(c) == name) return c;
  return std::nullopt;
}

std::string to_string(Command c) {
  switch (c) {
    case Command::Validate: return "validate";
    case Command::Correlate: return "correlate";
    case Command::Certify: return "certify";
    case Command::Dilate: return "dilate";
    case Command::Combine: return "combine";
    case Command::Lcs2Game: return "lcs2game";
    case Command::Relations: return "relations";
  }
  return "unknown";
}

Tolerances tolerance_profile(std::string_view name) {
  Tolerances t;
  double scale = 1.0;
  if (name == "strict") scale = 1e-2;
  else if (name == "loose") scale = 1e2;
  else if (name != "default") throw std::invalid_argument("unknown tolerance profile '" + std::string(name) + "'");
  t.validation *= scale;
  t.certification *= scale;
  t.dilation *= scale;
  t.epsilon *= scale;
  return t;
}

std::pair<std::string, double> parse_tolerance(std::string_view spec) {
  const auto eq = spec.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw std::invalid_argument("tolerance must look like name=value, got '" + std::string(spec) + "'");
  const std::string name(spec.substr(0, eq));
  const std::string value(spec.substr(eq + 1));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size())
    throw std::invalid_argument("tolerance '" + name + "' has a non-numeric value '" + value + "'");
  return {name, v};
}

RunResult execute(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  RunResult r;
  json& rep = r.report;
  rep["command"] = to_string(config.command);
  rep["seed"] = config.seed;
  rep["profile"] = config.profile;

  try {
    const Tolerances tol = resolve_tolerances(config);
    rep["tolerances"] = tolerances_json(tol);

    const auto inputs = load_all(config.inputs);
    std::optional<io::LoadedFile> ideal, game, rep_file;
    if (!config.ideal.empty()) ideal = io::load_file(config.ideal);
    if (!config.game.empty()) game = io::load_file(config.game);
    if (!config.rep.empty()) rep_file = io::load_file(config.rep);

    json digests = json::array();
    auto digest = [&](const io::LoadedFile& f, const char* role) {
      digests.push_back({{"path", f.path},
                         {"role", role},
                         {"kind", io::to_string(io::detect_kind(f.document))},
                         {"sha256", f.sha256}});
    };
    for (const auto& f : inputs) digest(f, "input");
    if (ideal) digest(*ideal, "ideal");
    if (game) digest(*game, "game");
    if (rep_file) digest(*rep_file, "rep");
    rep["inputs"] = digests;

    Outcome o;
    switch (config.command) {
      case Command::Validate: {
        if (inputs.empty()) throw io::InputError("validate expects at least one --input file");
        json results = json::array();
        for (const auto& f : inputs) {
          auto one = validate_file(f, tol);
          one.result["path"] = f.path;
          one.result["ok"] = one.pass;
          o.pass = o.pass && one.pass;
          results.push_back(std::move(one.result));
        }
        o.result["files"] = std::move(results);
        break;
      }
      case Command::Correlate:
        require_inputs(inputs, 1, config.command);
        o = correlate(inputs[0], game, tol);
        break;
      case Command::Certify:
        require_inputs(inputs, 1, config.command);
        o = certify(inputs[0], tol);
        break;
      case Command::Dilate:
        require_inputs(inputs, 1, config.command);
        if (!ideal) throw io::InputError("dilate needs --ideal");
        o = dilate(inputs[0], *ideal, tol, config.seed);
        break;
      case Command::Combine: {
        require_inputs(inputs, 2, config.command);
        const auto g = or_game(io::game_from_json(inputs[0].document),
                               io::game_from_json(inputs[1].document));
        o.result["game"] = io::to_json(g);
        break;
      }
      case Command::Lcs2Game:
        require_inputs(inputs, 1, config.command);
        o = lcs2game(inputs[0], rep_file, tol);
        break;
      case Command::Relations:
        require_inputs(inputs, 1, config.command);
        if (!game) throw io::InputError("relations needs --game");
        o = relations(inputs[0], *game, tol);
        break;
    }
    rep["result"] = std::move(o.result);
    rep["status"] = o.pass ? "pass" : "fail";
    r.status = o.pass ? kExitPass : kExitFailure;
  } catch (const io::InputError& e) {
    r.status = kExitInputError;
    r.error = e.what();
  } catch (const DimensionError& e) {
    r.status = kExitInputError;
    r.error = std::string("dimension mismatch: ") + e.what();
  } catch (const NumericalError& e) {
    r.status = kExitFailure;
    rep["status"] = "fail";
    rep["numerical_error"] = e.what();
  } catch (const std::invalid_argument& e) {
    r.status = kExitInputError;
    r.error = e.what();
  } catch (const std::out_of_range& e) {
    r.status = kExitInputError;
    r.error = e.what();
  }
  if (r.status == kExitInputError) {
    rep["status"] = "input-error";
    rep["error"] = r.error;
  }
  if (config.timing)
    rep["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

int run(const RunConfig& config) {
  const RunResult r = execute(config);
  if (!r.error.empty()) std::cerr << "error: " << r.error << '\n';
  const std::string text = r.report.dump(2) + "\n";
  if (config.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(config.out, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << config.out << '\n';
      return kExitInputError;
    }
    out << text;
  }
  return r.status;
}

}  // namespace syncert::cli
