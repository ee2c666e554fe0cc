#include "syncert/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

namespace syncert::io {

namespace {

const json& require(const json& j, const char* key) {
  if (!j.is_object()) throw InputError("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(std::string("missing field '") + key + "'");
  return *it;
}

std::size_t size_field(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw InputError(std::string("field '") + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

const json& array_field(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_array()) throw InputError(std::string("field '") + key + "' must be an array");
  return v;
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::vector<std::vector<CMatrix>> family_from_json(const json& j, std::size_t dim,
                                                   const std::string& who) {
  if (!j.is_array() || j.empty()) throw InputError(who + ": expected a non-empty list of measurements");
  std::vector<std::vector<CMatrix>> out;
  for (std::size_t x = 0; x < j.size(); ++x) {
    if (!j[x].is_array() || j[x].empty())
      throw InputError(who + "[" + std::to_string(x) + "]: expected a non-empty list of matrices");
    std::vector<CMatrix> effects;
    for (std::size_t a = 0; a < j[x].size(); ++a) {
      try {
        effects.push_back(matrix_from_json(j[x][a], dim));
      } catch (const InputError& e) {
        throw InputError(who + "[" + std::to_string(x) + "][" + std::to_string(a) + "]: " +
                         e.what());
      }
    }
    out.push_back(std::move(effects));
  }
  return out;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw std::runtime_error("sha256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i)
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return os.str();
}

json parse_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is one past the offending character.
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string msg = e.what();
    if (auto pos = msg.find("parse error"); pos != std::string::npos) msg = msg.substr(pos);
    throw InputError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
}

LoadedFile load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  return {path, sha256_hex(text), parse_text(text, path)};
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const CVector& v) {
  json out = json::array();
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(to_json(v[i]));
  return out;
}

json to_json(const CMatrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

json to_json(const Correlation& p) {
  return {{"questions_x", p.questions_x()}, {"questions_y", p.questions_y()},
          {"answers_a", p.answers_a()},     {"answers_b", p.answers_b()},
          {"table", std::vector<double>(p.table().begin(), p.table().end())}};
}

json to_json(const SynchronousGame& g) {
  json cells = json::array();
  for (const auto& [x, y, a, b] : g.zero_cells()) cells.push_back({x, y, a, b});
  return {{"questions", g.questions()}, {"answers", g.answers()}, {"zero_cells", cells}};
}

json to_json(const PmeStrategy& s) {
  json proj = json::array();
  for (const auto& family : s.projections()) {
    json f = json::array();
    for (const auto& p : family) f.push_back(to_json(p));
    proj.push_back(std::move(f));
  }
  return {{"dim", s.dim()}, {"projections", proj}};
}

json to_json(const LcsSystem& s) {
  json cs = json::array();
  for (const auto& c : s.constraints())
    cs.push_back({{"support", c.support}, {"coeffs", c.coefficients}, {"rhs", c.rhs}});
  return {{"modulus", s.modulus()}, {"variables", s.variables()}, {"constraints", cs}};
}

json to_json(const SolutionGroupPresentation& p) {
  json rels = json::array();
  for (const auto& r : p.relations) {
    json word = json::array();
    for (const auto& l : r.word) word.push_back({l.generator, l.exponent});
    rels.push_back({{"kind", to_string(r.kind)}, {"word", word}, {"j_power", r.j_power}});
  }
  return {{"modulus", p.modulus},
          {"generators", p.generators},
          {"j_index", p.j_index},
          {"relations", rels}};
}

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw InputError("expected a complex number [re, im], got " + j.dump());
}

CVector vector_from_json(const json& j, std::size_t expected_dim) {
  if (!j.is_array()) throw InputError("expected an array for a vector");
  if (j.size() != expected_dim)
    throw InputError("vector has length " + std::to_string(j.size()) + ", expected " +
                     std::to_string(expected_dim));
  CVector v(expected_dim);
  for (std::size_t i = 0; i < expected_dim; ++i) v[i] = complex_from_json(j[i]);
  return v;
}

CMatrix matrix_from_json(const json& j, std::size_t dim) {
  if (!j.is_array() || j.size() != dim)
    throw InputError("matrix must have " + std::to_string(dim) + " rows");
  CMatrix m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    if (!j[r].is_array() || j[r].size() != dim)
      throw InputError("row " + std::to_string(r) + " must have " + std::to_string(dim) +
                       " entries");
    for (std::size_t c = 0; c < dim; ++c) m(r, c) = complex_from_json(j[r][c]);
  }
  return m;
}

RawStrategy raw_strategy_from_json(const json& j) {
  RawStrategy s;
  s.dim_a = size_field(j, "dimA");
  s.dim_b = size_field(j, "dimB");
  if (s.dim_a == 0 || s.dim_b == 0) throw InputError("dimA and dimB must be positive");
  s.alice = family_from_json(require(j, "alice"), s.dim_a, "alice");
  s.bob = family_from_json(require(j, "bob"), s.dim_b, "bob");
  const bool has_state = j.contains("state"), has_rho = j.contains("rho");
  if (has_state == has_rho) throw InputError("exactly one of 'state' and 'rho' is required");
  s.mixed = has_rho;
  try {
    if (has_state)
      s.state = vector_from_json(j["state"], s.dim_a * s.dim_b);
    else
      s.rho = matrix_from_json(j["rho"], s.dim_a * s.dim_b);
  } catch (const InputError& e) {
    throw InputError(std::string(has_state ? "state: " : "rho: ") + e.what());
  }
  return s;
}

TensorStrategy tensor_strategy_from_json(const json& j) {
  RawStrategy raw = raw_strategy_from_json(j);
  if (raw.mixed) throw InputError("a pure state is required here, got 'rho'");
  try {
    std::vector<Povm> alice, bob;
    for (auto& e : raw.alice) alice.emplace_back(std::move(e));
    for (auto& e : raw.bob) bob.emplace_back(std::move(e));
    return TensorStrategy(std::move(alice), std::move(bob), raw.state);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("invalid strategy: ") + e.what());
  }
}

std::vector<std::vector<CMatrix>> raw_pme_from_json(const json& j) {
  const std::size_t d = size_field(j, "dim");
  if (d == 0) throw InputError("dim must be positive");
  return family_from_json(require(j, "projections"), d, "projections");
}

PmeStrategy pme_from_json(const json& j) {
  try {
    return PmeStrategy(raw_pme_from_json(j));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("invalid PME strategy: ") + e.what());
  }
}

SynchronousGame game_from_json(const json& j) {
  const std::size_t m = size_field(j, "questions");
  const std::size_t n = size_field(j, "answers");
  std::vector<SynchronousGame::Cell> cells;
  for (const auto& c : array_field(j, "zero_cells")) {
    if (!c.is_array() || c.size() != 4 ||
        !std::all_of(c.begin(), c.end(), [](const json& v) { return v.is_number_unsigned(); }))
      throw InputError("zero cell must be [x, y, a, b] of non-negative integers, got " + c.dump());
    cells.push_back({c[0].get<std::size_t>(), c[1].get<std::size_t>(), c[2].get<std::size_t>(),
                     c[3].get<std::size_t>()});
  }
  try {
    return SynchronousGame::from_zero_cells(m, n, cells);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("invalid game: ") + e.what());
  }
}

Correlation correlation_from_json(const json& j) {
  const std::size_t nx = size_field(j, "questions_x"), ny = size_field(j, "questions_y");
  const std::size_t na = size_field(j, "answers_a"), nb = size_field(j, "answers_b");
  const json& t = array_field(j, "table");
  if (t.size() != nx * ny * na * nb)
    throw InputError("table has " + std::to_string(t.size()) + " entries, expected " +
                     std::to_string(nx * ny * na * nb));
  std::vector<double> table;
  for (const auto& v : t) {
    if (!v.is_number()) throw InputError("table entries must be numbers");
    table.push_back(v.get<double>());
  }
  return Correlation(nx, ny, na, nb, std::move(table));
}

LcsSystem lcs_from_json(const json& j) {
  const std::size_t d = size_field(j, "modulus");
  std::vector<LcsConstraint> cs;
  std::size_t vars = 0;
  for (const auto& c : array_field(j, "constraints")) {
    LcsConstraint k;
    for (const auto& v : array_field(c, "support")) {
      if (!v.is_number_unsigned()) throw InputError("support entries must be non-negative integers");
      k.support.push_back(v.get<std::size_t>());
      vars = std::max(vars, k.support.back() + 1);
    }
    for (const auto& v : array_field(c, "coeffs")) {
      if (!v.is_number_integer()) throw InputError("coefficients must be integers");
      const long long r = v.get<long long>() % static_cast<long long>(d == 0 ? 1 : d);
      k.coefficients.push_back(static_cast<std::uint32_t>(r < 0 ? r + static_cast<long long>(d) : r));
    }
    const json& rhs = require(c, "rhs");
    if (!rhs.is_number_integer()) throw InputError("rhs must be an integer");
    const long long r = rhs.get<long long>() % static_cast<long long>(d == 0 ? 1 : d);
    k.rhs = static_cast<std::uint32_t>(r < 0 ? r + static_cast<long long>(d) : r);
    cs.push_back(std::move(k));
  }
  if (j.contains("variables")) {
    const std::size_t declared = size_field(j, "variables");
    if (declared < vars)
      throw InputError("variables = " + std::to_string(declared) + " but index " +
                       std::to_string(vars - 1) + " is used");
    vars = declared;
  }
  try {
    return LcsSystem(static_cast<std::uint32_t>(d), vars, std::move(cs));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("invalid linear system: ") + e.what());
  }
}

std::vector<CMatrix> representation_from_json(const json& j) {
  const std::size_t d = size_field(j, "dim");
  if (d == 0) throw InputError("dim must be positive");
  std::vector<CMatrix> out;
  const json& gens = array_field(j, "generators");
  for (std::size_t g = 0; g < gens.size(); ++g) {
    try {
      out.push_back(matrix_from_json(gens[g], d));
    } catch (const InputError& e) {
      throw InputError("generators[" + std::to_string(g) + "]: " + e.what());
    }
  }
  try {
    out.push_back(matrix_from_json(require(j, "J"), d));
  } catch (const InputError& e) {
    throw InputError(std::string("J: ") + e.what());
  }
  return out;
}

FileKind detect_kind(const json& j) {
  if (!j.is_object()) return FileKind::Unknown;
  if (j.contains("modulus")) return FileKind::Lcs;
  if (j.contains("generators")) return FileKind::Representation;
  if (j.contains("projections")) return FileKind::Pme;
  if (j.contains("alice")) return FileKind::Strategy;
  if (j.contains("zero_cells")) return FileKind::Game;
  if (j.contains("table")) return FileKind::Correlation;
  return FileKind::Unknown;
}

std::string to_string(FileKind k) {
  switch (k) {
    case FileKind::Game: return "game";
    case FileKind::Strategy: return "strategy";
    case FileKind::Pme: return "pme";
    case FileKind::Lcs: return "lcs";
    case FileKind::Representation: return "rep";
    case FileKind::Correlation: return "correlation";
    case FileKind::Unknown: return "unknown";
  }
  return "unknown";
}

}  // namespace syncert::io
