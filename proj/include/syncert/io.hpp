#pragma once

// JSON interchange. Complex numbers are [re, im] pairs (a bare number is read
// as a real value), matrices are row-major nested arrays, and every schema
// carries its dimensions explicitly.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "syncert/correlation.hpp"
#include "syncert/games.hpp"
#include "syncert/lcs.hpp"
#include "syncert/numerics.hpp"
#include "syncert/strategy.hpp"

namespace syncert::io {

using nlohmann::json;

/// Malformed or inconsistent input; the message names the location.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LoadedFile {
  std::string path;
  std::string sha256;  // hex digest of the raw bytes
  json document;
};

/// Reads and parses a file. Parse errors become InputError("path:line:col: ...").
LoadedFile load_file(const std::string& path);
/// Parses text; `origin` prefixes error messages.
json parse_text(const std::string& text, const std::string& origin);

std::string sha256_hex(const std::string& bytes);

json to_json(cplx z);
json to_json(const CVector& v);
json to_json(const CMatrix& m);
json to_json(const Correlation& p);
json to_json(const SynchronousGame& g);
json to_json(const PmeStrategy& s);
json to_json(const LcsSystem& s);
json to_json(const SolutionGroupPresentation& p);

cplx complex_from_json(const json& j);
CVector vector_from_json(const json& j, std::size_t expected_dim);
/// Square matrix of the given dimension.
CMatrix matrix_from_json(const json& j, std::size_t dim);

/// Strategy file contents before any POVM validation, so that invalid
/// measurements can still be reported.
struct RawStrategy {
  std::size_t dim_a = 0;
  std::size_t dim_b = 0;
  std::vector<std::vector<CMatrix>> alice;
  std::vector<std::vector<CMatrix>> bob;
  bool mixed = false;
  CVector state;  // when !mixed
  CMatrix rho;    // when mixed
};

RawStrategy raw_strategy_from_json(const json& j);
/// Validated pure strategy; InputError on invalid POVMs or a mixed state.
TensorStrategy tensor_strategy_from_json(const json& j);

/// Projections before validation.
std::vector<std::vector<CMatrix>> raw_pme_from_json(const json& j);
PmeStrategy pme_from_json(const json& j);

SynchronousGame game_from_json(const json& j);
Correlation correlation_from_json(const json& j);

/// {modulus, variables?, constraints: [{support, coeffs, rhs}]}. Without
/// "variables" the count is one more than the largest support index.
LcsSystem lcs_from_json(const json& j);

/// {dim, generators: [matrix...], J: matrix}; returns generators followed by J.
std::vector<CMatrix> representation_from_json(const json& j);

enum class FileKind { Game, Strategy, Pme, Lcs, Representation, Correlation, Unknown };
/// Guesses the schema from the keys present.
FileKind detect_kind(const json& j);
std::string to_string(FileKind k);

}  // namespace syncert::io
