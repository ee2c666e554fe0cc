#include "syncert/correlation.hpp"

#include <algorithm>
#include <cmath>

#include "syncert/errors.hpp"
#include "syncert/games.hpp"

namespace syncert {

namespace {

std::string shape_of(const Correlation& p) {
  return std::to_string(p.questions_x()) + "x" + std::to_string(p.questions_y()) + " questions, " +
         std::to_string(p.answers_a()) + "x" + std::to_string(p.answers_b()) + " answers";
}

void require_game_shape(const Correlation& p, const SynchronousGame& g) {
  if (p.questions_x() != g.questions() || p.questions_y() != g.questions() ||
      p.answers_a() != g.answers() || p.answers_b() != g.answers())
    throw DimensionError("correlation with " + shape_of(p) + " does not fit a game with " +
                         std::to_string(g.questions()) + " questions and " +
                         std::to_string(g.answers()) + " answers");
}

}  // namespace

Correlation::Correlation(std::size_t questions_x, std::size_t questions_y, std::size_t answers_a,
                         std::size_t answers_b)
    : nx_(questions_x),
      ny_(questions_y),
      na_(answers_a),
      nb_(answers_b),
      table_(questions_x * questions_y * answers_a * answers_b, 0.0) {}

Correlation::Correlation(std::size_t questions_x, std::size_t questions_y, std::size_t answers_a,
                         std::size_t answers_b, std::vector<double> table)
    : nx_(questions_x), ny_(questions_y), na_(answers_a), nb_(answers_b), table_(std::move(table)) {
  if (table_.size() != nx_ * ny_ * na_ * nb_)
    throw DimensionError("correlation table has " + std::to_string(table_.size()) +
                         " entries, expected " + std::to_string(nx_ * ny_ * na_ * nb_));
}

bool Correlation::same_shape(const Correlation& o) const noexcept {
  return nx_ == o.nx_ && ny_ == o.ny_ && na_ == o.na_ && nb_ == o.nb_;
}

Correlation::Validation Correlation::validate() const {
  Validation v;
  for (double p : table_) {
    const double excess = p < 0.0 ? -p : (p > 1.0 ? p - 1.0 : 0.0);
    v.worst_entry_excess = std::max(v.worst_entry_excess, excess);
  }
  for (std::size_t x = 0; x < nx_; ++x)
    for (std::size_t y = 0; y < ny_; ++y) {
      double s = 0.0;
      for (std::size_t a = 0; a < na_; ++a)
        for (std::size_t b = 0; b < nb_; ++b) s += (*this)(x, y, a, b);
      v.worst_normalization_error = std::max(v.worst_normalization_error, std::abs(s - 1.0));
    }
  v.ok = v.worst_entry_excess <= kEntryTolerance &&
         v.worst_normalization_error <= kNormalizationTolerance;
  return v;
}

double l1_distance(const Correlation& p, const Correlation& q) {
  if (!p.same_shape(q))
    throw DimensionError("l1_distance: " + shape_of(p) + " vs " + shape_of(q));
  double s = 0.0;
  const auto tp = p.table();
  const auto tq = q.table();
  for (std::size_t i = 0; i < tp.size(); ++i) s += std::abs(tp[i] - tq[i]);
  return s;
}

SynchronicityReport is_synchronous(const Correlation& p, double tol) {
  SynchronicityReport r;
  if (p.questions_x() != p.questions_y() || p.answers_a() != p.answers_b()) {
    r.diagnostic = "not square: " + shape_of(p);
    return r;
  }
  for (std::size_t x = 0; x < p.questions_x(); ++x)
    for (std::size_t a = 0; a < p.answers_a(); ++a)
      for (std::size_t b = 0; b < p.answers_b(); ++b)
        if (a != b) r.max_violation = std::max(r.max_violation, p(x, x, a, b));
  r.synchronous = r.max_violation <= tol;
  return r;
}

double game_loss(const Correlation& p, const SynchronousGame& g) {
  require_game_shape(p, g);
  double loss = 0.0;
  const std::size_t m = g.questions(), n = g.answers();
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < m; ++y)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (!g.wins(x, y, a, b)) loss += p(x, y, a, b);
  return loss;
}

bool is_perfect(const Correlation& p, const SynchronousGame& g, double tol) {
  require_game_shape(p, g);
  for (const auto& [x, y, a, b] : g.zero_cells())
    if (p(x, y, a, b) > tol) return false;
  return true;
}

}  // namespace syncert
