#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace syncert {

class SynchronousGame;

/// Dense table p(a,b|x,y). Entry (x,y,a,b) lives at ((x*Y + y)*A + a)*B + b.
class Correlation {
 public:
  static constexpr double kEntryTolerance = 1e-10;
  static constexpr double kNormalizationTolerance = 1e-9;

  Correlation() = default;
  /// All-zero table; fill it through operator().
  Correlation(std::size_t questions_x, std::size_t questions_y, std::size_t answers_a,
              std::size_t answers_b);
  /// Throws DimensionError when the table length does not match.
  Correlation(std::size_t questions_x, std::size_t questions_y, std::size_t answers_a,
              std::size_t answers_b, std::vector<double> table);

  std::size_t questions_x() const noexcept { return nx_; }
  std::size_t questions_y() const noexcept { return ny_; }
  std::size_t answers_a() const noexcept { return na_; }
  std::size_t answers_b() const noexcept { return nb_; }

  double& operator()(std::size_t x, std::size_t y, std::size_t a, std::size_t b) {
    return table_[index(x, y, a, b)];
  }
  double operator()(std::size_t x, std::size_t y, std::size_t a, std::size_t b) const {
    return table_[index(x, y, a, b)];
  }
  std::span<const double> table() const noexcept { return table_; }

  bool same_shape(const Correlation& other) const noexcept;

  // Extremality in C_q is never tested; callers may record that they assume it.
  bool assumed_extreme() const noexcept { return assumed_extreme_; }
  void set_assumed_extreme(bool v) noexcept { assumed_extreme_ = v; }

  struct Validation {
    double worst_entry_excess = 0.0;       // distance of the worst entry outside [0, 1]
    double worst_normalization_error = 0.0;  // max over (x,y) of |sum_ab p - 1|
    bool ok = true;
  };
  Validation validate() const;

 private:
  std::size_t index(std::size_t x, std::size_t y, std::size_t a, std::size_t b) const noexcept {
    return ((x * ny_ + y) * na_ + a) * nb_ + b;
  }

  std::size_t nx_ = 0, ny_ = 0, na_ = 0, nb_ = 0;
  std::vector<double> table_;
  bool assumed_extreme_ = false;
};

/// Sum of |p - q| over all cells. Throws DimensionError on shape mismatch.
double l1_distance(const Correlation& p, const Correlation& q);

struct SynchronicityReport {
  bool synchronous = false;
  double max_violation = 0.0;  // max over x, a != b of p(a,b|x,x)
  std::string diagnostic;      // non-empty on shape problems

  explicit operator bool() const noexcept { return synchronous; }
};

SynchronicityReport is_synchronous(const Correlation& p, double tol = 1e-10);

/// Sum of p over the cells the game rejects (uniform questions, unnormalized).
double game_loss(const Correlation& p, const SynchronousGame& g);

/// Every rejected cell individually at most tol.
bool is_perfect(const Correlation& p, const SynchronousGame& g, double tol = 1e-10);

}  // namespace syncert
