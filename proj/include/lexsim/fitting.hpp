#pragma once

#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

namespace lexsim {

inline constexpr double kWorstFitness = -std::numeric_limits<double>::infinity();

// Sample Pearson correlation. Throws DomainError on a length mismatch,
// fewer than 2 pairs, or a constant series.
double pearson(std::span<const double> xs, std::span<const double> ys);

struct SearchConfig {
  double lower = -1.0;
  double upper = 0.0;
  int n_points = 20;
  double epsilon = 1e-4;
  int max_iterations = 60;

  // Throws ConfigError.
  void validate() const;
};

struct WindowLog {
  int iteration = 0;
  double lower = 0.0;
  double upper = 0.0;
  std::vector<double> points;
  std::vector<double> fitness;
};

struct FitResult {
  double best_value = 0.0;
  double best_fitness = kWorstFitness;
  std::vector<WindowLog> windows;
};

// Scores a batch of points; may evaluate them concurrently.
using BatchObjective = std::function<std::vector<double>(const std::vector<double>&)>;

// Points of a window: lower + k * width / n for k = 0..n-1.
std::vector<double> window_points(double lower, double upper, int n_points);

// Iteratively narrowing grid search. Each iteration samples the window,
// then halves it around the incumbent and shifts it back inside the domain.
// Stops once an iteration improves on the incumbent by no more than epsilon.
FitResult grid_search(const BatchObjective& objective, const SearchConfig& config);
FitResult grid_search(const std::function<double(double)>& objective, const SearchConfig& config);

// CSV rows: iteration,window_lo,window_hi,point,fitness.
void write_fit_log(std::ostream& out, const FitResult& result);

}  // namespace lexsim
