#include "lexsim/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "lexsim/error.hpp"
#include "lexsim/parameters.hpp"

namespace lexsim {

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DomainError("pearson: length mismatch");
  if (xs.size() < 2) throw DomainError("pearson: need at least 2 pairs");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DomainError("pearson: constant series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

void SearchConfig::validate() const {
  if (!(lower < upper)) throw ConfigError("search domain needs lower < upper");
  if (n_points < 2) throw ConfigError("search needs at least 2 points");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
}

std::vector<double> window_points(double lower, double upper, int n_points) {
  std::vector<double> points(static_cast<std::size_t>(n_points));
  const double step = (upper - lower) / n_points;
  for (int k = 0; k < n_points; ++k) points[static_cast<std::size_t>(k)] = lower + k * step;
  return points;
}

FitResult grid_search(const BatchObjective& objective, const SearchConfig& config) {
  config.validate();
  FitResult result;
  double lower = config.lower;
  double upper = config.upper;
  for (int iteration = 1; iteration <= config.max_iterations; ++iteration) {
    WindowLog log{iteration, lower, upper, window_points(lower, upper, config.n_points), {}};
    log.fitness = objective(log.points);
    if (log.fitness.size() != log.points.size()) throw InvariantViolation("objective returned wrong batch size");
    std::size_t best = 0;
    for (std::size_t k = 0; k < log.fitness.size(); ++k) {
      if (std::isnan(log.fitness[k])) log.fitness[k] = kWorstFitness;
      if (log.fitness[k] > log.fitness[best]) best = k;
    }
    const double found = log.fitness[best];
    const double improvement = found - result.best_fitness;
    const bool first = iteration == 1;
    if (first || found > result.best_fitness) {
      result.best_fitness = found;
      result.best_value = log.points[best];
    }
    result.windows.push_back(std::move(log));
    if (!first && !(improvement > config.epsilon)) break;

    const double width = (upper - lower) / 2.0;
    lower = result.best_value - width / 2.0;
    upper = lower + width;
    if (lower < config.lower) {
      lower = config.lower;
      upper = lower + width;
    }
    if (upper > config.upper) {
      upper = config.upper;
      lower = upper - width;
    }
  }
  return result;
}

FitResult grid_search(const std::function<double(double)>& objective, const SearchConfig& config) {
  return grid_search(
      [&objective](const std::vector<double>& xs) {
        std::vector<double> out;
        out.reserve(xs.size());
        for (double x : xs) out.push_back(objective(x));
        return out;
      },
      config);
}

void write_fit_log(std::ostream& out, const FitResult& result) {
  out << "iteration,window_lo,window_hi,point,fitness\n";
  for (const auto& w : result.windows) {
    for (std::size_t k = 0; k < w.points.size(); ++k) {
      out << w.iteration << ',' << format_double(w.lower) << ',' << format_double(w.upper) << ','
          << format_double(w.points[k]) << ',' << format_double(w.fitness[k]) << '\n';
    }
  }
}

}  // namespace lexsim
