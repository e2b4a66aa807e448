#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace conegeo {

enum class Verdict { pass, fail, error };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::error:
      return "error";
  }
  return "error";
}

/// Residual record for one identity over a sample set.
struct CheckReport {
  std::string identity;
  std::string anchor;
  std::size_t samples = 0;
  double max_residual = 0.0;
  double rms_residual = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::error;
  std::vector<double> witness;
  std::string message;

  bool passed() const noexcept { return verdict == Verdict::pass; }
};

/// Pairwise (cascade) summation; the result depends only on the input order.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

/// Builds a report from per-sample residuals. A NaN residual fails the check.
inline CheckReport summarize(std::string identity, std::string anchor, double tolerance,
                             std::span<const double> residuals,
                             std::span<const std::vector<double>> points) {
  CheckReport rep;
  rep.identity = std::move(identity);
  rep.anchor = std::move(anchor);
  rep.tolerance = tolerance;
  rep.samples = residuals.size();
  std::vector<double> squares(residuals.size());
  bool finite = true;
  std::size_t worst = 0;
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    const double r = residuals[i];
    if (!std::isfinite(r)) {
      finite = false;
      worst = i;
      rep.max_residual = r;
      break;
    }
    squares[i] = r * r;
    if (std::abs(r) > rep.max_residual) {
      rep.max_residual = std::abs(r);
      worst = i;
    }
  }
  if (!residuals.empty()) {
    rep.rms_residual = std::sqrt(pairwise_sum(squares) / static_cast<double>(residuals.size()));
    if (worst < points.size()) rep.witness = points[worst];
  }
  rep.verdict = (finite && rep.max_residual <= tolerance) ? Verdict::pass : Verdict::fail;
  return rep;
}

inline CheckReport error_report(std::string identity, std::string anchor, double tolerance,
                                std::string message) {
  CheckReport rep;
  rep.identity = std::move(identity);
  rep.anchor = std::move(anchor);
  rep.tolerance = tolerance;
  rep.verdict = Verdict::error;
  rep.message = std::move(message);
  return rep;
}

/// Runs body(i) for i in [0, n) across hardware threads. Each index writes only
/// its own output slot, so results never depend on scheduling.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Evaluates `residual` at every point and summarizes.
inline CheckReport sweep(std::string identity, std::string anchor, double tolerance,
                         std::span<const std::vector<double>> points,
                         const std::function<double(const std::vector<double>&)>& residual) {
  std::vector<double> values(points.size());
  parallel_for(points.size(), [&](std::size_t i) { values[i] = residual(points[i]); });
  return summarize(std::move(identity), std::move(anchor), tolerance, values, points);
}

}  // namespace conegeo
