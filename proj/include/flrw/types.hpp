#pragma once

#include <Eigen/Dense>

#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace flrw {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// T[i](j,k) = second derivative of component i with respect to labels j, k.
using Tensor3 = std::vector<Mat>;

inline Tensor3 zero_tensor3(int n) { return Tensor3(n, Mat::Zero(n, n)); }

// ---------------------------------------------------------------------------
// Error types

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalError : std::runtime_error {
  NumericalError(const std::string& msg, double achieved)
      : std::runtime_error(msg), achieved_tol(achieved) {}
  double achieved_tol;
};

struct SuperluminalError : std::runtime_error {
  explicit SuperluminalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when an operation requires a positive flow-map determinant but the
// state has already degenerated.
struct BlownUpError : std::runtime_error {
  BlownUpError(const std::string& msg, double t_, Vec alpha_, double det_)
      : std::runtime_error(msg), t(t_), alpha(std::move(alpha_)), det(det_) {}
  double t;
  Vec alpha;
  double det;
};

struct InversionError : std::runtime_error {
  explicit InversionError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ResolutionError : std::runtime_error {
  explicit ResolutionError(const std::string& msg) : std::runtime_error(msg) {}
};

struct HorizonError : std::runtime_error {
  HorizonError(const std::string& msg, double f2_at_tmax_, double projected_f2_)
      : std::runtime_error(msg), f2_at_tmax(f2_at_tmax_), projected_f2(projected_f2_) {}
  double f2_at_tmax;
  double projected_f2;
};

struct DiagnosticsError : std::runtime_error {
  DiagnosticsError(const std::string& msg, std::vector<double> xs_, std::vector<double> ys_)
      : std::runtime_error(msg), xs(std::move(xs_)), ys(std::move(ys_)) {}
  std::vector<double> xs, ys;
};

// ---------------------------------------------------------------------------
// Small numeric helpers

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

inline LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t m = xs.size();
  if (m != ys.size() || m < 2) throw std::invalid_argument("linear_fit: need >= 2 paired points");
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < m; ++i) { sx += xs[i]; sy += ys[i]; }
  const double xbar = sx / double(m), ybar = sy / double(m);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = xs[i] - xbar, dy = ys[i] - ybar;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  fit.r2 = (syy == 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

// Static chunked parallel loop. Results must be written to pre-sized,
// index addressed storage so the output does not depend on scheduling.
inline void parallel_for(int count, int jobs, const std::function<void(int)>& body) {
  if (jobs <= 1 || count < 2) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  jobs = std::min(jobs, count);
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  std::exception_ptr first_error;
  std::mutex err_mutex;
  for (int w = 0; w < jobs; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (int i = w; i < count; i += jobs) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace flrw
