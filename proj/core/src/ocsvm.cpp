#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <string>
#include <unordered_map>

#include "rftwin/detectors.hpp"
#include "rftwin/error.hpp"

namespace rftwin {

namespace {

constexpr double kTau = 1e-12;

/// LRU cache of kernel matrix columns. A column reference stays valid until
/// at least two further distinct columns have been requested.
class KernelColumns {
 public:
  KernelColumns(const FeatureMatrix& x, double gamma, std::size_t cache_mb) : x_(x), gamma_(gamma) {
    const std::size_t bytes_per_column = std::max<std::size_t>(1, x.rows() * sizeof(double));
    capacity_ = std::max<std::size_t>(2, cache_mb * 1024 * 1024 / bytes_per_column);
  }

  const std::vector<double>& column(std::size_t i) {
    if (auto it = slots_.find(i); it != slots_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      return it->second->second;
    }
    if (lru_.size() >= capacity_) {
      slots_.erase(lru_.back().first);
      lru_.pop_back();
    }
    std::vector<double> col(x_.rows());
    const auto xi = x_.row(i);
    for (std::size_t t = 0; t < col.size(); ++t) col[t] = rbf_kernel(xi, x_.row(t), gamma_);
    lru_.emplace_front(i, std::move(col));
    slots_[i] = lru_.begin();
    return lru_.front().second;
  }

 private:
  using Entry = std::pair<std::size_t, std::vector<double>>;
  const FeatureMatrix& x_;
  double gamma_;
  std::size_t capacity_;
  std::list<Entry> lru_;
  std::unordered_map<std::size_t, std::list<Entry>::iterator> slots_;
};

}  // namespace

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) noexcept {
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sq += d * d;
  }
  return std::exp(-gamma * sq);
}

double gamma_scale(const FeatureMatrix& train) {
  const auto& v = train.data();
  if (v.empty()) return 1.0;
  double mean = 0.0;
  for (const double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (const double x : v) var += (x - mean) * (x - mean);
  var /= static_cast<double>(v.size());
  if (var == 0.0) return 1.0;
  return 1.0 / (static_cast<double>(train.cols()) * var);
}

// Dual problem solved in unnormalized form:
//   min 1/2 a^T K a   s.t. 0 <= a_i <= 1, sum a_i = nu n
// by pairwise (SMO) updates with second-order working-set selection.
// Dividing a and rho by nu n gives the normalized model.
OcsvmModel ocsvm_fit(const FeatureMatrix& train, const OcsvmOptions& options) {
  const std::size_t n = train.rows();
  if (n < 2) throw Error(ErrorKind::EmptyTrainingSet, "OCSVM needs at least two training samples");
  if (!(options.nu > 0.0 && options.nu <= 1.0)) throw Error(ErrorKind::InvalidConfig, "nu must lie in (0, 1]");
  if (!(options.tolerance > 0.0)) throw Error(ErrorKind::InvalidConfig, "tolerance must be > 0");

  const double gamma = options.gamma_mode == GammaMode::Scale ? gamma_scale(train) : options.gamma;
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw Error(ErrorKind::InvalidConfig, "gamma must be > 0");
  const std::size_t max_iter =
      options.max_iterations > 0 ? options.max_iterations : std::max<std::size_t>(10'000'000, 100 * n);

  KernelColumns kernel(train, gamma, options.cache_mb);
  constexpr double upper = 1.0;
  const double total = options.nu * static_cast<double>(n);

  std::vector<double> a(n, 0.0);
  const auto full = static_cast<std::size_t>(std::floor(total));
  for (std::size_t i = 0; i < std::min(full, n); ++i) a[i] = upper;
  if (full < n) a[full] = total - static_cast<double>(full);

  std::vector<double> grad(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0.0) continue;
    const auto& q = kernel.column(i);
    for (std::size_t t = 0; t < n; ++t) grad[t] += a[i] * q[t];
  }

  // K(i, i) = 1 for the RBF kernel.
  constexpr double diag = 1.0;
  std::size_t iter = 0;
  double residual = 0.0;
  while (true) {
    double g_max = -std::numeric_limits<double>::infinity();
    std::ptrdiff_t i = -1;
    for (std::size_t t = 0; t < n; ++t) {
      if (a[t] < upper && -grad[t] >= g_max) {
        g_max = -grad[t];
        i = static_cast<std::ptrdiff_t>(t);
      }
    }
    double g_max2 = -std::numeric_limits<double>::infinity();
    std::ptrdiff_t j = -1;
    double obj_min = std::numeric_limits<double>::infinity();
    const std::vector<double>* qi = i >= 0 ? &kernel.column(static_cast<std::size_t>(i)) : nullptr;
    for (std::size_t t = 0; t < n; ++t) {
      if (a[t] <= 0.0) continue;
      g_max2 = std::max(g_max2, grad[t]);
      const double grad_diff = g_max + grad[t];
      if (qi != nullptr && grad_diff > 0.0) {
        double quad = 2.0 * diag - 2.0 * (*qi)[t];
        if (quad <= 0.0) quad = kTau;
        const double obj = -(grad_diff * grad_diff) / quad;
        if (obj <= obj_min) {
          obj_min = obj;
          j = static_cast<std::ptrdiff_t>(t);
        }
      }
    }
    residual = (i >= 0 && std::isfinite(g_max2)) ? std::max(0.0, g_max + g_max2) : 0.0;
    if (residual < options.tolerance || j < 0) break;
    if (iter >= max_iter) throw NonConvergenceError(residual, iter);

    const auto ui = static_cast<std::size_t>(i);
    const auto uj = static_cast<std::size_t>(j);
    const auto& qj = kernel.column(uj);
    const auto& qi_ref = kernel.column(ui);
    double quad = 2.0 * diag - 2.0 * qi_ref[uj];
    if (quad <= 0.0) quad = kTau;
    const double old_ai = a[ui];
    const double old_aj = a[uj];
    const double step = (grad[ui] - grad[uj]) / quad;
    const double sum = old_ai + old_aj;
    double ai = old_ai - step;
    double aj = old_aj + step;
    if (sum > upper) {
      if (ai > upper) {
        ai = upper;
        aj = sum - upper;
      }
      if (aj > upper) {
        aj = upper;
        ai = sum - upper;
      }
    } else {
      if (aj < 0.0) {
        aj = 0.0;
        ai = sum;
      }
      if (ai < 0.0) {
        ai = 0.0;
        aj = sum;
      }
    }
    a[ui] = ai;
    a[uj] = aj;
    const double dai = ai - old_ai;
    const double daj = aj - old_aj;
    for (std::size_t t = 0; t < n; ++t) grad[t] += qi_ref[t] * dai + qj[t] * daj;
    ++iter;
  }

  // Offset: mean gradient over free coefficients, else the midpoint of the
  // feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (a[t] >= upper) lb = std::max(lb, grad[t]);
    else if (a[t] <= 0.0) ub = std::min(ub, grad[t]);
    else {
      free_sum += grad[t];
      ++n_free;
    }
  }
  double rho = 0.0;
  if (n_free > 0) rho = free_sum / static_cast<double>(n_free);
  else if (std::isfinite(ub) && std::isfinite(lb)) rho = 0.5 * (ub + lb);
  else rho = std::isfinite(ub) ? ub : lb;

  OcsvmModel model;
  model.gamma = gamma;
  model.nu = options.nu;
  model.n_train = n;
  model.rho = rho / total;
  model.kkt_residual = residual;
  model.iterations = iter;
  std::vector<std::size_t> sv;
  for (std::size_t t = 0; t < n; ++t) {
    if (a[t] > 0.0) sv.push_back(t);
  }
  model.support_vectors = FeatureMatrix(sv.size(), train.cols());
  model.alpha.resize(sv.size());
  for (std::size_t s = 0; s < sv.size(); ++s) {
    const auto src = train.row(sv[s]);
    std::copy(src.begin(), src.end(), model.support_vectors.row(s).begin());
    model.alpha[s] = a[sv[s]] / total;
  }
  return model;
}

double ocsvm_kernel_sum(const OcsvmModel& model, std::span<const double> x) {
  if (x.size() != model.support_vectors.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "OCSVM expects " + std::to_string(model.support_vectors.cols()) +
                                                  " features, got " + std::to_string(x.size()));
  }
  double sum = 0.0;
  for (std::size_t s = 0; s < model.alpha.size(); ++s) {
    sum += model.alpha[s] * rbf_kernel(model.support_vectors.row(s), x, model.gamma);
  }
  return sum;
}

double ocsvm_score(const OcsvmModel& model, std::span<const double> x) {
  return model.rho - ocsvm_kernel_sum(model, x);
}

bool ocsvm_predict(const OcsvmModel& model, std::span<const double> x) { return ocsvm_score(model, x) > 0.0; }

}  // namespace rftwin
