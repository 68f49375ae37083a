#include "rrmc/bounds.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

#include "rrmc/errors.h"

namespace rrmc {
namespace {

constexpr std::uint64_t kInnerDomainTag = 0x696E6E6572ull;  // "inner"
constexpr std::size_t kStackFeatures = 512;

// Feature buffer on the stack for the usual basis sizes.
class FeatureBuffer {
 public:
  explicit FeatureBuffer(std::size_t k) : size_(k) {
    if (k > kStackFeatures) heap_.resize(k);
  }
  std::span<double> span() { return {heap_.empty() ? stack_.data() : heap_.data(), size_}; }

 private:
  std::size_t size_;
  std::array<double, kStackFeatures> stack_;
  std::vector<double> heap_;
};

void check_binding(const ContinuationModel& model, const Product& product) {
  model.validate();
  if (model.product_kind != product.kind())
    throw ConfigError("model was trained for product '" + model.product_kind + "', not '" + product.kind() + "'");
  if (model.num_dates != product.grid().num_dates())
    throw ConfigError("model date count does not match the product grid");
  if (model.basis.dim() != product.dim()) throw ConfigError("model basis dimension does not match the product");
}

// Neumaier-compensated sum in index order.
double compensated_sum(std::span<const double> xs) {
  double sum = 0.0, comp = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

double continuation_impl(const ContinuationModel& model, const Product& product, const StateRef& state,
                         std::size_t date) {
  const std::size_t dates = model.num_dates;
  if (date == 0 || date > dates) {
    std::ostringstream msg;
    msg << "continuation date " << date << " outside 1.." << dates;
    throw ConfigError(msg.str());
  }
  if (date == dates) return 0.0;
  const BasisSpec& basis = model.basis;
  const std::size_t k_fixed = basis.fixed_size();
  FeatureBuffer buffer(k_fixed);
  const std::span<double> feats = buffer.span();
  eval_fixed(basis, state.assets, product.basis_scalar(state), feats);

  auto fixed_part = [&](std::size_t d) {
    const double* gamma = model.gamma(d).data();
    double c = 0.0;
    for (std::size_t k = 0; k < k_fixed; ++k) c += gamma[k] * feats[k];
    return c;
  };
  if (!basis.reinforced()) return fixed_part(date);

  const auto variant = basis.reinforcement().variant;
  double c = 0.0;  // C_{N,J}
  for (std::size_t l = dates; l > date; --l) {
    const double nu = eval_reinforcing(variant, product.reward(l, state), c);
    c = fixed_part(l - 1) + model.gamma(l - 1)[static_cast<Eigen::Index>(k_fixed)] * nu;
  }
  return c;
}

struct PolicyRun {
  std::vector<std::size_t> stop_dates;
  std::vector<double> payoffs;
};

PolicyRun run_policy(const StoppingPolicy& policy, const PathSet& paths) {
  const Product& product = policy.product();
  const ProductPaths states(product, paths);
  const std::size_t n = paths.num_paths();
  const std::size_t dates = paths.num_dates();
  PolicyRun run;
  run.stop_dates.resize(n);
  run.payoffs.resize(n);
  const auto rows = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < rows; ++i) {
    const auto path = static_cast<std::size_t>(i);
    for (std::size_t j = 1; j <= dates; ++j) {
      const auto [stop, reward] = policy.decide(states.state(path, j), j);
      if (stop) {
        run.stop_dates[path] = j;
        run.payoffs[path] = reward;
        break;
      }
    }
  }
  return run;
}

}  // namespace

std::string bound_kind_name(BoundKind kind) { return kind == BoundKind::lower ? "lower" : "upper"; }

BoundEstimate summarize(BoundKind kind, std::span<const double> samples) {
  BoundEstimate est;
  est.kind = kind;
  est.num_paths = samples.size();
  if (samples.empty()) return est;
  const double n = static_cast<double>(samples.size());
  const double mean = compensated_sum(samples) / n;
  double std_error = 0.0;
  if (samples.size() > 1) {
    std::vector<double> sq(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) sq[i] = (samples[i] - mean) * (samples[i] - mean);
    std_error = std::sqrt(compensated_sum(sq) / (n - 1.0) / n);
  }
  est.value = mean;
  est.std_error = std_error;
  est.ci_low = mean - kCi95 * std_error;
  est.ci_high = mean + kCi95 * std_error;
  return est;
}

double evaluate_continuation(const ContinuationModel& model, const Product& product, const StateRef& state,
                             std::size_t date) {
  check_binding(model, product);
  return continuation_impl(model, product, state, date);
}

StoppingPolicy::StoppingPolicy(const ContinuationModel& model, const Product& product)
    : model_(&model), product_(&product) {
  check_binding(model, product);
}

double StoppingPolicy::continuation(const StateRef& state, std::size_t date) const {
  return continuation_impl(*model_, *product_, state, date);
}

std::pair<bool, double> StoppingPolicy::decide(const StateRef& state, std::size_t date) const {
  const double reward = product_->reward(date, state);
  if (date == model_->num_dates) return {true, reward};
  return {reward >= continuation_impl(*model_, *product_, state, date), reward};
}

std::vector<std::size_t> pathwise_stop_times(const ContinuationModel& model, const PathSet& test_paths,
                                             const Product& product) {
  const StoppingPolicy policy(model, product);
  return run_policy(policy, test_paths).stop_dates;
}

BoundEstimate lower_bound(const ContinuationModel& model, const PathSet& test_paths, const Product& product) {
  const StoppingPolicy policy(model, product);
  const PolicyRun run = run_policy(policy, test_paths);
  BoundEstimate est = summarize(BoundKind::lower, run.payoffs);
  est.seed = test_paths.seed();
  return est;
}

BoundEstimate dual_upper_bound(const ContinuationModel& model, const PathSet& outer_paths, const Product& product,
                               std::size_t inner_count, std::uint64_t seed) {
  if (inner_count < 2) throw ConfigError("dual upper bound needs at least 2 inner paths");
  const StoppingPolicy policy(model, product);
  check_compatible(product, outer_paths);
  const ProductPaths states(product, outer_paths);
  const GbmStepper stepper(outer_paths.params(), outer_paths.grid());
  const std::size_t n = outer_paths.num_paths();
  const std::size_t dates = outer_paths.num_dates();
  const std::size_t dim = outer_paths.dim();
  const std::uint64_t inner_key_seed = derive_key(seed, kInnerDomainTag);

  // Q_date: mean over inner paths of g at the policy's first stop after `date`.
  auto inner_value = [&](std::size_t outer, const StateRef& start, std::vector<double>& x) {
    const std::uint64_t key = derive_key(inner_key_seed, outer, start.date);
    double total = 0.0;
    for (std::size_t r = 0; r < inner_count; ++r) {
      CounterRng rng(key, r);
      std::copy(start.assets.begin(), start.assets.end(), x.begin());
      double accrued = start.accrued;
      for (std::size_t m = start.date + 1; m <= dates; ++m) {
        stepper.step(m, x, x, rng);
        accrued = product.accrue(m, x, accrued);
        const auto [stop, reward] = policy.decide(StateRef{m, x, accrued}, m);
        if (stop) {
          total += reward;
          break;
        }
      }
    }
    return total / static_cast<double>(inner_count);
  };

  std::vector<double> samples(n);
  const auto rows = static_cast<std::int64_t>(n);
  std::int64_t failed_path = -1;
  std::string failure;
#pragma omp parallel
  {
    std::vector<double> scratch(dim);
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < rows; ++i) {
      const auto outer = static_cast<std::size_t>(i);
      try {
        // With a single date there is nothing to hedge; M = 0 is exact.
        double martingale = 0.0;
        double q_prev = dates > 1 ? inner_value(outer, states.state(outer, 0), scratch) : 0.0;
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 1; j <= dates; ++j) {
          const StateRef s = states.state(outer, j);
          const auto [stop, reward] = policy.decide(s, j);
          double level = reward;
          double q_here = 0.0;
          if (j < dates) {
            q_here = inner_value(outer, s, scratch);
            if (!stop) level = q_here;
          }
          if (dates > 1) martingale += level - q_prev;
          best = std::max(best, reward - martingale);
          q_prev = q_here;
        }
        if (!std::isfinite(best)) throw NumericalError("non-finite dual sample");
        samples[outer] = best;
      } catch (const std::exception& e) {
#pragma omp critical(rrmc_dual_failure)
        {
          if (failed_path < 0 || i < failed_path) {
            failed_path = i;
            failure = e.what();
          }
        }
      }
    }
  }
  if (failed_path >= 0) {
    std::ostringstream msg;
    msg << "dual upper bound failed on outer path " << failed_path << ": " << failure;
    throw NumericalError(msg.str());
  }
  BoundEstimate est = summarize(BoundKind::upper, samples);
  est.inner_paths = inner_count;
  est.seed = seed;
  return est;
}

}  // namespace rrmc
