#include "rrmc/market_models.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "rrmc/errors.h"

namespace rrmc {
namespace {

constexpr std::uint64_t kPathDomainTag = 0x70617468ull;  // "path"

void put_u64(std::ostream& out, std::uint64_t v) {
  char bytes[8];
  for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((v >> (8 * b)) & 0xFF);
  out.write(bytes, 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw ConfigError("path dump truncated");
  std::uint64_t v = 0;
  for (int b = 7; b >= 0; --b) v = (v << 8) | bytes[b];
  return v;
}

}  // namespace

TimeGrid::TimeGrid(std::vector<double> dates) : dates_(std::move(dates)) {
  if (dates_.empty()) throw ConfigError("time grid needs at least one exercise date");
  double prev = 0.0;
  for (std::size_t i = 0; i < dates_.size(); ++i) {
    if (!std::isfinite(dates_[i]) || dates_[i] <= prev) {
      std::ostringstream msg;
      msg << "time grid dates must be positive and strictly increasing (date " << i + 1 << " = " << dates_[i]
          << ")";
      throw ConfigError(msg.str());
    }
    prev = dates_[i];
  }
}

TimeGrid TimeGrid::uniform(double maturity, std::size_t num_dates) {
  if (num_dates == 0) throw ConfigError("time grid needs at least one exercise date");
  if (!(maturity > 0.0)) throw ConfigError("maturity must be positive");
  std::vector<double> dates(num_dates);
  for (std::size_t j = 0; j < num_dates; ++j)
    dates[j] = maturity * static_cast<double>(j + 1) / static_cast<double>(num_dates);
  dates.back() = maturity;
  return TimeGrid(std::move(dates));
}

GBMParams GBMParams::symmetric(std::size_t dim, double rate, double dividend, double vol, double spot,
                               double rho) {
  GBMParams p;
  p.dim = dim;
  p.rate = rate;
  p.dividend = dividend;
  p.vols.assign(dim, vol);
  p.spot.assign(dim, spot);
  p.corr = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim), rho);
  p.corr.diagonal().setOnes();
  return p;
}

void GBMParams::validate() const {
  if (dim == 0) throw ConfigError("GBM dimension must be at least 1");
  if (vols.size() != dim || spot.size() != dim)
    throw ConfigError("GBM vols/spot length must equal the dimension");
  if (corr.rows() != static_cast<Eigen::Index>(dim) || corr.cols() != static_cast<Eigen::Index>(dim))
    throw ConfigError("correlation matrix must be dim x dim");
  if (!std::isfinite(rate) || !std::isfinite(dividend)) throw ConfigError("rate and dividend must be finite");
  for (std::size_t l = 0; l < dim; ++l) {
    if (!(vols[l] >= 0.0) || !std::isfinite(vols[l]))
      throw ConfigError("volatility of asset " + std::to_string(l) + " must be finite and non-negative");
    if (!(spot[l] > 0.0) || !std::isfinite(spot[l]))
      throw ConfigError("spot of asset " + std::to_string(l) + " must be positive");
  }
  for (Eigen::Index a = 0; a < corr.rows(); ++a) {
    if (corr(a, a) != 1.0) throw ConfigError("correlation matrix must have unit diagonal");
    for (Eigen::Index b = 0; b < a; ++b) {
      if (corr(a, b) != corr(b, a)) throw ConfigError("correlation matrix must be symmetric");
      if (std::fabs(corr(a, b)) > 1.0) throw ConfigError("correlation entries must lie in [-1, 1]");
    }
  }
}

Eigen::MatrixXd cholesky(const Eigen::MatrixXd& corr) {
  const Eigen::Index n = corr.rows();
  if (corr.cols() != n) throw ConfigError("cholesky: matrix must be square");
  Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = corr(j, j);
    for (Eigen::Index k = 0; k < j; ++k) pivot -= lower(j, k) * lower(j, k);
    if (pivot < -1e-12) {
      std::ostringstream msg;
      msg << "cholesky: correlation matrix is not positive semidefinite (pivot " << j << " = " << pivot << ")";
      throw NumericalError(msg.str());
    }
    if (pivot <= 0.0) continue;  // semidefinite direction; column stays zero
    const double diag = std::sqrt(pivot);
    lower(j, j) = diag;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = corr(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= lower(i, k) * lower(j, k);
      lower(i, j) = s / diag;
    }
  }
  return lower;
}

PathSet::PathSet(GBMParams params, TimeGrid grid, std::size_t num_paths, std::uint64_t seed, SeedDomain domain,
                 std::vector<double> states)
    : params_(std::move(params)),
      grid_(std::move(grid)),
      num_paths_(num_paths),
      seed_(seed),
      domain_(domain),
      states_(std::move(states)) {
  if (states_.size() != num_paths_ * (grid_.num_dates() + 1) * params_.dim)
    throw ConfigError("path set storage does not match N x (J+1) x d");
  for (std::size_t k = 0; k < states_.size(); ++k) {
    if (!(states_[k] > 0.0) || !std::isfinite(states_[k])) {
      const std::size_t per_path = (grid_.num_dates() + 1) * params_.dim;
      std::ostringstream msg;
      msg << "path state must be positive and finite (path " << k / per_path << ", date "
          << (k % per_path) / params_.dim << ")";
      throw NumericalError(msg.str());
    }
  }
}

GbmStepper::GbmStepper(const GBMParams& params, const TimeGrid& grid)
    : dim_(params.dim), chol_((params.validate(), cholesky(params.corr))), vols_(params.vols) {
  const std::size_t dates = grid.num_dates();
  drift_.resize(dates * dim_);
  diffusion_.resize(dates * dim_);
  for (std::size_t j = 1; j <= dates; ++j) {
    const double dt = grid.step(j);
    for (std::size_t l = 0; l < dim_; ++l) {
      const double s = params.vols[l];
      drift_[(j - 1) * dim_ + l] = (params.rate - params.dividend - 0.5 * s * s) * dt;
      diffusion_[(j - 1) * dim_ + l] = s * std::sqrt(dt);
    }
  }
  diagonal_ = chol_.isDiagonal(0.0);
}

void GbmStepper::step(std::size_t date, std::span<const double> from, std::span<double> to,
                      CounterRng& rng) const {
  const double* drift = drift_.data() + (date - 1) * dim_;
  const double* diffusion = diffusion_.data() + (date - 1) * dim_;
  if (diagonal_) {
    for (std::size_t l = 0; l < dim_; ++l) {
      const double xi = rng.normal() * chol_(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l));
      to[l] = from[l] * std::exp(drift[l] + diffusion[l] * xi);
    }
    return;
  }
  // Small fixed-size scratch on the stack; baskets are at most a few dozen assets.
  constexpr std::size_t kStackDim = 64;
  double stack_normals[kStackDim];
  std::vector<double> heap_normals;
  double* xi = stack_normals;
  if (dim_ > kStackDim) {
    heap_normals.resize(dim_);
    xi = heap_normals.data();
  }
  for (std::size_t l = 0; l < dim_; ++l) xi[l] = rng.normal();
  for (std::size_t l = 0; l < dim_; ++l) {
    double z = 0.0;
    for (std::size_t m = 0; m <= l; ++m)
      z += chol_(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(m)) * xi[m];
    to[l] = from[l] * std::exp(drift[l] + diffusion[l] * z);
  }
}

std::uint64_t path_stream_key(std::uint64_t seed, SeedDomain domain) {
  const std::uint64_t effective = domain == SeedDomain::test ? seed ^ kTestSeedXor : seed;
  return derive_key(effective, kPathDomainTag);
}

PathSet simulate(const GBMParams& params, const TimeGrid& grid, std::size_t num_paths, std::uint64_t seed,
                 SeedDomain domain) {
  params.validate();
  if (num_paths == 0) throw ConfigError("simulate: num_paths must be at least 1");
  const GbmStepper stepper(params, grid);
  const std::size_t dim = params.dim;
  const std::size_t dates = grid.num_dates();
  const std::size_t per_path = (dates + 1) * dim;
  std::vector<double> states(num_paths * per_path);
  const std::uint64_t key = path_stream_key(seed, domain);

  const auto n = static_cast<std::int64_t>(num_paths);
  bool failed = false;
  std::int64_t failed_path = -1;
  std::size_t failed_date = 0;
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    CounterRng rng(key, static_cast<std::uint64_t>(i));
    double* row = states.data() + static_cast<std::size_t>(i) * per_path;
    std::copy(params.spot.begin(), params.spot.end(), row);
    for (std::size_t j = 1; j <= dates; ++j) {
      std::span<const double> from(row + (j - 1) * dim, dim);
      std::span<double> to(row + j * dim, dim);
      stepper.step(j, from, to, rng);
      for (std::size_t l = 0; l < dim; ++l) {
        if (!(to[l] > 0.0) || !std::isfinite(to[l])) {
#pragma omp critical(rrmc_simulate_failure)
          {
            if (!failed || i < failed_path) {
              failed = true;
              failed_path = i;
              failed_date = j;
            }
          }
        }
      }
    }
  }
  if (failed) {
    std::ostringstream msg;
    msg << "simulate: non-finite or non-positive state at path " << failed_path << ", date " << failed_date;
    throw NumericalError(msg.str());
  }
  return PathSet(params, grid, num_paths, seed, domain, std::move(states));
}

void write_binary(const PathSet& paths, std::ostream& out) {
  const std::size_t n = paths.num_paths(), dates = paths.num_dates(), dim = paths.dim();
  put_u64(out, n);
  put_u64(out, dates);
  put_u64(out, dim);
  put_u64(out, paths.seed());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 1; j <= dates; ++j)
      for (double x : paths.state(i, j)) put_u64(out, std::bit_cast<std::uint64_t>(x));
}

PathDump read_binary(std::istream& in) {
  PathDump dump;
  dump.num_paths = get_u64(in);
  dump.num_dates = get_u64(in);
  dump.dim = get_u64(in);
  dump.seed = get_u64(in);
  const std::uint64_t count = dump.num_paths * dump.num_dates * dump.dim;
  dump.states.resize(count);
  for (std::uint64_t k = 0; k < count; ++k) dump.states[k] = std::bit_cast<double>(get_u64(in));
  return dump;
}

}  // namespace rrmc
