#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "rrmc/rng.h"

namespace rrmc {

/// Exercise dates 0 < t_1 < ... < t_J = maturity. Date index 0 denotes the
/// valuation time t_0 = 0 (not an exercise date).
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> dates);
  static TimeGrid uniform(double maturity, std::size_t num_dates);

  std::size_t num_dates() const { return dates_.size(); }
  double maturity() const { return dates_.back(); }
  /// t_date for date in [0, J]; t_0 = 0.
  double time(std::size_t date) const { return date == 0 ? 0.0 : dates_[date - 1]; }
  /// t_date - t_{date-1} for date in [1, J].
  double step(std::size_t date) const { return time(date) - time(date - 1); }
  const std::vector<double>& dates() const { return dates_; }

  bool operator==(const TimeGrid& other) const { return dates_ == other.dates_; }

 private:
  std::vector<double> dates_;
};

/// Correlated geometric Brownian motion, dX_l/X_l = (r - delta) dt + sigma_l dW_l.
struct GBMParams {
  std::size_t dim = 1;
  double rate = 0.0;
  double dividend = 0.0;
  std::vector<double> vols;
  Eigen::MatrixXd corr;
  std::vector<double> spot;

  /// d identically distributed assets with equicorrelation rho.
  static GBMParams symmetric(std::size_t dim, double rate, double dividend, double vol, double spot,
                             double rho = 0.0);

  /// Throws ConfigError on shape or sign violations. Correlation PSD-ness is
  /// checked by cholesky().
  void validate() const;
};

/// Lower-triangular L with L L^T = corr. Accepts positive semidefinite input:
/// pivots in [-1e-12, 0] are treated as zero. Throws NumericalError naming
/// the failing pivot otherwise.
Eigen::MatrixXd cholesky(const Eigen::MatrixXd& corr);

enum class SeedDomain : std::uint8_t { training = 0, test = 1 };

/// XOR applied to the user seed for the test domain.
inline constexpr std::uint64_t kTestSeedXor = 0x5DEECE66D2F1A7B3ull;

/// Immutable tensor of simulated states Z_j^{(i)}, indexed (path, date, asset).
/// Date 0 holds the common starting point.
class PathSet {
 public:
  PathSet(GBMParams params, TimeGrid grid, std::size_t num_paths, std::uint64_t seed, SeedDomain domain,
          std::vector<double> states);

  std::size_t num_paths() const { return num_paths_; }
  std::size_t num_dates() const { return grid_.num_dates(); }
  std::size_t dim() const { return params_.dim; }
  std::uint64_t seed() const { return seed_; }
  SeedDomain domain() const { return domain_; }
  const TimeGrid& grid() const { return grid_; }
  const GBMParams& params() const { return params_; }

  std::span<const double> state(std::size_t path, std::size_t date) const {
    return {states_.data() + offset(path, date), params_.dim};
  }
  double at(std::size_t path, std::size_t date, std::size_t asset) const {
    return states_[offset(path, date) + asset];
  }
  const std::vector<double>& raw() const { return states_; }

 private:
  std::size_t offset(std::size_t path, std::size_t date) const {
    return (path * (grid_.num_dates() + 1) + date) * params_.dim;
  }

  GBMParams params_;
  TimeGrid grid_;
  std::size_t num_paths_;
  std::uint64_t seed_;
  SeedDomain domain_;
  std::vector<double> states_;
};

/// Exact lognormal transition between consecutive grid dates.
class GbmStepper {
 public:
  GbmStepper(const GBMParams& params, const TimeGrid& grid);

  /// Advances `from` (state at date-1) to `to` (state at date), drawing dim
  /// normals from rng. `to` may alias `from`.
  void step(std::size_t date, std::span<const double> from, std::span<double> to, CounterRng& rng) const;

  std::size_t dim() const { return dim_; }
  const Eigen::MatrixXd& factor() const { return chol_; }

 private:
  std::size_t dim_;
  Eigen::MatrixXd chol_;
  std::vector<double> vols_;
  // per date (index date-1) and asset: (r - delta - sigma^2/2) dt and sigma sqrt(dt)
  std::vector<double> drift_;
  std::vector<double> diffusion_;
  bool diagonal_;
};

/// Simulates num_paths trajectories from params.spot. Path i draws from the
/// counter-based substream (key(seed, domain), i), so the result does not
/// depend on thread count or schedule.
PathSet simulate(const GBMParams& params, const TimeGrid& grid, std::size_t num_paths, std::uint64_t seed,
                 SeedDomain domain = SeedDomain::training);

/// Substream key used by simulate() for the given seed and domain.
std::uint64_t path_stream_key(std::uint64_t seed, SeedDomain domain);

/// Debug dump: header (N, J, d, seed) as little-endian uint64, then the
/// states for dates 1..J as little-endian float64, path-major row-major.
void write_binary(const PathSet& paths, std::ostream& out);

struct PathDump {
  std::uint64_t num_paths = 0;
  std::uint64_t num_dates = 0;
  std::uint64_t dim = 0;
  std::uint64_t seed = 0;
  std::vector<double> states;
};
PathDump read_binary(std::istream& in);

}  // namespace rrmc
