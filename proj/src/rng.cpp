#include "rrmc/rng.h"

#include <cmath>

namespace rrmc {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline PhiloxCounter philox_round(const PhiloxCounter& c, const PhiloxKey& k) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kPhiloxM0, c[0], hi0, lo0);
  mulhilo(kPhiloxM1, c[2], hi1, lo1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

template <std::size_t N>
inline double horner(const double (&coef)[N], double x) {
  double acc = coef[N - 1];
  for (std::size_t i = N - 1; i-- > 0;) acc = acc * x + coef[i];
  return acc;
}

// AS241 PPND16 coefficients, lowest degree first.
constexpr double kA[] = {3.387132872796366608,   133.14166789178437745, 1971.5909503065514427,
                         13731.693765509461125,  45921.953931549871457, 67265.770927008700853,
                         33430.575583588128105,  2509.0809287301226727};
constexpr double kB[] = {1.0,                    42.313330701600911252, 687.1870074920579083,
                         5394.1960214247511077,  21213.794301586595867, 39307.89580009271061,
                         28729.085735721942674,  5226.495278852545925};
constexpr double kC[] = {1.42343711074968357734,  4.6303378461565452959,   5.7694972214606914055,
                         3.64784832476320460504,  1.27045825245236838258,  0.24178072517745061177,
                         0.0227238449892691845833, 7.7454501427834140764e-4};
constexpr double kD[] = {1.0,                      2.05319162663775882187,  1.6763848301838038494,
                         0.68976733498510000455,   0.14810397642748007459,  0.0151986665636164571966,
                         5.475938084995344946e-4,  1.05075007164441684324e-9};
constexpr double kE[] = {6.6579046435011037772,    5.4637849111641143699,    1.7848265399172913358,
                         0.29656057182850489123,   0.026532189526576123093,  0.0012426609473880784386,
                         2.71155556874348757815e-5, 2.01033439929228813265e-7};
constexpr double kF[] = {1.0,                       0.59983220655588793769,  0.13692988092273580531,
                         0.0148753612908506148525,  7.868691311456132591e-4, 1.8463183175100546818e-5,
                         1.4215117583164458887e-7,  2.04426310338993978564e-15};

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    ctr = philox_round(ctr, key);
  }
  return ctr;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_key(std::uint64_t seed, std::uint64_t tag) {
  return mix64(mix64(seed) ^ tag);
}

std::uint64_t derive_key(std::uint64_t seed, std::uint64_t tag_a, std::uint64_t tag_b) {
  return mix64(derive_key(seed, tag_a) ^ mix64(tag_b + 0x632BE59BD9B4E019ull));
}

double inverse_normal_cdf(double p) {
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * horner(kA, r) / horner(kB, r);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = horner(kC, r) / horner(kD, r);
  } else {
    r -= 5.0;
    value = horner(kE, r) / horner(kF, r);
  }
  return q < 0.0 ? -value : value;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

CounterRng::CounterRng(std::uint64_t key, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)}, stream_(stream) {}

double CounterRng::uniform() {
  if (buffered_ == 0) {
    const PhiloxCounter ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                            static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    buffer_ = philox4x32_10(ctr, key_);
    ++block_;
    buffered_ = 2;
  }
  const int slot = 2 - buffered_;
  --buffered_;
  ++draw_;
  const std::uint64_t bits =
      (static_cast<std::uint64_t>(buffer_[2 * slot]) << 32) | static_cast<std::uint64_t>(buffer_[2 * slot + 1]);
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace rrmc
