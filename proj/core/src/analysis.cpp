#include "spdc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "spdc/errors.hpp"

namespace spdc {
namespace {

constexpr const char* kModule = "fields";

void require_2d(const Distribution& d, const char* op) {
  if (d.rank() != 2) throw DomainError(kModule, std::string(op) + " requires a 2D distribution");
}

}  // namespace

std::vector<double> radial_profile(const Distribution& dist2) {
  require_2d(dist2, "radial_profile");
  const auto rows = static_cast<long>(dist2.shape()[0]);
  const auto cols = static_cast<long>(dist2.shape()[1]);
  const long r0 = rows / 2;
  const long c0 = cols / 2;
  const long rmax = std::min({r0, c0, rows - 1 - r0, cols - 1 - c0});
  std::vector<double> sum(static_cast<std::size_t>(rmax) + 1, 0.0);
  std::vector<std::size_t> count(sum.size(), 0);
  for (long r = 0; r < rows; ++r)
    for (long c = 0; c < cols; ++c) {
      const double dr = static_cast<double>(r - r0);
      const double dc = static_cast<double>(c - c0);
      const auto bin = static_cast<long>(std::lround(std::sqrt(dr * dr + dc * dc)));
      if (bin > rmax) continue;
      sum[bin] += dist2(r, c);
      ++count[bin];
    }
  for (std::size_t b = 0; b < sum.size(); ++b) sum[b] /= static_cast<double>(count[b]);
  return sum;
}

std::size_t argmax(const std::vector<double>& profile) {
  if (profile.empty()) throw DomainError(kModule, "argmax of an empty profile");
  return static_cast<std::size_t>(std::max_element(profile.begin(), profile.end()) -
                                  profile.begin());
}

std::size_t count_local_maxima(const std::vector<double>& profile, double relative_floor) {
  if (profile.size() < 2) return 0;
  const double floor = relative_floor * *std::max_element(profile.begin(), profile.end());
  std::size_t count = 0;
  if (profile[0] > profile[1] && profile[0] >= floor) ++count;
  for (std::size_t i = 1; i + 1 < profile.size(); ++i) {
    if (profile[i] > profile[i - 1] && profile[i] > profile[i + 1] && profile[i] >= floor) ++count;
  }
  return count;
}

double pearson_correlation(const Distribution& dist2) {
  require_2d(dist2, "pearson_correlation");
  const std::size_t rows = dist2.shape()[0];
  const std::size_t cols = dist2.shape()[1];
  double w = 0.0, mr = 0.0, mc = 0.0;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const double p = dist2(r, c);
      w += p;
      mr += p * dist2.coordinate(0, r);
      mc += p * dist2.coordinate(1, c);
    }
  mr /= w;
  mc /= w;
  double vr = 0.0, vc = 0.0, cov = 0.0;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const double p = dist2(r, c);
      const double a = dist2.coordinate(0, r) - mr;
      const double b = dist2.coordinate(1, c) - mc;
      vr += p * a * a;
      vc += p * b * b;
      cov += p * a * b;
    }
  if (!(vr > 0.0 && vc > 0.0)) throw DomainError(kModule, "correlation of a degenerate distribution");
  return cov / std::sqrt(vr * vc);
}

double diagonal_band_mass(const Distribution& dist2, int width, bool anti) {
  require_2d(dist2, "diagonal_band_mass");
  const auto rows = static_cast<long>(dist2.shape()[0]);
  const auto cols = static_cast<long>(dist2.shape()[1]);
  double mass = 0.0;
  for (long r = 0; r < rows; ++r)
    for (long c = 0; c < cols; ++c) {
      const long d = anti ? (r - rows / 2) + (c - cols / 2) : r - c;
      if (std::labs(d) <= width) mass += dist2(r, c);
    }
  return mass / dist2.total();
}

}  // namespace spdc
