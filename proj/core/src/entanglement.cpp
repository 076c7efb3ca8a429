#include "spdc/entanglement.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "spdc/errors.hpp"

namespace spdc {
namespace {

constexpr const char* kModule = "entanglement";

// Neumaier-compensated sum of -p log2 p.
double entropy_sum(std::span<const double> p) {
  double sum = 0.0;
  double comp = 0.0;
  for (double v : p) {
    if (v <= 0.0) continue;
    const double term = -v * std::log2(v);
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  return sum + comp;
}

void require_normalized(std::span<const double> p) {
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError(kModule, "negative or non-finite probability");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << "distribution is not normalised (sum = " << total << ")";
    throw DomainError(kModule, msg.str());
  }
}

std::vector<double> marginal(const DiscreteJoint& j, bool idler) {
  std::vector<double> m(j.m(), 0.0);
  for (std::size_t s = 0; s < j.m(); ++s)
    for (std::size_t i = 0; i < j.m(); ++i) m[idler ? i : s] += j(s, i);
  return m;
}

EntropyTerms terms(const DiscreteJoint& pos, const DiscreteJoint& mom) {
  if (pos.basis() != Basis::position || mom.basis() != Basis::momentum) {
    throw ConfigError(kModule, "ef_min expects a position joint and a momentum joint");
  }
  if (pos.m() != mom.m()) {
    throw ConfigError(kModule, "position and momentum joints must share M");
  }
  const double product = pos.bin_width() * mom.bin_width() * static_cast<double>(pos.m());
  if (std::abs(product / (2.0 * std::numbers::pi) - 1.0) > 1e-9) {
    throw ConfigError(kModule, "position and momentum grids are not conjugate (dx dk != 2 pi / M)");
  }
  EntropyTerms t;
  t.pos_joint = joint_entropy(pos);
  t.pos_idler = idler_entropy(pos);
  t.pos_conditional = t.pos_joint - t.pos_idler;
  t.mom_joint = joint_entropy(mom);
  t.mom_idler = idler_entropy(mom);
  t.mom_conditional = t.mom_joint - t.mom_idler;
  return t;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

DiscreteJoint::DiscreteJoint(std::size_t m, std::vector<double> values, Basis basis,
                             double bin_width)
    : m_(m), values_(std::move(values)), basis_(basis), bin_width_(bin_width) {
  if (m == 0 || values_.size() != m * m) throw DomainError(kModule, "joint must be M x M");
  if (!(bin_width > 0.0)) throw DomainError(kModule, "bin width must be positive");
  require_normalized(values_);
}

DiscreteJoint DiscreteJoint::from_distribution(const Distribution& dist2) {
  if (dist2.rank() != 2 || dist2.shape()[0] != dist2.shape()[1]) {
    throw DomainError(kModule, "joint distributions must be square 2D arrays");
  }
  const auto v = dist2.values();
  return DiscreteJoint(dist2.shape()[0], std::vector<double>(v.begin(), v.end()), dist2.basis(),
                       dist2.axes()[0].bin_width);
}

double shannon_entropy(std::span<const double> p) {
  require_normalized(p);
  return entropy_sum(p);
}

double joint_entropy(const DiscreteJoint& j) { return entropy_sum(j.values()); }
double signal_entropy(const DiscreteJoint& j) { return entropy_sum(marginal(j, false)); }
double idler_entropy(const DiscreteJoint& j) { return entropy_sum(marginal(j, true)); }
double conditional_entropy(const DiscreteJoint& j) { return joint_entropy(j) - idler_entropy(j); }

EfReport ef_min(const DiscreteJoint& pos, const DiscreteJoint& mom) {
  EfReport r;
  r.m = pos.m();
  r.x = terms(pos, mom);
  r.h = r.x;
  r.ef_min = 2.0 * std::log2(static_cast<double>(r.m)) - r.h.pos_conditional - r.h.mom_conditional;
  return r;
}

EfReport ef_min_transverse(const JointPair& x, const JointPair& y) {
  EfReport r;
  r.m = x.position.m();
  r.x = terms(x.position, x.momentum);
  const auto ty = terms(y.position, y.momentum);
  if (y.position.m() != r.m) throw ConfigError(kModule, "x and y joints must share M");
  r.y = ty;
  r.h.pos_joint = r.x.pos_joint + ty.pos_joint;
  r.h.pos_idler = r.x.pos_idler + ty.pos_idler;
  r.h.pos_conditional = r.x.pos_conditional + ty.pos_conditional;
  r.h.mom_joint = r.x.mom_joint + ty.mom_joint;
  r.h.mom_idler = r.x.mom_idler + ty.mom_idler;
  r.h.mom_conditional = r.x.mom_conditional + ty.mom_conditional;
  r.ef_min = 2.0 * std::log2(static_cast<double>(r.m)) - r.h.pos_conditional - r.h.mom_conditional;
  return r;
}

MomentumGrid4 entanglement_grid(const TwoPhotonSource& source, const ExtentPolicy& extent,
                                const EntanglementGridPolicy& policy) {
  const double qmax = auto_extent(source, extent);
  if (policy.points != 0) return MomentumGrid4(policy.points, 2.0 * qmax / policy.points);
  if (!is_power_of_two(policy.min_points) || !is_power_of_two(policy.max_points) ||
      policy.min_points < 8 || policy.max_points < policy.min_points) {
    throw ConfigError(kModule, "entanglement grid bounds must be powers of two with 8 <= min <= max");
  }
  if (!(policy.max_dq_w0 > 0.0)) throw ConfigError(kModule, "max_dq_w0 must be positive");
  int n = policy.min_points;
  while (n < policy.max_points && 2.0 * qmax / n * source.pump().waist > policy.max_dq_w0) n *= 2;
  return MomentumGrid4(n, 2.0 * qmax / n);
}

JointPair discretize(const AxisJoints& joints, int binning) {
  const std::size_t n = joints.position.shape()[0];
  if (binning < 1 || !is_power_of_two(binning) || static_cast<std::size_t>(binning) > n / 2) {
    throw ConfigError(kModule, "binning must be a power of two no larger than N/2");
  }
  const auto b = static_cast<std::size_t>(binning);
  const std::size_t m = n / b;

  std::vector<double> pos(m * m, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) pos[(r / b) * m + c / b] += joints.position(r, c);

  std::vector<double> mom(m * m, 0.0);
  const std::size_t off = n / 2 - m / 2;
  double kept = 0.0;
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c) {
      mom[r * m + c] = joints.momentum(r + off, c + off);
      kept += mom[r * m + c];
    }
  if (!(kept > 0.0)) throw DomainError(kModule, "momentum crop holds no probability");
  double total = 0.0;
  for (double v : pos) total += v;
  for (double& v : pos) v /= total;
  for (double& v : mom) v /= kept;

  return JointPair{
      DiscreteJoint(m, std::move(pos), Basis::position,
                    joints.position.axes()[0].bin_width * static_cast<double>(b)),
      DiscreteJoint(m, std::move(mom), Basis::momentum, joints.momentum.axes()[0].bin_width)};
}

TransverseJoints build_discrete_joints(const EntanglementConfig& config, double z) {
  const TwoPhotonSource source(config.model, config.pump, config.setup, config.guard);
  const auto grid = entanglement_grid(source, config.extent, config.grid);
  const auto jx = averaged_joints_direct(grid, source, z, TransverseAxis::x, config.direct);
  const auto jy = averaged_joints_direct(grid, source, z, TransverseAxis::y, config.direct);
  return TransverseJoints{discretize(jx, config.grid.binning), discretize(jy, config.grid.binning)};
}

EfReport evaluate_ef(const EntanglementConfig& config, double z) {
  const auto joints = build_discrete_joints(config, z);
  return ef_min_transverse(joints.x, joints.y);
}

std::vector<ScanPoint> scan(const EntanglementConfig& config, double z, ScanParameter parameter,
                            std::span<const double> values) {
  if (parameter == ScanParameter::gap && !config.setup.is_double()) {
    throw ConfigError(kModule, "a gap scan needs a double-crystal setup");
  }
  std::vector<ScanPoint> out;
  out.reserve(values.size());
  for (double v : values) {
    ScanPoint point;
    point.value = v;
    EntanglementConfig c = config;
    double zz = z;
    try {
      switch (parameter) {
        case ScanParameter::z:
          zz = v;
          break;
        case ScanParameter::theta_p:
          c.setup.theta_p = v;
          break;
        case ScanParameter::gap:
          std::get<DoubleCrystal>(c.setup.kind).gap = v;
          break;
      }
      point.report = evaluate_ef(c, zz);
    } catch (const Error& e) {
      point.error = e.what();
    }
    out.push_back(std::move(point));
  }
  return out;
}

}  // namespace spdc
