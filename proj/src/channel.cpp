#include "schedex/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace schedex {

void ChannelParams::validate() const {
  if (!(a_n > 0.0) || !(g_n > 0.0) || !(gamma_pn > 0.0))
    throw std::invalid_argument("channel: PER fit constants must be positive");
  if (!(alpha > 0.0)) throw std::invalid_argument("channel: alpha must be positive");
  if (!(tx_range > 0.0) || !(interference_range >= tx_range))
    throw std::invalid_argument("channel: require 0 < r_t <= r_i");
}

double rayleigh_avg_per(double gbar_linear, const ChannelParams& cp) {
  if (!(gbar_linear > 0.0)) return 1.0;
  const double per = 1.0 - std::exp(-cp.gamma_pn / gbar_linear) +
                     cp.a_n / (1.0 + cp.g_n * gbar_linear) *
                         std::exp(-cp.gamma_pn * (cp.g_n + 1.0 / gbar_linear));
  return std::clamp(per, 0.0, 1.0);
}

double reference_distance(const ChannelParams& cp) {
  cp.validate();
  // Mean SNR at which the averaged PER equals 1 - kCalibrationPrr; the PER is
  // strictly decreasing in the mean SNR, so bisection suffices.
  const double target = 1.0 - kCalibrationPrr;
  double lo = 1e-9, hi = 1e12;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (rayleigh_avg_per(mid, cp) > target)
      lo = mid;
    else
      hi = mid;
  }
  const double gstar_db = 10.0 * std::log10(0.5 * (lo + hi));
  return kCalibrationDistance *
         std::pow(10.0, -(kCalibrationSnrDb - gstar_db) / (10.0 * cp.alpha));
}

double mean_snr_db(double d, const ChannelParams& cp) {
  return cp.gamma0_db - 10.0 * cp.alpha * std::log10(d / reference_distance(cp));
}

ChannelModel::ChannelModel(const ChannelParams& cp) : cp_(cp), ref_dist_(reference_distance(cp)) {}

double ChannelModel::prr(double d) const {
  if (!(d > 0.0)) throw std::domain_error("link_prr: distance must be positive");
  if (d > cp_.interference_range) return 0.0;
  if (d > cp_.tx_range) return kInterferencePrr;
  const double gbar_db = cp_.gamma0_db - 10.0 * cp_.alpha * std::log10(d / ref_dist_);
  const double gbar = std::pow(10.0, gbar_db / 10.0);
  return std::clamp(1.0 - rayleigh_avg_per(gbar, cp_), 0.0, 1.0);
}

double link_prr(double d, const ChannelParams& cp) { return ChannelModel(cp).prr(d); }

LinkQualityMatrix build_quality_matrix(const Network& net, const ChannelParams& cp) {
  const ChannelModel model(cp);
  LinkQualityMatrix q(net.num_transceivers(), net.size());
  for (NodeId t : net.transceivers()) {
    const int row = net.row(t);
    for (NodeId p = 0; p < net.size(); ++p) {
      if (p == t) continue;
      q.set(row, p, model.prr(distance(net.coord(t), net.coord(p))));
    }
  }
  return q;
}

}  // namespace schedex
