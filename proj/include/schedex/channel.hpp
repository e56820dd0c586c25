#pragma once

#include "schedex/model.hpp"

namespace schedex {

// Rayleigh-fading channel with a three-parameter packet error rate fit and
// log-distance path loss. The defaults reproduce links of at least 67%
// reception rate inside the transmission range at 60 dB reference SNR.
struct ChannelParams {
  double a_n = 67.7328;     // PER fit amplitude
  double g_n = 0.9819;      // PER fit decay (per unit of linear SNR)
  double gamma_pn = 4.2935; // PER fit threshold, linear SNR
  double alpha = 3.3;       // path-loss exponent
  double gamma0_db = 60.0;  // reference SNR at the reference distance, dB
  double tx_range = 30.0;       // r_t, units
  double interference_range = 60.0;  // r_i, units

  void validate() const;
  bool operator==(const ChannelParams&) const = default;
};

// PRR anchor that pins the path-loss reference distance: a link at exactly
// 30 units reaches 0.67 when the reference SNR is 60 dB.
inline constexpr double kCalibrationPrr = 0.67;
inline constexpr double kCalibrationDistance = 30.0;
inline constexpr double kCalibrationSnrDb = 60.0;

// Average packet error rate over Rayleigh fading at mean SNR gbar (linear
// scale). The instantaneous PER is 1 below gamma_pn and a_n*exp(-g_n*gamma)
// above it; averaging over the exponential SNR density gives
//   1 - exp(-gamma_pn/gbar) + a_n/(1+g_n*gbar) * exp(-gamma_pn*(g_n+1/gbar)).
double rayleigh_avg_per(double gbar_linear, const ChannelParams& cp);

// Reference distance of the log-distance model, solved from the calibration
// anchor above. Depends only on the PER fit constants and alpha.
double reference_distance(const ChannelParams& cp);

// Mean SNR in dB after path loss over distance d.
double mean_snr_db(double d, const ChannelParams& cp);

// Average packet reception rate of a directed link of length d. Exactly
// kInterferencePrr between tx_range and interference_range, 0 beyond.
// Nonpositive distances are a domain error.
double link_prr(double d, const ChannelParams& cp);

// Precomputes the calibration once; use for bulk PRR evaluation.
class ChannelModel {
 public:
  explicit ChannelModel(const ChannelParams& cp);
  double prr(double d) const;
  const ChannelParams& params() const { return cp_; }

 private:
  ChannelParams cp_;
  double ref_dist_;
};

// q_tp = link_prr(dist(t, p)) for every transceiver t and node p != t.
LinkQualityMatrix build_quality_matrix(const Network& net, const ChannelParams& cp);

}  // namespace schedex
