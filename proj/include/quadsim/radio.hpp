#pragma once

#include <cstdint>

#include "quadsim/model.hpp"

namespace quadsim {

/// First-order radio: transmit costs e_elec per bit plus e_amp per bit per
/// square metre, receive costs e_elec per bit, and a cluster head spends e_da
/// per bit for every signal it fuses.
struct RadioModel {
  double e_elec = 50e-9;   // J/bit
  double e_amp = 100e-12;  // J/bit/m^2
  double e_da = 5e-9;      // J/bit/signal
  Position bs_position{50.0, 150.0};

  void validate() const;
};

struct PacketSpec {
  std::int64_t data_bits = 2000;
  std::int64_t ctrl_bits = 200;  // advertisement, join and schedule packets

  void validate() const;
};

double tx_cost(std::int64_t bits, double distance_m, const RadioModel& rm);
double rx_cost(std::int64_t bits, const RadioModel& rm);
double aggregation_cost(std::int64_t bits, std::int64_t n_signals, const RadioModel& rm);

/// Received strength of an advertisement, 1 / (1 + d^2). Only its ordering
/// matters: the strongest advertisement is always the nearest sender.
double rssi(double distance_m);

}  // namespace quadsim
