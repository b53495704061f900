#include "quadsim/radio.hpp"

#include <cmath>
#include <string>

#include "quadsim/error.hpp"

namespace quadsim {

namespace {

void require_positive(double v, const char* field) {
  if (!(std::isfinite(v) && v > 0.0)) {
    throw ConfigError(field, "must be > 0, got " + std::to_string(v));
  }
}

void require_non_negative_bits(std::int64_t bits) {
  if (bits < 0) throw DomainError("bit count must be >= 0, got " + std::to_string(bits));
}

}  // namespace

void RadioModel::validate() const {
  require_positive(e_elec, "radio.e_elec");
  require_positive(e_amp, "radio.e_amp");
  require_positive(e_da, "radio.e_da");
  if (!std::isfinite(bs_position.x)) throw ConfigError("radio.bs_x", "must be finite");
  if (!std::isfinite(bs_position.y)) throw ConfigError("radio.bs_y", "must be finite");
}

void PacketSpec::validate() const {
  if (data_bits < 1) throw ConfigError("packets.data_bits", "must be >= 1");
  if (ctrl_bits < 0) throw ConfigError("packets.ctrl_bits", "must be >= 0");
}

double tx_cost(std::int64_t bits, double distance_m, const RadioModel& rm) {
  require_non_negative_bits(bits);
  if (!(distance_m >= 0.0)) throw DomainError("distance must be >= 0");
  const auto b = static_cast<double>(bits);
  return rm.e_elec * b + rm.e_amp * b * distance_m * distance_m;
}

double rx_cost(std::int64_t bits, const RadioModel& rm) {
  require_non_negative_bits(bits);
  return rm.e_elec * static_cast<double>(bits);
}

double aggregation_cost(std::int64_t bits, std::int64_t n_signals, const RadioModel& rm) {
  require_non_negative_bits(bits);
  if (n_signals < 1) throw DomainError("aggregation needs at least one signal");
  return rm.e_da * static_cast<double>(bits) * static_cast<double>(n_signals);
}

double rssi(double distance_m) { return 1.0 / (1.0 + distance_m * distance_m); }

}  // namespace quadsim
