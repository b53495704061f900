#include <doctest.h>

#include <algorithm>

#include "quadsim/config.hpp"
#include "quadsim/rng.hpp"

using namespace quadsim;

namespace {

bool has_error(const ConfigLoad& load, const std::string& field) {
  return std::any_of(load.issues.begin(), load.issues.end(), [&](const ConfigIssue& i) {
    return i.severity == ConfigIssue::Severity::kError && i.field == field;
  });
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("empty text resolves to the reference scenario") {
    const ConfigLoad load = parse_config("");
    REQUIRE(load.ok());
    const SimulationConfig& c = load.config;
    CHECK(c.n_nodes == 100);
    CHECK(c.field.width == 100.0);
    CHECK(c.initial_energy == 0.5);
    CHECK(c.election.p == 0.05);
    CHECK(c.election.per_area_cap == 1);
    CHECK(c.packets.data_bits == 2000);
    CHECK(c.packets.ctrl_bits == 200);
    CHECK(c.radio.e_elec == 50e-9);
    CHECK(c.radio.bs_position == Position{50, 150});
    CHECK(load.cap_derived);
  }

  TEST_CASE("sections and overrides; the override wins") {
    const ConfigLoad load = parse_config(
        "[simulation]\nn_nodes = 200\nprotocol = leach\n[election]\np = 0.1\n",
        {"simulation.n_nodes=40", "radio.bs_y = 180"});
    REQUIRE(load.ok());
    CHECK(load.config.n_nodes == 40);
    CHECK(load.config.protocol == "leach");
    CHECK(load.config.radio.bs_position.y == 180.0);
    CHECK(load.config.election.per_area_cap == 1);  // round(40 * 0.1 / 4)
  }

  TEST_CASE("explicit cap is kept") {
    const ConfigLoad load = parse_config("[election]\nper_area_cap = 3\n");
    CHECK(load.config.election.per_area_cap == 3);
    CHECK_FALSE(load.cap_derived);
  }

  TEST_CASE("p out of range names the field and range") {
    const ConfigLoad load = parse_config("[election]\np = 1.5\n");
    CHECK_FALSE(load.ok());
    REQUIRE(has_error(load, "election.p"));
    const auto it = std::find_if(load.issues.begin(), load.issues.end(),
                                 [](auto& i) { return i.field == "election.p"; });
    CHECK(it->message.find("(0, 1)") != std::string::npos);
  }

  TEST_CASE("cap of zero is rejected") {
    CHECK(has_error(parse_config("[election]\nper_area_cap = 0\n"), "election.per_area_cap"));
  }

  TEST_CASE("every violation is reported, not just the first") {
    const ConfigLoad load = parse_config(
        "[simulation]\nn_nodes = 0\nmax_rounds = 0\nprotocol = heed\n[field]\nwidth = -3\n"
        "[packets]\ndata_bits = x\n[bogus]\nkey = 1\n");
    CHECK(has_error(load, "simulation.n_nodes"));
    CHECK(has_error(load, "simulation.max_rounds"));
    CHECK(has_error(load, "simulation.protocol"));
    CHECK(has_error(load, "field.width"));
    CHECK(has_error(load, "packets.data_bits"));
    CHECK(has_error(load, "bogus.key"));
  }

  TEST_CASE("unimplemented protocol is flagged with a plugin hint") {
    const ConfigLoad load = parse_config("", {"simulation.protocol=sep"});
    REQUIRE(has_error(load, "simulation.protocol"));
    CHECK(load.issues.front().message.find("not implemented") != std::string::npos);
  }

  TEST_CASE("malformed INI and overrides") {
    CHECK_FALSE(parse_config("[simulation\nn_nodes=3").ok());
    CHECK_FALSE(parse_config("", {"nonsense"}).ok());
    CHECK_FALSE(parse_config("", {"election.orphan_policy=sometimes"}).ok());
  }

  TEST_CASE("warnings do not fail validation") {
    const ConfigLoad load = parse_config("[radio]\nbs_x = 50\nbs_y = 50\n");
    CHECK(load.ok());
    CHECK(std::any_of(load.issues.begin(), load.issues.end(), [](auto& i) {
      return i.severity == ConfigIssue::Severity::kWarning && i.field == "radio.bs_x";
    }));
  }

  TEST_CASE("rendered config parses back to the same values") {
    Rng rng(6);
    for (int trial = 0; trial < 50; ++trial) {
      SimulationConfig c;
      c.n_nodes = 1 + static_cast<std::size_t>(rng.uniform(0, 500));
      c.field = {rng.uniform(1, 500), rng.uniform(1, 500)};
      c.initial_energy = rng.uniform(0.01, 5);
      c.election.p = rng.uniform(0.01, 0.5);
      c.election.per_area_cap = 1 + static_cast<std::size_t>(rng.uniform(0, 5));
      c.radio.e_amp = rng.uniform(1e-12, 1e-9);
      c.radio.bs_position = {rng.uniform(-100, 600), rng.uniform(-100, 600)};
      c.packets.ctrl_bits = static_cast<std::int64_t>(rng.uniform(0, 1000));
      c.seed = rng.next_u64();
      c.protocol = trial % 2 ? "leach" : "qleach";
      c.orphan_policy = trial % 3 ? OrphanPolicy::kPromoteHead : OrphanPolicy::kDirectToBs;
      const ConfigLoad back = parse_config(render_config(c));
      REQUIRE(back.ok());
      CHECK(render_config(back.config) == render_config(c));
      CHECK(config_fingerprint(back.config) == config_fingerprint(c));
    }
  }

  TEST_CASE("fingerprint ignores seed and protocol but not physics") {
    SimulationConfig a, b;
    b.seed = 99;
    b.protocol = "leach";
    CHECK(config_fingerprint(a) == config_fingerprint(b));
    b.radio.e_elec = 40e-9;
    CHECK(config_fingerprint(a) != config_fingerprint(b));
  }
}
