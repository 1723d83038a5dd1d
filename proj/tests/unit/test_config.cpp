#include <gtest/gtest.h>

#include "cli/config.hpp"
#include "hypolab/errors.hpp"

using namespace hypolab;
using namespace hypolab::cli;

TEST(Config, ParsesSectionsAndComments) {
  const RunConfig c = parse_config(R"(
# a band run
scenario.preset = band
scenario.t_star = 4      # trailing comment
grid.n_x = 32
grid.n_theta = 16
solver.dt = 0.005
solver.t_end = 3
initial.kind = single-mode
initial.epsilon = 0.25
run.seed = 42
verify.inequalities = energy, following
)");
  EXPECT_EQ(c.scenario.name, "band");
  EXPECT_DOUBLE_EQ(c.scenario.t_star, 4.0);
  EXPECT_EQ(c.n_x, 32);
  EXPECT_EQ(c.n_theta, 16);
  ASSERT_TRUE(c.dt.has_value());
  EXPECT_DOUBLE_EQ(*c.dt, 0.005);
  EXPECT_EQ(c.initial_kind, InitialKind::single_mode);
  EXPECT_DOUBLE_EQ(c.single_mode.epsilon, 0.25);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.verifications, (std::vector<std::string>{"energy", "following"}));
}

TEST(Config, UnknownKeysAndBadValuesAreErrors) {
  EXPECT_THROW(parse_config("solver.dtt = 0.01\n"), ConfigError);
  EXPECT_THROW(parse_config("solver.dt = fast\n"), ConfigError);
  EXPECT_THROW(parse_config("grid.n_x = 12.5\n"), ConfigError);
  EXPECT_THROW(parse_config("grid.n_x = 48\n"), ConfigError);  // not a power of two
  EXPECT_THROW(parse_config("solver.dt = 0.01\nsolver.dt = 0.02\n"), ConfigError);
  EXPECT_THROW(parse_config("scenario.preset = ring\n"), ConfigError);
  EXPECT_THROW(parse_config("just a line\n"), ConfigError);
  EXPECT_THROW(parse_config("verify.inequalities = energy, vibes\n"), ConfigError);
  EXPECT_THROW(parse_config("solver.zero_mass = yes\n"), ConfigError);
  EXPECT_THROW(parse_config("scenario.preset = custom\n"), ConfigError);
  EXPECT_THROW(parse_config("scenario.shapes = disk(0.5, 0.5, 0.2)\n"), ConfigError);
}

TEST(Config, CustomShapes) {
  const RunConfig c = parse_config(
      "scenario.preset = custom\nscenario.shapes = disk(0.3, 0.3, 0.1); vband(0.7, 0.2)\n");
  EXPECT_EQ(c.scenario.region.size(), 2u);
  EXPECT_TRUE(c.scenario.region.contains(0.3, 0.3));
  EXPECT_TRUE(c.scenario.region.contains(0.7, 0.05));
  EXPECT_FALSE(c.scenario.region.contains(0.5, 0.9));
}

TEST(Config, EchoRoundTrips) {
  for (const char* text :
       {"scenario.preset = two-disks\nsolver.dt = 0.0123\ninitial.kind = bump\ninitial.x1 = 0.1\n",
        "scenario.preset = custom\nscenario.shapes = rect(0.5, 0.5, 0.3, 0.2)\nrun.seed = 7\n",
        "gcc.angles = 32\nverify.lambda = 3.5\nbogovskii.domain = l-shape\n"}) {
    const RunConfig a = parse_config(text);
    const std::string once = echo(a);
    const RunConfig b = parse_config(once);
    EXPECT_EQ(echo(b), once);
  }
}

TEST(Config, DefaultsAreAutoUntilSet) {
  const RunConfig c = parse_config("");
  EXPECT_FALSE(c.dt.has_value());
  EXPECT_FALSE(c.verify_lambda.has_value());
  EXPECT_NE(echo(c).find("solver.dt = auto"), std::string::npos);
  EXPECT_EQ(c.scenario.name, "cross");
}
