#include <doctest.h>

#include <cmath>

#include "schedex/channel.hpp"

using namespace schedex;

TEST_SUITE_BEGIN("channel");

TEST_CASE("calibration: 30-unit link at 60 dB reaches exactly 0.67") {
  ChannelParams cp;
  CHECK(link_prr(30.0, cp) == doctest::Approx(0.67).epsilon(1e-9));
}

TEST_CASE("reference distance lands near one unit") {
  ChannelParams cp;
  const double d = reference_distance(cp);
  CHECK(d > 0.9);
  CHECK(d < 1.1);
}

TEST_CASE("interference band is exactly the sentinel rate, zero beyond") {
  ChannelParams cp;
  CHECK(link_prr(45.0, cp) == kInterferencePrr);
  CHECK(link_prr(30.0000001, cp) == kInterferencePrr);
  CHECK(link_prr(60.0, cp) == kInterferencePrr);
  CHECK(link_prr(61.0, cp) == 0.0);
}

TEST_CASE("nonpositive distances are a domain error") {
  ChannelParams cp;
  CHECK_THROWS_AS(link_prr(0.0, cp), std::domain_error);
  CHECK_THROWS_AS(link_prr(-3.0, cp), std::domain_error);
}

TEST_CASE("prr is nonincreasing and bounded on a dense grid") {
  ChannelModel model{ChannelParams{}};
  double prev = 1.0;
  for (double d = 0.05; d <= 30.0 + 1e-9; d += 0.05) {
    const double p = model.prr(d);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    CHECK(p <= prev + 1e-12);
    prev = p;
  }
}

TEST_CASE("50 dB weakens every link") {
  ChannelParams strong, weak;
  weak.gamma0_db = 50.0;
  ChannelModel ms(strong), mw(weak);
  for (double d : {5.0, 10.0, 20.0, 30.0}) CHECK(mw.prr(d) < ms.prr(d));
}

TEST_CASE("quality matrix: distance symmetry, zero diagonal") {
  // two transceivers equidistant from a third; one sink far off to the side
  std::vector<Point> coords{{0, 0}, {10, 0}, {5, 8}, {0, 55}};
  std::vector<bool> sinks{false, false, false, true};
  Network net(std::move(coords), std::move(sinks));
  ChannelParams cp;
  const LinkQualityMatrix q = build_quality_matrix(net, cp);

  CHECK(q.at(net.row(2), 0) == q.at(net.row(2), 1));  // equal distances
  CHECK(q.at(net.row(0), 1) == q.at(net.row(1), 0));  // symmetric pair
  for (NodeId t : net.transceivers()) CHECK(q.at(net.row(t), t) == 0.0);
}

TEST_SUITE_END();
