#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "catmouse/constants.hpp"
#include "catmouse/dynamics.hpp"
#include "catmouse/error.hpp"
#include "catmouse/rfsense.hpp"

using namespace catmouse;
using constants::kDegToRad;
using constants::kPi;

namespace {

std::vector<EcefVector> random_sensors(std::mt19937_64& rng, int n, double spread = 3000.0) {
  std::normal_distribution<double> g(0, spread);
  std::vector<EcefVector> out;
  for (int i = 0; i < n; ++i) out.emplace_back(Vec3(g(rng), g(rng), g(rng)) + Vec3(0, 0, 7000));
  return out;
}

Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  q.normalize();
  return q.toRotationMatrix();
}

const EcefVector kGeo(42164.0, 0.0, 0.0);

}  // namespace

TEST(Walker, SixtyInSixPlanes) {
  ConstellationConfig cfg;
  cfg.num_sats = 60;
  cfg.num_planes = 6;
  const auto sats = build_walker(cfg);
  ASSERT_EQ(sats.size(), 60u);
  for (int p = 0; p < 6; ++p) {
    for (int s = 0; s < 10; ++s) {
      const auto& e = sats[static_cast<std::size_t>(p * 10 + s)];
      EXPECT_NEAR(e.raan, p * 30.0 * kDegToRad, 1e-12);
      EXPECT_NEAR(e.mean_anomaly, s * 36.0 * kDegToRad, 1e-12);
      EXPECT_NEAR(e.inclination, kPi / 2, 1e-15);
      EXPECT_NEAR(e.semi_major_axis, constants::kEarthRadius + 550.0, 1e-9);
    }
  }
}

TEST(Walker, OnePerPlaneAndDivisibility) {
  ConstellationConfig cfg;
  cfg.num_sats = 5;
  cfg.num_planes = 5;
  const auto sats = build_walker(cfg);
  ASSERT_EQ(sats.size(), 5u);
  for (const auto& e : sats) EXPECT_NEAR(e.mean_anomaly, 0.0, 1e-15);
  cfg.num_sats = 61;
  cfg.num_planes = 6;
  EXPECT_THROW(build_walker(cfg), ConfigError);
  EXPECT_EQ(ConstellationConfig::with_size(60).num_planes, 6);
  EXPECT_EQ(ConstellationConfig::with_size(200).num_planes, 20);
  EXPECT_EQ(ConstellationConfig::with_size(7).num_planes, 1);
}

TEST(Beam, CenterlineAndPerpendicular) {
  const BeamSpec b = BeamSpec::nadir(kGeo, 1.0 * kDegToRad);
  const auto on = in_beam(kGeo, EcefVector(7000, 0, 0), b);
  EXPECT_TRUE(on.in_beam);
  EXPECT_NEAR(on.off_axis, 0.0, 1e-12);
  const auto perp = in_beam(kGeo, EcefVector(42164.0, 5000.0, 0), b);
  EXPECT_FALSE(perp.in_beam);
  EXPECT_NEAR(perp.off_axis, kPi / 2, 1e-9);
  // Behind the apex on the axis: phi is zero but the forward test rejects it.
  const auto behind = in_beam(kGeo, EcefVector(50000, 0, 0), b);
  EXPECT_NEAR(behind.off_axis, 0.0, 1e-12);
  EXPECT_FALSE(behind.in_beam);
  EXPECT_THROW(in_beam(kGeo, kGeo, b), GeometryError);
}

TEST(Beam, OffAxisAngleFormula) {
  const BeamSpec b = BeamSpec::nadir(kGeo, 10 * kDegToRad);
  const double phi = 5 * kDegToRad;
  const EcefVector s(Vec3(42164.0 - 30000.0 * std::cos(phi), 30000.0 * std::sin(phi), 0));
  EXPECT_NEAR(in_beam(kGeo, s, b).off_axis, phi, 1e-12);
}

TEST(Beam, MonotoneInHalfAngle) {
  std::mt19937_64 rng(8);
  const auto sensors = random_sensors(rng, 500, 6000.0);
  for (const auto& s : sensors) {
    bool prev = false;
    for (double th = 0.5; th < 89.0; th += 0.5) {
      const bool now = in_beam(kGeo, s, BeamSpec::nadir(kGeo, th * kDegToRad)).in_beam;
      EXPECT_TRUE(!prev || now);
      prev = now;
    }
  }
}

TEST(Beam, LineOfSight) {
  EXPECT_FALSE(line_of_sight(EcefVector(42164, 0, 0), EcefVector(-7000, 0, 0), constants::kEarthRadius));
  EXPECT_TRUE(line_of_sight(EcefVector(42164, 0, 0), EcefVector(7000, 0, 0), constants::kEarthRadius));
  EXPECT_TRUE(line_of_sight(EcefVector(42164, 0, 0), EcefVector(0, 7000, 0), constants::kEarthRadius));
}

TEST(Beam, VisibleCountAtDefaultBeam) {
  // Default beam, 60 satellites, nadir from GEO: every epoch sees roughly 10 to 25 sensors.
  SensingConfig sc;
  sc.constellation = ConstellationConfig::with_size(60);
  const SensingModel model(sc);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> t(0, 86400);
  int in_range = 0;
  for (int k = 0; k < 500; ++k) {
    const auto n = model.snapshot(kGeo, t(rng)).visible.size();
    if (n >= 10 && n <= 25) ++in_range;
  }
  EXPECT_GE(in_range, 475);
}

TEST(Tdoa, Examples) {
  auto rng = make_rng(1);
  const EcefVector src(0, 0, 0);
  std::vector<EcefVector> s{EcefVector(1000, 0, 0), EcefVector(0, 1000, 0), EcefVector(0, 0, 1300)};
  const auto tau = tdoa_measure(src, s, 0.0, rng);
  ASSERT_EQ(tau.tau.size(), 2u);
  EXPECT_EQ(tau.tau[0], 0.0);
  EXPECT_NEAR(tau.tau[1], 300.0 / constants::kLightSpeed, 1e-18);
  EXPECT_NEAR(tau.tau[1], 1.0007e-3, 1e-7);
  EXPECT_THROW(tdoa_measure(src, std::vector<EcefVector>{s[0]}, 0.0, rng), GeometryError);
}

TEST(Tdoa, NoiseMean) {
  auto rng = make_rng(2);
  const EcefVector src(0, 0, 0);
  std::vector<EcefVector> s{EcefVector(1000, 0, 0), EcefVector(0, 0, 1300)};
  const double sigma = 1e-6;
  const int n = 100000;
  double sum = 0;
  for (int i = 0; i < n; ++i) sum += tdoa_measure(src, s, sigma, rng).tau[0];
  EXPECT_NEAR(sum / n, 300.0 / constants::kLightSpeed, 3 * sigma / std::sqrt(n));
}

TEST(Crlb, MatchesDenseFormula) {
  // Oracle: build J and the full Q_f explicitly and invert with Eigen.
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const auto sensors = random_sensors(rng, 8);
    const EcefVector src(kGeo);
    const double sd = 5e-8;
    const int m = 7;
    Eigen::MatrixXd J(m, 3);
    const Vec3 r0 = (sensors[0].v - src.v).normalized();
    for (int i = 0; i < m; ++i) J.row(i) = ((sensors[static_cast<std::size_t>(i) + 1].v - src.v).normalized() - r0).transpose();
    const double c2 = constants::kLightSpeed * constants::kLightSpeed * sd * sd;
    Eigen::MatrixXd Q = Eigen::MatrixXd::Constant(m, m, 0.5 * c2);
    Q.diagonal().array() = c2;
    const Eigen::Matrix3d ref = (J.transpose() * Q.inverse() * J).inverse();
    const auto got = crlb(src, sensors, sd);
    ASSERT_FALSE(got.singular);
    EXPECT_LT((got.covariance - ref).cwiseAbs().maxCoeff(), 1e-6 * ref.cwiseAbs().maxCoeff());
  }
}

TEST(Crlb, ScalesWithTimingSquared) {
  std::mt19937_64 rng(4);
  const auto sensors = random_sensors(rng, 10);
  const auto a = crlb(kGeo, sensors, 1e-7);
  const auto b = crlb(kGeo, sensors, 3e-7);
  EXPECT_LT((b.covariance - 9.0 * a.covariance).cwiseAbs().maxCoeff(), 1e-9 * b.covariance.cwiseAbs().maxCoeff());
}

TEST(Crlb, AddingSensorNeverHurts) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 100; ++k) {
    auto sensors = random_sensors(rng, 6);
    const auto a = crlb(kGeo, sensors, 1e-7);
    sensors.push_back(random_sensors(rng, 1)[0]);
    const auto b = crlb(kGeo, sensors, 1e-7);
    ASSERT_FALSE(a.singular);
    for (int i = 0; i < 3; ++i) EXPECT_LE(b.covariance(i, i), a.covariance(i, i) * (1 + 1e-9));
  }
}

TEST(Crlb, SymmetricPsdAndRotationCovariant) {
  std::mt19937_64 rng(6);
  for (int k = 0; k < 50; ++k) {
    const auto sensors = random_sensors(rng, 9);
    const auto a = crlb(kGeo, sensors, 1e-7);
    EXPECT_EQ((a.covariance - a.covariance.transpose()).norm(), 0.0);
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(a.covariance);
    EXPECT_GT(eig.eigenvalues().minCoeff(), -1e-9);

    const Mat3 R = random_rotation(rng);
    std::vector<EcefVector> rotated;
    for (const auto& s : sensors) rotated.emplace_back(Vec3(R * s.v));
    const auto b = crlb(EcefVector(Vec3(R * kGeo.v)), rotated, 1e-7);
    const Mat3 expect = R * a.covariance * R.transpose();
    EXPECT_LT((b.covariance - expect).cwiseAbs().maxCoeff(), 1e-6 * expect.cwiseAbs().maxCoeff());
  }
}

TEST(Crlb, DegenerateGeometryIsFlagged) {
  std::mt19937_64 rng(7);
  auto three = random_sensors(rng, 3);
  const auto a = crlb(kGeo, three, 1e-7);
  EXPECT_TRUE(a.singular);
  EXPECT_NEAR(a.sigma().x(), kUnobservableSigma, 1e-9);
  // Collinear sensors along one ray from the source carry no information.
  std::vector<EcefVector> line;
  for (int i = 0; i < 6; ++i) line.emplace_back(Vec3(kGeo.v * (0.1 + 0.1 * i)));
  EXPECT_TRUE(crlb(kGeo, line, 1e-7).singular);
  EXPECT_THROW(crlb(kGeo, line, 0.0), DomainError);
}

TEST(Estimate, AlphaZeroIsExact) {
  std::mt19937_64 g(1);
  const auto bound = crlb(kGeo, random_sensors(g, 8), 1e-7);
  auto rng = make_rng(3);
  const auto e = sample_estimate(kGeo, bound, 0.0, rng, 12.0);
  EXPECT_EQ(e.z.v, kGeo.v);
  EXPECT_EQ(e.sigma, Vec3::Zero());
  EXPECT_EQ(e.t, 12.0);
  EXPECT_THROW(sample_estimate(kGeo, bound, -1.0, rng), DomainError);
}

TEST(Estimate, SamplerCalibration) {
  std::mt19937_64 g(2);
  const auto bound = crlb(kGeo, random_sensors(g, 8), 1e-7);
  auto rng = make_rng(4);
  const int n = 100000;
  Vec3 sum = Vec3::Zero(), sq = Vec3::Zero();
  for (int i = 0; i < n; ++i) {
    const Vec3 d = sample_estimate(kGeo, bound, 1.0, rng).z.v - kGeo.v;
    sum += d;
    sq += d.cwiseProduct(d);
  }
  const Vec3 mean = sum / n;
  const Vec3 sd = (sq / n - mean.cwiseProduct(mean)).cwiseSqrt();
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(sd(k) / bound.sigma()(k), 1.0, 0.02);
  auto r2 = make_rng(4);
  const auto e = sample_estimate(kGeo, bound, 2.5, r2);
  EXPECT_LT((e.sigma - 2.5 * bound.sigma()).norm(), 1e-15);
}

TEST(Sensing, ObserveIsReproducible) {
  SensingConfig sc;
  const SensingModel model(sc);
  auto r1 = make_rng(5), r2 = make_rng(5);
  const auto a = model.observe(kGeo, 100.0, 1.0, r1);
  const auto b = model.observe(kGeo, 100.0, 1.0, r2);
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->z.v, b->z.v);
  EXPECT_GE(a->n_sensors_visible, 4);
}

TEST(Sensing, BeamTargetOption) {
  SensingConfig sc;
  sc.beam_target = Vec3(0, 0, 0);
  const SensingModel m1(sc);
  const auto b = m1.beam_for(kGeo);
  EXPECT_LT((b.center_dir - Vec3(-1, 0, 0)).norm(), 1e-15);
  sc.sigma_d = 0.0;
  EXPECT_THROW(SensingModel{sc}, ConfigError);
}
