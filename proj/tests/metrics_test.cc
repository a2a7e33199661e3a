#include <cmath>
#include <filesystem>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "cmc/error.h"
#include "cmc/image.h"
#include "cmc/metric_io.h"
#include "cmc/metrics.h"
#include "cmc/random.h"
#include "oracles.h"
#include "test_util.h"

namespace cmc {
namespace {

using ::cmc::testing::CodeOf;
using oracle::Dense;

FeatureMatrix RandomFeatures(Rng& rng, std::size_t n, std::size_t d) {
  std::vector<double> v(n * d);
  for (auto& x : v) x = rng.uniform(-2.0, 2.0);
  return FeatureMatrix(n, d, v);
}

ProbMatrix RandomProbs(Rng& rng, std::size_t n, std::size_t k) {
  std::vector<double> v(n * k);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) sum += v[i * k + c] = rng.uniform() + 1e-3;
    for (std::size_t c = 0; c < k; ++c) v[i * k + c] /= sum;
  }
  return ProbMatrix(n, k, v);
}

Dense ToDense(const FeatureMatrix& m) {
  Dense out(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m.at(i, j);
  }
  return out;
}

GaussianStats Diagonal(std::vector<double> mean, std::vector<double> diag) {
  GaussianStats s;
  s.dim = mean.size();
  s.mean = std::move(mean);
  s.covariance.assign(s.dim * s.dim, 0.0);
  for (std::size_t i = 0; i < s.dim; ++i) s.covariance[i * s.dim + i] = diag[i];
  return s;
}

TEST(PsnrTest, Examples) {
  const Image a(16, 16, Rgb{100, 100, 100});
  const Image b(16, 16, Rgb{116, 84, 116});
  EXPECT_EQ(psnr(a, a), std::numeric_limits<double>::infinity());
  EXPECT_NEAR(psnr(a, b), 24.048404, 1e-6);
  EXPECT_NEAR(psnr(Image(4, 4, Rgb{0, 0, 0}), Image(4, 4, Rgb{255, 255, 255})), 0.0, 1e-12);
}

TEST(PsnrTest, SymmetricAndMatchesOracle) {
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    Image a(9, 7), b(9, 7);
    for (int y = 0; y < 7; ++y) {
      for (int x = 0; x < 9; ++x) {
        a.at(x, y) = {static_cast<std::uint8_t>(rng.below(256)), 0, 255};
        b.at(x, y) = {static_cast<std::uint8_t>(rng.below(256)), 1, 250};
      }
    }
    EXPECT_DOUBLE_EQ(psnr(a, b), psnr(b, a));
    EXPECT_NEAR(psnr(a, b), oracle::psnr(a, b, 8), 1e-10);
  }
}

TEST(PsnrTest, DecreasesWithError) {
  const Image a(8, 8, Rgb{128, 128, 128});
  double prev = std::numeric_limits<double>::infinity();
  for (int d = 1; d < 120; d += 7) {
    const auto v = static_cast<std::uint8_t>(128 + d);
    const double p = psnr(a, Image(8, 8, Rgb{v, v, v}));
    EXPECT_LT(p, prev);
    prev = p;
  }
}

TEST(PsnrTest, Errors) {
  EXPECT_EQ(CodeOf([] { psnr(Image(4, 4), Image(4, 5)); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { psnr(Image(4, 4), Image(4, 4), 0); }), ErrorCode::kInvalidArgument);
}

TEST(InceptionScoreTest, Examples) {
  EXPECT_DOUBLE_EQ(inception_score(ProbMatrix(3, 2, {0.3, 0.7, 0.3, 0.7, 0.3, 0.7})), 1.0);
  EXPECT_NEAR(inception_score(ProbMatrix(2, 2, {1, 0, 0, 1})), 2.0, 1e-12);
}

TEST(InceptionScoreTest, EqualOneHotClasses) {
  for (std::size_t k = 2; k <= 5; ++k) {
    std::vector<double> v;
    for (std::size_t rep = 0; rep < 3; ++rep) {
      for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t j = 0; j < k; ++j) v.push_back(j == c ? 1.0 : 0.0);
      }
    }
    EXPECT_NEAR(inception_score(ProbMatrix(3 * k, k, v)), static_cast<double>(k), 1e-9);
  }
}

TEST(InceptionScoreTest, MatchesOracle) {
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const ProbMatrix p = RandomProbs(rng, 50, 10);
    EXPECT_NEAR(inception_score(p), oracle::inception_score(ToDense(p.matrix())), 1e-10);
  }
}

TEST(InceptionScoreTest, Splits) {
  Rng rng(3);
  const ProbMatrix p = RandomProbs(rng, 40, 6);
  const Dense rows = ToDense(p.matrix());
  const double expected =
      (oracle::inception_score(Dense(rows.begin(), rows.begin() + 20)) +
       oracle::inception_score(Dense(rows.begin() + 20, rows.end()))) / 2.0;
  EXPECT_NEAR(inception_score(p, 2), expected, 1e-10);
  EXPECT_EQ(CodeOf([&] { inception_score(p, 0); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { inception_score(p, 41); }), ErrorCode::kInvalidArgument);
}

TEST(ProbMatrixTest, Validation) {
  EXPECT_EQ(CodeOf([] { ProbMatrix(1, 2, {0.5, 0.6}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { ProbMatrix(1, 2, {1.5, -0.5}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { FeatureMatrix(1, 2, {1.0, NAN}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { FeatureMatrix(2, 2, {1.0}); }), ErrorCode::kInvalidArgument);
}

TEST(GaussianStatsTest, Examples) {
  const GaussianStats s = gaussian_stats(FeatureMatrix(2, 2, {0, 0, 2, 2}));
  EXPECT_EQ(s.mean, (std::vector<double>{1, 1}));
  EXPECT_EQ(s.covariance, (std::vector<double>{2, 2, 2, 2}));
  const GaussianStats c = gaussian_stats(FeatureMatrix(3, 2, {5, 1, 5, 1, 5, 1}));
  for (double v : c.covariance) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(CodeOf([] { gaussian_stats(FeatureMatrix(1, 2, {0, 0})); }),
            ErrorCode::kInsufficientSamples);
}

TEST(GaussianStatsTest, MatchesTwoPassOracle) {
  Rng rng(4);
  for (int i = 0; i < 10; ++i) {
    const FeatureMatrix f = RandomFeatures(rng, 100, 8);
    const GaussianStats s = gaussian_stats(f);
    const auto ref = oracle::two_pass_moments(ToDense(f));
    for (std::size_t a = 0; a < 8; ++a) {
      EXPECT_NEAR(s.mean[a], ref.mean[a], 1e-10);
      for (std::size_t b = 0; b < 8; ++b) {
        EXPECT_NEAR(s.covariance[a * 8 + b], ref.covariance[a][b], 1e-10);
      }
    }
  }
}

TEST(FidTest, Examples) {
  Rng rng(5);
  const GaussianStats s = gaussian_stats(RandomFeatures(rng, 50, 6));
  EXPECT_NEAR(fid(s, s), 0.0, 1e-6);
  EXPECT_NEAR(fid(Diagonal({0, 0}, {1, 1}), Diagonal({2, 0}, {1, 1})), 4.0, 1e-12);
  EXPECT_NEAR(fid(Diagonal({0, 0}, {4, 4}), Diagonal({0, 0}, {1, 1})), 2.0, 1e-12);
}

TEST(FidTest, MatchesDenmanBeaversOracleAndIsSymmetric) {
  Rng rng(6);
  for (int i = 0; i < 10; ++i) {
    const std::size_t d = 2 + rng.below(10);
    const auto fa = RandomFeatures(rng, 3 * d, d), fb = RandomFeatures(rng, 3 * d, d);
    const GaussianStats a = gaussian_stats(fa), b = gaussian_stats(fb);
    const double ref = oracle::fid(oracle::two_pass_moments(ToDense(fa)),
                                   oracle::two_pass_moments(ToDense(fb)));
    EXPECT_NEAR(fid(a, b), ref, 1e-8 * std::max(1.0, std::abs(ref)));
    EXPECT_NEAR(fid(a, b), fid(b, a), 1e-9 * std::max(1.0, std::abs(ref)));
    EXPECT_GE(fid(a, b), 0.0);
  }
}

TEST(FidTest, Errors) {
  EXPECT_EQ(CodeOf([] { fid(Diagonal({0}, {1}), Diagonal({0, 0}, {1, 1})); }),
            ErrorCode::kInvalidArgument);
  GaussianStats asym = Diagonal({0, 0}, {1, 1});
  asym.covariance[1] = 0.5;
  EXPECT_EQ(CodeOf([&] { fid(asym, Diagonal({0, 0}, {1, 1})); }), ErrorCode::kNumerical);
  EXPECT_EQ(CodeOf([] { fid(Diagonal({0, 0}, {1, -1}), Diagonal({0, 0}, {1, 1})); }),
            ErrorCode::kNumerical);
}

TEST(SymmetricSqrtmTest, SquaresBack) {
  Rng rng(7);
  for (int i = 0; i < 10; ++i) {
    const std::size_t d = 1 + rng.below(8);
    const GaussianStats s = gaussian_stats(RandomFeatures(rng, 2 * d + 2, d));
    const auto root = symmetric_sqrtm(s.covariance, d);
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) {
        double sum = 0.0;
        for (std::size_t k = 0; k < d; ++k) sum += root[r * d + k] * root[k * d + c];
        EXPECT_NEAR(sum, s.covariance[r * d + c], 1e-9);
        EXPECT_NEAR(root[r * d + c], root[c * d + r], 1e-12);
      }
    }
  }
}

TEST(IpdTest, Examples) {
  const FeatureMatrix a(2, 2, {0, 0, 0, 0});
  EXPECT_EQ(ipd(a, a), 0.0);
  EXPECT_DOUBLE_EQ(ipd(a, FeatureMatrix(2, 2, {1, 0, 0, 2})), 2.5);
  EXPECT_EQ(ipd_per_sample(a, FeatureMatrix(2, 2, {1, 0, 0, 2})),
            (std::vector<double>{1.0, 4.0}));
  EXPECT_EQ(CodeOf([&] { ipd(a, FeatureMatrix(3, 2, {0, 0, 0, 0, 0, 0})); }),
            ErrorCode::kInvalidArgument);
}

TEST(IpdTest, MatchesOracle) {
  Rng rng(8);
  for (int i = 0; i < 10; ++i) {
    const auto a = RandomFeatures(rng, 64, 16), b = RandomFeatures(rng, 64, 16);
    const double ref = oracle::ipd(ToDense(a), ToDense(b));
    EXPECT_NEAR(ipd(a, b), ref, 1e-12 * ref);
  }
}

TEST(MatchingScoreTest, Examples) {
  const FeatureMatrix unit(1, 3, {0.6, 0.8, 0.0});
  const FeatureMatrix ortho(1, 3, {0.0, 0.0, 1.0});
  for (double g1 : {0.5, 5.0}) {
    for (double g2 : {1.0, 5.0, 10.0}) {
      EXPECT_NEAR(matching_score(unit, unit, {g1, g2}), 1.0, 1e-12);
      EXPECT_NEAR(matching_score(unit, ortho, {g1, g2}), 0.0, 1e-12);
    }
  }
}

TEST(MatchingScoreTest, MatchesLiteralOracle) {
  Rng rng(9);
  for (int i = 0; i < 20; ++i) {
    const auto words = RandomFeatures(rng, 2, 5), regions = RandomFeatures(rng, 3, 5);
    const MatchingConfig cfg{rng.uniform(0.5, 6.0), rng.uniform(0.5, 6.0)};
    const double ref = oracle::matching_score(oracle::transpose(ToDense(words)),
                                              oracle::transpose(ToDense(regions)),
                                              cfg.gamma1, cfg.gamma2);
    EXPECT_NEAR(matching_score(words, regions, cfg), ref, 1e-10 * std::max(1.0, std::abs(ref)));
  }
}

TEST(MatchingScoreTest, RegionOrderDoesNotMatter) {
  Rng rng(10);
  const auto words = RandomFeatures(rng, 4, 6);
  const auto regions = RandomFeatures(rng, 5, 6);
  std::vector<double> reversed;
  for (std::size_t l = regions.rows(); l-- > 0;) {
    const auto r = regions.row(l);
    reversed.insert(reversed.end(), r.begin(), r.end());
  }
  EXPECT_NEAR(matching_score(words, regions), matching_score(words, FeatureMatrix(5, 6, reversed)),
              1e-12);
  EXPECT_EQ(CodeOf([&] { matching_score(words, RandomFeatures(rng, 5, 7)); }),
            ErrorCode::kInvalidArgument);
}

TEST(MetricIoTest, RoundTrip) {
  const FeatureMatrix f(2, 3, {1.5, -2.25, 0.0, 4.0, 1e3, -0.125});
  EXPECT_EQ(deserialize_feature_matrix(serialize_feature_matrix(f)), f);
  const auto bytes = serialize_feature_matrix(f);
  EXPECT_EQ(bytes.size(), 12u + 24u);
  EXPECT_EQ(bytes[0], 'F');
  const ProbMatrix p(2, 2, {0.25, 0.75, 1.0, 0.0});
  EXPECT_EQ(deserialize_prob_matrix(serialize_prob_matrix(p)).matrix(), p.matrix());

  const auto dir = std::filesystem::temp_directory_path();
  write_feature_matrix(dir / "cmc_metrics_test.fmat", f);
  EXPECT_EQ(read_feature_matrix(dir / "cmc_metrics_test.fmat"), f);
  write_prob_matrix(dir / "cmc_metrics_test.pmat", p);
  EXPECT_EQ(read_prob_matrix(dir / "cmc_metrics_test.pmat").matrix(), p.matrix());
  std::filesystem::remove(dir / "cmc_metrics_test.fmat");
  std::filesystem::remove(dir / "cmc_metrics_test.pmat");
}

TEST(MetricIoTest, Errors) {
  const auto good = serialize_feature_matrix(FeatureMatrix(1, 2, {1, 2}));
  auto magic = good;
  magic[0] = 'P';
  EXPECT_EQ(CodeOf([&] { deserialize_feature_matrix(magic); }), ErrorCode::kFormat);
  const std::vector<std::uint8_t> short_bytes(good.begin(), good.end() - 1);
  EXPECT_EQ(CodeOf([&] { deserialize_feature_matrix(short_bytes); }), ErrorCode::kTruncation);
  auto huge = good;
  huge[4] = huge[5] = huge[6] = huge[7] = 0xFF;
  EXPECT_EQ(CodeOf([&] { deserialize_feature_matrix(huge); }), ErrorCode::kTruncation);
  EXPECT_EQ(CodeOf([] { read_feature_matrix("/nonexistent/x.fmat"); }), ErrorCode::kIo);
}

}  // namespace
}  // namespace cmc
