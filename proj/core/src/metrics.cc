#include "cmc/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "cmc/error.h"

namespace cmc {
namespace {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kEigenFloor = 1e-10;    // treated as an exact zero
constexpr double kPsdTolerance = 1e-8;   // negative eigenvalue allowance
constexpr double kSymmetryTolerance = 1e-9;
constexpr double kFidFloor = -1e-6;
constexpr double kRowSumTolerance = 1e-5;

Matrix to_matrix(std::span<const double> values, std::size_t dim) {
  Matrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) m(i, j) = values[i * dim + j];
  }
  return m;
}

double scale_of(const Matrix& m) { return std::max(1.0, m.cwiseAbs().maxCoeff()); }

void check_symmetric(const Matrix& m) {
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolerance * scale_of(m)) {
    throw Error(ErrorCode::kNumerical, "covariance is not symmetric");
  }
}

// Eigenvalues of a symmetric matrix with the PSD check applied; values
// below the floor are set to zero.
Eigen::SelfAdjointEigenSolver<Matrix> psd_eigen(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumerical, "eigendecomposition failed");
  }
  if (m.size() > 0 && solver.eigenvalues().minCoeff() < -kPsdTolerance * scale_of(m)) {
    throw Error(ErrorCode::kNumerical, "matrix is not positive semi-definite");
  }
  return solver;
}

Matrix sqrtm(const Matrix& m) {
  const auto solver = psd_eigen(m);
  Eigen::VectorXd roots = solver.eigenvalues().unaryExpr(
      [](double v) { return v < kEigenFloor ? 0.0 : std::sqrt(v); });
  return solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().transpose();
}

void check_stats(const GaussianStats& s) {
  if (s.dim == 0 || s.mean.size() != s.dim || s.covariance.size() != s.dim * s.dim) {
    throw Error(ErrorCode::kInvalidArgument, "malformed Gaussian statistics");
  }
}

double kl_to_marginal(std::span<const double> row, std::span<const double> marginal) {
  double kl = 0.0;
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (row[k] > 0.0) kl += row[k] * std::log(row[k] / marginal[k]);
  }
  return kl;
}

double score_rows(const FeatureMatrix& p, std::size_t begin, std::size_t end) {
  const std::size_t k = p.cols();
  std::vector<double> marginal(k, 0.0);
  for (std::size_t i = begin; i < end; ++i) {
    for (std::size_t c = 0; c < k; ++c) marginal[c] += p.at(i, c);
  }
  for (double& m : marginal) m /= static_cast<double>(end - begin);
  double mean_kl = 0.0;
  for (std::size_t i = begin; i < end; ++i) mean_kl += kl_to_marginal(p.row(i), marginal);
  return std::exp(mean_kl / static_cast<double>(end - begin));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  const double na = std::sqrt(dot(a, a));
  const double nb = std::sqrt(dot(b, b));
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

}  // namespace

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols,
                             std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorCode::kInvalidArgument, "feature matrix needs n >= 1 and d >= 1");
  }
  if (values_.size() != rows * cols) {
    throw Error(ErrorCode::kInvalidArgument, "feature matrix size mismatch");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, "feature matrix holds a non-finite value");
    }
  }
}

ProbMatrix::ProbMatrix(FeatureMatrix values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.rows(); ++i) {
    double sum = 0.0;
    for (double v : values_.row(i)) {
      if (v < 0.0 || v > 1.0) {
        throw Error(ErrorCode::kInvalidArgument, "probability outside [0, 1]");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw Error(ErrorCode::kInvalidArgument,
                  "row " + std::to_string(i) + " does not sum to 1");
    }
  }
}

double mean_squared_error(const Image& a, const Image& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorCode::kInvalidArgument, "images differ in size");
  }
  double sum = 0.0;
  const auto pa = a.pixels();
  const auto pb = b.pixels();
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const double dr = pa[i].r - pb[i].r;
    const double dg = pa[i].g - pb[i].g;
    const double db = pa[i].b - pb[i].b;
    sum += dr * dr + dg * dg + db * db;
  }
  return sum / (3.0 * static_cast<double>(pa.size()));
}

double psnr(const Image& a, const Image& b, int bits) {
  if (bits < 1 || bits > 16) {
    throw Error(ErrorCode::kInvalidArgument, "bits must be in 1..16");
  }
  const double mse = mean_squared_error(a, b);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  const double peak = std::ldexp(1.0, bits) - 1.0;
  return 10.0 * std::log10(peak * peak / mse);
}

double inception_score(const ProbMatrix& probs, std::size_t splits) {
  const std::size_t n = probs.rows();
  if (splits == 0 || splits > n) {
    throw Error(ErrorCode::kInvalidArgument, "splits must be in 1..n");
  }
  double total = 0.0;
  for (std::size_t s = 0; s < splits; ++s) {
    total += score_rows(probs.matrix(), s * n / splits, (s + 1) * n / splits);
  }
  return total / static_cast<double>(splits);
}

GaussianStats gaussian_stats(const FeatureMatrix& features) {
  const std::size_t n = features.rows();
  const std::size_t d = features.cols();
  if (n < 2) {
    throw Error(ErrorCode::kInsufficientSamples, "covariance needs at least two samples");
  }
  GaussianStats stats;
  stats.dim = d;
  stats.mean.assign(d, 0.0);
  stats.covariance.assign(d * d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) stats.mean[j] += features.at(i, j);
  }
  for (double& m : stats.mean) m /= static_cast<double>(n);
  std::vector<double> centered(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) centered[j] = features.at(i, j) - stats.mean[j];
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = a; b < d; ++b) stats.covariance[a * d + b] += centered[a] * centered[b];
    }
  }
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a; b < d; ++b) {
      const double v = stats.covariance[a * d + b] / static_cast<double>(n - 1);
      stats.covariance[a * d + b] = v;
      stats.covariance[b * d + a] = v;
    }
  }
  return stats;
}

double fid(const GaussianStats& a, const GaussianStats& b) {
  check_stats(a);
  check_stats(b);
  if (a.dim != b.dim) {
    throw Error(ErrorCode::kInvalidArgument, "feature dimensions differ");
  }
  const std::size_t d = a.dim;
  const Matrix c1 = to_matrix(a.covariance, d);
  const Matrix c2 = to_matrix(b.covariance, d);
  check_symmetric(c1);
  check_symmetric(c2);
  psd_eigen(c1);

  const Matrix root2 = sqrtm(c2);
  Matrix product = root2 * c1 * root2;
  product = 0.5 * (product + product.transpose()).eval();
  const auto spectrum = psd_eigen(product).eigenvalues();
  double trace_sqrt = 0.0;
  for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
    if (spectrum[i] >= kEigenFloor) trace_sqrt += std::sqrt(spectrum[i]);
  }

  double mean_term = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double diff = a.mean[i] - b.mean[i];
    mean_term += diff * diff;
  }
  const double value = mean_term + c1.trace() + c2.trace() - 2.0 * trace_sqrt;
  if (value < kFidFloor) {
    throw Error(ErrorCode::kNumerical, "FID evaluated below the numerical floor");
  }
  return std::max(value, 0.0);
}

std::vector<double> ipd_per_sample(const FeatureMatrix& source,
                                   const FeatureMatrix& reconstruction) {
  if (source.rows() != reconstruction.rows() || source.cols() != reconstruction.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "feature matrices differ in shape");
  }
  std::vector<double> out(source.rows());
  for (std::size_t i = 0; i < source.rows(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < source.cols(); ++j) {
      const double diff = reconstruction.at(i, j) - source.at(i, j);
      sum += diff * diff;
    }
    out[i] = sum;
  }
  return out;
}

double ipd(const FeatureMatrix& source, const FeatureMatrix& reconstruction) {
  const auto per_sample = ipd_per_sample(source, reconstruction);
  double sum = 0.0;
  for (double v : per_sample) sum += v;
  return sum / static_cast<double>(per_sample.size());
}

double matching_score(const FeatureMatrix& words, const FeatureMatrix& regions,
                      const MatchingConfig& config) {
  if (!(config.gamma1 > 0.0) || !(config.gamma2 > 0.0) ||
      !std::isfinite(config.gamma1) || !std::isfinite(config.gamma2)) {
    throw Error(ErrorCode::kInvalidArgument, "gamma1 and gamma2 must be finite and positive");
  }
  if (words.cols() != regions.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "word and region dimensions differ");
  }
  const std::size_t d = words.cols();
  const std::size_t regions_n = regions.rows();
  std::vector<double> weights(regions_n);
  std::vector<double> context(d);
  std::vector<double> relevance(words.rows());

  for (std::size_t j = 0; j < words.rows(); ++j) {
    const auto e = words.row(j);
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < regions_n; ++l) {
      weights[l] = config.gamma1 * dot(e, regions.row(l));
      peak = std::max(peak, weights[l]);
    }
    double norm = 0.0;
    for (double& w : weights) {
      w = std::exp(w - peak);
      norm += w;
    }
    std::fill(context.begin(), context.end(), 0.0);
    for (std::size_t l = 0; l < regions_n; ++l) {
      const auto v = regions.row(l);
      for (std::size_t k = 0; k < d; ++k) context[k] += weights[l] / norm * v[k];
    }
    relevance[j] = config.gamma2 * cosine(context, e);
  }
  const double peak = *std::max_element(relevance.begin(), relevance.end());
  double sum = 0.0;
  for (double r : relevance) sum += std::exp(r - peak);
  return (peak + std::log(sum)) / config.gamma2;
}

std::vector<double> symmetric_sqrtm(std::span<const double> matrix, std::size_t dim) {
  if (dim == 0 || matrix.size() != dim * dim) {
    throw Error(ErrorCode::kInvalidArgument, "matrix is not dim x dim");
  }
  const Matrix m = to_matrix(matrix, dim);
  check_symmetric(m);
  const Matrix root = sqrtm(m);
  return std::vector<double>(root.data(), root.data() + root.size());
}

}  // namespace cmc
