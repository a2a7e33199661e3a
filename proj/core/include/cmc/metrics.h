#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cmc/image.h"

namespace cmc {

// n x d matrix of finite reals, row-major; one row per sample.
class FeatureMatrix {
 public:
  // Throws Error(kInvalidArgument) on a zero dimension, a size mismatch or a
  // non-finite value.
  FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double at(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(values_).subspan(i * cols_, cols_);
  }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

// Rows are conditional label distributions p(y|x): entries in [0, 1] and
// row sums within 1e-5 of one.
class ProbMatrix {
 public:
  explicit ProbMatrix(FeatureMatrix values);
  ProbMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
      : ProbMatrix(FeatureMatrix(rows, cols, std::move(values))) {}

  const FeatureMatrix& matrix() const noexcept { return values_; }
  std::size_t rows() const noexcept { return values_.rows(); }
  std::size_t cols() const noexcept { return values_.cols(); }

 private:
  FeatureMatrix values_;
};

struct GaussianStats {
  std::size_t dim = 0;
  std::vector<double> mean;        // dim
  std::vector<double> covariance;  // dim x dim, row-major
};

struct MatchingConfig {
  double gamma1 = 5.0;  // attention sharpness over regions
  double gamma2 = 5.0;  // weight of the best-matching words
};

// 10 log10((2^bits - 1)^2 / MSE) over all channels; +infinity when the
// images are identical. Throws Error(kInvalidArgument) on a size mismatch
// or bits outside 1..16.
double psnr(const Image& a, const Image& b, int bits = 8);
double mean_squared_error(const Image& a, const Image& b);

// exp(mean KL(p(y|x) || p(y))) with natural logs and 0 log 0 = 0. With
// splits > 1 the rows are cut into contiguous chunks and the per-chunk
// scores averaged.
double inception_score(const ProbMatrix& probs, std::size_t splits = 1);

// Sample mean and unbiased covariance. Needs at least two rows
// (Error(kInsufficientSamples)).
GaussianStats gaussian_stats(const FeatureMatrix& features);

// ||m1 - m2||^2 + Tr(C1) + Tr(C2) - 2 Tr((C1 C2)^(1/2)). The trace of the
// square root is taken from the spectrum of C2^(1/2) C1 C2^(1/2), which
// shares its nonzero eigenvalues with C1 C2 and is symmetric. Errors:
// kInvalidArgument (dimension mismatch), kNumerical (asymmetric or
// indefinite covariance, or a result below -1e-6).
double fid(const GaussianStats& a, const GaussianStats& b);

// Mean over paired rows of the squared Euclidean distance.
double ipd(const FeatureMatrix& source, const FeatureMatrix& reconstruction);
std::vector<double> ipd_per_sample(const FeatureMatrix& source,
                                   const FeatureMatrix& reconstruction);

// Attention-driven image-text matching score. Each row of `words` is one
// word vector e_j (J rows), each row of `regions` one region vector v_l
// (L rows), all of the same dimension d. For every word, a softmax over
// regions of gamma1 * e_j . v_l weights the region context c_j; the score
// is log(sum_j exp(gamma2 * cos(c_j, e_j))) / gamma2. Zero vectors give a
// cosine of 0.
double matching_score(const FeatureMatrix& words, const FeatureMatrix& regions,
                      const MatchingConfig& config = {});

// Principal square root of a symmetric positive semi-definite d x d matrix
// (row-major). Eigenvalues below 1e-10 are treated as zero; eigenvalues
// below -1e-8 raise Error(kNumerical).
std::vector<double> symmetric_sqrtm(std::span<const double> matrix, std::size_t dim);

}  // namespace cmc
