#pragma once

// Brute-force reference implementations. They share no code with cmc_core
// beyond the input types, and favour literal transcription over speed.

#include <cstdint>
#include <vector>

#include "cmc/image.h"

namespace cmc::oracle {

using Dense = std::vector<std::vector<double>>;

// Direct double sum of the 2-D DCT-II / inverse, O(n^4).
std::vector<double> dct_direct(const std::vector<double>& block);
std::vector<double> idct_direct(const std::vector<double>& coeffs);

// Huffman code lengths by repeated merging of the two lightest groups.
std::vector<unsigned> huffman_lengths(const std::vector<std::uint64_t>& counts);

double psnr(const Image& a, const Image& b, int bits);

// rows: n x k probabilities.
double inception_score(const Dense& rows);

struct Moments {
  std::vector<double> mean;
  Dense covariance;
};
Moments two_pass_moments(const Dense& rows);

// FID with Tr((C1 C2)^(1/2)) from a Denman-Beavers iteration on the raw,
// non-symmetric product C1 C2.
double fid(const Moments& a, const Moments& b);

double ipd(const Dense& src, const Dense& rec);

// Literal transcription: e is d x J (columns are words), v is d x L.
double matching_score(const Dense& e, const Dense& v, double gamma1, double gamma2);

Dense matmul(const Dense& a, const Dense& b);
Dense inverse(Dense a);
Dense transpose(const Dense& a);

}  // namespace cmc::oracle
