#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cmc/bitstream.h"
#include "cmc/entropy.h"
#include "cmc/error.h"
#include "cmc/image.h"
#include "cmc/random.h"
#include "cmc/rate.h"
#include "cmc/scene.h"

namespace cmc {

// ---------------------------------------------------------------------------
// Corpus generation

// Non-semantic detail added to generated source images. The caption does
// not carry it, so it bounds the pixel fidelity of a caption round trip.
struct Nuisance {
  double max_jitter_px = 4.0;  // uniform sub-cell shift per object and axis
  int noise_amplitude = 8;     // uniform additive noise per sample
};

struct CorpusItem {
  std::string id;  // "img_0000", ...
  SceneGraph scene;
  Image image;
  std::string caption;
};

// A scene whose layout the caption anchoring rule reproduces: the first
// object at (1, 1) and every later object directly below or to the right of
// the previous one. Attributes are uniform.
SceneGraph random_anchored_scene(Rng& rng);

std::vector<CorpusItem> make_corpus(std::size_t n, std::uint64_t seed,
                                    const Nuisance& nuisance = {},
                                    int width = 256, int height = 256);

// Captions of random anchored scenes, for codebook training.
std::vector<std::string> make_caption_corpus(std::size_t n, std::uint64_t seed);

// Writes <id>.ppm, <id>.scene and captions.txt (one caption per line) into
// `outdir`, creating it if needed. Throws Error(kIo) when the directory
// cannot be written.
void generate_corpus(std::size_t n, std::uint64_t seed,
                     const std::filesystem::path& outdir,
                     const Nuisance& nuisance = {});

// Reads every <id>.ppm / <id>.scene pair from `dir`, sorted by id.
std::vector<CorpusItem> load_corpus(const std::filesystem::path& dir);

// ---------------------------------------------------------------------------
// Caption pipeline

namespace stage {
inline constexpr const char* kCmcEncoder = "cmc-encoder";
inline constexpr const char* kEntropyEncoder = "entropy-encoder";
inline constexpr const char* kEntropyDecoder = "entropy-decoder";
inline constexpr const char* kCmcDecoder = "cmc-decoder";
}  // namespace stage

// An error raised inside one pipeline stage. code() is the underlying
// error's code.
class PipelineError : public Error {
 public:
  PipelineError(std::string stage, const Error& cause);

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

// Image -> scene -> caption -> Huffman bitstream.
Bitstream cmc_encode(const Image& image, const Codebook& codebook,
                     std::string* caption_out = nullptr);
// Bitstream -> caption -> scene -> raster of the requested size.
Image cmc_decode(const Bitstream& bitstream, const Codebook& codebook,
                 int width, int height, std::string* caption_out = nullptr);

struct CmcResult {
  Bitstream bitstream;
  Image reconstruction;
  std::string caption;
  double rate_bytes = 0.0;  // serialized container size
};

// Full round trip at the source resolution. Stage failures surface as
// PipelineError.
CmcResult run_cmc_pipeline(const Image& image, const Codebook& codebook);

// ---------------------------------------------------------------------------
// Rate-distortion sweep

struct RunConfig {
  // Corpus directory; empty means generate `corpus_size` images from `seed`.
  std::filesystem::path dataset_dir;
  std::size_t corpus_size = 10;
  bool run_cmc = true;
  bool run_baseline = true;
  std::vector<int> qualities = {10, 20, 30, 40, 50, 60, 70, 80, 90};
  // Empty means train on `training_captions` captions derived from `seed`.
  std::filesystem::path codebook_path;
  std::size_t training_captions = 10000;
  // Optional metric inputs. "{label}" in a path is replaced by the setting
  // label ("cmc", "dct_q50", ...); rows follow corpus id order.
  std::string features_src;
  std::string features_rec;
  std::string probs;
  std::size_t splits = 1;
  // Adds an rd_cost = MSE + lambda * rate_bytes column when set.
  std::optional<double> lambda;
  std::uint64_t seed = 1;
};

struct ReportRow {
  std::string codec;           // "cmc" or "dct"
  std::optional<int> quality;  // baseline only
  std::string image_id;        // "mean" for the per-setting summary row
  double rate_bytes = 0.0;
  double bpp = 0.0;
  double psnr_db = 0.0;
  double mse = 0.0;
  double scene_distance = 0.0;
  std::optional<double> is;
  std::optional<double> fid;
  std::optional<double> ipd;
};

struct RDReport {
  std::vector<RDPoint> points;
  std::vector<ReportRow> rows;  // per-image rows, then summary rows
  std::optional<double> lambda;
};

// Errors: kConfiguration (missing or inconsistent metric inputs), plus any
// corpus or codebook I/O error.
RDReport sweep(const RunConfig& config);

// Columns: codec,quality,image_id,rate_bytes,bpp,psnr_db,scene_distance,
// is,fid,ipd[,rd_cost]. Unavailable metrics are empty fields.
std::string to_csv(const RDReport& report);

// Human-readable per-setting summary.
std::string summarize(const RDReport& report);

}  // namespace cmc
