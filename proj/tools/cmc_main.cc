// cmc: command-line front end for the caption codec, the baseline DCT codec,
// the metric suite and rate-distortion sweeps.
//
// Exit codes: 0 success, 2 usage or configuration error, 3 data/format
// error, 4 pipeline-stage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cmc/baseline_dct.h"
#include "cmc/caption.h"
#include "cmc/entropy.h"
#include "cmc/harness.h"
#include "cmc/metric_io.h"
#include "cmc/metrics.h"
#include "cmc/ppm.h"
#include "cmc/rate.h"
#include "cmc/scene.h"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitPipeline = 4;

std::string read_text(const std::string& path) {
  const auto bytes = cmc::read_file_bytes(path);
  return std::string(bytes.begin(), bytes.end());
}

void write_text(const std::string& path, const std::string& text) {
  cmc::write_file_bytes(
      path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

struct Options {
  std::uint64_t seed = 1;
  std::string out;
  std::string codebook;
  int quality = 50;
  std::string features_src;
  std::string features_rec;
  std::string probs;
  std::size_t splits = 1;

  std::size_t n = 10;
  bool clean = false;
  std::string input;
  std::string codec = "cmc";
  int width = 256;
  int height = 256;
  std::string scene_file;
  std::string caption;
  bool print_caption = false;
  std::string image_a;
  std::string image_b;
  int bits = 8;
  std::string corpus;
  std::vector<int> qualities = cmc::default_quality_grid();
  double lambda = 0.0;
  std::size_t training_captions = 10000;
};

int run_gen_corpus(const Options& o) {
  cmc::Nuisance nuisance;
  if (o.clean) nuisance = {0.0, 0};
  cmc::generate_corpus(o.n, o.seed, o.out, nuisance);
  std::cout << "wrote " << o.n << " images to " << o.out << "\n";
  return 0;
}

int run_train_codebook(const Options& o) {
  const std::vector<std::string> documents =
      o.input.empty() ? cmc::make_caption_corpus(o.training_captions, o.seed)
                      : split_lines(read_text(o.input));
  const cmc::Codebook codebook = cmc::train_codebook(documents);
  cmc::write_codebook(o.out, codebook);
  std::printf("codebook_id=%u documents=%zu entropy_bits=%.6f mean_code_bits=%.6f\n",
              codebook.id(), documents.size(), cmc::codebook_entropy(codebook),
              cmc::expected_code_length(codebook));
  return 0;
}

int run_encode(const Options& o) {
  const cmc::Image image = cmc::read_ppm(o.input);
  std::optional<cmc::Bitstream> bits;
  if (o.codec == "cmc") {
    std::string caption;
    bits = cmc::cmc_encode(image, cmc::read_codebook(o.codebook), &caption);
    std::cout << "caption: " << caption << "\n";
  } else {
    bits = cmc::encode_image(image, cmc::QuantizerConfig(o.quality),
                             cmc::default_token_codebooks());
  }
  cmc::write_file_bytes(o.out, cmc::serialize_bitstream(*bits));
  const double size = static_cast<double>(bits->serialized_size());
  std::printf("rate_bytes=%zu ratio=%.1f bpp=%.6f\n", bits->serialized_size(),
              cmc::compression_ratio(image.width(), image.height(), size),
              cmc::bits_per_pixel(image.width(), image.height(), size));
  return 0;
}

int run_decode(const Options& o) {
  const cmc::Bitstream bits = cmc::deserialize_bitstream(cmc::read_file_bytes(o.input));
  if (bits.codec() == cmc::CodecId::kCmcText) {
    if (o.codebook.empty()) {
      throw cmc::Error(cmc::ErrorCode::kConfiguration, "caption streams need --codebook");
    }
    std::string caption;
    const cmc::Image image =
        cmc::cmc_decode(bits, cmc::read_codebook(o.codebook), o.width, o.height, &caption);
    cmc::write_ppm(o.out, image);
    std::cout << "caption: " << caption << "\n";
  } else {
    cmc::write_ppm(o.out, cmc::decode_image(bits, cmc::default_token_codebooks()));
  }
  return 0;
}

int run_render(const Options& o) {
  if (o.scene_file.empty() == o.caption.empty()) {
    throw cmc::Error(cmc::ErrorCode::kConfiguration, "give exactly one of --scene or --caption");
  }
  const cmc::SceneGraph scene = o.scene_file.empty()
                                    ? cmc::parse_caption(o.caption)
                                    : cmc::parse_scene_text(read_text(o.scene_file));
  cmc::write_ppm(o.out, cmc::render(scene, o.width, o.height));
  return 0;
}

int run_analyze(const Options& o) {
  const cmc::SceneGraph scene = cmc::analyze(cmc::read_ppm(o.input));
  std::cout << cmc::format_scene_text(scene);
  if (o.print_caption) std::cout << "caption: " << cmc::describe(scene) << "\n";
  return 0;
}

int run_parse(const Options& o) {
  std::cout << cmc::format_scene_text(cmc::parse_caption(o.caption));
  return 0;
}

int run_metrics(const Options& o) {
  bool any = false;
  if (!o.image_a.empty() || !o.image_b.empty()) {
    if (o.image_a.empty() || o.image_b.empty()) {
      throw cmc::Error(cmc::ErrorCode::kConfiguration, "psnr needs --image-a and --image-b");
    }
    std::printf("psnr_db=%.6f\n",
                cmc::psnr(cmc::read_ppm(o.image_a), cmc::read_ppm(o.image_b), o.bits));
    any = true;
  }
  if (!o.probs.empty()) {
    std::printf("is=%.6f splits=%zu\n",
                cmc::inception_score(cmc::read_prob_matrix(o.probs), o.splits), o.splits);
    any = true;
  }
  if (!o.features_src.empty() || !o.features_rec.empty()) {
    if (o.features_src.empty() || o.features_rec.empty()) {
      throw cmc::Error(cmc::ErrorCode::kConfiguration,
                       "feature metrics need --features-src and --features-rec");
    }
    const cmc::FeatureMatrix src = cmc::read_feature_matrix(o.features_src);
    const cmc::FeatureMatrix rec = cmc::read_feature_matrix(o.features_rec);
    std::printf("fid=%.6f\n", cmc::fid(cmc::gaussian_stats(src), cmc::gaussian_stats(rec)));
    if (src.rows() == rec.rows() && src.cols() == rec.cols()) {
      std::printf("ipd=%.6f\n", cmc::ipd(src, rec));
    }
    any = true;
  }
  if (!any) throw cmc::Error(cmc::ErrorCode::kConfiguration, "no metric inputs given");
  return 0;
}

int run_sweep(const Options& o, bool lambda_set) {
  cmc::RunConfig config;
  config.dataset_dir = o.corpus;
  config.corpus_size = o.n;
  config.run_cmc = o.codec == "all" || o.codec == "cmc";
  config.run_baseline = o.codec == "all" || o.codec == "dct";
  config.qualities = o.qualities;
  config.codebook_path = o.codebook;
  config.training_captions = o.training_captions;
  config.features_src = o.features_src;
  config.features_rec = o.features_rec;
  config.probs = o.probs;
  config.splits = o.splits;
  if (lambda_set) config.lambda = o.lambda;
  config.seed = o.seed;

  const cmc::RDReport report = cmc::sweep(config);
  const std::string csv = cmc::to_csv(report);
  if (o.out.empty()) {
    std::cout << csv;
  } else {
    write_text(o.out, csv);
    std::cout << cmc::summarize(report);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Caption-domain image compression toolkit"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen-corpus", "Generate a synthetic scene corpus");
  gen->add_option("--n", o.n, "Number of images")->check(CLI::PositiveNumber);
  gen->add_option("--seed", o.seed, "Random seed");
  gen->add_option("--out", o.out, "Output directory")->required();
  gen->add_flag("--clean", o.clean, "Render without jitter or noise");

  auto* train = app.add_subcommand("train-codebook", "Train a caption Huffman codebook");
  train->add_option("captions", o.input, "Caption file, one caption per line");
  train->add_option("--n", o.training_captions, "Generated captions when no file is given");
  train->add_option("--seed", o.seed, "Seed for generated captions");
  train->add_option("--out", o.out, "Codebook file")->required();

  auto* enc = app.add_subcommand("encode", "Compress a PPM image");
  enc->add_option("input", o.input, "Input PPM")->required();
  enc->add_option("--out", o.out, "Output bitstream")->required();
  enc->add_option("--codec", o.codec, "cmc or dct")->check(CLI::IsMember({"cmc", "dct"}));
  enc->add_option("--codebook", o.codebook, "Caption codebook (cmc)");
  enc->add_option("--quality", o.quality, "Quality 1..100 (dct)")->check(CLI::Range(1, 100));

  auto* dec = app.add_subcommand("decode", "Decompress a bitstream to PPM");
  dec->add_option("input", o.input, "Input bitstream")->required();
  dec->add_option("--out", o.out, "Output PPM")->required();
  dec->add_option("--codebook", o.codebook, "Caption codebook (cmc)");
  dec->add_option("--width", o.width, "Output width (cmc)");
  dec->add_option("--height", o.height, "Output height (cmc)");

  auto* ren = app.add_subcommand("render", "Render a scene file or caption");
  ren->add_option("--scene", o.scene_file, "Scene text file");
  ren->add_option("--caption", o.caption, "Caption text");
  ren->add_option("--out", o.out, "Output PPM")->required();
  ren->add_option("--width", o.width, "Width");
  ren->add_option("--height", o.height, "Height");

  auto* ana = app.add_subcommand("analyze", "Detect the scene graph of a PPM image");
  ana->add_option("input", o.input, "Input PPM")->required();
  ana->add_flag("--caption", o.print_caption, "Also print the caption");

  auto* par = app.add_subcommand("parse", "Parse a caption into a scene graph");
  par->add_option("caption", o.caption, "Caption text")->required();

  auto* met = app.add_subcommand("metrics", "Compute PSNR, IS, FID and IPD");
  met->add_option("--image-a", o.image_a, "First PPM (psnr)");
  met->add_option("--image-b", o.image_b, "Second PPM (psnr)");
  met->add_option("--bits", o.bits, "Bits per sample (psnr)");
  met->add_option("--probs", o.probs, "PMAT file (is)");
  met->add_option("--splits", o.splits, "IS splits")->check(CLI::PositiveNumber);
  met->add_option("--features-src", o.features_src, "Source FMAT file");
  met->add_option("--features-rec", o.features_rec, "Reconstruction FMAT file");

  auto* swp = app.add_subcommand("sweep", "Rate-distortion sweep of both codecs");
  swp->add_option("--corpus", o.corpus, "Corpus directory (default: generate from --seed)");
  swp->add_option("--n", o.n, "Generated corpus size")->check(CLI::PositiveNumber);
  swp->add_option("--seed", o.seed, "Random seed");
  swp->add_option("--codec", o.codec, "all, cmc or dct")
      ->check(CLI::IsMember({"all", "cmc", "dct"}));
  swp->add_option("--codebook", o.codebook, "Caption codebook (default: train from --seed)");
  swp->add_option("--quality", o.qualities, "Baseline quality grid")->delimiter(',');
  swp->add_option("--features-src", o.features_src, "Source FMAT ({label} expands)");
  swp->add_option("--features-rec", o.features_rec, "Reconstruction FMAT ({label} expands)");
  swp->add_option("--probs", o.probs, "PMAT of reconstructions ({label} expands)");
  swp->add_option("--splits", o.splits, "IS splits")->check(CLI::PositiveNumber);
  auto* lambda = swp->add_option("--lambda", o.lambda, "Adds rd_cost = MSE + lambda * rate");
  swp->add_option("--out", o.out, "CSV output (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  if (swp->parsed() && !swp->count("--codec")) o.codec = "all";

  try {
    if (gen->parsed()) return run_gen_corpus(o);
    if (train->parsed()) return run_train_codebook(o);
    if (enc->parsed()) {
      if (o.codec == "cmc" && o.codebook.empty()) {
        throw cmc::Error(cmc::ErrorCode::kConfiguration, "--codec cmc needs --codebook");
      }
      return run_encode(o);
    }
    if (dec->parsed()) return run_decode(o);
    if (ren->parsed()) return run_render(o);
    if (ana->parsed()) return run_analyze(o);
    if (par->parsed()) return run_parse(o);
    if (met->parsed()) return run_metrics(o);
    if (swp->parsed()) return run_sweep(o, lambda->count() > 0);
  } catch (const cmc::PipelineError& e) {
    std::cerr << "error [stage " << e.stage() << "]: " << e.what() << "\n";
    return kExitPipeline;
  } catch (const cmc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == cmc::ErrorCode::kConfiguration ? kExitUsage : kExitData;
  }
  return kExitUsage;
}
