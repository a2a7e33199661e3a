#include "cmc/harness.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <utility>

#include "cmc/baseline_dct.h"
#include "cmc/caption.h"
#include "cmc/metric_io.h"
#include "cmc/metrics.h"
#include "cmc/ppm.h"

namespace cmc {
namespace {

constexpr std::uint64_t kTrainingSeedSalt = 0x7EC7C0DEB00Cull;

std::string image_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "img_%04zu", index);
  return buf;
}

Image add_nuisance(const SceneGraph& scene, int width, int height,
                   const Nuisance& nuisance, Rng& rng) {
  std::vector<Jitter> offsets(scene.size());
  for (Jitter& j : offsets) {
    j.dx = rng.uniform(-nuisance.max_jitter_px, nuisance.max_jitter_px);
    j.dy = rng.uniform(-nuisance.max_jitter_px, nuisance.max_jitter_px);
  }
  Image image = render_jittered(scene, width, height, offsets);
  if (nuisance.noise_amplitude > 0) {
    const int a = nuisance.noise_amplitude;
    auto perturb = [&](std::uint8_t v) {
      return static_cast<std::uint8_t>(std::clamp(v + rng.range(-a, a), 0, 255));
    };
    for (Rgb& p : image.pixels()) p = {perturb(p.r), perturb(p.g), perturb(p.b)};
  }
  return image;
}

template <typename Fn>
auto in_stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const PipelineError&) {
    throw;
  } catch (const Error& e) {
    throw PipelineError(name, e);
  }
}

std::string substitute_label(const std::string& pattern, const std::string& label) {
  std::string out = pattern;
  const std::string key = "{label}";
  for (std::size_t at = out.find(key); at != std::string::npos; at = out.find(key, at)) {
    out.replace(at, key.size(), label);
    at += label.size();
  }
  return out;
}

std::filesystem::path require_file(const std::string& pattern, const std::string& label) {
  const std::filesystem::path path = substitute_label(pattern, label);
  if (!std::filesystem::is_regular_file(path)) {
    throw Error(ErrorCode::kConfiguration, "missing metric input " + path.string());
  }
  return path;
}

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string();
}

struct Setting {
  std::string codec;
  std::optional<int> quality;

  std::string label() const {
    return quality ? codec + "_q" + std::to_string(*quality) : codec;
  }
};

struct SetMetrics {
  std::optional<double> is;
  std::optional<double> fid;
  std::optional<std::vector<double>> ipd_per_image;
};

SetMetrics load_set_metrics(const RunConfig& config, const std::string& label,
                            std::size_t corpus_size) {
  SetMetrics out;
  try {
    if (!config.probs.empty()) {
      const ProbMatrix probs = read_prob_matrix(require_file(config.probs, label));
      out.is = inception_score(probs, config.splits);
    }
    if (!config.features_src.empty() || !config.features_rec.empty()) {
      if (config.features_src.empty() || config.features_rec.empty()) {
        throw Error(ErrorCode::kConfiguration,
                    "feature metrics need both source and reconstruction features");
      }
      const FeatureMatrix src = read_feature_matrix(require_file(config.features_src, label));
      const FeatureMatrix rec = read_feature_matrix(require_file(config.features_rec, label));
      if (src.rows() != corpus_size || rec.rows() != corpus_size) {
        throw Error(ErrorCode::kConfiguration,
                    "feature files for " + label + " need one row per corpus image (" +
                        std::to_string(corpus_size) + ")");
      }
      out.fid = fid(gaussian_stats(src), gaussian_stats(rec));
      out.ipd_per_image = ipd_per_sample(src, rec);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfiguration) throw;
    throw Error(ErrorCode::kConfiguration, "metric input for " + label + ": " + e.what());
  }
  return out;
}

double mean_of(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

}  // namespace

SceneGraph random_anchored_scene(Rng& rng) {
  const int count = rng.range(1, kMaxObjects);
  std::vector<SceneObject> objects;
  Cell cell{1, 1};
  for (int i = 0; i < count; ++i) {
    if (i > 0) {
      const bool can_down = cell.row + 1 < kGridSize;
      const bool can_right = cell.col + 1 < kGridSize;
      const bool down = can_down && (!can_right || rng.below(2) == 0);
      cell = down ? Cell{cell.col, cell.row + 1} : Cell{cell.col + 1, cell.row};
    }
    SceneObject o;
    o.shape = static_cast<Shape>(rng.below(kShapeCount));
    o.color = static_cast<Color>(rng.below(kColorCount));
    o.size = static_cast<Size>(rng.below(kSizeCount));
    o.cell = cell;
    objects.push_back(o);
  }
  return SceneGraph(std::move(objects));
}

std::vector<CorpusItem> make_corpus(std::size_t n, std::uint64_t seed,
                                    const Nuisance& nuisance, int width, int height) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "corpus size must be >= 1");
  Rng rng(seed);
  std::vector<CorpusItem> corpus;
  corpus.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    SceneGraph scene = random_anchored_scene(rng);
    Image image = add_nuisance(scene, width, height, nuisance, rng);
    std::string caption = describe(scene);
    corpus.push_back({image_id(i), std::move(scene), std::move(image), std::move(caption)});
  }
  return corpus;
}

std::vector<std::string> make_caption_corpus(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::string> captions;
  captions.reserve(n);
  for (std::size_t i = 0; i < n; ++i) captions.push_back(describe(random_anchored_scene(rng)));
  return captions;
}

void generate_corpus(std::size_t n, std::uint64_t seed,
                     const std::filesystem::path& outdir, const Nuisance& nuisance) {
  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + outdir.string() + ": " + ec.message());
  std::string captions;
  for (const CorpusItem& item : make_corpus(n, seed, nuisance)) {
    write_ppm(outdir / (item.id + ".ppm"), item.image);
    const std::string scene = format_scene_text(item.scene);
    write_file_bytes(outdir / (item.id + ".scene"),
                     std::span(reinterpret_cast<const std::uint8_t*>(scene.data()), scene.size()));
    captions += item.caption + '\n';
  }
  write_file_bytes(outdir / "captions.txt",
                   std::span(reinterpret_cast<const std::uint8_t*>(captions.data()), captions.size()));
}

std::vector<CorpusItem> load_corpus(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kIo, "corpus directory " + dir.string() + " not found");
  }
  std::vector<std::filesystem::path> images;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".ppm") images.push_back(entry.path());
  }
  std::sort(images.begin(), images.end());
  std::vector<CorpusItem> corpus;
  for (const auto& path : images) {
    auto scene_path = path;
    scene_path.replace_extension(".scene");
    const auto bytes = read_file_bytes(scene_path);
    SceneGraph scene = parse_scene_text(std::string(bytes.begin(), bytes.end()));
    std::string caption = describe(scene);
    corpus.push_back({path.stem().string(), std::move(scene), read_ppm(path), std::move(caption)});
  }
  return corpus;
}

PipelineError::PipelineError(std::string stage, const Error& cause)
    : Error(cause.code(), stage + ": " + cause.what()), stage_(std::move(stage)) {}

Bitstream cmc_encode(const Image& image, const Codebook& codebook,
                     std::string* caption_out) {
  const std::string caption =
      in_stage(stage::kCmcEncoder, [&] { return describe(analyze(image)); });
  if (caption_out) *caption_out = caption;
  return in_stage(stage::kEntropyEncoder, [&] { return encode_text(caption, codebook); });
}

Image cmc_decode(const Bitstream& bitstream, const Codebook& codebook, int width,
                 int height, std::string* caption_out) {
  const std::string caption =
      in_stage(stage::kEntropyDecoder, [&] { return decode_text(bitstream, codebook); });
  if (caption_out) *caption_out = caption;
  return in_stage(stage::kCmcDecoder,
                  [&] { return render(parse_caption(caption), width, height); });
}

CmcResult run_cmc_pipeline(const Image& image, const Codebook& codebook) {
  std::string caption;
  Bitstream bitstream = cmc_encode(image, codebook, &caption);
  Image reconstruction = cmc_decode(bitstream, codebook, image.width(), image.height());
  const double rate = static_cast<double>(bitstream.serialized_size());
  return {std::move(bitstream), std::move(reconstruction), std::move(caption), rate};
}

RDReport sweep(const RunConfig& config) {
  const std::vector<CorpusItem> corpus = config.dataset_dir.empty()
                                             ? make_corpus(config.corpus_size, config.seed)
                                             : load_corpus(config.dataset_dir);
  if (corpus.empty()) throw Error(ErrorCode::kConfiguration, "corpus is empty");

  std::vector<Setting> settings;
  if (config.run_cmc) settings.push_back({"cmc", std::nullopt});
  if (config.run_baseline) {
    std::vector<int> qualities = config.qualities;
    std::sort(qualities.begin(), qualities.end());
    qualities.erase(std::unique(qualities.begin(), qualities.end()), qualities.end());
    for (int q : qualities) {
      if (q < 1 || q > 100) {
        throw Error(ErrorCode::kConfiguration, "quality " + std::to_string(q) + " outside 1..100");
      }
      settings.push_back({"dct", q});
    }
  }
  if (settings.empty()) throw Error(ErrorCode::kConfiguration, "no codec selected");

  std::optional<Codebook> codebook;
  if (config.run_cmc) {
    codebook = config.codebook_path.empty()
                   ? train_codebook(make_caption_corpus(config.training_captions,
                                                        config.seed ^ kTrainingSeedSalt))
                   : read_codebook(config.codebook_path);
  }
  const TokenCodebooks& tokens = default_token_codebooks();

  RDReport report;
  report.lambda = config.lambda;
  // rows_by_setting[s][i]: setting s, image i.
  std::vector<std::vector<ReportRow>> rows_by_setting(settings.size());
  std::vector<ReportRow> summaries;

  for (std::size_t s = 0; s < settings.size(); ++s) {
    const Setting& setting = settings[s];
    const SetMetrics set_metrics = load_set_metrics(config, setting.label(), corpus.size());
    std::vector<double> rates, bpps, psnrs, mses, distances;

    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const CorpusItem& item = corpus[i];
      Image reconstruction(1, 1);
      double rate = 0.0;
      if (setting.codec == "cmc") {
        CmcResult result = run_cmc_pipeline(item.image, *codebook);
        rate = result.rate_bytes;
        reconstruction = std::move(result.reconstruction);
      } else {
        const QuantizerConfig qc(*setting.quality);
        const Bitstream bits = encode_image(item.image, qc, tokens);
        rate = static_cast<double>(bits.serialized_size());
        reconstruction = decode_image(bits, qc, tokens);
      }
      ReportRow row;
      row.codec = setting.codec;
      row.quality = setting.quality;
      row.image_id = item.id;
      row.rate_bytes = rate;
      row.bpp = bits_per_pixel(item.image.width(), item.image.height(), rate);
      row.mse = mean_squared_error(item.image, reconstruction);
      row.psnr_db = psnr(item.image, reconstruction);
      // A reconstruction that cannot be analyzed recovered no objects.
      try {
        row.scene_distance = scene_distance(item.scene, analyze(reconstruction));
      } catch (const Error&) {
        row.scene_distance = 4.0 * static_cast<double>(item.scene.size());
      }
      if (set_metrics.ipd_per_image) row.ipd = (*set_metrics.ipd_per_image)[i];

      rates.push_back(row.rate_bytes);
      bpps.push_back(row.bpp);
      psnrs.push_back(row.psnr_db);
      mses.push_back(row.mse);
      distances.push_back(row.scene_distance);
      rows_by_setting[s].push_back(std::move(row));
    }

    ReportRow summary;
    summary.codec = setting.codec;
    summary.quality = setting.quality;
    summary.image_id = "mean";
    summary.rate_bytes = mean_of(rates);
    summary.bpp = mean_of(bpps);
    summary.psnr_db = mean_of(psnrs);
    summary.mse = mean_of(mses);
    summary.scene_distance = mean_of(distances);
    summary.is = set_metrics.is;
    summary.fid = set_metrics.fid;
    if (set_metrics.ipd_per_image) summary.ipd = mean_of(*set_metrics.ipd_per_image);

    const std::string label = setting.label();
    report.points.push_back(make_rd_point(summary.rate_bytes, summary.psnr_db, "psnr_db", label));
    report.points.push_back(
        make_rd_point(summary.rate_bytes, summary.scene_distance, "scene_distance", label));
    if (summary.is) report.points.push_back(make_rd_point(summary.rate_bytes, *summary.is, "is", label));
    if (summary.fid) report.points.push_back(make_rd_point(summary.rate_bytes, *summary.fid, "fid", label));
    if (summary.ipd) report.points.push_back(make_rd_point(summary.rate_bytes, *summary.ipd, "ipd", label));
    summaries.push_back(std::move(summary));
  }

  // Order: image id, then setting (caption codec first, then quality).
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (auto& rows : rows_by_setting) report.rows.push_back(std::move(rows[i]));
  }
  for (auto& summary : summaries) report.rows.push_back(std::move(summary));
  return report;
}

std::string to_csv(const RDReport& report) {
  std::string out = "codec,quality,image_id,rate_bytes,bpp,psnr_db,scene_distance,is,fid,ipd";
  if (report.lambda) out += ",rd_cost";
  out += '\n';
  for (const ReportRow& row : report.rows) {
    out += row.codec + ',';
    out += (row.quality ? std::to_string(*row.quality) : std::string()) + ',';
    out += row.image_id + ',';
    out += format_real(row.rate_bytes) + ',';
    out += format_real(row.bpp) + ',';
    out += format_real(row.psnr_db) + ',';
    out += format_real(row.scene_distance) + ',';
    out += format_optional(row.is) + ',';
    out += format_optional(row.fid) + ',';
    out += format_optional(row.ipd);
    if (report.lambda) out += ',' + format_real(row.mse + *report.lambda * row.rate_bytes);
    out += '\n';
  }
  return out;
}

std::string summarize(const RDReport& report) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %12s %10s %12s %14s %10s %10s %10s\n", "setting",
                "rate_bytes", "bpp", "psnr_db", "scene_dist", "is", "fid", "ipd");
  out << line;
  for (const ReportRow& row : report.rows) {
    if (row.image_id != "mean") continue;
    const std::string label = row.quality ? row.codec + "_q" + std::to_string(*row.quality) : row.codec;
    auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string("-"); };
    std::snprintf(line, sizeof line, "%-10s %12.2f %10.5f %12s %14.4f %10s %10s %10s\n",
                  label.c_str(), row.rate_bytes, row.bpp, format_real(row.psnr_db).c_str(),
                  row.scene_distance, opt(row.is).c_str(), opt(row.fid).c_str(),
                  opt(row.ipd).c_str());
    out << line;
  }
  return out.str();
}

}  // namespace cmc
