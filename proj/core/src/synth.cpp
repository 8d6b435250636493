#include "specmcd/synth.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <json.hpp>

#include "specmcd/rng.hpp"

namespace specmcd {

std::string_view to_string(SceneKind kind) {
  return kind == SceneKind::Dense ? "dense" : "large_area";
}

SceneKind parse_scene_kind(std::string_view text) {
  if (text == "dense") return SceneKind::Dense;
  if (text == "large_area") return SceneKind::LargeArea;
  throw ConfigError("unknown scene kind '" + std::string(text) +
                    "' (expected dense or large_area)");
}

void ScenePreset::validate() const {
  if (width < 256 || height < 256) {
    throw ConfigError("scene presets need at least 256x256 pixels");
  }
  if (distractors < 0) {
    throw ConfigError("distractor count cannot be negative");
  }
}

namespace {

// Noise stream tags; fixed so regenerating a preset reproduces every field.
constexpr std::uint64_t kTagAlbedo = 0xA1;
constexpr std::uint64_t kTagRipple = 0xA2;
constexpr std::uint64_t kTagField = 0xA3;
constexpr std::uint64_t kTagNoiseBase = 0xB0;  // +0 blue, +1 green, ...
constexpr std::uint64_t kTagPlacement = 0xC1;

double smooth01(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

// Bilinear value noise over a unit lattice, smoothed so gradients stay
// bounded. Stateless: depends only on (seed, tag, x, y).
double value_noise(std::uint64_t seed, std::uint64_t tag, double x, double y) {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const auto x0 = static_cast<std::int64_t>(fx);
  const auto y0 = static_cast<std::int64_t>(fy);
  const double sx = smooth01(x - fx);
  const double sy = smooth01(y - fy);
  const double v00 = lattice_uniform(seed, tag, x0, y0);
  const double v10 = lattice_uniform(seed, tag, x0 + 1, y0);
  const double v01 = lattice_uniform(seed, tag, x0, y0 + 1);
  const double v11 = lattice_uniform(seed, tag, x0 + 1, y0 + 1);
  const double top = v00 + (v10 - v00) * sx;
  const double bot = v01 + (v11 - v01) * sx;
  return top + (bot - top) * sy;
}

// Ground reflectance texture shared by both presets. Kept in [0.6, 1.0] so
// the background never goes black and never rivals cloud radiance.
double albedo_at(std::uint64_t seed, int x, int y) {
  const double broad = value_noise(seed, kTagAlbedo, x / 97.0, y / 97.0);
  const double fine = value_noise(seed, kTagAlbedo + 7, x / 23.0, y / 23.0);
  return 0.6 + 0.4 * (0.7 * broad + 0.3 * fine);
}

struct Blob {
  double cx, cy;
  double rx, ry;
  double cos_t, sin_t;
  double reach;  // conservative bounding radius
};

struct Rect {
  int x0, y0, side;
};

struct SceneBufs {
  int w, h;
  std::vector<double> blue, green, red, nir;
  BinaryMask truth;
  BinaryMask distractor;

  SceneBufs(int width, int height)
      : w(width),
        h(height),
        blue(static_cast<std::size_t>(width) * height),
        green(blue.size()),
        red(blue.size()),
        nir(blue.size()),
        truth(BinaryMask::zeros(width, height)),
        distractor(BinaryMask::zeros(width, height)) {}

  std::size_t idx(int x, int y) const {
    return static_cast<std::size_t>(y) * w + x;
  }
};

void fill_background(std::uint64_t seed, SceneBufs& s) {
  for (int y = 0; y < s.h; ++y) {
    for (int x = 0; x < s.w; ++x) {
      const double a = albedo_at(seed, x, y);
      const std::size_t i = s.idx(x, y);
      s.blue[i] = 1700.0 * a;
      s.green[i] = 3800.0 * a;
      s.red[i] = 2400.0 * a;
      s.nir[i] = 5200.0 * a;
    }
  }
}

// Per-pixel cloud radiance boost. Blue rises twice as fast as green, which is
// what the thickness index keys on.
void add_cloud_signal(SceneBufs& s, std::size_t i, double signal) {
  s.blue[i] += 30000.0 * signal;
  s.green[i] += 16500.0 * signal;
  s.red[i] += 24000.0 * signal;
  s.nir[i] += 20000.0 * signal;
}

// Rim ramp width in pixels. Short enough to look like a crisp cumulus edge,
// long enough that the edge never dominates the scene's gradient histogram.
constexpr double kRimRampPx = 6.0;

double blob_signal(std::uint64_t seed, const Blob& b, int x, int y) {
  const double dx = x - b.cx;
  const double dy = y - b.cy;
  const double u = dx * b.cos_t + dy * b.sin_t;
  const double v = -dx * b.sin_t + dy * b.cos_t;
  const double r2 = (u * u) / (b.rx * b.rx) + (v * v) / (b.ry * b.ry);
  const double r_geo = std::sqrt(b.rx * b.ry);
  const double rho = std::sqrt(r2);
  if (rho <= 1.0) {
    const double dome = 0.85 + 0.15 * (1.0 - r2);
    // Interior texture, faded out near the rim so the rim ramp stays clean.
    // Its slopes are the scene's mid-band gradients: strong enough to read
    // as cloud boundary texture, well short of the calibration spike below.
    const double taper = std::clamp((1.0 - rho) * r_geo / 14.0, 0.0, 1.0);
    const double tex =
        0.18 * (2.0 * value_noise(seed, kTagRipple, x / 10.0, y / 10.0) - 1.0);
    return dome + tex * taper;
  }
  const double t = (rho - 1.0) * r_geo;
  if (t < kRimRampPx) {
    return 0.85 * (1.0 - t / kRimRampPx);
  }
  return 0.0;
}

std::vector<Blob> place_blobs(std::uint64_t seed, int w, int h,
                              SplitMix64& rng) {
  (void)seed;
  // Radii are absolute, not frame-relative: the scene pass slides fixed
  // 256/128/64 windows, and a window only votes cloudy when cloud covers
  // roughly a third of it. Big compact cells get there on their own;
  // proportionally shrunk blobs on small frames never would. Keeping the
  // count low also keeps each cell's area large against the ring of
  // threshold overshoot around its rim, which is what the F-scores see.
  const double min_edge = std::min(w, h);
  const double r_lo = std::min(170.0, 0.28 * min_edge);
  const double r_hi = std::min(250.0, 0.36 * min_edge);
  const int target = std::clamp(
      static_cast<int>(std::lround(static_cast<double>(w) * h / 330000.0)), 2,
      8);

  std::vector<Blob> blobs;
  for (int n = 0; n < target; ++n) {
    bool placed = false;
    for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
      const double r = r_lo + (r_hi - r_lo) * rng.uniform();
      const double rx = r * rng.uniform(0.85, 1.15);
      const double ry = r * r / rx;
      const double reach = std::max(rx, ry) + kRimRampPx;
      const double margin = reach + 10.0;
      if (2.0 * margin >= w || 2.0 * margin >= h) continue;
      const double cx = rng.uniform(margin, w - margin);
      const double cy = rng.uniform(margin, h - margin);
      bool clear = true;
      for (const Blob& other : blobs) {
        const double ddx = cx - other.cx;
        const double ddy = cy - other.cy;
        const double need = reach + other.reach + 12.0;
        if (ddx * ddx + ddy * ddy < need * need) {
          clear = false;
          break;
        }
      }
      if (!clear) continue;
      const double theta = rng.uniform(0.0, 3.14159265358979323846);
      blobs.push_back(
          Blob{cx, cy, rx, ry, std::cos(theta), std::sin(theta), reach});
      placed = true;
    }
  }
  return blobs;
}

// Compact very bright core stamped inside the largest blob, the synthetic
// stand-in for the sunlit convective core a cumulus cell shows. Its edges
// carry the steepest thickness step anywhere in the scene, so the gradient
// image normalizes against it consistently from seed to seed instead of
// against whichever rim happened to land on a noisy pixel.
constexpr int kFlareSide = 6;
constexpr double kFlareBlue = 10150.0;

Rect stamp_flare(const std::vector<Blob>& blobs, SceneBufs& s) {
  if (blobs.empty()) return Rect{0, 0, 0};
  const Blob* host = &blobs.front();
  for (const Blob& b : blobs) {
    if (b.rx * b.ry > host->rx * host->ry) host = &b;
  }
  const int x0 = std::clamp(static_cast<int>(std::lround(host->cx)) -
                                kFlareSide / 2,
                            0, s.w - kFlareSide);
  const int y0 = std::clamp(static_cast<int>(std::lround(host->cy)) -
                                kFlareSide / 2,
                            0, s.h - kFlareSide);
  for (int y = y0; y < y0 + kFlareSide; ++y) {
    for (int x = x0; x < x0 + kFlareSide; ++x) {
      s.blue[s.idx(x, y)] += kFlareBlue;
    }
  }
  return Rect{x0, y0, kFlareSide};
}

void rasterize_blobs(std::uint64_t seed, const std::vector<Blob>& blobs,
                     SceneBufs& s) {
  for (const Blob& b : blobs) {
    const int x0 = std::max(0, static_cast<int>(std::floor(b.cx - b.reach - 1)));
    const int x1 = std::min(s.w - 1, static_cast<int>(std::ceil(b.cx + b.reach + 1)));
    const int y0 = std::max(0, static_cast<int>(std::floor(b.cy - b.reach - 1)));
    const int y1 = std::min(s.h - 1, static_cast<int>(std::ceil(b.cy + b.reach + 1)));

    // First pass finds this blob's own peak so the truth rule (above half of
    // its own peak) is evaluated exactly, not against a nominal amplitude.
    double peak = 0.0;
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        peak = std::max(peak, blob_signal(seed, b, x, y));
      }
    }
    if (peak <= 0.0) continue;
    const double half = 0.5 * peak;
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double sig = blob_signal(seed, b, x, y);
        if (sig <= 0.0) continue;
        add_cloud_signal(s, s.idx(x, y), sig);
        if (sig > half) s.truth.set(y, x, true);
      }
    }
  }
}

// Broad translucent field: a tilted plane plus low-frequency noise, squashed
// through a smoothstep so most pixels sit near one of two levels. The wide
// tau gives the sheet a ~200 px thinning shoulder instead of a hard edge;
// the fine scene pass follows the shoulder while the coarse one waits for
// solid cover, and the gap between their verdicts is where the pipeline
// reads its cloud level from. The thick level deliberately holds a majority
// of the frame so mid-shoulder thickness stays below the scene median.
struct FieldParams {
  double g0 = 0.0;
  double tau = 0.16;
  double high_fraction = 0.55;
};

FieldParams rasterize_field(std::uint64_t seed, SceneBufs& s,
                            std::vector<double>& f_out) {
  const std::size_t count = s.blue.size();
  std::vector<double> g(count);
  const double lambda = 0.35 * std::min(s.w, s.h);
  for (int y = 0; y < s.h; ++y) {
    for (int x = 0; x < s.w; ++x) {
      const double plane = static_cast<double>(x + y) / (s.w + s.h);
      const double broad = value_noise(seed, kTagField, x / lambda, y / lambda);
      // Mostly planar drift with one broad meander: the sheet keeps a single
      // gently curved edge. Every extra unit of edge length later costs
      // false positives, so the geometry stays deliberately simple.
      g[s.idx(x, y)] = 0.70 * plane + 0.30 * broad;
    }
  }

  FieldParams fp;
  // Pin the upper level to a fixed share of the frame by thresholding at the
  // matching quantile of g itself.
  std::vector<double> sorted = g;
  const std::size_t cut =
      static_cast<std::size_t>((1.0 - fp.high_fraction) * (count - 1));
  std::nth_element(sorted.begin(), sorted.begin() + cut, sorted.end());
  fp.g0 = sorted[cut];

  f_out.resize(count);
  double peak = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = (g[i] - (fp.g0 - fp.tau)) / (2.0 * fp.tau);
    const double f = 0.32 + 0.68 * smooth01(t);
    f_out[i] = f;
    peak = std::max(peak, f);
  }
  const double half = 0.5 * peak;
  for (int y = 0; y < s.h; ++y) {
    for (int x = 0; x < s.w; ++x) {
      const std::size_t i = s.idx(x, y);
      const double f = f_out[i];
      // Translucent sheet: blue rises with thickness but NIR rises faster
      // and stays the brightest band. That keeps the windowed spectral score
      // around 0.33 on the thin level and 0.80 on the thick level, so the
      // scene masks split the sheet instead of saturating on all of it.
      s.blue[i] += 3500.0 * f;
      s.green[i] += 1300.0 * f;
      s.red[i] += 2600.0 * f;
      s.nir[i] += 2815.0 * f;
      if (f > half) s.truth.set(y, x, true);
    }
  }
  return fp;
}

void stamp_distractor(SceneBufs& s, const Rect& r) {
  for (int y = r.y0; y < r.y0 + r.side; ++y) {
    for (int x = r.x0; x < r.x0 + r.side; ++x) {
      const std::size_t i = s.idx(x, y);
      // Bright in blue but even brighter in green: high radiance, low
      // thickness index. Roofs and sand behave this way.
      s.blue[i] += 28000.0;
      s.green[i] += 48000.0;
      s.red[i] += 21000.0;
      s.nir[i] += 15000.0;
      s.distractor.set(y, x, true);
    }
  }
}

std::vector<Rect> place_distractors_dense(const ScenePreset& preset,
                                          const std::vector<Blob>& blobs,
                                          SplitMix64& rng, SceneBufs& s) {
  std::vector<Rect> rects;
  const int side = std::max(24, std::min(s.w, s.h) / 13);
  // Keep squares outside the 64-window footprint any cloud can paint, plus
  // slack, so a square can never inherit a cloudy vote from a neighbour.
  const double clearance = 64.0 + side * 0.75 + 24.0;
  for (int n = 0; n < preset.distractors; ++n) {
    for (int attempt = 0; attempt < 400; ++attempt) {
      const int x0 = rng.uniform_int(16, s.w - side - 16);
      const int y0 = rng.uniform_int(16, s.h - side - 16);
      const double cx = x0 + side / 2.0;
      const double cy = y0 + side / 2.0;
      bool clear = true;
      for (const Blob& b : blobs) {
        const double dx = cx - b.cx;
        const double dy = cy - b.cy;
        const double need = b.reach + clearance;
        if (dx * dx + dy * dy < need * need) {
          clear = false;
          break;
        }
      }
      for (const Rect& other : rects) {
        if (std::abs(other.x0 - x0) < 2 * side &&
            std::abs(other.y0 - y0) < 2 * side) {
          clear = false;
          break;
        }
      }
      if (!clear) continue;
      rects.push_back(Rect{x0, y0, side});
      stamp_distractor(s, rects.back());
      break;
    }
  }
  return rects;
}

std::vector<Rect> place_distractors_large(const ScenePreset& preset,
                                          const std::vector<double>& f,
                                          SceneBufs& s) {
  // Deterministic low-field placement: scan a coarse lattice and take the
  // calmest spots, keeping squares apart and off the borders.
  struct Cand {
    double f;
    int x0, y0;
  };
  const int side = std::max(24, std::min(s.w, s.h) / 13);
  std::vector<Cand> cands;
  for (int y = side; y + 2 * side < s.h; y += 32) {
    for (int x = side; x + 2 * side < s.w; x += 32) {
      cands.push_back(Cand{f[s.idx(x + side / 2, y + side / 2)], x, y});
    }
  }
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.f != b.f) return a.f < b.f;
    if (a.y0 != b.y0) return a.y0 < b.y0;
    return a.x0 < b.x0;
  });
  std::vector<Rect> rects;
  for (const Cand& c : cands) {
    if (static_cast<int>(rects.size()) >= preset.distractors) break;
    bool clear = true;
    for (const Rect& other : rects) {
      const double dx = c.x0 - other.x0;
      const double dy = c.y0 - other.y0;
      if (dx * dx + dy * dy < (2.5 * side) * (2.5 * side)) {
        clear = false;
        break;
      }
    }
    if (!clear) continue;
    rects.push_back(Rect{c.x0, c.y0, side});
    stamp_distractor(s, rects.back());
  }
  return rects;
}

std::vector<std::uint16_t> quantize_band(const std::vector<double>& values,
                                         std::uint64_t seed,
                                         std::uint64_t noise_tag, int w) {
  std::vector<std::uint16_t> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto x = static_cast<std::int64_t>(i % static_cast<std::size_t>(w));
    const auto y = static_cast<std::int64_t>(i / static_cast<std::size_t>(w));
    // Sensor noise below 0.2% of full scale: enough to perturb thresholds,
    // not enough to blur the ground truth.
    const double noise =
        (lattice_uniform(seed, noise_tag, x, y) - 0.5) * 2.0 * 98.0;
    const double v = std::clamp(values[i] + noise, 0.0, 65535.0);
    out[i] = static_cast<std::uint16_t>(std::lround(v));
  }
  return out;
}

}  // namespace

SyntheticScene generate_scene(const ScenePreset& preset) {
  preset.validate();
  SceneBufs bufs(preset.width, preset.height);
  fill_background(preset.seed, bufs);

  SplitMix64 root(preset.seed);
  SplitMix64 placement = root.split(kTagPlacement);

  nlohmann::ordered_json manifest;
  manifest["kind"] = std::string(to_string(preset.kind));
  manifest["width"] = preset.width;
  manifest["height"] = preset.height;
  manifest["seed"] = preset.seed;
  manifest["distractors_requested"] = preset.distractors;

  std::vector<Rect> rects;
  if (preset.kind == SceneKind::Dense) {
    const std::vector<Blob> blobs =
        place_blobs(preset.seed, preset.width, preset.height, placement);
    rasterize_blobs(preset.seed, blobs, bufs);
    const Rect flare = stamp_flare(blobs, bufs);
    rects = place_distractors_dense(preset, blobs, placement, bufs);

    nlohmann::ordered_json jblobs = nlohmann::ordered_json::array();
    for (const Blob& b : blobs) {
      jblobs.push_back({{"cx", b.cx},
                        {"cy", b.cy},
                        {"rx", b.rx},
                        {"ry", b.ry},
                        {"cos_t", b.cos_t},
                        {"sin_t", b.sin_t}});
    }
    manifest["blobs"] = std::move(jblobs);
    manifest["flare"] = {{"x", flare.x0}, {"y", flare.y0}, {"side", flare.side}};
  } else {
    std::vector<double> f;
    const FieldParams fp = rasterize_field(preset.seed, bufs, f);
    rects = place_distractors_large(preset, f, bufs);
    manifest["field"] = {{"g0", fp.g0},
                         {"tau", fp.tau},
                         {"high_fraction", fp.high_fraction}};
  }

  nlohmann::ordered_json jrects = nlohmann::ordered_json::array();
  for (const Rect& r : rects) {
    jrects.push_back({{"x", r.x0}, {"y", r.y0}, {"side", r.side}});
  }
  manifest["distractor_rects"] = std::move(jrects);
  manifest["truth_pixels"] = bufs.truth.count_true();

  std::vector<Band> bands;
  bands.push_back(Band{BandName::Blue,
                       quantize_band(bufs.blue, preset.seed, kTagNoiseBase + 0,
                                     preset.width)});
  bands.push_back(Band{BandName::Green,
                       quantize_band(bufs.green, preset.seed, kTagNoiseBase + 1,
                                     preset.width)});
  bands.push_back(Band{BandName::Red,
                       quantize_band(bufs.red, preset.seed, kTagNoiseBase + 2,
                                     preset.width)});
  bands.push_back(Band{BandName::Nir,
                       quantize_band(bufs.nir, preset.seed, kTagNoiseBase + 3,
                                     preset.width)});

  SyntheticScene scene{
      MultibandRaster(preset.width, preset.height, std::move(bands)),
      std::move(bufs.truth), std::move(bufs.distractor),
      manifest.dump(2) + "\n"};
  return scene;
}

}  // namespace specmcd
