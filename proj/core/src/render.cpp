// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

#include "gsx/render.hpp"

#include "gsx/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace gsx {
namespace {

struct Splat {
  std::size_t index = 0;  // into the map
  GaussianId id = 0;
  Vec3 cam = Vec3::Zero();  // camera-frame mean
  double u = 0.0;
  double v = 0.0;
  double r2d = 0.0;
  double depth = 0.0;
  double opacity = 0.0;
  Vec3 color = Vec3::Zero();
  int x0 = 0, x1 = -1, y0 = 0, y1 = -1;  // inclusive pixel bbox of the support disk
};

struct Raster {
  std::vector<Splat> splats;                   // sorted by (depth, id)
  std::vector<std::vector<std::uint32_t>> bins;  // per tile, ascending splat index
  int tiles_x = 0;
  int tiles_y = 0;
};

Raster prepare(const GaussianMap& map, const Pose& pose, const CameraIntrinsics& intr) {
  const auto& gs = map.gaussians();
  const auto& ids = map.ids();
  std::vector<std::optional<Splat>> projected(gs.size());
  parallel_for(gs.size(), [&](std::size_t i) {
    const auto p = project(gs[i], ids[i], pose, intr);
    if (!p) return;
    const double reach = kSupportRadii * p->r2d;
    Splat s;
    s.x0 = std::max(0, static_cast<int>(std::ceil(p->mu2d.x() - reach)));
    s.x1 = std::min(intr.width - 1, static_cast<int>(std::floor(p->mu2d.x() + reach)));
    s.y0 = std::max(0, static_cast<int>(std::ceil(p->mu2d.y() - reach)));
    s.y1 = std::min(intr.height - 1, static_cast<int>(std::floor(p->mu2d.y() + reach)));
    if (s.x0 > s.x1 || s.y0 > s.y1) return;
    s.index = i;
    s.id = ids[i];
    s.cam = pose.to_camera(gs[i].mean);
    s.u = p->mu2d.x();
    s.v = p->mu2d.y();
    s.r2d = p->r2d;
    s.depth = p->depth;
    s.opacity = gs[i].opacity;
    s.color = gs[i].color;
    projected[i] = s;
  });

  Raster r;
  for (auto& s : projected) {
    if (s) r.splats.push_back(*s);
  }
  std::sort(r.splats.begin(), r.splats.end(), [](const Splat& a, const Splat& b) {
    return a.depth != b.depth ? a.depth < b.depth : a.id < b.id;
  });

  r.tiles_x = (intr.width + kTileSize - 1) / kTileSize;
  r.tiles_y = (intr.height + kTileSize - 1) / kTileSize;
  r.bins.resize(static_cast<std::size_t>(r.tiles_x) * r.tiles_y);
  for (std::size_t k = 0; k < r.splats.size(); ++k) {
    const Splat& s = r.splats[k];
    for (int ty = s.y0 / kTileSize; ty <= s.y1 / kTileSize; ++ty) {
      for (int tx = s.x0 / kTileSize; tx <= s.x1 / kTileSize; ++tx) {
        r.bins[static_cast<std::size_t>(ty) * r.tiles_x + tx].push_back(static_cast<std::uint32_t>(k));
      }
    }
  }
  return r;
}

/// Evaluates the falloff of splat s at pixel (x, y). Returns false outside
/// the support disk.
inline bool falloff(const Splat& s, int x, int y, double& g, double& dx, double& dy, double& d2) {
  dx = x - s.u;
  dy = y - s.v;
  d2 = dx * dx + dy * dy;
  const double reach = kSupportRadii * s.r2d;
  if (d2 > reach * reach) return false;
  g = std::exp(-d2 / (2.0 * s.r2d * s.r2d));
  return true;
}

void composite(const Raster& r, const CameraIntrinsics& intr, Frame& out) {
  const std::size_t tiles = r.bins.size();
  parallel_for(tiles, [&](std::size_t t) {
    const int tx = static_cast<int>(t % r.tiles_x);
    const int ty = static_cast<int>(t / r.tiles_x);
    const auto& bin = r.bins[t];
    for (int y = ty * kTileSize; y < std::min(intr.height, (ty + 1) * kTileSize); ++y) {
      for (int x = tx * kTileSize; x < std::min(intr.width, (tx + 1) * kTileSize); ++x) {
        double transmittance = 1.0;
        Vec3 c = Vec3::Zero();
        double d = 0.0;
        double a = 0.0;
        bool touched = false;
        for (const std::uint32_t k : bin) {
          const Splat& s = r.splats[k];
          double g, dx, dy, d2;
          if (!falloff(s, x, y, g, dx, dy, d2)) continue;
          const double f = s.opacity * g;
          const double w = f * transmittance;
          c += w * s.color;
          d += w * s.depth;
          a += w;
          transmittance *= (1.0 - f);
          touched = true;
        }
        const std::size_t p = out.pixel(x, y);
        out.color[3 * p] = c.x();
        out.color[3 * p + 1] = c.y();
        out.color[3 * p + 2] = c.z();
        out.depth[p] = touched ? d : kInvalidDepth;
        out.alpha[p] = a;
      }
    }
  });
}

void check_same_size(const Frame& a, const Frame& b) {
  if (a.width != b.width || a.height != b.height || a.color.size() != b.color.size() ||
      a.depth.size() != b.depth.size()) {
    throw std::invalid_argument("loss: rendered and observed frames differ in size");
  }
}

inline double sign(double v) { return (v > 0.0) - (v < 0.0); }

/// Loss value plus its gradient with respect to rendered color and depth.
double loss_and_image_gradient(const Frame& rendered, const Frame& observed, const LossWeights& w,
                               std::vector<double>* d_color, std::vector<double>* d_depth) {
  check_same_size(rendered, observed);
  const std::size_t n = rendered.pixel_count();
  if (n == 0) return 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  if (d_color) d_color->assign(3 * n, 0.0);
  if (d_depth) d_depth->assign(n, 0.0);

  double l1 = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    if (is_valid_depth(observed.depth[p]) && rendered.alpha[p] >= kDepthLossMinAlpha &&
        is_valid_depth(rendered.depth[p])) {
      const double e = rendered.depth[p] - observed.depth[p];
      l1 += std::abs(e);
      if (d_depth) (*d_depth)[p] = sign(e) * inv_n;
    }
    for (int ch = 0; ch < 3; ++ch) {
      const double e = rendered.color[3 * p + ch] - observed.color[3 * p + ch];
      l1 += w.lambda1 * std::abs(e) / 3.0;
      if (d_color) (*d_color)[3 * p + ch] = w.lambda1 * sign(e) * inv_n / 3.0;
    }
  }

  double s = 0.0;
  if (d_color) {
    std::vector<double> ds(3 * n);
    s = ssim_with_gradient(rendered.color, observed.color, rendered.width, rendered.height, 3, ds);
    for (std::size_t i = 0; i < 3 * n; ++i) (*d_color)[i] -= w.lambda2 * ds[i];
  } else {
    s = ssim(rendered.color, observed.color, rendered.width, rendered.height, 3);
  }
  return l1 * inv_n + w.lambda2 * (1.0 - s);
}

// ---- SSIM ------------------------------------------------------------------

constexpr int kSsimRadius = 5;
constexpr double kSsimSigma = 1.5;
constexpr double kSsimC1 = 0.01 * 0.01;
constexpr double kSsimC2 = 0.03 * 0.03;

std::array<double, 2 * kSsimRadius + 1> ssim_kernel() {
  std::array<double, 2 * kSsimRadius + 1> k{};
  for (int i = -kSsimRadius; i <= kSsimRadius; ++i) {
    k[i + kSsimRadius] = std::exp(-(i * i) / (2.0 * kSsimSigma * kSsimSigma));
  }
  return k;
}

/// Separable convolution with the SSIM kernel, window clipped at the border.
/// With normalize=true every output is divided by the clipped kernel mass.
std::vector<double> convolve(const std::vector<double>& in, int w, int h, bool normalize) {
  static const auto k = ssim_kernel();
  std::vector<double> tmp(in.size(), 0.0);
  std::vector<double> out(in.size(), 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0, mass = 0.0;
      for (int d = -kSsimRadius; d <= kSsimRadius; ++d) {
        const int xx = x + d;
        if (xx < 0 || xx >= w) continue;
        acc += k[d + kSsimRadius] * in[static_cast<std::size_t>(y) * w + xx];
        mass += k[d + kSsimRadius];
      }
      tmp[static_cast<std::size_t>(y) * w + x] = normalize ? acc / mass : acc;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0, mass = 0.0;
      for (int d = -kSsimRadius; d <= kSsimRadius; ++d) {
        const int yy = y + d;
        if (yy < 0 || yy >= h) continue;
        acc += k[d + kSsimRadius] * tmp[static_cast<std::size_t>(yy) * w + x];
        mass += k[d + kSsimRadius];
      }
      out[static_cast<std::size_t>(y) * w + x] = normalize ? acc / mass : acc;
    }
  }
  return out;
}

/// Clipped kernel mass of the window centred on every pixel.
std::vector<double> window_mass(int w, int h) {
  return convolve(std::vector<double>(static_cast<std::size_t>(w) * h, 1.0), w, h, false);
}

double ssim_impl(std::span<const double> a, std::span<const double> b, int w, int h, int channels,
                 std::span<double> grad_a) {
  if (a.size() != b.size() || a.size() != static_cast<std::size_t>(w) * h * channels) {
    throw std::invalid_argument("ssim: image sizes differ");
  }
  const std::size_t n = static_cast<std::size_t>(w) * h;
  if (n == 0) return 1.0;
  const bool want_grad = !grad_a.empty();
  const std::vector<double> mass = want_grad ? window_mass(w, h) : std::vector<double>{};

  double total = 0.0;
  std::vector<double> pa(n), pb(n);
  for (int ch = 0; ch < channels; ++ch) {
    std::vector<double> aa(n), bb(n), ab(n);
    for (std::size_t p = 0; p < n; ++p) {
      pa[p] = a[p * channels + ch];
      pb[p] = b[p * channels + ch];
      aa[p] = pa[p] * pa[p];
      bb[p] = pb[p] * pb[p];
      ab[p] = pa[p] * pb[p];
    }
    const auto mu_a = convolve(pa, w, h, true);
    const auto mu_b = convolve(pb, w, h, true);
    const auto e_aa = convolve(aa, w, h, true);
    const auto e_bb = convolve(bb, w, h, true);
    const auto e_ab = convolve(ab, w, h, true);

    std::vector<double> coef_const, coef_a, coef_b;
    if (want_grad) {
      coef_const.resize(n);
      coef_a.resize(n);
      coef_b.resize(n);
    }
    for (std::size_t p = 0; p < n; ++p) {
      const double ma = mu_a[p], mb = mu_b[p];
      const double var_a = e_aa[p] - ma * ma;
      const double var_b = e_bb[p] - mb * mb;
      const double cov = e_ab[p] - ma * mb;
      const double n1 = 2.0 * ma * mb + kSsimC1;
      const double n2 = 2.0 * cov + kSsimC2;
      const double d1 = ma * ma + mb * mb + kSsimC1;
      const double d2 = var_a + var_b + kSsimC2;
      const double s = (n1 * n2) / (d1 * d2);
      total += s;
      if (want_grad) {
        const double ds_dmu = 2.0 * mb * n2 / (d1 * d2) - s * 2.0 * ma / d1;
        const double ds_dvar = -s / d2;
        const double ds_dcov = 2.0 * n1 / (d1 * d2);
        // d s_p / d a_q = w_p(q) * (coef_const + 2 a_q coef_a + b_q coef_b)
        const double inv_mass = 1.0 / mass[p];
        coef_const[p] = (ds_dmu - 2.0 * ma * ds_dvar - mb * ds_dcov) * inv_mass;
        coef_a[p] = ds_dvar * inv_mass;
        coef_b[p] = ds_dcov * inv_mass;
      }
    }
    if (want_grad) {
      const auto g_const = convolve(coef_const, w, h, false);
      const auto g_a = convolve(coef_a, w, h, false);
      const auto g_b = convolve(coef_b, w, h, false);
      const double scale = 1.0 / (static_cast<double>(n) * channels);
      for (std::size_t q = 0; q < n; ++q) {
        grad_a[q * channels + ch] = scale * (g_const[q] + 2.0 * pa[q] * g_a[q] + pb[q] * g_b[q]);
      }
    }
  }
  return total / (static_cast<double>(n) * channels);
}

}  // namespace

std::optional<ProjectedGaussian> project(const Gaussian& g, GaussianId id, const Pose& pose,
                                         const CameraIntrinsics& intr) {
  const Vec3 pc = pose.to_camera(g.mean);
  const double d = pc.z();
  if (d <= kNearPlane) return std::nullopt;
  ProjectedGaussian out;
  out.mu2d = {intr.fx * pc.x() / d + intr.cx, intr.fy * pc.y() / d + intr.cy};
  out.r2d = intr.focal() * g.radius / d;
  out.depth = d;
  out.source_id = id;
  return out;
}

Frame render(const GaussianMap& map, const Pose& pose, const CameraIntrinsics& intr) {
  Frame out(intr.width, intr.height);
  if (map.empty()) return out;
  const Raster r = prepare(map, pose, intr);
  composite(r, intr, out);
  return out;
}

double loss(const Frame& rendered, const Frame& observed, const LossWeights& weights) {
  return loss_and_image_gradient(rendered, observed, weights, nullptr, nullptr);
}

double ssim(std::span<const double> a, std::span<const double> b, int width, int height, int channels) {
  return ssim_impl(a, b, width, height, channels, {});
}

double ssim_with_gradient(std::span<const double> a, std::span<const double> b, int width, int height,
                          int channels, std::span<double> grad_a) {
  if (grad_a.size() != a.size()) throw std::invalid_argument("ssim: gradient buffer size mismatch");
  return ssim_impl(a, b, width, height, channels, grad_a);
}

double Gradients::squared_norm() const {
  double s = 0.0;
  for (std::size_t i = 0; i < color.size(); ++i) {
    s += color[i].squaredNorm() + mean[i].squaredNorm() + radius[i] * radius[i] + opacity[i] * opacity[i];
  }
  return s;
}

Gradients backward(const GaussianMap& map, const Pose& pose, const CameraIntrinsics& intr,
                   const Frame& observed, const LossWeights& weights) {
  const std::size_t n = map.size();
  Gradients grads;
  grads.color.assign(n, Vec3::Zero());
  grads.mean.assign(n, Vec3::Zero());
  grads.radius.assign(n, 0.0);
  grads.opacity.assign(n, 0.0);

  const Raster r = prepare(map, pose, intr);
  grads.rendered = Frame(intr.width, intr.height);
  composite(r, intr, grads.rendered);

  std::vector<double> d_color, d_depth;
  grads.loss = loss_and_image_gradient(grads.rendered, observed, weights, &d_color, &d_depth);

  // Screen-space gradient per (tile, bin slot): color(3), u, v, r2d, depth, opacity.
  using Slot = std::array<double, 8>;
  std::vector<std::vector<Slot>> tile_grads(r.bins.size());
  parallel_for(r.bins.size(), [&](std::size_t t) {
    const auto& bin = r.bins[t];
    auto& acc = tile_grads[t];
    acc.assign(bin.size(), Slot{});
    struct Hit {
      std::size_t slot;
      double g, f, transmittance, dx, dy, d2;
    };
    std::vector<Hit> hits;
    const int tx = static_cast<int>(t % r.tiles_x);
    const int ty = static_cast<int>(t / r.tiles_x);
    for (int y = ty * kTileSize; y < std::min(intr.height, (ty + 1) * kTileSize); ++y) {
      for (int x = tx * kTileSize; x < std::min(intr.width, (tx + 1) * kTileSize); ++x) {
        const std::size_t p = grads.rendered.pixel(x, y);
        const Vec3 gc(d_color[3 * p], d_color[3 * p + 1], d_color[3 * p + 2]);
        const double gd = d_depth[p];
        if (gc.isZero(0.0) && gd == 0.0) continue;

        hits.clear();
        double transmittance = 1.0;
        for (std::size_t slot = 0; slot < bin.size(); ++slot) {
          const Splat& s = r.splats[bin[slot]];
          Hit h;
          if (!falloff(s, x, y, h.g, h.dx, h.dy, h.d2)) continue;
          h.slot = slot;
          h.f = s.opacity * h.g;
          h.transmittance = transmittance;
          transmittance *= (1.0 - h.f);
          hits.push_back(h);
        }

        // Back-to-front: rest_* is the composite of everything behind the
        // current splat, relative to the light that passes it.
        Vec3 rest_c = Vec3::Zero();
        double rest_d = 0.0;
        for (auto it = hits.rbegin(); it != hits.rend(); ++it) {
          const Splat& s = r.splats[bin[it->slot]];
          Slot& out = acc[it->slot];
          const double wgt = it->f * it->transmittance;
          const double dl_df =
              it->transmittance * (gc.dot(s.color - rest_c) + gd * (s.depth - rest_d));
          out[0] += gc.x() * wgt;
          out[1] += gc.y() * wgt;
          out[2] += gc.z() * wgt;
          const double r2 = s.r2d * s.r2d;
          const double dl_dg = dl_df * s.opacity;
          out[3] += dl_dg * it->g * it->dx / r2;
          out[4] += dl_dg * it->g * it->dy / r2;
          out[5] += dl_dg * it->g * it->d2 / (r2 * s.r2d);
          out[6] += gd * wgt;
          out[7] += dl_df * it->g;
          rest_c = s.color * it->f + (1.0 - it->f) * rest_c;
          rest_d = s.depth * it->f + (1.0 - it->f) * rest_d;
        }
      }
    }
  });

  // Fixed-order reduction keeps the result independent of the worker count.
  std::vector<Slot> per_splat(r.splats.size(), Slot{});
  for (std::size_t t = 0; t < r.bins.size(); ++t) {
    for (std::size_t slot = 0; slot < r.bins[t].size(); ++slot) {
      Slot& dst = per_splat[r.bins[t][slot]];
      const Slot& src = tile_grads[t][slot];
      for (int k = 0; k < 8; ++k) dst[k] += src[k];
    }
  }

  const double f = intr.focal();
  for (std::size_t k = 0; k < r.splats.size(); ++k) {
    const Splat& s = r.splats[k];
    const Slot& g = per_splat[k];
    const double z = s.cam.z();
    const Gaussian& gauss = map[s.index];
    grads.color[s.index] = {g[0], g[1], g[2]};
    grads.opacity[s.index] = g[7];
    grads.radius[s.index] = g[5] * f / z;
    Vec3 d_cam;
    d_cam.x() = g[3] * intr.fx / z;
    d_cam.y() = g[4] * intr.fy / z;
    d_cam.z() = -g[3] * intr.fx * s.cam.x() / (z * z) - g[4] * intr.fy * s.cam.y() / (z * z) -
                g[5] * f * gauss.radius / (z * z) + g[6];
    grads.mean[s.index] = pose.rotation * d_cam;
  }
  return grads;
}

}  // namespace gsx
