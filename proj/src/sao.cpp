#include "sao.h"

#include <algorithm>
#include <cmath>

#include "bitio.h"

namespace sbc {

int eoCategory(int c, int n0, int n1) {
  if (c < n0 && c < n1) return 1;
  if ((c < n0 && c == n1) || (c == n0 && c < n1)) return 2;
  if ((c > n0 && c == n1) || (c == n0 && c > n1)) return 3;
  if (c > n0 && c > n1) return 4;
  return 0;
}

std::array<std::array<int, 2>, 2> eoNeighborOffsets(SaoType type) {
  switch (type) {
    case SaoType::kEo0:
      return {{{-1, 0}, {1, 0}}};
    case SaoType::kEo90:
      return {{{0, -1}, {0, 1}}};
    case SaoType::kEo45:
      return {{{1, -1}, {-1, 1}}};
    case SaoType::kEo135:
      return {{{-1, -1}, {1, 1}}};
    case SaoType::kBo:
      break;
  }
  fail(ErrorCode::kInternal, "eoNeighborOffsets called for BO");
}

namespace {

Rect intersect(Rect a, Rect b) {
  int x0 = std::max(a.x, b.x);
  int y0 = std::max(a.y, b.y);
  int x1 = std::min(a.x + a.w, b.x + b.w);
  int y1 = std::min(a.y + a.h, b.y + b.h);
  return Rect{x0, y0, std::max(0, x1 - x0), std::max(0, y1 - y0)};
}

bool inRect(Rect r, int x, int y) {
  return x >= r.x && x < r.x + r.w && y >= r.y && y < r.y + r.h;
}

}  // namespace

SaoStats collectSaoStats(const Plane &orig, const Plane &rec, Rect block,
                         Rect scu, Rect statsWindow, SaoType type,
                         int bitDepth) {
  SaoStats st;
  Rect r = intersect(block, statsWindow);
  Rect planeRect{0, 0, rec.width(), rec.height()};
  if (type == SaoType::kBo) {
    for (int y = r.y; y < r.y + r.h; ++y) {
      const uint16_t *po = orig.row(y);
      const uint16_t *pr = rec.row(y);
      for (int x = r.x; x < r.x + r.w; ++x) {
        int band = boBand(pr[x], bitDepth);
        st.count[band] += 1;
        st.sum[band] += static_cast<int64_t>(po[x]) - pr[x];
      }
    }
    return st;
  }
  auto nb = eoNeighborOffsets(type);
  for (int y = r.y; y < r.y + r.h; ++y) {
    for (int x = r.x; x < r.x + r.w; ++x) {
      int x0 = x + nb[0][0], y0 = y + nb[0][1];
      int x1 = x + nb[1][0], y1 = y + nb[1][1];
      // Neighbors must stay inside both the picture and the block's SCU.
      if (!inRect(planeRect, x0, y0) || !inRect(planeRect, x1, y1) ||
          !inRect(scu, x0, y0) || !inRect(scu, x1, y1)) {
        continue;
      }
      int cat = eoCategory(rec.at(x, y), rec.at(x0, y0), rec.at(x1, y1));
      if (cat == 0) continue;
      st.count[cat] += 1;
      st.sum[cat] += static_cast<int64_t>(orig.at(x, y)) - rec.at(x, y);
    }
  }
  return st;
}

int64_t saoParamsBits(const SaoParams &p) {
  int64_t bits = ueBits(static_cast<uint32_t>(p.mode));
  if (p.mode != SaoBlockMode::kNew) return bits;
  bits += ueBits(static_cast<uint32_t>(p.type));
  if (p.type == SaoType::kBo) {
    bits += 5;  // band position
    for (int o : p.offsets) bits += ueBits(std::abs(o)) + 1;  // sign each
  } else {
    for (int o : p.offsets) bits += ueBits(std::abs(o));
  }
  return bits;
}

namespace {

struct OffsetChoice {
  int offset = 0;
  int64_t deltaSse = 0;
  int64_t bits = 0;
};

// Scans candidate magnitudes from zero up to the clipped mean estimate and
// keeps the rate-distortion best; the SSE change of offset o over a category
// with (count, sum) statistics is count*o^2 - 2*o*sum.
OffsetChoice bestOffset(int64_t count, int64_t sum, int minOff, int maxOff,
                        double lambda, bool signaledSign) {
  OffsetChoice best;
  best.bits = ueBits(0) + (signaledSign ? 1 : 0);
  if (count == 0) return best;
  double mean = static_cast<double>(sum) / static_cast<double>(count);
  int est = clip3(minOff, maxOff, static_cast<int>(std::llround(mean)));
  int step = est > 0 ? 1 : -1;
  double bestCost = lambda * static_cast<double>(best.bits);
  for (int o = step; est != 0 && o != est + step; o += step) {
    int64_t dsse = count * static_cast<int64_t>(o) * o -
                   2 * static_cast<int64_t>(o) * sum;
    int64_t bits = ueBits(std::abs(o)) + (signaledSign ? 1 : 0);
    double cost = static_cast<double>(dsse) + lambda * static_cast<double>(bits);
    if (cost < bestCost) {
      bestCost = cost;
      best.offset = o;
      best.deltaSse = dsse;
      best.bits = bits;
    }
  }
  return best;
}

int64_t deltaSseForParams(const SaoStats &st, const SaoParams &p) {
  int64_t d = 0;
  if (p.type == SaoType::kBo) {
    for (int i = 0; i < 4; ++i) {
      int band = p.bandPosition + i;
      int64_t o = p.offsets[i];
      d += st.count[band] * o * o - 2 * o * st.sum[band];
    }
  } else {
    for (int cat = 1; cat <= 4; ++cat) {
      int64_t o = p.offsets[cat - 1];
      d += st.count[cat] * o * o - 2 * o * st.sum[cat];
    }
  }
  return d;
}

SaoCandidate evaluateNewCandidates(const Plane &orig, const Plane &rec,
                                   Rect block, Rect scu, Rect statsWindow,
                                   int bitDepth, double lambda) {
  const int maxOff = saoMaxOffset(bitDepth);
  SaoCandidate best;
  best.params.mode = SaoBlockMode::kOff;
  best.deltaSse = 0;
  best.bits = saoParamsBits(best.params);
  // Edge offset classes; category signs are inferred, so offsets for
  // categories 1,2 are nonnegative and 3,4 nonpositive.
  for (SaoType type : {SaoType::kEo0, SaoType::kEo90, SaoType::kEo45,
                       SaoType::kEo135}) {
    SaoStats st = collectSaoStats(orig, rec, block, scu, statsWindow, type,
                                  bitDepth);
    SaoParams p;
    p.mode = SaoBlockMode::kNew;
    p.type = type;
    int64_t dsse = 0;
    for (int cat = 1; cat <= 4; ++cat) {
      bool positive = cat <= 2;
      OffsetChoice oc =
          bestOffset(st.count[cat], st.sum[cat], positive ? 0 : -maxOff,
                     positive ? maxOff : 0, lambda, false);
      p.offsets[cat - 1] = oc.offset;
      dsse += oc.deltaSse;
    }
    SaoCandidate cand{p, dsse, saoParamsBits(p)};
    if (cand.cost(lambda) < best.cost(lambda)) best = cand;
  }
  // Band offset: all 28 start positions of four consecutive bands.
  {
    SaoStats st = collectSaoStats(orig, rec, block, scu, statsWindow,
                                  SaoType::kBo, bitDepth);
    std::array<OffsetChoice, 32> perBand;
    for (int b = 0; b < 32; ++b) {
      perBand[b] =
          bestOffset(st.count[b], st.sum[b], -maxOff, maxOff, lambda, true);
    }
    for (int start = 0; start <= 27; ++start) {
      SaoParams p;
      p.mode = SaoBlockMode::kNew;
      p.type = SaoType::kBo;
      p.bandPosition = start;
      int64_t dsse = 0;
      for (int i = 0; i < 4; ++i) {
        p.offsets[i] = perBand[start + i].offset;
        dsse += perBand[start + i].deltaSse;
      }
      SaoCandidate cand{p, dsse, saoParamsBits(p)};
      if (cand.cost(lambda) < best.cost(lambda)) best = cand;
    }
  }
  return best;
}

}  // namespace

SaoCandidate chooseSaoParams(const Plane &orig, const Plane &rec, Rect block,
                             Rect scu, Rect statsWindow, int bitDepth,
                             double lambda, const SaoParams *mergeLeft,
                             const SaoParams *mergeUp) {
  SaoCandidate best = evaluateNewCandidates(orig, rec, block, scu, statsWindow,
                                            bitDepth, lambda);
  auto tryMerge = [&](const SaoParams *src, SaoBlockMode mergeMode) {
    if (src == nullptr) return;
    SaoCandidate cand;
    cand.params = *src;
    cand.params.mode = mergeMode;
    cand.bits = ueBits(static_cast<uint32_t>(mergeMode));
    if (src->mode == SaoBlockMode::kOff) {
      cand.deltaSse = 0;
    } else {
      SaoStats st = collectSaoStats(orig, rec, block, scu, statsWindow,
                                    src->type, bitDepth);
      cand.deltaSse = deltaSseForParams(st, *src);
    }
    if (cand.cost(lambda) < best.cost(lambda)) best = cand;
  };
  tryMerge(mergeLeft, SaoBlockMode::kMergeLeft);
  tryMerge(mergeUp, SaoBlockMode::kMergeUp);
  return best;
}

SaoCandidate chooseSaoRegionParams(const Plane &orig, const Plane &rec,
                                   Rect region, Rect scu, Rect statsWindow,
                                   int bitDepth, double lambda) {
  return evaluateNewCandidates(orig, rec, region, scu, statsWindow, bitDepth,
                               lambda);
}

namespace {

void applySaoPlaneBlock(Plane &plane, const Plane &preSao,
                        const SaoParams &params, Rect block, Rect scu,
                        int bitDepth) {
  if (params.mode == SaoBlockMode::kOff) return;
  const int maxVal = plane.maxValue();
  Rect planeRect{0, 0, plane.width(), plane.height()};
  Rect r = intersect(block, planeRect);
  if (params.type == SaoType::kBo) {
    for (int y = r.y; y < r.y + r.h; ++y) {
      const uint16_t *src = preSao.row(y);
      uint16_t *dst = plane.row(y);
      for (int x = r.x; x < r.x + r.w; ++x) {
        int band = boBand(src[x], bitDepth);
        int i = band - params.bandPosition;
        if (i >= 0 && i < 4) {
          dst[x] = static_cast<uint16_t>(
              clip3(0, maxVal, static_cast<int>(src[x]) + params.offsets[i]));
        }
      }
    }
    return;
  }
  auto nb = eoNeighborOffsets(params.type);
  for (int y = r.y; y < r.y + r.h; ++y) {
    for (int x = r.x; x < r.x + r.w; ++x) {
      int x0 = x + nb[0][0], y0 = y + nb[0][1];
      int x1 = x + nb[1][0], y1 = y + nb[1][1];
      if (!inRect(planeRect, x0, y0) || !inRect(planeRect, x1, y1) ||
          !inRect(scu, x0, y0) || !inRect(scu, x1, y1)) {
        continue;  // boundary samples stay category 0
      }
      int cat =
          eoCategory(preSao.at(x, y), preSao.at(x0, y0), preSao.at(x1, y1));
      if (cat == 0) continue;
      plane.set(x, y,
                static_cast<uint16_t>(clip3(
                    0, maxVal,
                    static_cast<int>(preSao.at(x, y)) +
                        params.offsets[cat - 1])));
    }
  }
}

}  // namespace

void applySaoFrame(Frame &rec, const SaoFrameParams &sao, int mScu) {
  for (int comp = 0; comp < 3; ++comp) {
    Plane &plane = rec.plane(comp);
    const Plane preSao = plane;  // classification reads pre-SAO samples
    const int scale = comp == 0 ? 1 : 2;
    const int bs = sao.blockSize / scale;
    const int scuSize = mScu / scale;
    for (int by = 0; by < sao.blocksY; ++by) {
      for (int bx = 0; bx < sao.blocksX; ++bx) {
        const SaoParams &p =
            sao.resolved[sao.blockIndex(bx, by)].plane[comp];
        Rect block{bx * bs, by * bs, bs, bs};
        Rect scu{(block.x / scuSize) * scuSize, (block.y / scuSize) * scuSize,
                 scuSize, scuSize};
        applySaoPlaneBlock(plane, preSao, p, block, scu, rec.bitDepth());
      }
    }
  }
}

}  // namespace sbc
