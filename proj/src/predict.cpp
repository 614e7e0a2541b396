#include "predict.h"

#include <algorithm>

namespace sbc {

bool intraModeEligible(IntraMode mode, const IntraNeighbors &nb) {
  switch (mode) {
    case IntraMode::kDc:
      return true;
    case IntraMode::kHorizontal:
      return nb.leftAvailable;
    case IntraMode::kVertical:
      return nb.topAvailable;
  }
  return false;
}

void intraPredict(IntraMode mode, const IntraNeighbors &nb, int n,
                  uint16_t *pred) {
  switch (mode) {
    case IntraMode::kDc: {
      uint32_t sum = 0;
      int count = 0;
      if (nb.topAvailable) {
        for (int i = 0; i < n; ++i) sum += nb.top[i];
        count += n;
      }
      if (nb.leftAvailable) {
        for (int i = 0; i < n; ++i) sum += nb.left[i];
        count += n;
      }
      uint16_t dc;
      if (count == 0) {
        dc = static_cast<uint16_t>(1 << (nb.bitDepth - 1));
      } else {
        dc = static_cast<uint16_t>((sum + count / 2) / count);
      }
      std::fill(pred, pred + static_cast<size_t>(n) * n, dc);
      return;
    }
    case IntraMode::kHorizontal:
      if (!nb.leftAvailable) {
        fail(ErrorCode::kInvalidArgument,
             "horizontal intra prediction without a left neighbor");
      }
      for (int y = 0; y < n; ++y) {
        std::fill(pred + static_cast<size_t>(y) * n,
                  pred + static_cast<size_t>(y + 1) * n, nb.left[y]);
      }
      return;
    case IntraMode::kVertical:
      if (!nb.topAvailable) {
        fail(ErrorCode::kInvalidArgument,
             "vertical intra prediction without a top neighbor");
      }
      for (int y = 0; y < n; ++y) {
        std::copy(nb.top.begin(), nb.top.end(),
                  pred + static_cast<size_t>(y) * n);
      }
      return;
  }
}

RefPlanes RefPlanes::fromFrame(const Frame &f, int pad) {
  RefPlanes r;
  r.pad = pad;
  auto padPlane = [pad](const Plane &src) {
    Plane dst(src.width() + 2 * pad, src.height() + 2 * pad, src.bitDepth());
    for (int y = 0; y < dst.height(); ++y) {
      uint16_t *d = dst.row(y);
      const uint16_t *s = src.row(clip3(0, src.height() - 1, y - pad));
      for (int x = 0; x < dst.width(); ++x) {
        d[x] = s[clip3(0, src.width() - 1, x - pad)];
      }
    }
    return dst;
  };
  r.luma = padPlane(f.luma);
  r.cb = padPlane(f.cb);
  r.cr = padPlane(f.cr);
  return r;
}

namespace {

uint64_t blockSad(const Plane &orig, Rect b, const Plane &refPadded, int pad,
                  int dx, int dy, uint64_t bailAt) {
  // Candidate wins only on strictly lower SAD, so the scan may stop as soon
  // as the partial sum exceeds the current best.
  uint64_t sad = 0;
  for (int y = 0; y < b.h; ++y) {
    const uint16_t *po = orig.row(b.y + y) + b.x;
    const uint16_t *pr = refPadded.row(b.y + dy + pad + y) + (b.x + dx + pad);
    for (int x = 0; x < b.w; ++x) {
      sad += static_cast<uint64_t>(std::abs(static_cast<int>(po[x]) - pr[x]));
    }
    if (sad > bailAt) return sad;
  }
  return sad;
}

// Tie-break rank: smaller |dx|+|dy|, then smaller dy, then smaller dx.
bool betterTie(Mv a, Mv b) {
  int sa = std::abs(a.x) + std::abs(a.y);
  int sb = std::abs(b.x) + std::abs(b.y);
  if (sa != sb) return sa < sb;
  if (a.y != b.y) return a.y < b.y;
  return a.x < b.x;
}

}  // namespace

MotionResult motionSearch(const Plane &orig, Rect block, const RefPlanes &ref,
                          int range) {
  orig.checkWindow(block.x, block.y, block.w, block.h);
  // Window clipped so the displaced block stays inside the padded reference.
  const int loX = std::max(-range, -(block.x + ref.pad));
  const int hiX =
      std::min(range, ref.luma.width() - ref.pad - (block.x + block.w));
  const int loY = std::max(-range, -(block.y + ref.pad));
  const int hiY =
      std::min(range, ref.luma.height() - ref.pad - (block.y + block.h));

  MotionResult best;
  bool first = true;
  for (int dy = loY; dy <= hiY; ++dy) {
    for (int dx = loX; dx <= hiX; ++dx) {
      uint64_t bail = first ? UINT64_MAX : best.sad;
      uint64_t sad = blockSad(orig, block, ref.luma, ref.pad, dx, dy, bail);
      Mv mv{dx, dy};
      if (first || sad < best.sad ||
          (sad == best.sad && betterTie(mv, best.mv))) {
        best.mv = mv;
        best.sad = sad;
        first = false;
      }
    }
  }
  assert(!first);
  return best;
}

void motionCompensate(const RefPlanes &ref, int comp, int x, int y, int w,
                      int h, Mv mv, uint16_t *pred) {
  const Plane &p = ref.plane(comp);
  int sx = x + mv.x + ref.pad;
  int sy = y + mv.y + ref.pad;
  p.checkWindow(sx, sy, w, h);
  for (int j = 0; j < h; ++j) {
    const uint16_t *src = p.row(sy + j) + sx;
    std::copy(src, src + w, pred + static_cast<size_t>(j) * w);
  }
}

Mv predictMv(const std::optional<Mv> &left, const std::optional<Mv> &top,
             const std::optional<Mv> &topRight) {
  int available = (left ? 1 : 0) + (top ? 1 : 0) + (topRight ? 1 : 0);
  if (available == 0) return Mv{0, 0};
  if (available == 1) {
    if (left) return *left;
    if (top) return *top;
    return *topRight;
  }
  Mv a = left.value_or(Mv{0, 0});
  Mv b = top.value_or(Mv{0, 0});
  Mv c = topRight.value_or(Mv{0, 0});
  auto median3 = [](int p, int q, int r) {
    return std::max(std::min(p, q), std::min(std::max(p, q), r));
  };
  return Mv{median3(a.x, b.x, c.x), median3(a.y, b.y, c.y)};
}

void buildResidual(const uint16_t *orig, const uint16_t *pred, int count,
                   int32_t *residual) {
  for (int i = 0; i < count; ++i) {
    residual[i] = static_cast<int32_t>(orig[i]) - static_cast<int32_t>(pred[i]);
  }
}

}  // namespace sbc
