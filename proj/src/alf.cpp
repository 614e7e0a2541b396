#include "alf.h"

#include <algorithm>
#include <cmath>

namespace sbc {

const std::array<std::array<int, 2>, kAlfTaps> kAlfTapOffsets = {{
    {0, -2},
    {-1, -1},
    {0, -1},
    {1, -1},
    {-2, 0},
    {-1, 0},
    {0, 0},
    {1, 0},
    {2, 0},
    {-1, 1},
    {0, 1},
    {1, 1},
    {0, 2},
}};

namespace {

constexpr int kCenter = kAlfUniqueCoeffs - 1;  // index 6

// Pair sums feeding the symmetric normal equations: u < 6 pairs tap u with
// tap 12-u, u == 6 is the center tap alone.
void gatherTaps(const Plane &rec, int x, int y, int64_t s[kAlfUniqueCoeffs]) {
  for (int u = 0; u < 6; ++u) {
    auto a = kAlfTapOffsets[u];
    auto b = kAlfTapOffsets[12 - u];
    s[u] = static_cast<int64_t>(rec.at(x + a[0], y + a[1])) +
           rec.at(x + b[0], y + b[1]);
  }
  s[kCenter] = rec.at(x, y);
}

// Gaussian elimination with partial pivoting; returns false when the pivot
// collapses.
bool solveLinear(std::array<std::array<double, 7>, 7> &a,
                 std::array<double, 7> &b, std::array<double, 7> &out) {
  constexpr int n = 7;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    }
    if (std::fabs(a[pivot][col]) < 1e-12) return false;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (int r = col + 1; r < n; ++r) {
      double f = a[r][col] / a[col][col];
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= a[r][c] * out[c];
    out[r] = acc / a[r][r];
  }
  return true;
}

}  // namespace

AlfFilter deriveWienerFilter(const Plane &orig, const Plane &rec,
                             Rect statsWindow) {
  // Samples whose full diamond lies inside the plane and whose center lies
  // in the statistics window.
  int x0 = std::max(statsWindow.x, 2);
  int y0 = std::max(statsWindow.y, 2);
  int x1 = std::min({statsWindow.x + statsWindow.w, rec.width() - 2});
  int y1 = std::min({statsWindow.y + statsWindow.h, rec.height() - 2});

  AlfFilter identity;
  if (x0 >= x1 || y0 >= y1) return identity;

  std::array<std::array<int64_t, 7>, 7> acc{};
  std::array<int64_t, 7> cross{};
  int64_t taps[7];
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      gatherTaps(rec, x, y, taps);
      int64_t target = orig.at(x, y);
      for (int u = 0; u < 7; ++u) {
        for (int v = u; v < 7; ++v) acc[u][v] += taps[u] * taps[v];
        cross[u] += taps[u] * target;
      }
    }
  }
  std::array<std::array<double, 7>, 7> a{};
  std::array<double, 7> b{};
  double trace = 0.0;
  for (int u = 0; u < 7; ++u) trace += static_cast<double>(acc[u][u]);
  double eps = 1e-6 * trace / kAlfTaps;
  for (int u = 0; u < 7; ++u) {
    for (int v = 0; v < 7; ++v) {
      a[u][v] = static_cast<double>(u <= v ? acc[u][v] : acc[v][u]);
    }
    a[u][u] += eps;
    b[u] = static_cast<double>(cross[u]);
  }
  std::array<double, 7> sol{};
  if (!solveLinear(a, b, sol)) return identity;

  AlfFilter f;
  int64_t pairSum = 0;
  for (int u = 0; u < 6; ++u) {
    int32_t q = static_cast<int32_t>(
        clip3<long long>(-512, 512, std::llround(sol[u] * 256.0)));
    f.coeff[u] = q;
    pairSum += q;
  }
  // The center tap absorbs the quantization error so taps sum to 256.
  f.coeff[kCenter] = static_cast<int32_t>(256 - 2 * pairSum);
  return f;
}

std::vector<AlfCell> collectAlfCells(const std::vector<CuNodePtr> &forest,
                                     int mCtu) {
  std::vector<AlfCell> cells;
  auto walk = [&](auto &&self, const CuNode &node) -> void {
    if (node.split && node.size > mCtu) {
      for (const auto &c : node.child) self(self, *c);
      return;
    }
    cells.push_back(AlfCell{Rect{node.x, node.y, node.size, node.size}});
  };
  for (const auto &root : forest) walk(walk, *root);
  return cells;
}

int64_t alfImprovedFlagBits(const AlfScuDecision &d) {
  if (!d.superBlockFlag) return 1;
  if (d.allCuFlag) return 2;
  return 2 + static_cast<int64_t>(d.cuFlags.size());
}

int64_t alfPlainFlagBits(const AlfScuDecision &d) {
  return 2 + static_cast<int64_t>(d.cuFlags.size());
}

namespace {

void filterPlaneCell(Plane &dst, const Plane &src, const AlfFilter &f,
                     Rect cell) {
  int x0 = std::max(0, cell.x);
  int y0 = std::max(0, cell.y);
  int x1 = std::min(src.width(), cell.x + cell.w);
  int y1 = std::min(src.height(), cell.y + cell.h);
  const int maxVal = src.maxValue();
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      int64_t acc = 0;
      for (int i = 0; i < kAlfTaps; ++i) {
        acc += static_cast<int64_t>(f.tap(i)) *
               src.atClamped(x + kAlfTapOffsets[i][0],
                             y + kAlfTapOffsets[i][1]);
      }
      dst.set(x, y,
              static_cast<uint16_t>(clip3<int64_t>(
                  0, maxVal, (acc + 128) >> kAlfFracBits)));
    }
  }
}

}  // namespace

void applyAlfFrame(Frame &rec, const AlfFilter &filter,
                   const std::vector<std::vector<AlfCell>> &cellsPerScu,
                   const AlfFrameDecision &dec) {
  if (!dec.sliceFlag) return;
  for (int comp = 0; comp < 3; ++comp) {
    Plane &plane = rec.plane(comp);
    const Plane preAlf = plane;  // filtering reads only pre-ALF samples
    const int scale = comp == 0 ? 1 : 2;
    for (size_t s = 0; s < cellsPerScu.size(); ++s) {
      const AlfScuDecision &d = dec.scu[s];
      if (!d.superBlockFlag) continue;
      const auto &cells = cellsPerScu[s];
      for (size_t i = 0; i < cells.size(); ++i) {
        bool on = d.allCuFlag || (i < d.cuFlags.size() && d.cuFlags[i]);
        if (!on) continue;
        Rect r = cells[i].rect;
        filterPlaneCell(plane, preAlf, filter,
                        Rect{r.x / scale, r.y / scale, r.w / scale,
                             r.h / scale});
      }
    }
  }
}

AlfScuCost decideCuFlags(const Frame &orig, const Frame &rec,
                         const Frame &filtered,
                         const std::vector<AlfCell> &cells, Rect statsWindow,
                         double lambda) {
  AlfScuCost out;
  auto cellSse = [&](const Frame &candidate, Rect luma) {
    Rect statsLuma{std::max(luma.x, statsWindow.x),
                   std::max(luma.y, statsWindow.y), 0, 0};
    statsLuma.w = std::min(luma.x + luma.w, statsWindow.x + statsWindow.w) -
                  statsLuma.x;
    statsLuma.h = std::min(luma.y + luma.h, statsWindow.y + statsWindow.h) -
                  statsLuma.y;
    if (statsLuma.w <= 0 || statsLuma.h <= 0) return uint64_t{0};
    uint64_t sse = sseInWindow(orig.luma, candidate.luma, statsLuma);
    Rect c{statsLuma.x / 2, statsLuma.y / 2, ceilDiv(statsLuma.w, 2),
           ceilDiv(statsLuma.h, 2)};
    sse += sseInWindow(orig.cb, candidate.cb, c);
    sse += sseInWindow(orig.cr, candidate.cr, c);
    return sse;
  };

  double branch1Dist = 0.0;
  double branch2Dist = 0.0;
  AlfScuDecision dec;
  dec.superBlockFlag = true;
  dec.cuFlags.resize(cells.size());
  bool allOn = !cells.empty();
  for (size_t i = 0; i < cells.size(); ++i) {
    uint64_t dOn = cellSse(filtered, cells[i].rect);
    uint64_t dOff = cellSse(rec, cells[i].rect);
    bool on = dOn < dOff;  // ties keep the cell unfiltered
    dec.cuFlags[i] = on ? 1 : 0;
    allOn = allOn && on;
    branch1Dist += static_cast<double>(on ? dOn : dOff);
    branch2Dist += static_cast<double>(dOff);
  }
  dec.allCuFlag = allOn;
  if (allOn) dec.cuFlags.clear();

  out.branch1Cost =
      branch1Dist + lambda * static_cast<double>(alfImprovedFlagBits(dec));
  out.branch2Cost = branch2Dist + lambda * 1.0;
  if (out.branch1Cost < out.branch2Cost) {
    out.decision = dec;
    out.chosenCost = out.branch1Cost;
  } else {
    out.decision.superBlockFlag = false;
    out.decision.allCuFlag = false;
    out.decision.cuFlags.clear();
    out.chosenCost = out.branch2Cost;
  }
  return out;
}

}  // namespace sbc
