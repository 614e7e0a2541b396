#include "recon.h"

namespace sbc {

CodedGrid::CodedGrid(int frameWidth, int frameHeight, int mcuSize)
    : log2Mcu_(intLog2(mcuSize)) {
  assert(frameWidth % mcuSize == 0 && frameHeight % mcuSize == 0);
  gridW_ = frameWidth >> log2Mcu_;
  gridH_ = frameHeight >> log2Mcu_;
  cells_.assign(static_cast<size_t>(gridW_) * gridH_, Cell{});
}

void CodedGrid::clear() {
  std::fill(cells_.begin(), cells_.end(), Cell{});
}

const CodedGrid::Cell *CodedGrid::cellAt(int x, int y) const {
  if (x < 0 || y < 0) return nullptr;
  int cx = x >> log2Mcu_;
  int cy = y >> log2Mcu_;
  if (cx >= gridW_ || cy >= gridH_) return nullptr;
  return &cells_[static_cast<size_t>(cy) * gridW_ + cx];
}

void CodedGrid::markCu(Rect r, bool hasMv, Mv mv) {
  for (int y = r.y >> log2Mcu_; y < (r.y + r.h) >> log2Mcu_; ++y) {
    for (int x = r.x >> log2Mcu_; x < (r.x + r.w) >> log2Mcu_; ++x) {
      Cell &c = cells_[static_cast<size_t>(y) * gridW_ + x];
      c.coded = 1;
      c.hasMv = hasMv ? 1 : 0;
      c.mv = mv;
    }
  }
}

bool CodedGrid::rangeCoded(int x, int y, int w, int h) const {
  if (x < 0 || y < 0) return false;
  for (int cy = y >> log2Mcu_; cy <= (y + h - 1) >> log2Mcu_; ++cy) {
    for (int cx = x >> log2Mcu_; cx <= (x + w - 1) >> log2Mcu_; ++cx) {
      if (cx >= gridW_ || cy >= gridH_) return false;
      if (!cells_[static_cast<size_t>(cy) * gridW_ + cx].coded) return false;
    }
  }
  return true;
}

std::optional<Mv> CodedGrid::mvAt(int x, int y) const {
  const Cell *c = cellAt(x, y);
  if (c == nullptr || !c->coded || !c->hasMv) return std::nullopt;
  return c->mv;
}

std::vector<CodedGrid::Cell> CodedGrid::saveWindow(Rect r) const {
  std::vector<Cell> out;
  for (int y = r.y >> log2Mcu_; y < (r.y + r.h) >> log2Mcu_; ++y) {
    for (int x = r.x >> log2Mcu_; x < (r.x + r.w) >> log2Mcu_; ++x) {
      out.push_back(cells_[static_cast<size_t>(y) * gridW_ + x]);
    }
  }
  return out;
}

void CodedGrid::restoreWindow(Rect r, const std::vector<Cell> &saved) {
  size_t i = 0;
  for (int y = r.y >> log2Mcu_; y < (r.y + r.h) >> log2Mcu_; ++y) {
    for (int x = r.x >> log2Mcu_; x < (r.x + r.w) >> log2Mcu_; ++x) {
      cells_[static_cast<size_t>(y) * gridW_ + x] = saved[i++];
    }
  }
  assert(i == saved.size());
}

ReconContext makeReconContext(Frame *recon, CodedGrid *grid,
                              const RefPlanes *ref, int qp, bool sliceIsIntra,
                              int bitDepth) {
  ReconContext ctx;
  ctx.recon = recon;
  ctx.grid = grid;
  ctx.ref = ref;
  ctx.bitDepth = bitDepth;
  ctx.sliceIsIntra = sliceIsIntra;
  for (int n = 4, i = 0; n <= 32; n *= 2, ++i) {
    ctx.quant[i] = deriveQuantParams(qp, sliceIsIntra, n, bitDepth);
  }
  return ctx;
}

IntraNeighbors gatherIntraNeighbors(const ReconContext &ctx, int comp,
                                    Rect lumaRect) {
  const int scale = comp == 0 ? 1 : 2;
  const Plane &plane = ctx.recon->plane(comp);
  const int x = lumaRect.x / scale;
  const int y = lumaRect.y / scale;
  const int n = lumaRect.w / scale;
  IntraNeighbors nb;
  nb.bitDepth = ctx.bitDepth;
  if (lumaRect.y > 0 &&
      ctx.grid->rangeCoded(lumaRect.x, lumaRect.y - 1, lumaRect.w, 1)) {
    nb.topAvailable = true;
    nb.top.assign(plane.row(y - 1) + x, plane.row(y - 1) + x + n);
  }
  if (lumaRect.x > 0 &&
      ctx.grid->rangeCoded(lumaRect.x - 1, lumaRect.y, 1, lumaRect.h)) {
    nb.leftAvailable = true;
    nb.left.resize(n);
    for (int i = 0; i < n; ++i) nb.left[i] = plane.at(x - 1, y + i);
  }
  return nb;
}

Mv motionVectorPredictor(const CodedGrid &grid, Rect r) {
  return predictMv(grid.mvAt(r.x - 1, r.y), grid.mvAt(r.x, r.y - 1),
                   grid.mvAt(r.x + r.w, r.y - 1));
}

namespace {

thread_local std::vector<uint16_t> tlPred;
thread_local std::vector<int32_t> tlResidual(1024);
thread_local std::vector<int32_t> tlCoeff(1024);
thread_local std::vector<int32_t> tlLevels(1024);

// Renders the prediction block of one component into tlPred.
Mv renderPrediction(const CuNode &leaf, ReconContext &ctx, int comp,
                    uint16_t **predOut) {
  const int scale = comp == 0 ? 1 : 2;
  const int n = leaf.size / scale;
  Rect lumaRect{leaf.x, leaf.y, leaf.size, leaf.size};
  tlPred.resize(static_cast<size_t>(n) * n);
  Mv mv;
  if (leaf.mode == CuMode::kIntra) {
    IntraNeighbors nb = gatherIntraNeighbors(ctx, comp, lumaRect);
    intraPredict(leaf.intraMode, nb, n, tlPred.data());
  } else {
    Mv mvp = motionVectorPredictor(*ctx.grid, lumaRect);
    mv = leaf.mode == CuMode::kSkip ? mvp
                                    : Mv{mvp.x + leaf.mvd.x,
                                         mvp.y + leaf.mvd.y};
    if (ctx.ref == nullptr) {
      fail(ErrorCode::kBadData, "inter CU without a reference frame");
    }
    motionCompensate(*ctx.ref, comp, leaf.x / scale, leaf.y / scale, n, n,
                     comp == 0 ? mv : chromaMv(mv), tlPred.data());
  }
  *predOut = tlPred.data();
  return mv;
}

// Reconstructs one component from prediction + stored TU levels and writes
// it into the working reconstruction.
void reconstructComponent(const CuNode &leaf, ReconContext &ctx, int comp,
                          const uint16_t *pred) {
  const int scale = comp == 0 ? 1 : 2;
  const int n = leaf.size / scale;
  const int x = leaf.x / scale;
  const int y = leaf.y / scale;
  Plane &plane = ctx.recon->plane(comp);
  const int maxVal = plane.maxValue();

  if (leaf.mode == CuMode::kSkip) {
    plane.writeBlock(x, y, n, n, pred);
    return;
  }
  const int ts = tuSizeFor(n);
  const int tiles = n / ts;
  const QuantParams &qp = ctx.quantFor(ts);
  std::vector<uint16_t> rec(static_cast<size_t>(n) * n);
  for (int ty = 0; ty < tiles; ++ty) {
    for (int tx = 0; tx < tiles; ++tx) {
      const TuLevels &tu = leaf.tu[comp][ty * tiles + tx];
      for (int j = 0; j < ts; ++j) {
        const uint16_t *p = pred + (ty * ts + j) * n + tx * ts;
        uint16_t *r = rec.data() + (static_cast<size_t>(ty) * ts + j) * n +
                      tx * ts;
        if (!tu.cbf) {
          std::copy(p, p + ts, r);
          continue;
        }
        if (j == 0) {
          for (int i = 0; i < ts * ts; ++i) tlLevels[i] = tu.levels[i];
          dequantizeBlock(tlLevels.data(), qp, tlCoeff.data());
          inverseTransform(tlCoeff.data(), ts, ctx.bitDepth,
                           tlResidual.data());
        }
        for (int i = 0; i < ts; ++i) {
          r[i] = static_cast<uint16_t>(
              clip3(0, maxVal, static_cast<int>(p[i]) +
                                   tlResidual[static_cast<size_t>(j) * ts + i]));
        }
      }
    }
  }
  plane.writeBlock(x, y, n, n, rec.data());
}

}  // namespace

void reconstructLeaf(const CuNode &leaf, ReconContext &ctx) {
  Mv mv;
  for (int comp = 0; comp < 3; ++comp) {
    uint16_t *pred = nullptr;
    Mv m = renderPrediction(leaf, ctx, comp, &pred);
    if (comp == 0) mv = m;
    reconstructComponent(leaf, ctx, comp, pred);
  }
  ctx.grid->markCu(Rect{leaf.x, leaf.y, leaf.size, leaf.size},
                   leaf.mode != CuMode::kIntra, mv);
}

Mv codeLeafResiduals(CuNode &leaf, const Frame &orig, ReconContext &ctx) {
  Mv usedMv;
  for (int comp = 0; comp < 3; ++comp) {
    const int scale = comp == 0 ? 1 : 2;
    const int n = leaf.size / scale;
    uint16_t *pred = nullptr;
    Mv m = renderPrediction(leaf, ctx, comp, &pred);
    if (comp == 0) usedMv = m;
    if (leaf.mode == CuMode::kSkip) {
      leaf.tu[comp].clear();
      continue;
    }
    const int ts = tuSizeFor(n);
    const int tiles = n / ts;
    const QuantParams &qp = ctx.quantFor(ts);
    const Plane &origPlane = orig.plane(comp);
    leaf.tu[comp].assign(static_cast<size_t>(tiles) * tiles, TuLevels{});
    for (int ty = 0; ty < tiles; ++ty) {
      for (int tx = 0; tx < tiles; ++tx) {
        for (int j = 0; j < ts; ++j) {
          const uint16_t *o =
              origPlane.row(leaf.y / scale + ty * ts + j) +
              (leaf.x / scale + tx * ts);
          const uint16_t *p = pred + (ty * ts + j) * n + tx * ts;
          buildResidual(o, p, ts, tlResidual.data() + j * ts);
        }
        forwardTransform(tlResidual.data(), ts, ctx.bitDepth, tlCoeff.data());
        quantizeBlock(tlCoeff.data(), qp, tlLevels.data());
        TuLevels &tu = leaf.tu[comp][ty * tiles + tx];
        tu.n = ts;
        tu.cbf = false;
        for (int i = 0; i < ts * ts; ++i) {
          if (tlLevels[i] != 0) {
            tu.cbf = true;
            break;
          }
        }
        if (tu.cbf) {
          tu.levels.resize(static_cast<size_t>(ts) * ts);
          for (int i = 0; i < ts * ts; ++i) {
            tu.levels[i] = static_cast<int16_t>(tlLevels[i]);
          }
        }
      }
    }
  }
  // Reconstruction re-runs the exact decoder path over the stored levels.
  reconstructLeaf(leaf, ctx);
  return usedMv;
}

}  // namespace sbc
