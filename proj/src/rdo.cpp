#include "rdo.h"

#include <algorithm>
#include <cmath>

namespace sbc {

double lambdaOfQp(int qp, bool sliceIsIntra) {
  if (qp < 0 || qp > 51) {
    fail(ErrorCode::kInvalidArgument, "qp out of range 0..51");
  }
  double lambda = 0.85 * std::pow(2.0, (qp - 12) / 3.0);
  return sliceIsIntra ? lambda * 0.5 : lambda;
}

std::vector<std::pair<int, int>> zScanOrder(int gridWidth, int gridHeight) {
  if (gridWidth <= 0 || gridHeight <= 0 || !isPowerOfTwo(gridWidth) ||
      !isPowerOfTwo(gridHeight)) {
    fail(ErrorCode::kInvalidArgument,
         "z-scan grid dimensions must be powers of two");
  }
  std::vector<std::pair<int, int>> order;
  order.reserve(static_cast<size_t>(gridWidth) * gridHeight);
  auto walk = [&](auto &&self, int x, int y, int w, int h) -> void {
    if (w == 1 && h == 1) {
      order.emplace_back(x, y);
      return;
    }
    int hw = std::max(1, w / 2);
    int hh = std::max(1, h / 2);
    self(self, x, y, hw, hh);
    if (w > 1) self(self, x + hw, y, w - hw, hh);
    if (h > 1) self(self, x, y + hh, hw, h - hh);
    if (w > 1 && h > 1) self(self, x + hw, y + hh, w - hw, h - hh);
  };
  walk(walk, 0, 0, gridWidth, gridHeight);
  return order;
}

FrameEncoder::FrameEncoder(const EncoderConfig &cfg,
                           const PartitionSizes &sizes,
                           const Frame &origPadded, const RefPlanes *ref,
                           bool isIntra)
    : cfg_(cfg),
      sizes_(sizes),
      orig_(origPadded),
      ref_(ref),
      isIntra_(isIntra),
      lambda_(lambdaOfQp(cfg.qp, isIntra)),
      recon_(origPadded.luma.width(), origPadded.luma.height(),
             origPadded.bitDepth()),
      grid_(origPadded.luma.width(), origPadded.luma.height(), sizes.mMcu) {
  recon_.displayWidth = origPadded.displayWidth;
  recon_.displayHeight = origPadded.displayHeight;
  ctx_ = makeReconContext(&recon_, &grid_, ref_, cfg.qp, isIntra,
                          cfg.bitDepth);
  displayRect_ = Rect{0, 0, origPadded.displayWidth,
                      origPadded.displayHeight};
  if (!isIntra_ && ref_ == nullptr) {
    fail(ErrorCode::kInternal, "P frame without reference");
  }
}

FrameEncoder::Snapshot FrameEncoder::save(Rect r) const {
  Snapshot s;
  s.rect = r;
  s.luma = recon_.luma.readBlock(r.x, r.y, r.w, r.h);
  s.cb = recon_.cb.readBlock(r.x / 2, r.y / 2, r.w / 2, r.h / 2);
  s.cr = recon_.cr.readBlock(r.x / 2, r.y / 2, r.w / 2, r.h / 2);
  s.cells = grid_.saveWindow(r);
  return s;
}

void FrameEncoder::restore(const Snapshot &s) {
  Rect r = s.rect;
  recon_.luma.writeBlock(r.x, r.y, r.w, r.h, s.luma.data());
  recon_.cb.writeBlock(r.x / 2, r.y / 2, r.w / 2, r.h / 2, s.cb.data());
  recon_.cr.writeBlock(r.x / 2, r.y / 2, r.w / 2, r.h / 2, s.cr.data());
  grid_.restoreWindow(r, s.cells);
}

uint64_t FrameEncoder::cuDistortion(Rect r) const {
  Rect lumaWin{std::max(r.x, displayRect_.x), std::max(r.y, displayRect_.y),
               0, 0};
  lumaWin.w = std::min(r.x + r.w, displayRect_.w) - lumaWin.x;
  lumaWin.h = std::min(r.y + r.h, displayRect_.h) - lumaWin.y;
  if (lumaWin.w <= 0 || lumaWin.h <= 0) return 0;
  uint64_t d = sseInWindow(orig_.luma, recon_.luma, lumaWin);
  Rect cWin{lumaWin.x / 2, lumaWin.y / 2, ceilDiv(lumaWin.w, 2),
            ceilDiv(lumaWin.h, 2)};
  d += sseInWindow(orig_.cb, recon_.cb, cWin);
  d += sseInWindow(orig_.cr, recon_.cr, cWin);
  return d;
}

namespace {

int64_t leafSyntaxBits(const CuNode &leaf, bool isIntraFrame) {
  BitWriter bw;
  // minLeafSize == size suppresses the split flag; it is accounted by the
  // caller when present at this node.
  writeCuTree(bw, leaf, leaf.size, isIntraFrame);
  return static_cast<int64_t>(bw.bitCount());
}

}  // namespace

void FrameEncoder::tryCandidate(CuNodePtr cand, int size,
                                bool splitFlagPresent, CuNodePtr *best,
                                RdCost *bestCost, Snapshot *bestState) {
  Rect rect{cand->x, cand->y, size, size};
  codeLeafResiduals(*cand, orig_, ctx_);
  uint64_t dist = cuDistortion(rect);
  int64_t bits = leafSyntaxBits(*cand, isIntra_) + (splitFlagPresent ? 1 : 0);
  RdCost cost = RdCost::of(dist, bits, lambda_);
  if (*best == nullptr || cost.better(*bestCost)) {
    *best = std::move(cand);
    *bestCost = cost;
    *bestState = save(rect);
  }
}

std::pair<CuNodePtr, RdCost> FrameEncoder::searchLeafModes(
    int x, int y, int size, bool splitFlagPresent) {
  Rect rect{x, y, size, size};
  Snapshot pre = save(rect);
  CuNodePtr best;
  RdCost bestCost;
  Snapshot bestState;

  auto makeNode = [&](CuMode mode) {
    auto n = std::make_unique<CuNode>();
    n->x = x;
    n->y = y;
    n->size = size;
    n->mode = mode;
    return n;
  };

  if (!isIntra_) {
    // Skip: predicted vector, no residual.
    tryCandidate(makeNode(CuMode::kSkip), size, splitFlagPresent, &best,
                 &bestCost, &bestState);
    restore(pre);
    // Inter with exhaustive full search.
    MotionResult mr = motionSearch(orig_.luma, rect, *ref_, cfg_.searchRange);
    Mv mvp = motionVectorPredictor(grid_, rect);
    auto inter = makeNode(CuMode::kInter);
    inter->mvd = Mv{mr.mv.x - mvp.x, mr.mv.y - mvp.y};
    tryCandidate(std::move(inter), size, splitFlagPresent, &best, &bestCost,
                 &bestState);
    restore(pre);
  }
  IntraNeighbors nb = gatherIntraNeighbors(ctx_, 0, rect);
  for (IntraMode m :
       {IntraMode::kDc, IntraMode::kHorizontal, IntraMode::kVertical}) {
    if (!intraModeEligible(m, nb)) continue;
    auto cand = makeNode(CuMode::kIntra);
    cand->intraMode = m;
    tryCandidate(std::move(cand), size, splitFlagPresent, &best, &bestCost,
                 &bestState);
    restore(pre);
  }
  assert(best != nullptr);
  restore(bestState);
  return {std::move(best), bestCost};
}

std::pair<CuNodePtr, RdCost> FrameEncoder::encodeCu(int x, int y, int size,
                                                    int minLeafSize) {
  Rect rect{x, y, size, size};
  const bool splitAllowed = size > minLeafSize;
  Snapshot pre = save(rect);

  auto [leafNode, leafCost] = searchLeafModes(x, y, size, splitAllowed);
  if (!splitAllowed) {
    return {std::move(leafNode), leafCost};
  }
  Snapshot leafState = save(rect);
  restore(pre);

  auto node = std::make_unique<CuNode>();
  node->x = x;
  node->y = y;
  node->size = size;
  node->split = true;
  const int h = size / 2;
  RdCost splitCost = RdCost::of(0, 1, lambda_);  // split flag
  const int off[4][2] = {{0, 0}, {h, 0}, {0, h}, {h, h}};
  for (int i = 0; i < 4; ++i) {
    auto [child, childCost] =
        encodeCu(x + off[i][0], y + off[i][1], h, minLeafSize);
    node->child[i] = std::move(child);
    splitCost = splitCost.plus(childCost);
  }
  if (splitCost.better(leafCost)) {
    return {std::move(node), splitCost};
  }
  restore(leafState);
  return {std::move(leafNode), leafCost};
}

std::pair<std::vector<CuNodePtr>, RdCost> FrameEncoder::encodeScuDirect(
    int scuX, int scuY) {
  const int perSide = sizes_.mScu / sizes_.mCtu;
  std::vector<CuNodePtr> forest;
  RdCost total;
  for (auto [cx, cy] : zScanOrder(perSide, perSide)) {
    auto [node, cost] = encodeCu(scuX + cx * sizes_.mCtu,
                                 scuY + cy * sizes_.mCtu, sizes_.mCtu,
                                 sizes_.mMcu);
    forest.push_back(std::move(node));
    total = total.plus(cost);
  }
  return {std::move(forest), total};
}

std::pair<CuNodePtr, RdCost> FrameEncoder::encodeScuQuadtree(int scuX,
                                                             int scuY) {
  return encodeCu(scuX, scuY, sizes_.mScu, sizes_.mCtu);
}

ScuDecision FrameEncoder::selectScuMode(int scuX, int scuY) {
  Rect rect{scuX, scuY, sizes_.mScu, sizes_.mScu};
  ScuDecision dec;
  Snapshot pre = save(rect);

  auto [directForest, directCost] = encodeScuDirect(scuX, scuY);
  dec.directCost = directCost;
  if (sizes_.scuModeBypassed()) {
    dec.chosen = ScuCoding::kDirectCtu;
    dec.flagEmitted = false;
    dec.forest = std::move(directForest);
    dec.cost = directCost;
    return dec;
  }
  Snapshot directState = save(rect);
  restore(pre);

  auto [qtRoot, qtCost] = encodeScuQuadtree(scuX, scuY);
  dec.quadtreeCost = qtCost;
  RdCost flagCost = RdCost::of(0, 1, lambda_);
  RdCost directTotal = directCost.plus(flagCost);
  RdCost qtTotal = qtCost.plus(flagCost);

  dec.flagEmitted = true;
  if (qtTotal.better(directTotal)) {
    dec.chosen = ScuCoding::kScuToCtu;
    dec.forest.clear();
    dec.forest.push_back(std::move(qtRoot));
    dec.cost = qtTotal;
    return dec;  // quadtree trial state is already in place
  }
  restore(pre);
  restore(directState);
  dec.chosen = ScuCoding::kDirectCtu;
  dec.forest = std::move(directForest);
  dec.cost = directTotal;
  return dec;
}

FrameEncodeResult FrameEncoder::encode() {
  FrameEncodeResult out;
  const int scusX = orig_.luma.width() / sizes_.mScu;
  const int scusY = orig_.luma.height() / sizes_.mScu;
  std::vector<BitWriter> scuPayload(static_cast<size_t>(scusX) * scusY);

  for (int sy = 0; sy < scusY; ++sy) {
    for (int sx = 0; sx < scusX; ++sx) {
      ScuDecision dec = selectScuMode(sx * sizes_.mScu, sy * sizes_.mScu);
      BitWriter &bw = scuPayload[static_cast<size_t>(sy) * scusX + sx];
      if (dec.flagEmitted) {
        bw.writeBit(dec.chosen == ScuCoding::kScuToCtu ? 1 : 0);
        out.stats.scuModeFlagBits += 1;
      }
      const int minLeaf = dec.chosen == ScuCoding::kDirectCtu ? sizes_.mMcu
                                                              : sizes_.mCtu;
      for (const auto &root : dec.forest) {
        writeCuTree(bw, *root, minLeaf, isIntra_);
      }
      assert(static_cast<int64_t>(bw.bitCount()) == dec.cost.bits);
      if (dec.chosen == ScuCoding::kDirectCtu) {
        out.stats.directCtuCount += 1;
      } else {
        out.stats.scuToCtuCount += 1;
      }
      out.scuDecisions.push_back(std::move(dec));
    }
  }

  decideSao(out);
  if (cfg_.saoMode != SaoMode::kOff) {
    // SAO syntax goes at the tail of each SCU payload.
    SaoFrameParams &sao = saoParams_;
    const int blocksPerScu = sizes_.mScu / sao.blockSize;
    for (int sy = 0; sy < scusY; ++sy) {
      for (int sx = 0; sx < scusX; ++sx) {
        BitWriter &bw = scuPayload[static_cast<size_t>(sy) * scusX + sx];
        size_t before = bw.bitCount();
        SaoScuSyntaxView view{sx * blocksPerScu, sy * blocksPerScu,
                              blocksPerScu};
        writeScuSao(bw, sao, view, cfg_.saoMode,
                    sy * scusX + sx);
        out.stats.saoBits += static_cast<int64_t>(bw.bitCount() - before);
      }
    }
    applySaoFrame(recon_, sao, sizes_.mScu);
  }

  decideAlf(out);
  if (out.alfDecision.sliceFlag) {
    for (int s = 0; s < scusX * scusY; ++s) {
      BitWriter &bw = scuPayload[static_cast<size_t>(s)];
      size_t before = bw.bitCount();
      writeAlfScuFlags(bw, out.alfDecision.scu[s]);
      out.stats.alfBits += static_cast<int64_t>(bw.bitCount() - before);
    }
  }

  out.header.isIntra = isIntra_;
  out.header.alfSliceFlag = out.alfDecision.sliceFlag;
  for (int i = 0; i < kAlfUniqueCoeffs; ++i) {
    out.header.alfCoeff[i] = out.alfDecision.filter.coeff[i];
  }
  writeFrameHeader(out.payload, out.header);
  if (out.alfDecision.sliceFlag) {
    // Coefficient bits (payload minus type byte and flag bit).
    out.stats.alfBits +=
        static_cast<int64_t>(out.payload.bitCount()) - 8 - 1;
  }
  for (const BitWriter &bw : scuPayload) {
    out.payload.appendWriter(bw);
  }
  out.payload.byteAlign();
  out.stats.totalBits = static_cast<int64_t>(out.payload.bitCount());
  out.recon = recon_;
  out.sao = saoParams_;
  return out;
}

void FrameEncoder::decideSao(FrameEncodeResult &out) {
  if (cfg_.saoMode == SaoMode::kOff) return;
  SaoFrameParams &sao = saoParams_;
  sao.blockSize = cfg_.saoBlockSize;
  sao.bitDepth = cfg_.bitDepth;
  sao.blocksX = orig_.luma.width() / sao.blockSize;
  sao.blocksY = orig_.luma.height() / sao.blockSize;
  sao.coded.assign(static_cast<size_t>(sao.blocksX) * sao.blocksY,
                   SaoBlockParams{});
  sao.resolved.assign(sao.coded.size(), SaoBlockParams{});
  const int scusX = orig_.luma.width() / sizes_.mScu;
  const int scusY = orig_.luma.height() / sizes_.mScu;
  sao.scuSplit.assign(static_cast<size_t>(scusX) * scusY, 1);
  const int blocksPerScu = sizes_.mScu / sao.blockSize;
  const bool adaptive = cfg_.saoMode == SaoMode::kAdaptiveBlock;

  for (int sy = 0; sy < scusY; ++sy) {
    for (int sx = 0; sx < scusX; ++sx) {
      SaoScuDiag diag;
      diag.adaptive = adaptive;
      double splitTotal = 0.0;
      // Per-block trial (always needed: it is the fixed scheme and the
      // split branch of the adaptive scheme).
      std::vector<SaoBlockParams> splitCoded(
          static_cast<size_t>(blocksPerScu) * blocksPerScu);
      std::vector<SaoBlockParams> splitResolved(splitCoded.size());
      for (int byy = 0; byy < blocksPerScu; ++byy) {
        for (int bxx = 0; bxx < blocksPerScu; ++bxx) {
          int bx = sx * blocksPerScu + bxx;
          int by = sy * blocksPerScu + byy;
          for (int comp = 0; comp < 3; ++comp) {
            const int scale = comp == 0 ? 1 : 2;
            Rect block{bx * sao.blockSize / scale,
                       by * sao.blockSize / scale, sao.blockSize / scale,
                       sao.blockSize / scale};
            Rect scu{sx * sizes_.mScu / scale, sy * sizes_.mScu / scale,
                     sizes_.mScu / scale, sizes_.mScu / scale};
            Rect statsWin = comp == 0
                                ? displayRect_
                                : Rect{0, 0, ceilDiv(displayRect_.w, 2),
                                       ceilDiv(displayRect_.h, 2)};
            // Merge sources: the trial-local grid inside this SCU, the
            // final grid across its left/top boundary.
            const SaoParams *left = nullptr;
            const SaoParams *up = nullptr;
            if (bx > 0) {
              left = bxx > 0
                         ? &splitResolved[byy * blocksPerScu + bxx - 1]
                                .plane[comp]
                         : &sao.resolved[sao.blockIndex(bx - 1, by)]
                                .plane[comp];
            }
            if (by > 0) {
              up = byy > 0 ? &splitResolved[(byy - 1) * blocksPerScu + bxx]
                                  .plane[comp]
                           : &sao.resolved[sao.blockIndex(bx, by - 1)]
                                  .plane[comp];
            }
            SaoCandidate cand = chooseSaoParams(
                orig_.plane(comp), recon_.plane(comp), block, scu, statsWin,
                cfg_.bitDepth, lambda_, left, up);
            splitTotal += cand.cost(lambda_);
            splitCoded[byy * blocksPerScu + bxx].plane[comp] = cand.params;
            SaoParams resolved = cand.params;
            if (cand.params.mode == SaoBlockMode::kMergeLeft) {
              resolved = *left;
            } else if (cand.params.mode == SaoBlockMode::kMergeUp) {
              resolved = *up;
            }
            splitResolved[byy * blocksPerScu + bxx].plane[comp] = resolved;
          }
        }
      }
      diag.splitCost = splitTotal;

      bool useSplit = true;
      double chosen = splitTotal;
      SaoBlockParams regionParams;
      if (adaptive) {
        double unsplitTotal = 0.0;
        for (int comp = 0; comp < 3; ++comp) {
          const int scale = comp == 0 ? 1 : 2;
          Rect region{sx * sizes_.mScu / scale, sy * sizes_.mScu / scale,
                      sizes_.mScu / scale, sizes_.mScu / scale};
          Rect statsWin = comp == 0
                              ? displayRect_
                              : Rect{0, 0, ceilDiv(displayRect_.w, 2),
                                     ceilDiv(displayRect_.h, 2)};
          SaoCandidate cand = chooseSaoRegionParams(
              orig_.plane(comp), recon_.plane(comp), region, region, statsWin,
              cfg_.bitDepth, lambda_);
          unsplitTotal += cand.cost(lambda_);
          regionParams.plane[comp] = cand.params;
        }
        diag.unsplitCost = unsplitTotal;
        useSplit = splitTotal < unsplitTotal;
        chosen = std::min(splitTotal, unsplitTotal) + lambda_;  // split flag
        diag.allOffCost = lambda_ * (1 + 3);
      } else {
        diag.allOffCost =
            lambda_ * (3.0 * blocksPerScu * blocksPerScu);
      }
      diag.chosenCost = chosen;
      out.saoDiag.push_back(diag);

      int scuIndex = sy * scusX + sx;
      sao.scuSplit[scuIndex] = useSplit ? 1 : 0;
      SaoScuSyntaxView view{sx * blocksPerScu, sy * blocksPerScu,
                            blocksPerScu};
      if (useSplit) {
        for (int byy = 0; byy < blocksPerScu; ++byy) {
          for (int bxx = 0; bxx < blocksPerScu; ++bxx) {
            int idx = sao.blockIndex(sx * blocksPerScu + bxx,
                                     sy * blocksPerScu + byy);
            sao.coded[idx] = splitCoded[byy * blocksPerScu + bxx];
            sao.resolved[idx] = splitResolved[byy * blocksPerScu + bxx];
          }
        }
      } else {
        int tl = sao.blockIndex(view.scuBx0, view.scuBy0);
        sao.coded[tl] = regionParams;
        sao.resolved[tl] = regionParams;
        fillUnsplitMergePattern(sao, view);
        // Resolve the implicit merges of this SCU immediately so later
        // SCUs can merge across the boundary.
        for (int byy = 0; byy < blocksPerScu; ++byy) {
          for (int bxx = 0; bxx < blocksPerScu; ++bxx) {
            if (bxx == 0 && byy == 0) continue;
            int idx = sao.blockIndex(view.scuBx0 + bxx, view.scuBy0 + byy);
            sao.resolved[idx] = regionParams;
          }
        }
      }
    }
  }
  // Batch resolution over the coded grid must reproduce the incremental
  // one; it is the same routine the decoder runs.
  resolveSaoParams(sao);
}

void FrameEncoder::decideAlf(FrameEncodeResult &out) {
  AlfFrameDecision &dec = out.alfDecision;
  dec.sliceFlag = false;
  if (!cfg_.alfEnabled) return;

  dec.filter = deriveWienerFilter(orig_.luma, recon_.luma, displayRect_);
  // Fully filtered frame for per-cell distortion probing.
  Frame filtered = recon_;
  std::vector<std::vector<AlfCell>> cellsPerScu;
  for (const ScuDecision &sd : out.scuDecisions) {
    cellsPerScu.push_back(collectAlfCells(sd.forest, sizes_.mCtu));
  }
  {
    AlfFrameDecision every;
    every.sliceFlag = true;
    every.filter = dec.filter;
    every.scu.resize(out.scuDecisions.size());
    for (auto &d : every.scu) {
      d.superBlockFlag = true;
      d.allCuFlag = true;
    }
    applyAlfFrame(filtered, dec.filter, cellsPerScu, every);
  }

  double onCost = 0.0;
  double offCost = 0.0;
  dec.scu.clear();
  out.alfBranchGapMax = 0.0;
  for (size_t s = 0; s < out.scuDecisions.size(); ++s) {
    AlfScuCost c = decideCuFlags(orig_, recon_, filtered, cellsPerScu[s],
                                 displayRect_, lambda_);
    onCost += c.chosenCost;
    offCost += c.branch2Cost - lambda_;  // distortion only, no flag bit
    out.alfBranchGapMax =
        std::max(out.alfBranchGapMax,
                 c.chosenCost - std::min(c.branch1Cost, c.branch2Cost));
    dec.scu.push_back(std::move(c.decision));
  }
  int64_t coeffBits = 0;
  for (int i = 0; i < kAlfUniqueCoeffs; ++i) {
    coeffBits += seBits(dec.filter.coeff[i]);
  }
  onCost += lambda_ * static_cast<double>(coeffBits);
  if (onCost < offCost) {
    dec.sliceFlag = true;
    applyAlfFrame(recon_, dec.filter, cellsPerScu, dec);
  } else {
    dec.scu.clear();
    dec.sliceFlag = false;
  }
}

}  // namespace sbc
