#include "syntax.h"

#include <cstdlib>
#include <map>

namespace sbc {

void writeSequenceHeader(BitWriter &bw, const SequenceHeader &h) {
  const EncoderConfig &c = h.cfg;
  bw.writeBits(kStreamMagic, 32);
  bw.writeBits(static_cast<uint32_t>(c.width), 16);
  bw.writeBits(static_cast<uint32_t>(c.height), 16);
  bw.writeBits(static_cast<uint32_t>(c.bitDepth), 8);
  bw.writeBits(static_cast<uint32_t>(c.qp), 8);
  bw.writeBits(static_cast<uint32_t>(c.maxScuWidth), 16);
  bw.writeBits(static_cast<uint32_t>(c.maxScuHeight), 16);
  bw.writeBits(static_cast<uint32_t>(c.maxPartitionDepth), 8);
  bw.writeBits(static_cast<uint32_t>(c.maxDirectPartitionDepth), 8);
  bw.writeBits(static_cast<uint32_t>(c.intraPeriod), 16);
  bw.writeBits(static_cast<uint32_t>(c.searchRange), 16);
  bw.writeBits(static_cast<uint32_t>(c.saoMode), 8);
  bw.writeBits(static_cast<uint32_t>(c.saoBlockSize), 16);
  bw.writeBits(c.alfEnabled ? 1 : 0, 8);
}

SequenceHeader readSequenceHeader(BitReader &br) {
  if (br.readBits(32) != kStreamMagic) {
    fail(ErrorCode::kBadData, "bad stream magic (expected \"SBC1\")");
  }
  EncoderConfig c;
  c.width = static_cast<int>(br.readBits(16));
  c.height = static_cast<int>(br.readBits(16));
  c.bitDepth = static_cast<int>(br.readBits(8));
  if (c.bitDepth != 8 && c.bitDepth != 10) {
    fail(ErrorCode::kUnsupported,
         "unsupported bit depth " + std::to_string(c.bitDepth));
  }
  c.qp = static_cast<int>(br.readBits(8));
  c.maxScuWidth = static_cast<int>(br.readBits(16));
  c.maxScuHeight = static_cast<int>(br.readBits(16));
  c.maxPartitionDepth = static_cast<int>(br.readBits(8));
  c.maxDirectPartitionDepth = static_cast<int>(br.readBits(8));
  c.intraPeriod = static_cast<int>(br.readBits(16));
  c.searchRange = static_cast<int>(br.readBits(16));
  uint32_t sao = br.readBits(8);
  if (sao > 2) {
    fail(ErrorCode::kBadData, "bad sao mode field");
  }
  c.saoMode = static_cast<SaoMode>(sao);
  c.saoBlockSize = static_cast<int>(br.readBits(16));
  c.alfEnabled = br.readBits(8) != 0;
  c.validate();
  return SequenceHeader{c};
}

void writeFrameHeader(BitWriter &bw, const FrameHeader &h) {
  bw.writeBits(h.isIntra ? 0 : 1, 8);
  bw.writeBit(h.alfSliceFlag ? 1 : 0);
  if (h.alfSliceFlag) {
    for (int i = 0; i < kAlfUniqueCoeffs; ++i) bw.writeSe(h.alfCoeff[i]);
  }
}

FrameHeader readFrameHeader(BitReader &br) {
  FrameHeader h;
  uint32_t type = br.readBits(8);
  if (type > 1) {
    fail(ErrorCode::kBadData,
         "bad frame type " + std::to_string(type) + " at bit " +
             std::to_string(br.bitPos()));
  }
  h.isIntra = type == 0;
  h.alfSliceFlag = br.readBit() != 0;
  if (h.alfSliceFlag) {
    for (int i = 0; i < kAlfUniqueCoeffs; ++i) h.alfCoeff[i] = br.readSe();
  }
  return h;
}

const std::vector<int> &zigzagScan(int n) {
  static std::map<int, std::vector<int>> cache = [] {
    std::map<int, std::vector<int>> m;
    for (int size = 4; size <= kMaxTuSize; size *= 2) {
      std::vector<int> scan;
      scan.reserve(static_cast<size_t>(size) * size);
      for (int d = 0; d <= 2 * size - 2; ++d) {
        int rLo = std::max(0, d - size + 1);
        int rHi = std::min(d, size - 1);
        if (d % 2 == 0) {
          for (int r = rHi; r >= rLo; --r) scan.push_back(r * size + (d - r));
        } else {
          for (int r = rLo; r <= rHi; ++r) scan.push_back(r * size + (d - r));
        }
      }
      m[size] = std::move(scan);
    }
    return m;
  }();
  auto it = cache.find(n);
  if (it == cache.end()) {
    fail(ErrorCode::kInvalidArgument,
         "no zigzag scan for size " + std::to_string(n));
  }
  return it->second;
}

void writeCoefficients(BitWriter &bw, const TuLevels &tu) {
  bw.writeBit(tu.cbf ? 1 : 0);
  if (!tu.cbf) return;
  const std::vector<int> &scan = zigzagScan(tu.n);
  const int count = tu.n * tu.n;
  int pos = 0;
  while (pos < count) {
    int run = 0;
    while (pos + run < count && tu.levels[scan[pos + run]] == 0) ++run;
    if (pos + run == count) break;  // no further nonzero levels
    bw.writeUe(static_cast<uint32_t>(run));
    bw.writeSe(tu.levels[scan[pos + run]]);
    pos += run + 1;
  }
  // End of block: run of remaining positions + 1.
  bw.writeUe(static_cast<uint32_t>(count - pos + 1));
}

TuLevels readCoefficients(BitReader &br, int n) {
  TuLevels tu;
  tu.n = n;
  tu.cbf = br.readBit() != 0;
  if (!tu.cbf) return tu;
  const std::vector<int> &scan = zigzagScan(n);
  const int count = n * n;
  tu.levels.assign(count, 0);
  int pos = 0;
  for (;;) {
    uint32_t run = br.readUe();
    if (run == static_cast<uint32_t>(count - pos + 1)) break;  // end of block
    if (run > static_cast<uint32_t>(count - pos - 1)) {
      fail(ErrorCode::kBadData,
           "coefficient run overruns block at bit " +
               std::to_string(br.bitPos()));
    }
    int32_t level = br.readSe();
    if (level == 0) {
      fail(ErrorCode::kBadData,
           "zero level in run-level pair at bit " + std::to_string(br.bitPos()));
    }
    pos += static_cast<int>(run);
    tu.levels[scan[pos]] = static_cast<int16_t>(clip16(level));
    ++pos;
  }
  return tu;
}

namespace {

void writeLeaf(BitWriter &bw, const CuNode &node, bool isIntraFrame) {
  if (!isIntraFrame) {
    bw.writeBit(node.mode == CuMode::kSkip ? 1 : 0);
    if (node.mode == CuMode::kSkip) return;
    bw.writeBit(node.mode == CuMode::kIntra ? 1 : 0);
  }
  if (node.mode == CuMode::kIntra) {
    bw.writeUe(static_cast<uint32_t>(node.intraMode));
  } else {
    bw.writeSe(node.mvd.x);
    bw.writeSe(node.mvd.y);
  }
  for (int comp = 0; comp < 3; ++comp) {
    for (const TuLevels &tu : node.tu[comp]) writeCoefficients(bw, tu);
  }
}

void readLeaf(BitReader &br, CuNode &node, bool isIntraFrame) {
  if (isIntraFrame) {
    node.mode = CuMode::kIntra;
  } else {
    if (br.readBit()) {
      node.mode = CuMode::kSkip;
      return;
    }
    node.mode = br.readBit() ? CuMode::kIntra : CuMode::kInter;
  }
  if (node.mode == CuMode::kIntra) {
    uint32_t m = br.readUe();
    if (m > 2) {
      fail(ErrorCode::kBadData,
           "bad intra mode " + std::to_string(m) + " at bit " +
               std::to_string(br.bitPos()));
    }
    node.intraMode = static_cast<IntraMode>(m);
  } else {
    node.mvd.x = br.readSe();
    node.mvd.y = br.readSe();
  }
  for (int comp = 0; comp < 3; ++comp) {
    const int n = comp == 0 ? node.size : node.size / 2;
    const int ts = tuSizeFor(n);
    const int tiles = n / ts;
    node.tu[comp].clear();
    for (int t = 0; t < tiles * tiles; ++t) {
      node.tu[comp].push_back(readCoefficients(br, ts));
    }
  }
}

}  // namespace

void writeCuTree(BitWriter &bw, const CuNode &node, int minLeafSize,
                 bool isIntraFrame) {
  if (node.size > minLeafSize) {
    bw.writeBit(node.split ? 1 : 0);
  }
  if (node.split) {
    for (const auto &c : node.child) {
      writeCuTree(bw, *c, minLeafSize, isIntraFrame);
    }
    return;
  }
  writeLeaf(bw, node, isIntraFrame);
}

CuNodePtr readCuTree(BitReader &br, int x, int y, int size, int minLeafSize,
                     bool isIntraFrame) {
  auto node = std::make_unique<CuNode>();
  node->x = x;
  node->y = y;
  node->size = size;
  node->split = size > minLeafSize ? br.readBit() != 0 : false;
  if (node->split) {
    int h = size / 2;
    node->child[0] = readCuTree(br, x, y, h, minLeafSize, isIntraFrame);
    node->child[1] = readCuTree(br, x + h, y, h, minLeafSize, isIntraFrame);
    node->child[2] = readCuTree(br, x, y + h, h, minLeafSize, isIntraFrame);
    node->child[3] = readCuTree(br, x + h, y + h, h, minLeafSize,
                                isIntraFrame);
    return node;
  }
  readLeaf(br, *node, isIntraFrame);
  return node;
}

int64_t cuTreeBits(const CuNode &node, int minLeafSize, bool isIntraFrame) {
  BitWriter bw;
  writeCuTree(bw, node, minLeafSize, isIntraFrame);
  return static_cast<int64_t>(bw.bitCount());
}

namespace {

void writeSaoParams(BitWriter &bw, const SaoParams &p, bool allowMerge) {
  bw.writeUe(static_cast<uint32_t>(p.mode));
  assert(allowMerge || p.mode == SaoBlockMode::kOff ||
         p.mode == SaoBlockMode::kNew);
  (void)allowMerge;
  if (p.mode != SaoBlockMode::kNew) return;
  bw.writeUe(static_cast<uint32_t>(p.type));
  if (p.type == SaoType::kBo) {
    bw.writeBits(static_cast<uint32_t>(p.bandPosition), 5);
    for (int o : p.offsets) {
      bw.writeUe(static_cast<uint32_t>(std::abs(o)));
      bw.writeBit(o < 0 ? 1 : 0);
    }
  } else {
    // Category signs are inferred: 1,2 nonnegative, 3,4 nonpositive.
    for (int o : p.offsets) bw.writeUe(static_cast<uint32_t>(std::abs(o)));
  }
}

SaoParams readSaoParams(BitReader &br, bool allowMerge, bool hasLeft,
                        bool hasUp, int bitDepth) {
  SaoParams p;
  uint32_t mode = br.readUe();
  if (mode > 3 || (!allowMerge && mode > 1)) {
    fail(ErrorCode::kBadData,
         "bad SAO mode " + std::to_string(mode) + " at bit " +
             std::to_string(br.bitPos()));
  }
  p.mode = static_cast<SaoBlockMode>(mode);
  if ((p.mode == SaoBlockMode::kMergeLeft && !hasLeft) ||
      (p.mode == SaoBlockMode::kMergeUp && !hasUp)) {
    fail(ErrorCode::kBadData,
         "SAO merge without a neighbor at bit " + std::to_string(br.bitPos()));
  }
  if (p.mode != SaoBlockMode::kNew) return p;
  uint32_t type = br.readUe();
  if (type > 4) {
    fail(ErrorCode::kBadData,
         "bad SAO type " + std::to_string(type) + " at bit " +
             std::to_string(br.bitPos()));
  }
  p.type = static_cast<SaoType>(type);
  const int maxOff = saoMaxOffset(bitDepth);
  if (p.type == SaoType::kBo) {
    p.bandPosition = static_cast<int>(br.readBits(5));
    if (p.bandPosition > 27) {
      fail(ErrorCode::kBadData, "bad SAO band position at bit " +
                                    std::to_string(br.bitPos()));
    }
    for (int i = 0; i < 4; ++i) {
      int mag = static_cast<int>(br.readUe());
      int sign = br.readBit();
      if (mag > maxOff) {
        fail(ErrorCode::kBadData,
             "SAO offset out of range at bit " + std::to_string(br.bitPos()));
      }
      p.offsets[i] = sign ? -mag : mag;
    }
  } else {
    for (int i = 0; i < 4; ++i) {
      int mag = static_cast<int>(br.readUe());
      if (mag > maxOff) {
        fail(ErrorCode::kBadData,
             "SAO offset out of range at bit " + std::to_string(br.bitPos()));
      }
      p.offsets[i] = i < 2 ? mag : -mag;
    }
  }
  return p;
}

}  // namespace

void writeScuSao(BitWriter &bw, const SaoFrameParams &sao,
                 const SaoScuSyntaxView &view, SaoMode mode, int scuIndex) {
  if (mode == SaoMode::kOff) return;
  bool split = true;
  if (mode == SaoMode::kAdaptiveBlock) {
    split = sao.scuSplit[scuIndex] != 0;
    bw.writeBit(split ? 1 : 0);
  }
  if (!split) {
    const SaoBlockParams &tl =
        sao.coded[sao.blockIndex(view.scuBx0, view.scuBy0)];
    for (int comp = 0; comp < 3; ++comp) {
      writeSaoParams(bw, tl.plane[comp], false);
    }
    return;
  }
  for (int by = view.scuBy0; by < view.scuBy0 + view.blocksPerScu; ++by) {
    for (int bx = view.scuBx0; bx < view.scuBx0 + view.blocksPerScu; ++bx) {
      const SaoBlockParams &b = sao.coded[sao.blockIndex(bx, by)];
      for (int comp = 0; comp < 3; ++comp) {
        writeSaoParams(bw, b.plane[comp], true);
      }
    }
  }
}

void fillUnsplitMergePattern(SaoFrameParams &sao,
                             const SaoScuSyntaxView &view) {
  for (int by = view.scuBy0; by < view.scuBy0 + view.blocksPerScu; ++by) {
    for (int bx = view.scuBx0; bx < view.scuBx0 + view.blocksPerScu; ++bx) {
      if (bx == view.scuBx0 && by == view.scuBy0) continue;
      SaoBlockParams &b = sao.coded[sao.blockIndex(bx, by)];
      for (int comp = 0; comp < 3; ++comp) {
        b.plane[comp] = SaoParams{};
        b.plane[comp].mode = by == view.scuBy0 ? SaoBlockMode::kMergeLeft
                                               : SaoBlockMode::kMergeUp;
      }
    }
  }
}

void readScuSao(BitReader &br, SaoFrameParams &sao,
                const SaoScuSyntaxView &view, SaoMode mode, int scuIndex) {
  if (mode == SaoMode::kOff) return;
  bool split = true;
  if (mode == SaoMode::kAdaptiveBlock) {
    split = br.readBit() != 0;
    sao.scuSplit[scuIndex] = split ? 1 : 0;
  }
  if (!split) {
    SaoBlockParams &tl = sao.coded[sao.blockIndex(view.scuBx0, view.scuBy0)];
    for (int comp = 0; comp < 3; ++comp) {
      tl.plane[comp] = readSaoParams(br, false, false, false, sao.bitDepth);
    }
    fillUnsplitMergePattern(sao, view);
    return;
  }
  for (int by = view.scuBy0; by < view.scuBy0 + view.blocksPerScu; ++by) {
    for (int bx = view.scuBx0; bx < view.scuBx0 + view.blocksPerScu; ++bx) {
      SaoBlockParams &b = sao.coded[sao.blockIndex(bx, by)];
      for (int comp = 0; comp < 3; ++comp) {
        b.plane[comp] = readSaoParams(br, true, bx > 0, by > 0,
                                      sao.bitDepth);
      }
    }
  }
}

void resolveSaoParams(SaoFrameParams &sao) {
  sao.resolved.assign(sao.coded.size(), SaoBlockParams{});
  for (int by = 0; by < sao.blocksY; ++by) {
    for (int bx = 0; bx < sao.blocksX; ++bx) {
      int idx = sao.blockIndex(bx, by);
      for (int comp = 0; comp < 3; ++comp) {
        const SaoParams &c = sao.coded[idx].plane[comp];
        SaoParams &r = sao.resolved[idx].plane[comp];
        switch (c.mode) {
          case SaoBlockMode::kOff:
          case SaoBlockMode::kNew:
            r = c;
            break;
          case SaoBlockMode::kMergeLeft:
            if (bx == 0) {
              fail(ErrorCode::kBadData, "unresolved SAO merge-left chain");
            }
            r = sao.resolved[sao.blockIndex(bx - 1, by)].plane[comp];
            break;
          case SaoBlockMode::kMergeUp:
            if (by == 0) {
              fail(ErrorCode::kBadData, "unresolved SAO merge-up chain");
            }
            r = sao.resolved[sao.blockIndex(bx, by - 1)].plane[comp];
            break;
        }
      }
    }
  }
}

void writeAlfScuFlags(BitWriter &bw, const AlfScuDecision &d) {
  bw.writeBit(d.superBlockFlag ? 1 : 0);
  if (!d.superBlockFlag) return;
  bw.writeBit(d.allCuFlag ? 1 : 0);
  if (d.allCuFlag) return;
  for (uint8_t f : d.cuFlags) bw.writeBit(f ? 1 : 0);
}

AlfScuDecision readAlfScuFlags(BitReader &br, size_t cellCount) {
  AlfScuDecision d;
  d.superBlockFlag = br.readBit() != 0;
  if (!d.superBlockFlag) return d;
  d.allCuFlag = br.readBit() != 0;
  if (d.allCuFlag) return d;
  d.cuFlags.resize(cellCount);
  for (size_t i = 0; i < cellCount; ++i) d.cuFlags[i] = br.readBit();
  return d;
}

}  // namespace sbc
