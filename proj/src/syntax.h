#ifndef SBC_SYNTAX_H_
#define SBC_SYNTAX_H_

#include <vector>

#include "alf.h"
#include "bitio.h"
#include "config.h"
#include "cu.h"
#include "sao.h"

namespace sbc {

inline constexpr uint32_t kStreamMagic = 0x53424331u;  // "SBC1"

// Fixed-width sequence header carrying the display geometry and the full
// encoder configuration a conformant decoder needs.
struct SequenceHeader {
  EncoderConfig cfg;

  static SequenceHeader fromConfig(const EncoderConfig &c) {
    return SequenceHeader{c};
  }
};

void writeSequenceHeader(BitWriter &bw, const SequenceHeader &h);
SequenceHeader readSequenceHeader(BitReader &br);

struct FrameHeader {
  bool isIntra = false;
  bool alfSliceFlag = false;
  std::array<int32_t, kAlfUniqueCoeffs> alfCoeff{};
};

void writeFrameHeader(BitWriter &bw, const FrameHeader &h);
FrameHeader readFrameHeader(BitReader &br);

// Diagonal zigzag scan table for an n x n block (DC first).
const std::vector<int> &zigzagScan(int n);

// Coded-block flag plus (zero-run, nonzero level) pairs over the zigzag
// scan, closed by an explicit end-of-block run of remaining + 1.
void writeCoefficients(BitWriter &bw, const TuLevels &tu);
TuLevels readCoefficients(BitReader &br, int n);

// Recursive CU tree syntax. A split flag appears only above minLeafSize;
// leaves carry skip/mode/prediction syntax and their TU coefficients.
void writeCuTree(BitWriter &bw, const CuNode &node, int minLeafSize,
                 bool isIntraFrame);
CuNodePtr readCuTree(BitReader &br, int x, int y, int size, int minLeafSize,
                     bool isIntraFrame);

int64_t cuTreeBits(const CuNode &node, int minLeafSize, bool isIntraFrame);

// SAO syntax for one SCU. In the adaptive scheme a split flag leads; an
// unsplit SCU signals only the top-left block (OFF/NEW), the rest of its
// blocks take the implicit merge chain. Fixed scheme: per-block signaling,
// no flag.
struct SaoScuSyntaxView {
  int scuBx0 = 0, scuBy0 = 0;  // top-left block coords of this SCU
  int blocksPerScu = 0;        // blocks per SCU side
};

void writeScuSao(BitWriter &bw, const SaoFrameParams &sao,
                 const SaoScuSyntaxView &view, SaoMode mode, int scuIndex);
void readScuSao(BitReader &br, SaoFrameParams &sao,
                const SaoScuSyntaxView &view, SaoMode mode, int scuIndex);

// Fills the implicit merge pattern of an unsplit SCU (top row merges left,
// the rest merge up) into the coded grid.
void fillUnsplitMergePattern(SaoFrameParams &sao, const SaoScuSyntaxView &view);

// Resolves merge references; raster order guarantees sources are final.
void resolveSaoParams(SaoFrameParams &sao);

// ALF per-super-block flags per the improved three-row table.
void writeAlfScuFlags(BitWriter &bw, const AlfScuDecision &d);
AlfScuDecision readAlfScuFlags(BitReader &br, size_t cellCount);

}  // namespace sbc

#endif  // SBC_SYNTAX_H_
