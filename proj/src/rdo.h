#ifndef SBC_RDO_H_
#define SBC_RDO_H_

#include <vector>

#include "recon.h"
#include "syntax.h"

namespace sbc {

// RD decision trade-off. Inter slices use 0.85 * 2^((qp - 12) / 3);
// intra slices halve it.
double lambdaOfQp(int qp, bool sliceIsIntra);

enum class ScuCoding { kDirectCtu = 0, kScuToCtu = 1 };

struct ScuDecision {
  ScuCoding chosen = ScuCoding::kDirectCtu;
  bool flagEmitted = false;
  std::vector<CuNodePtr> forest;  // z-scan CTU roots, or one SCU root
  RdCost cost;
  RdCost directCost;
  RdCost quadtreeCost;  // valid when not bypassed
};

struct SaoScuDiag {
  double chosenCost = 0.0;
  double allOffCost = 0.0;
  double unsplitCost = 0.0;   // adaptive scheme
  double splitCost = 0.0;     // adaptive scheme
  bool adaptive = false;
};

struct FrameBitStats {
  int64_t totalBits = 0;
  int64_t saoBits = 0;
  int64_t alfBits = 0;  // slice coefficients + per-SCU flags
  int64_t scuModeFlagBits = 0;
  int directCtuCount = 0;
  int scuToCtuCount = 0;
};

// Result of encoding one frame: assembled payload plus everything the
// sequence layer needs for stats and for the reference store.
struct FrameEncodeResult {
  FrameHeader header;
  BitWriter payload;              // header + SCU payloads, byte aligned
  Frame recon;                    // fully filtered, padded geometry
  FrameBitStats stats;
  std::vector<ScuDecision> scuDecisions;  // raster order
  std::vector<SaoScuDiag> saoDiag;        // empty when SAO off
  SaoFrameParams sao;
  AlfFrameDecision alfDecision;
  double alfBranchGapMax = 0.0;   // diagnostics for tests
};

class FrameEncoder {
 public:
  FrameEncoder(const EncoderConfig &cfg, const PartitionSizes &sizes,
               const Frame &origPadded, const RefPlanes *ref, bool isIntra);

  FrameEncodeResult encode();

  // Exposed for focused tests.
  std::pair<CuNodePtr, RdCost> encodeCu(int x, int y, int size,
                                        int minLeafSize);
  ScuDecision selectScuMode(int scuX, int scuY);
  std::pair<std::vector<CuNodePtr>, RdCost> encodeScuDirect(int scuX,
                                                            int scuY);
  std::pair<CuNodePtr, RdCost> encodeScuQuadtree(int scuX, int scuY);

  const Frame &workingRecon() const { return recon_; }
  double lambda() const { return lambda_; }

 private:
  struct Snapshot {
    Rect rect;
    std::vector<uint16_t> luma;
    std::vector<uint16_t> cb;
    std::vector<uint16_t> cr;
    std::vector<CodedGrid::Cell> cells;
  };
  Snapshot save(Rect r) const;
  void restore(const Snapshot &s);

  uint64_t cuDistortion(Rect lumaRect) const;
  std::pair<CuNodePtr, RdCost> searchLeafModes(int x, int y, int size,
                                               bool splitFlagPresent);
  void tryCandidate(CuNodePtr cand, int size, bool splitFlagPresent,
                    CuNodePtr *best, RdCost *bestCost, Snapshot *bestState);

  void decideSao(FrameEncodeResult &out);
  void decideAlf(FrameEncodeResult &out);

  const EncoderConfig &cfg_;
  PartitionSizes sizes_;
  const Frame &orig_;
  const RefPlanes *ref_;
  bool isIntra_;
  double lambda_;
  Frame recon_;
  CodedGrid grid_;
  ReconContext ctx_;
  Rect displayRect_;
  SaoFrameParams saoParams_;
};

}  // namespace sbc

#endif  // SBC_RDO_H_
