#ifndef SBC_ENCODER_H_
#define SBC_ENCODER_H_

#include <vector>

#include "frame_io.h"
#include "rdo.h"

namespace sbc {

struct SequenceFrameStats {
  int frame = 0;
  bool isIntra = false;
  int64_t bits = 0;
  double psnr[3] = {0, 0, 0};
  bool lossless[3] = {false, false, false};
  int64_t saoBits = 0;
  int64_t alfBits = 0;
  int64_t scuModeFlagBits = 0;
  int directCtuCount = 0;
  int scuToCtuCount = 0;
};

struct EncodeOutput {
  std::vector<uint8_t> stream;
  std::vector<Frame> recon;  // padded geometry, display size recorded
  std::vector<SequenceFrameStats> frameStats;
  // Aggregated per-SCU diagnostics across all frames (testing hooks).
  std::vector<SaoScuDiag> saoDiag;
  std::vector<ScuCoding> scuModes;
  int64_t totalScuModeFlagBits = 0;
};

// Encodes a display-sized frame sequence. Frames are padded to the SCU grid
// internally; the first frame and every intraPeriod-th frame (when
// intraPeriod > 0) are coded intra, everything else low-delay P.
class SequenceEncoder {
 public:
  explicit SequenceEncoder(const EncoderConfig &cfg);

  EncodeOutput encode(const std::vector<Frame> &frames);

  const EncoderConfig &config() const { return cfg_; }
  const PartitionSizes &sizes() const { return sizes_; }

 private:
  EncoderConfig cfg_;
  PartitionSizes sizes_;
};

std::string frameStatsCsv(const std::vector<SequenceFrameStats> &stats);

}  // namespace sbc

#endif  // SBC_ENCODER_H_
