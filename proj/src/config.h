#ifndef SBC_CONFIG_H_
#define SBC_CONFIG_H_

#include <string>

#include "common.h"

namespace sbc {

enum class SaoMode { kOff = 0, kFixedBlock = 1, kAdaptiveBlock = 2 };

const char *saoModeName(SaoMode m);
SaoMode saoModeFromName(const std::string &name);

// Encoder configuration. Field names double as the keys of the key=value
// config file and (lower-kebab-cased) as CLI flag names.
struct EncoderConfig {
  int width = 0;
  int height = 0;
  int bitDepth = 8;
  int qp = 32;
  int maxScuWidth = 256;
  int maxScuHeight = 256;
  int maxPartitionDepth = 5;
  int maxDirectPartitionDepth = 2;
  // 0 means only the first frame is coded intra; k > 0 inserts an intra
  // frame every k frames. Everything else is low-delay P.
  int intraPeriod = 0;
  int searchRange = 8;
  SaoMode saoMode = SaoMode::kAdaptiveBlock;
  int saoBlockSize = 64;
  bool alfEnabled = true;
  double fps = 30.0;

  void validate() const;  // throws Error(kInvalidArgument) on violations
  std::string echo() const;
};

struct PartitionSizes {
  int mScu = 0;
  int mCtu = 0;
  int mMcu = 0;
  bool scuModeBypassed() const { return mCtu == mMcu; }
};

PartitionSizes derivePartitionSizes(const EncoderConfig &cfg);

// Applies "key=value" to cfg; unknown keys and malformed values throw.
void applyConfigKeyValue(EncoderConfig &cfg, const std::string &key,
                         const std::string &value);
void loadConfigFile(EncoderConfig &cfg, const std::string &path);

}  // namespace sbc

#endif  // SBC_CONFIG_H_
