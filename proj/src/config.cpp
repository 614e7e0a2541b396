#include "config.h"

#include <fstream>
#include <sstream>

namespace sbc {

const char *saoModeName(SaoMode m) {
  switch (m) {
    case SaoMode::kOff:
      return "off";
    case SaoMode::kFixedBlock:
      return "fixed";
    case SaoMode::kAdaptiveBlock:
      return "adaptive";
  }
  return "?";
}

SaoMode saoModeFromName(const std::string &name) {
  if (name == "off") return SaoMode::kOff;
  if (name == "fixed" || name == "fixedBlock") return SaoMode::kFixedBlock;
  if (name == "adaptive" || name == "adaptiveBlock") {
    return SaoMode::kAdaptiveBlock;
  }
  fail(ErrorCode::kInvalidArgument, "unknown sao mode '" + name + "'");
}

void EncoderConfig::validate() const {
  if (width <= 0 || height <= 0) {
    fail(ErrorCode::kInvalidArgument, "frame dimensions must be positive");
  }
  if (bitDepth != 8 && bitDepth != 10) {
    fail(ErrorCode::kUnsupported, "bitDepth must be 8 or 10");
  }
  if (qp < 0 || qp > 51) {
    fail(ErrorCode::kInvalidArgument, "qp must be in 0..51");
  }
  if (maxScuWidth != maxScuHeight) {
    fail(ErrorCode::kInvalidArgument,
         "maxScuWidth and maxScuHeight must be equal (square SCU)");
  }
  if (!isPowerOfTwo(maxScuWidth)) {
    fail(ErrorCode::kInvalidArgument, "SCU size must be a power of two");
  }
  if (maxPartitionDepth < 0 || maxDirectPartitionDepth < 0) {
    fail(ErrorCode::kInvalidArgument, "partition depths must be nonnegative");
  }
  if (maxDirectPartitionDepth > maxPartitionDepth) {
    fail(ErrorCode::kInvalidArgument,
         "maxDirectPartitionDepth must be no greater than maxPartitionDepth");
  }
  if ((maxScuWidth >> maxPartitionDepth) < 8) {
    fail(ErrorCode::kInvalidArgument,
         "minimum CU size (SCU >> maxPartitionDepth) must be at least 8");
  }
  if (intraPeriod < 0) {
    fail(ErrorCode::kInvalidArgument, "intraPeriod must be nonnegative");
  }
  if (searchRange < 0) {
    fail(ErrorCode::kInvalidArgument, "searchRange must be nonnegative");
  }
  if (saoMode != SaoMode::kOff) {
    if (!isPowerOfTwo(saoBlockSize) || saoBlockSize < 8 ||
        saoBlockSize > maxScuWidth) {
      fail(ErrorCode::kInvalidArgument,
           "saoBlockSize must be a power of two in 8..SCU size");
    }
  }
  if (fps <= 0.0) {
    fail(ErrorCode::kInvalidArgument, "fps must be positive");
  }
}

std::string EncoderConfig::echo() const {
  std::ostringstream os;
  os << "width=" << width << "\n"
     << "height=" << height << "\n"
     << "bitDepth=" << bitDepth << "\n"
     << "qp=" << qp << "\n"
     << "maxScuWidth=" << maxScuWidth << "\n"
     << "maxScuHeight=" << maxScuHeight << "\n"
     << "maxPartitionDepth=" << maxPartitionDepth << "\n"
     << "maxDirectPartitionDepth=" << maxDirectPartitionDepth << "\n"
     << "intraPeriod=" << intraPeriod << "\n"
     << "searchRange=" << searchRange << "\n"
     << "saoMode=" << saoModeName(saoMode) << "\n"
     << "saoBlockSize=" << saoBlockSize << "\n"
     << "alfEnabled=" << (alfEnabled ? 1 : 0) << "\n"
     << "fps=" << fps << "\n";
  return os.str();
}

PartitionSizes derivePartitionSizes(const EncoderConfig &cfg) {
  cfg.validate();
  PartitionSizes s;
  s.mScu = cfg.maxScuWidth;
  s.mCtu = cfg.maxScuWidth >> cfg.maxDirectPartitionDepth;
  s.mMcu = cfg.maxScuWidth >> cfg.maxPartitionDepth;
  return s;
}

namespace {

int parseInt(const std::string &key, const std::string &value) {
  try {
    size_t pos = 0;
    int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception &) {
    fail(ErrorCode::kInvalidArgument,
         "bad integer value '" + value + "' for config key " + key);
  }
}

bool parseBool(const std::string &key, const std::string &value) {
  if (value == "1" || value == "on" || value == "true") return true;
  if (value == "0" || value == "off" || value == "false") return false;
  fail(ErrorCode::kInvalidArgument,
       "bad boolean value '" + value + "' for config key " + key);
}

}  // namespace

void applyConfigKeyValue(EncoderConfig &cfg, const std::string &key,
                         const std::string &value) {
  if (key == "width") {
    cfg.width = parseInt(key, value);
  } else if (key == "height") {
    cfg.height = parseInt(key, value);
  } else if (key == "bitDepth") {
    cfg.bitDepth = parseInt(key, value);
  } else if (key == "qp") {
    cfg.qp = parseInt(key, value);
  } else if (key == "maxScuWidth") {
    cfg.maxScuWidth = parseInt(key, value);
  } else if (key == "maxScuHeight") {
    cfg.maxScuHeight = parseInt(key, value);
  } else if (key == "maxPartitionDepth") {
    cfg.maxPartitionDepth = parseInt(key, value);
  } else if (key == "maxDirectPartitionDepth") {
    cfg.maxDirectPartitionDepth = parseInt(key, value);
  } else if (key == "intraPeriod") {
    cfg.intraPeriod = parseInt(key, value);
  } else if (key == "searchRange") {
    cfg.searchRange = parseInt(key, value);
  } else if (key == "saoMode") {
    cfg.saoMode = saoModeFromName(value);
  } else if (key == "saoBlockSize") {
    cfg.saoBlockSize = parseInt(key, value);
  } else if (key == "alfEnabled") {
    cfg.alfEnabled = parseBool(key, value);
  } else if (key == "fps") {
    try {
      cfg.fps = std::stod(value);
    } catch (const std::exception &) {
      fail(ErrorCode::kInvalidArgument, "bad fps value '" + value + "'");
    }
  } else {
    fail(ErrorCode::kInvalidArgument, "unknown config key '" + key + "'");
  }
}

void loadConfigFile(EncoderConfig &cfg, const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    fail(ErrorCode::kIo, "cannot open config file " + path);
  }
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    // Strip comments and whitespace.
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    size_t e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      fail(ErrorCode::kInvalidArgument,
           path + ":" + std::to_string(lineNo) + ": expected key=value");
    }
    auto trim = [](std::string s) {
      size_t b2 = s.find_first_not_of(" \t");
      size_t e2 = s.find_last_not_of(" \t");
      return b2 == std::string::npos ? std::string()
                                     : s.substr(b2, e2 - b2 + 1);
    };
    applyConfigKeyValue(cfg, trim(line.substr(0, eq)),
                        trim(line.substr(eq + 1)));
  }
}

}  // namespace sbc
