#ifndef SBC_EVAL_H_
#define SBC_EVAL_H_

#include <string>
#include <vector>

#include "plane.h"

namespace sbc {

// Reported for lossless planes; the CSV additionally carries a marker.
inline constexpr double kPsnrCap = 999.99;

struct PsnrResult {
  double value = 0.0;
  bool lossless = false;
};

// 10*log10(peak^2 / MSE) over the display window of the two planes (their
// shared geometry up to displayW x displayH).
PsnrResult psnrPlane(const Plane &ref, const Plane &test, int displayW,
                     int displayH);

struct RdPoint {
  double bitrateKbps = 0.0;
  double psnr[3] = {0, 0, 0};  // Y, U, V
  int qp = 0;
  int64_t totalBits = 0;
};

struct RdCurve {
  std::vector<RdPoint> points;  // sorted by bitrate, strictly increasing
};

void validateCurve(const RdCurve &c);

// Classic Bjontegaard delta rate for one component: third-order polynomial
// fit of log10(rate) over PSNR for each curve, average difference over the
// overlapping PSNR interval, expressed in percent (negative: test saves
// rate).
double bdRate(const RdCurve &anchor, const RdCurve &test, int component);

std::string rdCurveCsv(const RdCurve &c);
RdCurve parseRdCurveCsv(const std::string &text);

}  // namespace sbc

#endif  // SBC_EVAL_H_
