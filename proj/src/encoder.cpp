#include "encoder.h"

#include <cstdio>

#include "eval.h"

namespace sbc {

SequenceEncoder::SequenceEncoder(const EncoderConfig &cfg) : cfg_(cfg) {
  cfg_.validate();
  sizes_ = derivePartitionSizes(cfg_);
}

EncodeOutput SequenceEncoder::encode(const std::vector<Frame> &frames) {
  EncodeOutput out;
  BitWriter stream;
  writeSequenceHeader(stream, SequenceHeader::fromConfig(cfg_));
  stream.byteAlign();

  RefPlanes refStore;  // capacity one: low-delay P
  bool haveRef = false;

  for (size_t i = 0; i < frames.size(); ++i) {
    const Frame &in = frames[i];
    if (in.displayWidth != cfg_.width || in.displayHeight != cfg_.height ||
        in.bitDepth() != cfg_.bitDepth) {
      fail(ErrorCode::kInvalidArgument,
           "frame " + std::to_string(i) + " does not match the configuration");
    }
    bool isIntra = i == 0 || (cfg_.intraPeriod > 0 &&
                              i % static_cast<size_t>(cfg_.intraPeriod) == 0);
    if (!haveRef) isIntra = true;

    Frame padded = padToScuGrid(in, sizes_.mScu);
    FrameEncoder fe(cfg_, sizes_, padded, haveRef ? &refStore : nullptr,
                    isIntra);
    FrameEncodeResult res = fe.encode();
    stream.appendWriter(res.payload);  // frame payloads stay byte aligned

    SequenceFrameStats st;
    st.frame = static_cast<int>(i);
    st.isIntra = isIntra;
    st.bits = res.stats.totalBits;
    st.saoBits = res.stats.saoBits;
    st.alfBits = res.stats.alfBits;
    st.scuModeFlagBits = res.stats.scuModeFlagBits;
    st.directCtuCount = res.stats.directCtuCount;
    st.scuToCtuCount = res.stats.scuToCtuCount;
    for (int comp = 0; comp < 3; ++comp) {
      const int dw = comp == 0 ? in.displayWidth : in.chromaDisplayWidth();
      const int dh = comp == 0 ? in.displayHeight : in.chromaDisplayHeight();
      PsnrResult p = psnrPlane(padded.plane(comp), res.recon.plane(comp), dw,
                               dh);
      st.psnr[comp] = p.value;
      st.lossless[comp] = p.lossless;
    }
    out.frameStats.push_back(st);
    out.totalScuModeFlagBits += res.stats.scuModeFlagBits;
    for (const SaoScuDiag &d : res.saoDiag) out.saoDiag.push_back(d);
    for (const ScuDecision &d : res.scuDecisions) {
      out.scuModes.push_back(d.chosen);
    }

    refStore = RefPlanes::fromFrame(res.recon, cfg_.searchRange);
    haveRef = true;
    out.recon.push_back(std::move(res.recon));
  }
  out.stream = stream.bytes();
  return out;
}

std::string frameStatsCsv(const std::vector<SequenceFrameStats> &stats) {
  std::string csv =
      "frame,type,bits,psnr_y,psnr_u,psnr_v,lossless,sao_bits,alf_bits,"
      "scu_mode_flag_bits,direct_ctu_count,scu_to_ctu_count\n";
  char line[256];
  for (const SequenceFrameStats &s : stats) {
    std::string marker;
    if (s.lossless[0]) marker += 'Y';
    if (s.lossless[1]) marker += 'U';
    if (s.lossless[2]) marker += 'V';
    std::snprintf(line, sizeof(line),
                  "%d,%c,%lld,%.4f,%.4f,%.4f,%s,%lld,%lld,%lld,%d,%d\n",
                  s.frame, s.isIntra ? 'I' : 'P',
                  static_cast<long long>(s.bits), s.psnr[0], s.psnr[1],
                  s.psnr[2], marker.c_str(), static_cast<long long>(s.saoBits),
                  static_cast<long long>(s.alfBits),
                  static_cast<long long>(s.scuModeFlagBits), s.directCtuCount,
                  s.scuToCtuCount);
    csv += line;
  }
  return csv;
}

}  // namespace sbc
