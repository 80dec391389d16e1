#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pfvc/bitstream.hpp"
#include "pfvc/entropy.hpp"
#include "pfvc/harness.hpp"
#include "pfvc/key_frame.hpp"
#include "pfvc/media.hpp"

namespace pfvc::golden {

using Vector = std::pair<std::string, std::vector<std::uint8_t>>;

// Fixed inputs whose encodings are pinned in vectors.txt.
inline std::vector<Vector> build_vectors() {
  std::vector<Vector> out;

  ContextSet cs;
  out.emplace_back("symbols_zero16", encode_symbols({16, std::vector<std::int32_t>(16, 0)}, cs));
  ResidualSymbols ramp{64, {}};
  for (int i = 0; i < 64; ++i) ramp.symbols.push_back(i - 32);
  ramp.symbols[10] = 1000;
  ramp.symbols[50] = -70000;
  out.emplace_back("symbols_ramp_after_zero16", encode_symbols(ramp, cs));

  Container c;
  c.header.width = 256;
  c.header.height = 256;
  c.header.fps = 25;
  c.header.ladder = {16, 64, 144, 256};
  c.header.quant_step_q88 = 64;
  c.header.frame_count = 3;
  c.key_payload = {1, 2, 3};
  c.records = {{0, {0xAA}}, {3, {}}};
  out.emplace_back("container_small", write_container(c));

  std::vector<std::uint8_t> luma(64 * 64);
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) luma[static_cast<std::size_t>(y) * 64 + x] = static_cast<std::uint8_t>((x * 3 + y * 5) & 0xFF);
  }
  const Frame ramp_frame(64, 64, luma);
  out.emplace_back("key_preset5_ramp64", encode_key_frame(ramp_frame, 5));

  const Sequence blob = synth_sequence(SynthKind::kMovingBlob, 4, 64, 64, 7);
  EncodeConfig cfg;
  cfg.key_budget = 5;
  cfg.policy = FixedGranularity{64};
  out.emplace_back("stream_blob64_g64", encode(blob, cfg).bytes);
  return out;
}

}  // namespace pfvc::golden
