// pfvc: command-line front end for the progressive token video codec.
//
// Exit codes: 0 success, 1 usage error, 2 data error (unreadable input,
// corrupt bitstream, inconsistent sidecar).

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pfvc/bitstream.hpp"
#include "pfvc/errors.hpp"
#include "pfvc/harness.hpp"
#include "pfvc/key_frame.hpp"
#include "pfvc/metrics.hpp"
#include "pfvc/rate_adapt.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string sidecar;
  std::string output;
  std::string reference;
  std::string ladder = "16,64,144,256";
  double step = 0.25;
  int gran = 256;
  std::string trace;
  std::string key_budget = "3";
  std::uint64_t seed = 1;
  std::string report_csv;
  std::string kind = "translating-texture";
  int frames = 250;
  int width = 256;
  int height = 256;
  double fps = 25.0;
  unsigned threads = 1;
};

pfvc::GranularityLadder parse_ladder(const std::string& text) {
  std::vector<int> levels;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      levels.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--ladder: '" + item + "' is not an integer");
    }
  }
  try {
    return pfvc::GranularityLadder(std::move(levels));
  } catch (const pfvc::InvalidArgument& e) {
    throw UsageError(std::string("--ladder: ") + e.what());
  }
}

std::optional<int> parse_key_budget(const std::string& text) {
  if (text == "raw") return std::nullopt;
  if (text.size() == 1 && text[0] >= '0' && text[0] < '0' + pfvc::kKeyPresetCount) return text[0] - '0';
  throw UsageError("--key-budget must be 0..5 or 'raw'");
}

std::string read_text(const std::string& path) {
  const auto bytes = pfvc::read_file(path);
  return std::string(bytes.begin(), bytes.end());
}

std::string sidecar_for(const Options& o, const std::string& raw) {
  return o.sidecar.empty() ? raw + ".json" : o.sidecar;
}

pfvc::Sequence load_input(const Options& o, const std::string& raw) {
  const pfvc::RawDescriptor d = pfvc::descriptor_from_json(read_text(sidecar_for(o, raw)));
  pfvc::Sequence seq = pfvc::load_raw_sequence(pfvc::read_file(raw), d.width, d.height, d.fps);
  if (d.frames != 0 && static_cast<std::size_t>(d.frames) != seq.size()) {
    throw pfvc::InvalidArgument("sidecar declares " + std::to_string(d.frames) + " frames, file holds " +
                                std::to_string(seq.size()));
  }
  return seq;
}

void save_output(const pfvc::Sequence& seq, const std::string& raw, const std::string& sidecar) {
  pfvc::write_file(raw, pfvc::save_raw_sequence(seq));
  const std::string json = pfvc::descriptor_to_json(
      {seq.width(), seq.height(), seq.fps(), static_cast<int>(seq.size())});
  pfvc::write_file(sidecar.empty() ? raw + ".json" : sidecar,
                   std::span(reinterpret_cast<const std::uint8_t*>(json.data()), json.size()));
}

void write_text(const std::string& path, const std::string& text) {
  pfvc::write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

pfvc::EncodeConfig base_config(const Options& o) {
  pfvc::EncodeConfig cfg;
  cfg.ladder = parse_ladder(o.ladder);
  try {
    cfg.quant = pfvc::QuantConfig::from_step(o.step);
  } catch (const pfvc::InvalidArgument& e) {
    throw UsageError(std::string("--step: ") + e.what());
  }
  cfg.key_budget = parse_key_budget(o.key_budget);
  return cfg;
}

pfvc::EncodeConfig encode_config(const Options& o, bool adaptive) {
  pfvc::EncodeConfig cfg = base_config(o);
  if (adaptive) {
    cfg.policy = pfvc::TraceAdaptive{pfvc::parse_trace(read_text(o.trace))};
  } else {
    if (!cfg.ladder.contains(o.gran)) throw UsageError("--gran " + std::to_string(o.gran) + " is not on the ladder");
    cfg.policy = pfvc::FixedGranularity{o.gran};
  }
  return cfg;
}

int run_synth(const Options& o) {
  const auto kind = pfvc::parse_synth_kind(o.kind);
  if (!kind) throw UsageError("--kind must be translating-texture, moving-blob or static");
  const auto seq = pfvc::synth_sequence(*kind, o.frames, o.width, o.height, o.seed, o.fps);
  save_output(seq, o.output, o.sidecar);
  std::printf("wrote %zu frames %dx%d to %s\n", seq.size(), seq.width(), seq.height(), o.output.c_str());
  return 0;
}

int run_encode(const Options& o) {
  const auto seq = load_input(o, o.input);
  const auto r = pfvc::encode(seq, encode_config(o, !o.trace.empty()));
  pfvc::write_file(o.output, r.bytes);
  std::printf("%zu frames -> %zu bytes, %.3f kbps\n", seq.size(), r.bytes.size(),
              pfvc::measure_bitrate(r.bytes.size(), seq.fps(), static_cast<std::uint32_t>(seq.size())));
  return 0;
}

int run_decode(const Options& o) {
  const auto r = pfvc::decode(pfvc::read_file(o.input));
  save_output(r.sequence, o.output, o.sidecar);
  std::printf("decoded %zu frames %dx%d\n", r.sequence.size(), r.sequence.width(), r.sequence.height());
  return 0;
}

int run_simulate(const Options& o) {
  const auto seq = load_input(o, o.input);
  const auto trace = pfvc::parse_trace(read_text(o.trace));
  const pfvc::EncodeConfig cfg = base_config(o);
  const auto costs = pfvc::measure_layer_costs(seq, cfg);
  const auto r = pfvc::simulate_channel(costs, trace, seq.fps(), cfg.ladder);
  std::printf("window,kbps,budget_kbps\n");
  for (std::size_t i = 0; i < r.window_kbps.size(); ++i) {
    std::printf("%zu,%.3f,%.3f\n", i, r.window_kbps[i], r.window_budget[i]);
  }
  if (!o.report_csv.empty()) {
    std::string csv = "frame,granularity,bits\n";
    for (std::size_t i = 0; i < r.granularities.size(); ++i) {
      csv += std::to_string(i + 1) + "," + std::to_string(r.granularities[i]) + "," +
             std::to_string(static_cast<long long>(r.frame_bits[i])) + "\n";
    }
    write_text(o.report_csv, csv);
  }
  return 0;
}

int run_metrics(const Options& o) {
  const auto a = load_input(o, o.reference);
  Options other = o;
  other.sidecar.clear();
  const auto b = load_input(other, o.input);
  const double p = pfvc::sequence_psnr(a, b);
  std::printf("psnr_db,%s\nssim,%.6f\n", std::isinf(p) ? "inf" : std::to_string(p).c_str(),
              pfvc::sequence_ssim(a, b));
  return 0;
}

int run_rd_report(const Options& o) {
  const auto seq = load_input(o, o.input);
  pfvc::RdOptions ro;
  ro.ladder = parse_ladder(o.ladder);
  ro.quant = base_config(o).quant;
  ro.threads = o.threads;
  const std::string csv = pfvc::rd_report_csv(pfvc::rd_report(seq, ro));
  if (o.report_csv.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    write_text(o.report_csv, csv);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Progressive token video codec"};
  app.require_subcommand(1);
  Options o;

  auto codec_flags = [&](CLI::App* sub) {
    sub->add_option("--ladder", o.ladder, "Granularity ladder, comma separated")->capture_default_str();
    sub->add_option("--step", o.step, "Token quantizer step")->capture_default_str();
    sub->add_option("--key-budget", o.key_budget, "Key-frame preset 0..5 (QP 2..52) or 'raw'")->capture_default_str();
  };

  auto* synth = app.add_subcommand("synth", "Write a synthetic raw luma sequence and its sidecar");
  synth->add_option("--output", o.output, "Raw output file")->required();
  synth->add_option("--sidecar", o.sidecar, "Sidecar path (default: <output>.json)");
  synth->add_option("--kind", o.kind, "translating-texture | moving-blob | static")->capture_default_str();
  synth->add_option("--frames", o.frames)->capture_default_str()->check(CLI::PositiveNumber);
  synth->add_option("--width", o.width)->capture_default_str();
  synth->add_option("--height", o.height)->capture_default_str();
  synth->add_option("--fps", o.fps)->capture_default_str()->check(CLI::PositiveNumber);
  synth->add_option("--seed", o.seed)->capture_default_str();

  auto* enc = app.add_subcommand("encode", "Encode a raw luma sequence");
  enc->add_option("--input", o.input, "Raw input file")->required();
  enc->add_option("--sidecar", o.sidecar, "Sidecar (default: <input>.json)");
  enc->add_option("--output", o.output, "Container output")->required();
  enc->add_option("--gran", o.gran, "Fixed granularity")->capture_default_str();
  enc->add_option("--trace", o.trace, "Bandwidth trace; selects the adaptive policy");
  codec_flags(enc);

  auto* dec = app.add_subcommand("decode", "Decode a container to raw luma");
  dec->add_option("--input", o.input, "Container")->required();
  dec->add_option("--output", o.output, "Raw output file")->required();
  dec->add_option("--sidecar", o.sidecar, "Sidecar output (default: <output>.json)");

  auto* sim = app.add_subcommand("simulate", "Replay a bandwidth trace over measured layer costs");
  sim->add_option("--input", o.input, "Raw input file")->required();
  sim->add_option("--sidecar", o.sidecar);
  sim->add_option("--trace", o.trace, "Bandwidth trace")->required();
  sim->add_option("--report-csv", o.report_csv, "Per-frame selections");
  codec_flags(sim);

  auto* met = app.add_subcommand("metrics", "PSNR and SSIM of a sequence against a reference");
  met->add_option("--reference", o.reference, "Reference raw file")->required();
  met->add_option("--input", o.input, "Raw file to score")->required();
  met->add_option("--sidecar", o.sidecar, "Reference sidecar (default: <reference>.json)");

  auto* rd = app.add_subcommand("rd-report", "Encode the key-budget x granularity grid, emit CSV");
  rd->add_option("--input", o.input, "Raw input file")->required();
  rd->add_option("--sidecar", o.sidecar);
  rd->add_option("--report-csv", o.report_csv, "CSV output (default: stdout)");
  rd->add_option("--threads", o.threads)->capture_default_str()->check(CLI::Range(1u, 256u));
  rd->add_option("--ladder", o.ladder)->capture_default_str();
  rd->add_option("--step", o.step)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*synth) return run_synth(o);
    if (*enc) return run_encode(o);
    if (*dec) return run_decode(o);
    if (*sim) return run_simulate(o);
    if (*met) return run_metrics(o);
    if (*rd) return run_rd_report(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const pfvc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
