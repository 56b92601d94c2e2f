// Copyright 2026 The flowfabric Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <csignal>
#include <iostream>

#include "flowfabric/agent_server.hpp"
#include "flowfabric/bench.hpp"
#include "flowfabric/mock_controller.hpp"
#include "flowfabric/pcap.hpp"
#include "flowfabric/switch_config.hpp"

namespace {

using namespace flowfabric;

volatile std::sig_atomic_t g_stop = 0;
void handle_signal(int) { g_stop = 1; }

SwitchConfig config_from(const std::string& path) {
  return path.empty() ? SwitchConfig{} : load_config(path);
}

int cmd_run(const std::string& config_path, bool verbose) {
  SwitchConfig cfg = config_from(config_path);
  Switch sw(cfg);

  std::unique_ptr<AgentServer> server;
  switch (cfg.controller_mode) {
    case SwitchConfig::ControllerMode::kListen:
      server = std::make_unique<AgentServer>(sw, cfg.controller_host,
                                             cfg.controller_port);
      break;
    case SwitchConfig::ControllerMode::kConnect:
      server = std::make_unique<AgentServer>(sw, cfg.controller_host,
                                             cfg.controller_port, true);
      break;
    case SwitchConfig::ControllerMode::kNone:
      break;
  }
  if (server && !server->start()) {
    std::cerr << "cannot bind controller socket " << cfg.controller_host
              << ":" << cfg.controller_port << "\n";
    return 1;
  }
  sw.start();

  // Pcap sources feed their mapped ports once; sinks drain continuously.
  std::map<std::uint32_t, std::unique_ptr<PcapWriter>> sinks;
  for (const auto& [port, path] : cfg.port_pcap_out) {
    sinks.emplace(port, std::make_unique<PcapWriter>(path));
  }
  for (const auto& [port, path] : cfg.port_pcap_in) {
    auto parsed = read_pcap(path);
    if (const auto* err = std::get_if<PcapError>(&parsed)) {
      std::cerr << "pcap " << path << ": " << err->message << " at offset "
                << err->offset << "\n";
      return 1;
    }
    const auto& contents = std::get<PcapContents>(parsed);
    for (const PcapRecord& rec : contents.records) {
      sw.ingress(port, rec.data);
    }
    if (contents.truncated) {
      std::cerr << "pcap " << path << ": " << contents.truncated->message
                << " at offset " << contents.truncated->offset
                << " (prior frames delivered)\n";
    }
  }

  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  std::cout << "switch running; dpid=0x" << std::hex << cfg.datapath_id
            << std::dec << ", ports=" << cfg.port_count << ", controller="
            << (cfg.controller_mode == SwitchConfig::ControllerMode::kListen
                    ? "listen"
                    : cfg.controller_mode ==
                              SwitchConfig::ControllerMode::kConnect
                          ? "connect"
                          : "none")
            << " " << cfg.controller_host << ":" << cfg.controller_port
            << "\n";

  while (!g_stop) {
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
    for (std::uint32_t p = 0; p < cfg.port_count; ++p) {
      while (auto frame = sw.pop_egress(p)) {
        auto sink = sinks.find(p);
        if (sink != sinks.end()) {
          sink->second->append(now_monotonic_ns(), frame->data);
        }
      }
    }
  }

  sw.stop();
  if (server) server->stop();
  if (verbose) {
    ConservationReport r = sw.conservation();
    std::cout << "rx=" << r.rx_total << " tx=" << r.tx_total
              << " rx_dropped=" << r.rx_dropped
              << " buffered=" << r.buffered_live
              << " balanced=" << (r.balanced() ? "yes" : "no") << "\n";
  }
  return 0;
}

int cmd_bench(const std::string& config_path, std::uint64_t packets,
              std::size_t frame_size, std::size_t flows, std::uint64_t seed,
              double rate, const std::string& json_path) {
  SwitchConfig cfg = config_from(config_path);
  TrafficSpec spec;
  spec.seed = seed;
  spec.rate_pps = rate;
  for (std::size_t i = 0; i < flows; ++i) {
    FlowTrafficSpec flow;
    flow.packet_count = packets / flows;
    flow.frame_size = frame_size;
    flow.ingress_port = static_cast<std::uint32_t>(i % cfg.port_count);
    flow.header.l4_dst = static_cast<std::uint16_t>(1000 + i);
    flow.header.ipv4_src = 0x0a000001 + static_cast<std::uint32_t>(i);
    spec.flows.push_back(flow);
  }

  BenchReport report = run_benchmark(spec, cfg);
  std::cout << report.to_text();
  if (!json_path.empty()) {
    std::ofstream out(json_path);
    out << report.to_json() << "\n";
    std::cout << "json report written to " << json_path << "\n";
  }
  return report.conservation.balanced() ? 0 : 1;
}

int cmd_replay(const std::string& config_path, const std::string& pcap_path,
               std::uint32_t port, const std::string& out_prefix) {
  SwitchConfig cfg = config_from(config_path);
  cfg.controller_mode = SwitchConfig::ControllerMode::kNone;
  // Replay needs matches to forward; without a controller install a
  // port-to-port patch: traffic entering port N leaves on port N+1.
  Switch sw(cfg);
  for (std::uint32_t p = 0; p < cfg.port_count; ++p) {
    FlowModRequest req;
    req.command = ofp::OFPFC_ADD;
    req.priority = 1;
    req.match = MaskedKey::wildcard(kMatchKeyWidth);
    apply_field(req.match, FieldId::kInPort, p, std::nullopt);
    req.instructions.write_actions = {
        {Action::output((p + 1) % cfg.port_count)}};
    if (auto err = sw.apply_flow_mod(req)) {
      std::cerr << "flow install failed\n";
      return 1;
    }
  }

  auto parsed = read_pcap(pcap_path);
  if (const auto* err = std::get_if<PcapError>(&parsed)) {
    std::cerr << "pcap error: " << err->message << " at offset "
              << err->offset << "\n";
    return 1;
  }
  const auto& contents = std::get<PcapContents>(parsed);
  std::uint64_t admitted = 0;
  for (const PcapRecord& rec : contents.records) {
    if (sw.ingress(port, rec.data)) ++admitted;
    sw.pump();
  }
  sw.pump();
  if (contents.truncated) {
    std::cerr << "warning: " << contents.truncated->message << " at offset "
              << contents.truncated->offset << " (prior frames delivered)\n";
  }

  std::uint64_t captured = 0;
  if (!out_prefix.empty()) {
    for (std::uint32_t p = 0; p < cfg.port_count; ++p) {
      std::vector<PcapRecord> out;
      while (auto frame = sw.pop_egress(p)) {
        out.push_back(PcapRecord{frame->ingress_at, std::move(frame->data)});
      }
      if (!out.empty()) {
        write_pcap(out_prefix + "." + std::to_string(p) + ".pcap", out);
        captured += out.size();
      }
    }
  }

  std::cout << "replayed " << contents.records.size() << " records, admitted "
            << admitted << ", captured " << captured << "\n";
  ConservationReport r = sw.conservation();
  std::cout << "conservation " << (r.balanced() ? "exact" : "BROKEN") << "\n";
  return 0;
}

int cmd_throughput_model(double width, double clock_mhz) {
  double gbps = theoretical_throughput_gbps(width, clock_mhz);
  std::cout << "data_width_bits " << width << "\n"
            << "clock_mhz       " << clock_mhz << "\n"
            << "throughput_gbps " << gbps << "\n";
  return 0;
}

int cmd_decode(std::string hex) {
  if (hex == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    hex = buf.str();
  }
  Bytes wire;
  try {
    wire = from_hex(hex);
  } catch (const std::exception& e) {
    std::cerr << "bad hex input: " << e.what() << "\n";
    return 1;
  }

  std::size_t offset = 0;
  int status = 0;
  while (offset + ofp::kHeaderBytes <= wire.size()) {
    std::uint16_t length = load_be16(wire.data() + offset + 2);
    if (length < ofp::kHeaderBytes || offset + length > wire.size()) {
      std::cerr << "framing error at offset " << offset << "\n";
      return 1;
    }
    auto result =
        ofp::decode(BytesView(wire.data() + offset, length));
    if (const auto* err = std::get_if<ofp::DecodeError>(&result)) {
      std::cerr << "decode error at offset " << offset << ": " << err->detail
                << "\n";
      status = 1;
    } else {
      std::cout << ofp::describe(std::get<ofp::OfpMessage>(result)) << "\n";
    }
    offset += length;
  }
  if (offset != wire.size()) {
    std::cerr << "trailing bytes at offset " << offset << "\n";
    return 1;
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flowfabric: an OpenFlow 1.3 software switch fabric"};
  app.require_subcommand(1);

  std::string config_path;
  bool verbose = false;

  auto* run = app.add_subcommand("run", "run the switch against a controller");
  run->add_option("--config", config_path, "switch config file");
  run->add_flag("-v,--verbose", verbose, "print counters on shutdown");

  std::uint64_t packets = 1000000;
  std::size_t frame_size = 64;
  std::size_t flows = 1;
  std::uint64_t seed = 1;
  double rate = 0;
  std::string json_path;
  auto* bench = app.add_subcommand("bench", "run the forwarding benchmark");
  bench->add_option("--config", config_path, "switch config file");
  bench->add_option("--packets", packets, "total packets to generate");
  bench->add_option("--frame-size", frame_size, "frame size in bytes");
  bench->add_option("--flows", flows, "number of generated flows")
      ->check(CLI::PositiveNumber);
  bench->add_option("--seed", seed, "generator seed");
  bench->add_option("--rate", rate, "packets per second (0 = unlimited)");
  bench->add_option("--json", json_path, "write the report as JSON");

  std::string pcap_path;
  std::uint32_t replay_port = 0;
  std::string out_prefix;
  auto* replay = app.add_subcommand("replay", "replay a pcap file");
  replay->add_option("--config", config_path, "switch config file");
  replay->add_option("pcap", pcap_path, "classic pcap file")->required();
  replay->add_option("--port", replay_port, "ingress port for the frames");
  replay->add_option("--out", out_prefix,
                     "write egress pcaps as <prefix>.<port>.pcap");

  double width = 512;
  double clock_mhz = 160;
  auto* model = app.add_subcommand(
      "throughput-model", "data-width x clock throughput model");
  model->add_option("--width", width, "processing data width in bits");
  model->add_option("--clock", clock_mhz, "clock frequency in MHz");

  std::string hex;
  auto* decode = app.add_subcommand("decode",
                                    "decode hex-encoded OpenFlow messages");
  decode->add_option("hex", hex, "hex bytes, or - for stdin")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, verbose);
    if (bench->parsed()) {
      return cmd_bench(config_path, packets, frame_size, flows, seed, rate,
                       json_path);
    }
    if (replay->parsed()) {
      return cmd_replay(config_path, pcap_path, replay_port, out_prefix);
    }
    if (model->parsed()) return cmd_throughput_model(width, clock_mhz);
    if (decode->parsed()) return cmd_decode(hex);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
