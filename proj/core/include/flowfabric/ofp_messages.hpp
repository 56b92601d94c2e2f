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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "flowfabric/action_engine.hpp"
#include "flowfabric/bytes.hpp"
#include "flowfabric/match_fields.hpp"
#include "flowfabric/ofp_constants.hpp"

namespace flowfabric::ofp {

// One OXM TLV (class OPENFLOW_BASIC), decoded. Field order is preserved so
// re-encoding reproduces the original bytes.
struct OxmField {
  FieldId field{};
  Bytes value;                 // field width bytes
  std::optional<Bytes> mask;  // present iff the hasmask bit was set

  bool operator==(const OxmField&) const = default;
};

struct Match {
  std::vector<OxmField> fields;

  bool operator==(const Match&) const = default;
};

// -- Instructions (wire order preserved) ------------------------------------

struct GotoTableInstr {
  std::uint8_t table_id = 0;
  bool operator==(const GotoTableInstr&) const = default;
};
struct WriteActionsInstr {
  std::vector<Action> actions;
  bool operator==(const WriteActionsInstr&) const = default;
};
struct ApplyActionsInstr {  // decoded for fidelity; rejected at flow-mod time
  std::vector<Action> actions;
  bool operator==(const ApplyActionsInstr&) const = default;
};
struct ClearActionsInstr {
  bool operator==(const ClearActionsInstr&) const = default;
};
struct UnsupportedInstr {
  std::uint16_t type = 0;
  Bytes body;  // everything after type/len
  bool operator==(const UnsupportedInstr&) const = default;
};
using Instruction = std::variant<GotoTableInstr, WriteActionsInstr,
                                 ApplyActionsInstr, ClearActionsInstr,
                                 UnsupportedInstr>;

// -- Message bodies ----------------------------------------------------------

struct Hello {
  Bytes elements;  // raw hello elements; empty for the plain handshake

  bool operator==(const Hello&) const = default;
};

struct ErrorMsg {
  std::uint16_t err_type = 0;
  std::uint16_t err_code = 0;
  Bytes data;

  bool operator==(const ErrorMsg&) const = default;
};

struct EchoRequest {
  Bytes payload;
  bool operator==(const EchoRequest&) const = default;
};
struct EchoReply {
  Bytes payload;
  bool operator==(const EchoReply&) const = default;
};

struct FeaturesRequest {
  bool operator==(const FeaturesRequest&) const = default;
};
struct FeaturesReply {
  std::uint64_t datapath_id = 0;
  std::uint32_t n_buffers = 0;
  std::uint8_t n_tables = 0;
  std::uint8_t auxiliary_id = 0;
  std::uint32_t capabilities = 0;
  std::uint32_t reserved = 0;

  bool operator==(const FeaturesReply&) const = default;
};

struct GetConfigRequest {
  bool operator==(const GetConfigRequest&) const = default;
};

// OpenFlow 1.3.1 fixes ofp_switch_config at 12 bytes, the one structure in
// the supported subset that is not a multiple of 8. This agent emits the
// message with 4 trailing pad bytes (16 total) to keep its own output
// 8-byte-aligned, and accepts both forms on decode; `padded` records the
// wire form so re-encoding is bit-exact.
struct GetConfigReply {
  std::uint16_t flags = 0;
  std::uint16_t miss_send_len = 128;
  bool padded = true;

  bool operator==(const GetConfigReply&) const = default;
};
struct SetConfig {
  std::uint16_t flags = 0;
  std::uint16_t miss_send_len = 128;
  bool padded = true;

  bool operator==(const SetConfig&) const = default;
};

struct PacketIn {
  std::uint32_t buffer_id = kNoBuffer;
  std::uint16_t total_len = 0;  // full length of the original frame
  std::uint8_t reason = OFPR_NO_MATCH;
  std::uint8_t table_id = 0;
  std::uint64_t cookie = 0;
  Match match;  // this agent emits in_port only
  Bytes payload;

  bool operator==(const PacketIn&) const = default;
};

struct FlowRemoved {
  std::uint64_t cookie = 0;
  std::uint16_t priority = 0;
  std::uint8_t reason = OFPRR_IDLE_TIMEOUT;
  std::uint8_t table_id = 0;
  std::uint32_t duration_sec = 0;
  std::uint32_t duration_nsec = 0;
  std::uint16_t idle_timeout = 0;
  std::uint16_t hard_timeout = 0;
  std::uint64_t packet_count = 0;
  std::uint64_t byte_count = 0;
  Match match;

  bool operator==(const FlowRemoved&) const = default;
};

struct PacketOut {
  std::uint32_t buffer_id = kNoBuffer;
  std::uint32_t in_port = 0;
  std::vector<Action> actions;
  Bytes payload;  // only when buffer_id == kNoBuffer

  bool operator==(const PacketOut&) const = default;
};

struct FlowModMsg {
  std::uint64_t cookie = 0;
  std::uint64_t cookie_mask = 0;
  std::uint8_t table_id = 0;
  std::uint8_t command = OFPFC_ADD;
  std::uint16_t idle_timeout = 0;
  std::uint16_t hard_timeout = 0;
  std::uint16_t priority = 0;
  std::uint32_t buffer_id = kNoBuffer;
  std::uint32_t out_port = kPortAny;
  std::uint32_t out_group = 0xffffffff;
  std::uint16_t flags = 0;
  Match match;
  std::vector<Instruction> instructions;

  bool operator==(const FlowModMsg&) const = default;
};

struct TableModMsg {
  std::uint8_t table_id = 0;
  std::uint32_t config = 0;

  bool operator==(const TableModMsg&) const = default;
};

// -- Multipart ---------------------------------------------------------------

struct DescRequest {
  bool operator==(const DescRequest&) const = default;
};
struct FlowStatsRequestBody {
  std::uint8_t table_id = kTableAll;
  std::uint32_t out_port = kPortAny;
  std::uint32_t out_group = 0xffffffff;
  std::uint64_t cookie = 0;
  std::uint64_t cookie_mask = 0;
  Match match;

  bool operator==(const FlowStatsRequestBody&) const = default;
};
struct TableStatsRequestBody {
  bool operator==(const TableStatsRequestBody&) const = default;
};
struct PortStatsRequestBody {
  std::uint32_t port_no = kPortAny;
  bool operator==(const PortStatsRequestBody&) const = default;
};
struct QueueStatsRequestBody {
  std::uint32_t port_no = kPortAny;
  std::uint32_t queue_id = kQueueAll;
  bool operator==(const QueueStatsRequestBody&) const = default;
};
struct RawMultipartBody {  // unknown multipart type, kept verbatim
  Bytes body;
  bool operator==(const RawMultipartBody&) const = default;
};

struct MultipartRequest {
  std::uint16_t mp_type = OFPMP_DESC;
  std::uint16_t flags = 0;
  std::variant<DescRequest, FlowStatsRequestBody, TableStatsRequestBody,
               PortStatsRequestBody, QueueStatsRequestBody, RawMultipartBody>
      body;

  bool operator==(const MultipartRequest&) const = default;
};

struct DescReply {
  std::string mfr_desc;
  std::string hw_desc;
  std::string sw_desc;
  std::string serial_num;
  std::string dp_desc;

  bool operator==(const DescReply&) const = default;
};
struct FlowStatsEntry {
  std::uint8_t table_id = 0;
  std::uint32_t duration_sec = 0;
  std::uint32_t duration_nsec = 0;
  std::uint16_t priority = 0;
  std::uint16_t idle_timeout = 0;
  std::uint16_t hard_timeout = 0;
  std::uint16_t flags = 0;
  std::uint64_t cookie = 0;
  std::uint64_t packet_count = 0;
  std::uint64_t byte_count = 0;
  Match match;
  std::vector<Instruction> instructions;

  bool operator==(const FlowStatsEntry&) const = default;
};
struct TableStatsEntry {
  std::uint8_t table_id = 0;
  std::uint32_t active_count = 0;
  std::uint64_t lookup_count = 0;
  std::uint64_t matched_count = 0;

  bool operator==(const TableStatsEntry&) const = default;
};
struct PortStatsEntry {
  std::uint32_t port_no = 0;
  std::uint64_t rx_packets = 0;
  std::uint64_t tx_packets = 0;
  std::uint64_t rx_bytes = 0;
  std::uint64_t tx_bytes = 0;
  std::uint64_t rx_dropped = 0;
  std::uint64_t tx_dropped = 0;
  std::uint64_t rx_errors = 0;
  std::uint64_t tx_errors = 0;
  std::uint64_t rx_frame_err = 0;
  std::uint64_t rx_over_err = 0;
  std::uint64_t rx_crc_err = 0;
  std::uint64_t collisions = 0;
  std::uint32_t duration_sec = 0;
  std::uint32_t duration_nsec = 0;

  bool operator==(const PortStatsEntry&) const = default;
};
struct QueueStatsEntry {
  std::uint32_t port_no = 0;
  std::uint32_t queue_id = 0;
  std::uint64_t tx_bytes = 0;
  std::uint64_t tx_packets = 0;
  std::uint64_t tx_errors = 0;
  std::uint32_t duration_sec = 0;
  std::uint32_t duration_nsec = 0;

  bool operator==(const QueueStatsEntry&) const = default;
};

struct MultipartReply {
  std::uint16_t mp_type = OFPMP_DESC;
  std::uint16_t flags = 0;
  std::variant<DescReply, std::vector<FlowStatsEntry>,
               std::vector<TableStatsEntry>, std::vector<PortStatsEntry>,
               std::vector<QueueStatsEntry>, RawMultipartBody>
      body;

  bool operator==(const MultipartReply&) const = default;
};

struct BarrierRequest {
  bool operator==(const BarrierRequest&) const = default;
};
struct BarrierReply {
  bool operator==(const BarrierReply&) const = default;
};

// A syntactically framed message of a type outside the supported subset.
// Body bytes are kept verbatim; the channel answers OFPET_BAD_REQUEST.
struct Unsupported {
  std::uint8_t wire_type = 0;
  Bytes body;

  bool operator==(const Unsupported&) const = default;
};

using MessageBody =
    std::variant<Hello, ErrorMsg, EchoRequest, EchoReply, FeaturesRequest,
                 FeaturesReply, GetConfigRequest, GetConfigReply, SetConfig,
                 PacketIn, FlowRemoved, PacketOut, FlowModMsg, TableModMsg,
                 MultipartRequest, MultipartReply, BarrierRequest,
                 BarrierReply, Unsupported>;

struct OfpMessage {
  std::uint32_t xid = 0;
  MessageBody body;

  bool operator==(const OfpMessage&) const = default;
};

template <typename T>
OfpMessage make_message(std::uint32_t xid, T body) {
  return OfpMessage{xid, MessageBody(std::move(body))};
}

}  // namespace flowfabric::ofp
