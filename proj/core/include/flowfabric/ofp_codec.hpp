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

#include <string>
#include <variant>

#include "flowfabric/flow_pipeline.hpp"
#include "flowfabric/ofp_messages.hpp"

namespace flowfabric::ofp {

// Decode failure. Connection-fatal errors (bad framing) tear the channel
// down; message-fatal ones are answered with an Error and the connection
// survives.
struct DecodeError {
  bool connection_fatal = false;
  std::uint16_t err_type = 0;
  std::uint16_t err_code = 0;
  std::string detail;
};

using DecodeResult = std::variant<OfpMessage, DecodeError>;

// Decodes exactly one message. `bytes` must hold at least header.length
// octets (the framing layer guarantees this); anything beyond is ignored.
DecodeResult decode(BytesView bytes);

// Big-endian serialization with zeroed padding and an exact length field.
// Throws std::length_error if the message exceeds the 16-bit length space.
Bytes encode(const OfpMessage& msg);

// Wire message type for a body (OFPT_*).
std::uint8_t wire_type(const MessageBody& body);

// One-line human-readable rendering, for transcripts and the decode tool.
std::string describe(const OfpMessage& msg);

// -- Bridges between wire form and pipeline form -----------------------------

// Validates an OXM match (duplicates, masks, value ranges, prerequisites)
// and folds it into a matcher key. Errors map to OFPET_BAD_MATCH codes.
std::variant<MaskedKey, FlowModError> match_to_key(const Match& match);

// Rebuilds a canonical OXM list from a masked key, omitting fully
// wildcarded fields. L4 ports re-encode as TCP or UDP per the ip_proto care
// value; the prerequisite rules make that unambiguous.
Match key_to_match(const MaskedKey& key);

// Lowers wire instructions into the pipeline's instruction set. Rejects
// Apply-Actions and anything outside {goto, write, clear} with
// OFPET_BAD_INSTRUCTION, and duplicate goto/write blocks likewise.
std::variant<InstructionSet, FlowModError> lower_instructions(
    const std::vector<Instruction>& instructions);

// Action sanity for write-actions and Packet-Out lists: output ports must be
// physical (< port_count), CONTROLLER or ALL; set-field must name a settable
// field with an in-range value.
std::optional<FlowModError> validate_actions(std::span<const Action> actions,
                                             std::uint32_t port_count);

// Full FlowMod lowering: match + instructions + action validation.
std::variant<FlowModRequest, FlowModError> lower_flow_mod(
    const FlowModMsg& msg, std::uint32_t port_count);

// Wire form of a pipeline instruction set, in execution order
// (clear, write, goto).
std::vector<Instruction> instructions_to_wire(const InstructionSet& set);

}  // namespace flowfabric::ofp
