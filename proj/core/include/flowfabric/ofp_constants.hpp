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

// Wire constants from OpenFlow 1.3.1. Only the subset this agent speaks.
namespace flowfabric::ofp {

constexpr std::uint8_t kVersion = 0x04;
constexpr std::size_t kHeaderBytes = 8;

enum MsgType : std::uint8_t {
  OFPT_HELLO = 0,
  OFPT_ERROR = 1,
  OFPT_ECHO_REQUEST = 2,
  OFPT_ECHO_REPLY = 3,
  OFPT_FEATURES_REQUEST = 5,
  OFPT_FEATURES_REPLY = 6,
  OFPT_GET_CONFIG_REQUEST = 7,
  OFPT_GET_CONFIG_REPLY = 8,
  OFPT_SET_CONFIG = 9,
  OFPT_PACKET_IN = 10,
  OFPT_FLOW_REMOVED = 11,
  OFPT_PORT_STATUS = 12,
  OFPT_PACKET_OUT = 13,
  OFPT_FLOW_MOD = 14,
  OFPT_GROUP_MOD = 15,
  OFPT_PORT_MOD = 16,
  OFPT_TABLE_MOD = 17,
  OFPT_MULTIPART_REQUEST = 18,
  OFPT_MULTIPART_REPLY = 19,
  OFPT_BARRIER_REQUEST = 20,
  OFPT_BARRIER_REPLY = 21,
};

enum HelloElemType : std::uint16_t {
  OFPHET_VERSIONBITMAP = 1,
};

enum Capabilities : std::uint32_t {
  OFPC_FLOW_STATS = 1 << 0,
  OFPC_TABLE_STATS = 1 << 1,
  OFPC_PORT_STATS = 1 << 2,
};

enum ConfigFlags : std::uint16_t {
  OFPC_FRAG_NORMAL = 0,
};

enum PacketInReason : std::uint8_t {
  OFPR_NO_MATCH = 0,
  OFPR_ACTION = 1,
  OFPR_INVALID_TTL = 2,
};

enum FlowRemovedReason : std::uint8_t {
  OFPRR_IDLE_TIMEOUT = 0,
  OFPRR_HARD_TIMEOUT = 1,
  OFPRR_DELETE = 2,
};

enum FlowModCommand : std::uint8_t {
  OFPFC_ADD = 0,
  OFPFC_MODIFY = 1,
  OFPFC_MODIFY_STRICT = 2,
  OFPFC_DELETE = 3,
  OFPFC_DELETE_STRICT = 4,
};

enum FlowModFlags : std::uint16_t {
  OFPFF_SEND_FLOW_REM = 1 << 0,
  OFPFF_CHECK_OVERLAP = 1 << 1,
  OFPFF_RESET_COUNTS = 1 << 2,
};

constexpr std::uint8_t kTableAll = 0xff;  // OFPTT_ALL
constexpr std::uint8_t kTableMax = 0xfe;

enum InstructionType : std::uint16_t {
  OFPIT_GOTO_TABLE = 1,
  OFPIT_WRITE_METADATA = 2,
  OFPIT_WRITE_ACTIONS = 3,
  OFPIT_APPLY_ACTIONS = 4,
  OFPIT_CLEAR_ACTIONS = 5,
  OFPIT_METER = 6,
};

enum ActionType : std::uint16_t {
  OFPAT_OUTPUT = 0,
  OFPAT_SET_MPLS_TTL = 15,
  OFPAT_DEC_MPLS_TTL = 16,
  OFPAT_PUSH_VLAN = 17,
  OFPAT_POP_VLAN = 18,
  OFPAT_PUSH_MPLS = 19,
  OFPAT_POP_MPLS = 20,
  OFPAT_SET_NW_TTL = 23,
  OFPAT_DEC_NW_TTL = 24,
  OFPAT_SET_FIELD = 25,
};

enum MultipartType : std::uint16_t {
  OFPMP_DESC = 0,
  OFPMP_FLOW = 1,
  OFPMP_TABLE = 3,
  OFPMP_PORT_STATS = 4,
  OFPMP_QUEUE = 5,
};

constexpr std::uint16_t kOxmClassOpenflowBasic = 0x8000;
constexpr std::uint16_t kMatchTypeOxm = 1;  // OFPMT_OXM

constexpr std::uint32_t kQueueAll = 0xffffffff;  // OFPQ_ALL

// Error types and codes.
enum ErrorType : std::uint16_t {
  OFPET_HELLO_FAILED = 0,
  OFPET_BAD_REQUEST = 1,
  OFPET_BAD_ACTION = 2,
  OFPET_BAD_INSTRUCTION = 3,
  OFPET_BAD_MATCH = 4,
  OFPET_FLOW_MOD_FAILED = 5,
  OFPET_TABLE_MOD_FAILED = 8,
};

enum TableModFailedCode : std::uint16_t {
  OFPTMFC_BAD_TABLE = 0,
  OFPTMFC_BAD_CONFIG = 1,
};

enum HelloFailedCode : std::uint16_t {
  OFPHFC_INCOMPATIBLE = 0,
};

enum BadRequestCode : std::uint16_t {
  OFPBRC_BAD_VERSION = 0,
  OFPBRC_BAD_TYPE = 1,
  OFPBRC_BAD_MULTIPART = 2,
  OFPBRC_BAD_LEN = 6,
  OFPBRC_BUFFER_EMPTY = 7,
  OFPBRC_BUFFER_UNKNOWN = 8,
  OFPBRC_BAD_TABLE_ID = 9,
  OFPBRC_BAD_PORT = 11,
};

enum BadActionCode : std::uint16_t {
  OFPBAC_BAD_TYPE = 0,
  OFPBAC_BAD_LEN = 1,
  OFPBAC_BAD_OUT_PORT = 4,
  OFPBAC_BAD_ARGUMENT = 5,
  OFPBAC_BAD_SET_TYPE = 13,
  OFPBAC_BAD_SET_LEN = 14,
  OFPBAC_BAD_SET_ARGUMENT = 15,
};

enum BadInstructionCode : std::uint16_t {
  OFPBIC_UNKNOWN_INST = 0,
  OFPBIC_UNSUP_INST = 1,
  OFPBIC_BAD_TABLE_ID = 2,
  OFPBIC_BAD_LEN = 5,
};

enum BadMatchCode : std::uint16_t {
  OFPBMC_BAD_TYPE = 0,
  OFPBMC_BAD_LEN = 1,
  OFPBMC_BAD_WILDCARDS = 5,
  OFPBMC_BAD_FIELD = 6,
  OFPBMC_BAD_VALUE = 7,
  OFPBMC_BAD_MASK = 8,
  OFPBMC_BAD_PREREQ = 9,
  OFPBMC_DUP_FIELD = 10,
};

enum FlowModFailedCode : std::uint16_t {
  OFPFMFC_UNKNOWN = 0,
  OFPFMFC_TABLE_FULL = 1,
  OFPFMFC_BAD_TABLE_ID = 2,
  OFPFMFC_BAD_TIMEOUT = 5,
  OFPFMFC_BAD_COMMAND = 6,
  OFPFMFC_BAD_FLAGS = 7,
};

}  // namespace flowfabric::ofp
