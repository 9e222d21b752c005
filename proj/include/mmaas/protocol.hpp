#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mmaas/mmapp.hpp"
#include "mmaas/mobility.hpp"

namespace mmaas {

enum class MsgKind { ParamEnquiry, ParamReport, ContextRequest, MMSolution, RuleInstall, ResourceAllocRules };

const char* msg_kind_name(MsgKind k);

// ContextRequest/MMSolution ride the controller<->MM-app link only; the rest
// ride controller<->AR/access-network links.
struct SignalingMessage {
  MsgKind kind;
  NodeId src, dst;
  int tx_id = 0;
  double sent_ms = 0, delivered_ms = 0;
};

enum class TxPhase { Enquiry, AwaitReport, Processing, Installing, Done };

const char* tx_phase_name(TxPhase p);

// One Enquiry -> AwaitReport -> Processing -> Installing -> Done pass through
// the canonical signaling sequence. In legacy mode the decision point is
// co-located with the controller, so the two NBI messages never appear.
struct Transaction {
  int id = 0;
  Trigger trigger;
  TxPhase phase = TxPhase::Enquiry;
  double started_ms = 0;
  double completed_ms = 0;
  int pending_installs = 0;
  Solution solution;

  // Radio-handover context captured when the radio moved (break-before-make),
  // consumed by decide().
  std::vector<AttachmentSlot> old_slots, new_slots;
  ApId old_data_ap, new_data_ap;
  double radio_break_ms = 0;

  std::vector<MnId> instance_mns;  // instances this transaction opened

  std::vector<SignalingMessage> messages;
};

}  // namespace mmaas
