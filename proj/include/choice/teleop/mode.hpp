// Teleoperation mode state machine and on-demand arm anchoring.
//
// The joystick is shared: pressing it toggles between manipulation mode
// (joystick drives the thumb) and locomotion mode (joystick drives velocity
// commands); releasing it in locomotion mode emits a stand command. Arm
// tracking is engaged only while the trigger is held; fresh anchors are
// captured at every engagement, which lets the operator re-center their
// workspace between holds.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "choice/loco/frame.hpp"
#include "choice/teleop/pose.hpp"

namespace choice::teleop {

enum class ControlMode { kManipulation, kLocomotion };
enum class TrackTarget { kOff, kLeftHand, kRightHand };
enum class Arm { kLeft = 0, kRight = 1 };

struct ArmAnchor {
  Pose controller;     // controller pose at engagement
  Pose end_effector;   // end-effector pose at engagement
};

struct ArmState {
  bool engaged = false;
  std::optional<ArmAnchor> anchor;
};

struct TeleopMode {
  ControlMode mode = ControlMode::kManipulation;
  TrackTarget tracking = TrackTarget::kOff;
  ArmState arms[2];

  const ArmState& arm(Arm a) const { return arms[static_cast<int>(a)]; }
  ArmState& arm(Arm a) { return arms[static_cast<int>(a)]; }
};

enum class EventKind {
  kJoystickPress,
  kJoystickRelease,
  kTriggerPress,    // needs arm + poses
  kTriggerRelease,  // needs arm
  kTrackLeft,
  kTrackRight,
};

struct Event {
  EventKind kind = EventKind::kJoystickPress;
  double timestamp = 0.0;
  Arm arm = Arm::kLeft;
  Pose controller;     // trigger press: controller pose at engagement
  Pose end_effector;   // trigger press: current end-effector pose
};

struct TransitionResult {
  TeleopMode state;
  // Joystick release in locomotion mode defaults the robot to stand.
  std::optional<loco::LocoCommand> emitted;
};

// Deterministic; all events are legal in all states (illegal combinations
// are no-ops).
TransitionResult mode_transition(const TeleopMode& state, const Event& event);

// Target pose for an engaged arm: the anchored end-effector pose composed
// with the controller's relative motion since engagement. Throws if the arm
// is not engaged.
Pose anchored_ee_target(const TeleopMode& state, Arm arm, const Pose& controller_now);

// Line-delimited replay format: "<timestamp> <event> [arm=left|right]
// [ctrl=px py pz qw qx qy qz] [ee=px py pz qw qx qy qz]".
std::string format_event(const Event& event);
Event parse_event(const std::string& line);
std::vector<Event> read_event_log(const std::string& path);

struct ReplayResult {
  TeleopMode final_state;
  std::vector<loco::LocoCommand> emitted;
};

ReplayResult replay(const TeleopMode& initial, const std::vector<Event>& events);

}  // namespace choice::teleop
