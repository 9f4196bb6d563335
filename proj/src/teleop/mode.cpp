#include "choice/teleop/mode.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "choice/common/format.hpp"

namespace choice::teleop {

TransitionResult mode_transition(const TeleopMode& state, const Event& event) {
  TransitionResult res{state, std::nullopt};
  TeleopMode& s = res.state;
  switch (event.kind) {
    case EventKind::kJoystickPress:
      s.mode = s.mode == ControlMode::kManipulation ? ControlMode::kLocomotion
                                                    : ControlMode::kManipulation;
      break;
    case EventKind::kJoystickRelease:
      if (s.mode == ControlMode::kLocomotion) {
        res.emitted = loco::LocoCommand::stand();
      }
      break;
    case EventKind::kTriggerPress: {
      event.controller.validate();
      event.end_effector.validate();
      ArmState& arm = s.arm(event.arm);
      arm.engaged = true;
      // fresh anchors on every engagement: workspace re-centering
      arm.anchor = ArmAnchor{event.controller, event.end_effector};
      break;
    }
    case EventKind::kTriggerRelease: {
      ArmState& arm = s.arm(event.arm);
      arm.engaged = false;
      arm.anchor.reset();
      break;
    }
    case EventKind::kTrackLeft:
      s.tracking = TrackTarget::kLeftHand;
      break;
    case EventKind::kTrackRight:
      s.tracking = TrackTarget::kRightHand;
      break;
  }
  return res;
}

Pose anchored_ee_target(const TeleopMode& state, Arm arm, const Pose& controller_now) {
  const ArmState& a = state.arm(arm);
  if (!a.engaged || !a.anchor) {
    throw std::invalid_argument("anchored_ee_target: arm is not engaged");
  }
  controller_now.validate();
  // relative controller motion since engagement, re-expressed at the
  // anchored end-effector pose
  Pose relative = a.anchor->controller.inverse().compose(controller_now);
  return a.anchor->end_effector.compose(relative);
}

namespace {

const char* event_name(EventKind k) {
  switch (k) {
    case EventKind::kJoystickPress: return "joystick_press";
    case EventKind::kJoystickRelease: return "joystick_release";
    case EventKind::kTriggerPress: return "trigger_press";
    case EventKind::kTriggerRelease: return "trigger_release";
    case EventKind::kTrackLeft: return "track_left";
    case EventKind::kTrackRight: return "track_right";
  }
  return "?";
}

void append_pose(std::ostringstream& os, const char* key, const Pose& p) {
  os << ' ' << key << '=' << fmt_real(p.position[0]) << ',' << fmt_real(p.position[1])
     << ',' << fmt_real(p.position[2]) << ',' << fmt_real(p.orientation.w) << ','
     << fmt_real(p.orientation.x) << ',' << fmt_real(p.orientation.y) << ','
     << fmt_real(p.orientation.z);
}

Pose parse_pose(const std::string& csv) {
  std::vector<double> v;
  std::size_t start = 0;
  while (start <= csv.size()) {
    std::size_t comma = csv.find(',', start);
    std::string tok = comma == std::string::npos ? csv.substr(start)
                                                 : csv.substr(start, comma - start);
    v.push_back(parse_real(tok));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (v.size() != 7) throw std::invalid_argument("pose needs 7 comma-separated reals");
  Pose p;
  p.position = {v[0], v[1], v[2]};
  p.orientation = Quat{v[3], v[4], v[5], v[6]};
  return p;
}

}  // namespace

std::string format_event(const Event& e) {
  std::ostringstream os;
  os << fmt_real(e.timestamp) << ' ' << event_name(e.kind);
  if (e.kind == EventKind::kTriggerPress || e.kind == EventKind::kTriggerRelease) {
    os << " arm=" << (e.arm == Arm::kLeft ? "left" : "right");
  }
  if (e.kind == EventKind::kTriggerPress) {
    append_pose(os, "ctrl", e.controller);
    append_pose(os, "ee", e.end_effector);
  }
  return os.str();
}

Event parse_event(const std::string& line) {
  std::vector<std::string> tok = split_ws(line);
  if (tok.size() < 2) throw std::invalid_argument("event line needs timestamp and kind");
  Event e;
  e.timestamp = parse_real(tok[0]);
  std::string kind = tok[1];
  if (kind == "joystick_press") e.kind = EventKind::kJoystickPress;
  else if (kind == "joystick_release") e.kind = EventKind::kJoystickRelease;
  else if (kind == "trigger_press") e.kind = EventKind::kTriggerPress;
  else if (kind == "trigger_release") e.kind = EventKind::kTriggerRelease;
  else if (kind == "track_left") e.kind = EventKind::kTrackLeft;
  else if (kind == "track_right") e.kind = EventKind::kTrackRight;
  else throw std::invalid_argument("unknown event kind '" + kind + "'");

  for (std::size_t i = 2; i < tok.size(); ++i) {
    std::size_t eq = tok[i].find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("malformed event field '" + tok[i] + "'");
    }
    std::string key = tok[i].substr(0, eq);
    std::string val = tok[i].substr(eq + 1);
    if (key == "arm") {
      if (val == "left") e.arm = Arm::kLeft;
      else if (val == "right") e.arm = Arm::kRight;
      else throw std::invalid_argument("unknown arm '" + val + "'");
    } else if (key == "ctrl") {
      e.controller = parse_pose(val);
    } else if (key == "ee") {
      e.end_effector = parse_pose(val);
    } else {
      throw std::invalid_argument("unknown event field '" + key + "'");
    }
  }
  return e;
}

std::vector<Event> read_event_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open event log: " + path);
  std::vector<Event> events;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    events.push_back(parse_event(line));
  }
  return events;
}

ReplayResult replay(const TeleopMode& initial, const std::vector<Event>& events) {
  ReplayResult res{initial, {}};
  for (const Event& e : events) {
    TransitionResult tr = mode_transition(res.final_state, e);
    res.final_state = tr.state;
    if (tr.emitted) res.emitted.push_back(*tr.emitted);
  }
  return res;
}

}  // namespace choice::teleop
