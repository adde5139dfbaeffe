#pragma once

#include <memory>
#include <string>

#include "catmouse/env.hpp"

namespace catmouse {

// One wire-protocol session: one environment, driven by newline-delimited JSON.
//   {"cmd":"reset","seed":7,"alpha":0.5}  -> {"obs":[...],"reward":0,"done":false,"info":{...}}
//   {"cmd":"step","action":[dx,dy,dz]}    -> {"obs":[...],"reward":r,"done":b,"info":{...}}
//   {"cmd":"close"}                       -> {"closed":true}
// Anything malformed gets {"error":"..."} and leaves the session as it was.
class Session {
 public:
  explicit Session(const EpisodeConfig& cfg);

  // Reply to one request line, without the trailing newline.
  std::string handle_line(const std::string& line);

  bool closed() const { return closed_; }
  const Environment& environment() const { return env_; }

 private:
  Environment env_;
  bool closed_ = false;
};

std::string error_reply(const std::string& message);

}  // namespace catmouse
