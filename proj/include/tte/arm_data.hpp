#pragma once

#include <string>

namespace tte {

// One subject in a two-arm comparison. Arm coding throughout: experimental=1,
// control=0. stratum is the joint stratification level ("" when unstratified).
struct ArmRecord {
  double time = 0.0;
  bool is_event = false;
  bool experimental = false;
  std::string stratum;
};

}  // namespace tte
