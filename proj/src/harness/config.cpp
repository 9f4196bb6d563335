#include "choice/harness/config.hpp"

#include <sstream>

#include "choice/common/format.hpp"

namespace choice::harness {

std::string RunConfig::config_hash() const {
  std::ostringstream os;
  os << "task=" << task << "|algo=" << algo << "|selection=" << selection << "|k=" << k
     << "|horizon=" << horizon << "|epochs=" << epochs << "|batch=" << batch
     << "|episodes=" << episodes << "|seed=" << seed;
  std::uint64_t h = fnv1a64(os.str());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace choice::harness
