#include "cfiforge/caps.hpp"

#include <cstdlib>
#include <sstream>

namespace cfiforge {

void Caps::apply(const std::string& text) {
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("caps: expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    std::uint64_t value = 0;
    try {
      std::size_t used = 0;
      value = std::stoull(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw std::invalid_argument("caps: bad value in '" + item + "'");
    }
    if (key == "gadget") gadget_size = value;
    else if (key == "preorder") explicit_preorder = value;
    else if (key == "wl_tuples") wl_tuples = value;
    else if (key == "group") group_elements = value;
    else if (key == "twists") twist_enumeration = value;
    else if (key == "matrix") matrix_entries = value;
    else throw std::invalid_argument("caps: unknown key '" + key + "'");
  }
}

Caps Caps::from_env() {
  Caps caps;
  if (const char* env = std::getenv("CFIFORGE_CAPS")) caps.apply(env);
  return caps;
}

Caps& default_caps() {
  static Caps caps = Caps::from_env();
  return caps;
}

}  // namespace cfiforge
